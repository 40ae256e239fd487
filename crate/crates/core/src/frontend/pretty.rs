//! Mathematical rendering: numerals with an overbar, defined symbols with a
//! hat, `∨ ∧ ¬ ⊢ ←`.

use crate::calculus::{Judgement, Sequent};
use crate::kernel_formulas::{Formula, HatAtom, PredRef};
use crate::kernel_terms::{IotaTerm, Name, NumTerm, VarExpr};
use crate::substitution::{CaseMap, SSubstitution, State};

const BAR: char = '\u{0304}';
const HAT: char = '\u{0302}';

pub fn numeral(k: u64) -> String {
    k.to_string().chars().flat_map(|c| [c, BAR]).collect()
}

pub fn hatted(n: &Name) -> String {
    format!("{n}{HAT}")
}

pub fn num(t: &NumTerm) -> String {
    match t {
        NumTerm::Lit(k) => numeral(*k),
        NumTerm::Param(n) => n.to_string(),
        NumTerm::Succ(a) => format!("s({})", num(a)),
        NumTerm::Pred(a) => format!("p({})", num(a)),
        NumTerm::App(g, a) => format!("{}({})", hatted(g), nums(a)),
    }
}

fn nums(ts: &[NumTerm]) -> String {
    ts.iter().map(num).collect::<Vec<_>>().join(",")
}

pub fn var(v: &VarExpr) -> String {
    if v.idx.is_empty() {
        v.class.to_string()
    } else {
        format!("{}({})", v.class, nums(&v.idx))
    }
}

pub fn term(t: &IotaTerm) -> String {
    match t {
        IotaTerm::Var(v) => var(v),
        IotaTerm::App(g, a) if a.is_empty() => g.to_string(),
        IotaTerm::App(g, a) => format!("{g}({})", terms(a)),
        IotaTerm::Hat(g, a, n) => {
            let mut parts: Vec<String> = a.iter().map(term).collect();
            parts.extend(n.iter().map(num));
            format!("{}({})", hatted(g), parts.join(","))
        }
    }
}

fn terms(ts: &[IotaTerm]) -> String {
    ts.iter().map(term).collect::<Vec<_>>().join(",")
}

pub fn hat_atom(h: &HatAtom) -> String {
    let head = match &h.pred {
        PredRef::Base(p) => hatted(p),
        PredRef::Derived(d) => format!("{}⟨{} | {}⟩", hatted(&d.base), subst(&d.theta), state(&d.state)),
    };
    let mut parts: Vec<String> = h.classes.iter().map(|c| c.to_string()).collect();
    parts.extend(h.args.iter().map(num));
    format!("{head}({})", parts.join(","))
}

pub fn formula(f: &Formula) -> String {
    let compound = |g: &Formula| matches!(g, Formula::And(..) | Formula::Or(..));
    match f {
        Formula::Var(x) => format!("ξ{}", if &**x == crate::kernel_terms::XI { String::new() } else { x.to_string() }),
        Formula::Atom(p, ts) if ts.is_empty() => p.to_string(),
        Formula::Atom(p, ts) => format!("{p}({})", terms(ts)),
        Formula::Hat(h) => hat_atom(h),
        Formula::Not(a) if compound(a) => format!("¬({})", formula(a)),
        Formula::Not(a) => format!("¬{}", formula(a)),
        Formula::And(a, b) => {
            let l = if compound(a) { format!("({})", formula(a)) } else { formula(a) };
            let r = if matches!(**b, Formula::Or(..)) { format!("({})", formula(b)) } else { formula(b) };
            format!("{l} ∧ {r}")
        }
        Formula::Or(a, b) => {
            let l = if matches!(**a, Formula::Or(..)) { format!("({})", formula(a)) } else { formula(a) };
            format!("{l} ∨ {}", formula(b))
        }
    }
}

pub fn subst(s: &SSubstitution) -> String {
    let parts: Vec<String> = s.iter().map(|(v, t)| format!("{}←{}", var(v), term(t))).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn state(s: &State) -> String {
    s.to_string().replace("!=", "≠").replace(" & ", " ∧ ")
}

pub fn sequent(s: &Sequent) -> String {
    let side = |fs: &[Formula]| fs.iter().map(formula).collect::<Vec<_>>().join(", ");
    match (s.ant.is_empty(), s.suc.is_empty()) {
        (true, true) => "⊢".into(),
        (true, false) => format!("⊢ {}", side(&s.suc)),
        (false, true) => format!("{} ⊢", side(&s.ant)),
        (false, false) => format!("{} ⊢ {}", side(&s.ant), side(&s.suc)),
    }
}

pub fn judgement(j: &Judgement) -> String {
    match j {
        Judgement::Seq(s) => sequent(s),
        Judgement::Var(v) => format!("{}({})", v.id, hat_atom(&v.atom)),
    }
}

/// One line per state, states in the parameter order of the map.
pub fn case_map<V: Clone + PartialEq>(m: &CaseMap<V>, show: impl Fn(&V) -> String) -> String {
    m.entries
        .iter()
        .map(|(s, v)| format!("[{}] {}", s.display_in(&m.params).replace("!=", "≠").replace(" & ", " ∧ "), show(v)))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_terms::name;

    #[test]
    fn numerals_and_hats() {
        assert_eq!(numeral(12), "1\u{0304}2\u{0304}");
        let t = IotaTerm::Hat(name("f"), vec![IotaTerm::Var(VarExpr::fo(name("x")))], vec![NumTerm::param("n")]);
        assert_eq!(term(&t), "f\u{0302}(x,n)");
    }

    #[test]
    fn substitution_rendering() {
        let s = SSubstitution::singleton(
            VarExpr::new(name("X"), vec![NumTerm::Lit(0)]),
            IotaTerm::App(name("g"), vec![IotaTerm::Var(VarExpr::new(name("Y"), vec![NumTerm::Lit(0)]))]),
        );
        assert_eq!(subst(&s), "{X(0\u{0304})←g(Y(0\u{0304}))}");
    }
}
