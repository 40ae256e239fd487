//! Equation classification, the reduction system on equation sets, the
//! schematic unification algorithm UAL, per-state unification of standard
//! terms, and first-order unification.

use std::collections::BTreeSet;
use std::fmt;

use crate::kernel_formulas::Formula;
use crate::kernel_terms::index::parameter_unifiable;
use crate::kernel_terms::{IotaTerm, Name, Theory, VarExpr};
use crate::substitution::{psi_term, settle_term, CaseMap, SSubstitution, State};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EqKind {
    Identity,
    /// A variable expression properly occurs in the other side.
    Occurs,
    Admissible,
    /// Different first-order head symbols.
    Clash,
    /// Neither side is a variable expression and one head is defined.
    Complex,
    /// Same first-order head symbol on both sides.
    Decomposable,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Equation {
    pub lhs: IotaTerm,
    pub rhs: IotaTerm,
}

impl Equation {
    pub fn new(lhs: IotaTerm, rhs: IotaTerm) -> Self {
        Equation { lhs, rhs }
    }

    pub fn kind(&self) -> EqKind {
        classify(self)
    }

    /// Variable and term of an admissible equation, left side first.
    pub fn binding(&self) -> Option<(&VarExpr, &IotaTerm)> {
        match (&self.lhs, &self.rhs) {
            (IotaTerm::Var(v), t) | (t, IotaTerm::Var(v)) => Some((v, t)),
            _ => None,
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

pub fn classify(e: &Equation) -> EqKind {
    if e.lhs == e.rhs {
        return EqKind::Identity;
    }
    if let Some((v, t)) = e.binding() {
        return if t.contains_var(v) { EqKind::Occurs } else { EqKind::Admissible };
    }
    match (&e.lhs, &e.rhs) {
        (IotaTerm::App(f, a), IotaTerm::App(g, b)) => {
            if f == g && a.len() == b.len() {
                EqKind::Decomposable
            } else {
                EqKind::Clash
            }
        }
        _ => EqKind::Complex,
    }
}

/// Equation set after reduction: either failed on an equation or a set in
/// which every equation is admissible.
#[derive(Clone, PartialEq, Debug)]
pub enum Reduced {
    Bottom(Equation, EqKind),
    Set(BTreeSet<Equation>),
}

/// One reduction step, `None` when the set is irreducible.
pub fn reduce(u: &BTreeSet<Equation>) -> Option<Reduced> {
    for e in u {
        let mut rest = u.clone();
        rest.remove(e);
        match classify(e) {
            EqKind::Identity => return Some(Reduced::Set(rest)),
            EqKind::Decomposable => {
                if let (IotaTerm::App(_, a), IotaTerm::App(_, b)) = (&e.lhs, &e.rhs) {
                    for (x, y) in a.iter().zip(b) {
                        rest.insert(Equation::new(x.clone(), y.clone()));
                    }
                }
                return Some(Reduced::Set(rest));
            }
            k @ (EqKind::Clash | EqKind::Occurs | EqKind::Complex) => return Some(Reduced::Bottom(e.clone(), k)),
            EqKind::Admissible => {}
        }
    }
    None
}

/// Applies reduction steps until none applies.
pub fn normalize(u: BTreeSet<Equation>) -> Reduced {
    let mut cur = u;
    loop {
        match reduce(&cur) {
            None => return Reduced::Set(cur),
            Some(Reduced::Set(next)) => cur = next,
            Some(b) => return b,
        }
    }
}

/// Result of a unification attempt. `Bottom` means no unifier was found.
#[derive(Clone, PartialEq, Debug)]
pub enum Outcome {
    Unifier(SSubstitution),
    Bottom { equation: Equation, kind: EqKind },
}

impl Outcome {
    pub fn unifier(&self) -> Option<&SSubstitution> {
        match self {
            Outcome::Unifier(t) => Some(t),
            Outcome::Bottom { .. } => None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Outcome::Bottom { .. })
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Unifier(t) => write!(f, "{t}"),
            Outcome::Bottom { equation, kind } => write!(f, "BOT ({kind:?}: {equation})"),
        }
    }
}

/// Equations `t1 = t2, t1 = t3, ...` for a set of terms.
pub fn equations_of(terms: &[IotaTerm]) -> BTreeSet<Equation> {
    let mut u = BTreeSet::new();
    if let Some((first, rest)) = terms.split_first() {
        for t in rest {
            u.insert(Equation::new(first.clone(), t.clone()));
        }
    }
    u
}

fn var_key(v: &VarExpr) -> (Name, String) {
    (v.class.clone(), v.idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
}

/// UAL: normalize, bind the admissible equation with the smallest variable,
/// apply the binding and repeat.
pub fn ual(terms: &[IotaTerm], theta: SSubstitution) -> Outcome {
    ual_equations(equations_of(terms), theta)
}

pub fn ual_equations(u: BTreeSet<Equation>, mut theta: SSubstitution) -> Outcome {
    let mut cur = u;
    loop {
        let set = match normalize(cur) {
            Reduced::Bottom(equation, kind) => return Outcome::Bottom { equation, kind },
            Reduced::Set(s) => s,
        };
        let Some(best) = set.iter().min_by_key(|e| var_key(e.binding().unwrap().0)) else {
            return Outcome::Unifier(theta);
        };
        let (v, t) = best.binding().unwrap();
        let bind = SSubstitution::singleton(v.clone(), t.clone());
        theta = theta.compose_fo(&bind);
        cur = set.iter().map(|e| Equation::new(bind.apply(&e.lhs), bind.apply(&e.rhs))).collect();
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct UnifyOptions {
    /// Settle terms under each state first, unfolding defined symbols whose
    /// numeric arguments become numerals.
    pub partial_eval: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub enum UnifResult {
    Single(Outcome),
    PerState(CaseMap<Outcome>),
}

impl UnifResult {
    /// Every state produced a substitution.
    pub fn unifiable(&self) -> bool {
        match self {
            UnifResult::Single(o) => !o.is_bottom(),
            UnifResult::PerState(m) => m.entries.iter().all(|(_, o)| !o.is_bottom()),
        }
    }

    pub fn at_state(&self, s: &State) -> Option<&Outcome> {
        match self {
            UnifResult::Single(o) => Some(o),
            UnifResult::PerState(m) => m.get(s),
        }
    }
}

impl fmt::Display for UnifResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifResult::Single(o) => write!(f, "{o}"),
            UnifResult::PerState(m) => write!(f, "{m}"),
        }
    }
}

/// Unification of standard terms. When two distinct variable expressions
/// are parameter-unifiable the problem is split over all states and UAL runs
/// on `psi_p(T)` for each.
pub fn unify_standard(terms: &[IotaTerm], th: &Theory, opts: UnifyOptions) -> UnifResult {
    let mut vars = BTreeSet::new();
    terms.iter().for_each(|t| t.collect_vars(&mut vars));
    let vs: Vec<&VarExpr> = vars.iter().collect();
    let clash = vs.iter().enumerate().any(|(i, v)| vs[i + 1..].iter().any(|w| parameter_unifiable(v, w)));
    let mut ps = BTreeSet::new();
    terms.iter().for_each(|t| t.collect_params(&mut ps));
    if !clash && !opts.partial_eval {
        return UnifResult::Single(ual(terms, SSubstitution::new()));
    }
    let params = th.sort_params(&ps);
    let entries = State::all_over(&params)
        .into_iter()
        .map(|s| {
            let ts: Vec<IotaTerm> = terms
                .iter()
                .map(|t| {
                    let t = psi_term(t, &s);
                    if opts.partial_eval {
                        settle_term(&t, &s, th)
                    } else {
                        t
                    }
                })
                .collect();
            let o = ual(&ts, SSubstitution::new());
            (s, o)
        })
        .collect();
    UnifResult::PerState(CaseMap { params, entries })
}

/// Martelli-Montanari unification of first-order terms. Returns an
/// idempotent most general unifier.
pub fn fo_unify(pairs: &[(IotaTerm, IotaTerm)]) -> Option<SSubstitution> {
    let mut stack: Vec<(IotaTerm, IotaTerm)> = pairs.to_vec();
    let mut sigma = SSubstitution::new();
    while let Some((s, t)) = stack.pop() {
        let s = sigma.apply(&s);
        let t = sigma.apply(&t);
        if s == t {
            continue;
        }
        match (&s, &t) {
            (IotaTerm::Var(v), other) | (other, IotaTerm::Var(v)) => {
                if other.contains_var(v) {
                    return None;
                }
                sigma = sigma.compose_fo(&SSubstitution::singleton(v.clone(), other.clone()));
            }
            (IotaTerm::App(f, a), IotaTerm::App(g, b)) => {
                if f != g || a.len() != b.len() {
                    return None;
                }
                stack.extend(a.iter().cloned().zip(b.iter().cloned()));
            }
            (IotaTerm::Hat(f, a, n), IotaTerm::Hat(g, b, m)) => {
                if f != g || a.len() != b.len() || n != m {
                    return None;
                }
                stack.extend(a.iter().cloned().zip(b.iter().cloned()));
            }
            _ => return None,
        }
    }
    Some(sigma)
}

/// Unifies all terms of a set.
pub fn fo_unify_set(terms: &[IotaTerm]) -> Option<SSubstitution> {
    let pairs: Vec<_> = equations_of(terms).into_iter().map(|e| (e.lhs, e.rhs)).collect();
    fo_unify(&pairs)
}

/// Reads an atom as a term so that atoms unify like terms.
pub fn atom_as_term(f: &Formula) -> Option<IotaTerm> {
    match f {
        Formula::Atom(p, ts) => Some(IotaTerm::App(crate::kernel_terms::name(&format!("@{p}")), ts.clone())),
        _ => None,
    }
}

/// Most general unifier of a set of atoms.
pub fn fo_unify_atoms(atoms: &[Formula]) -> Option<SSubstitution> {
    let ts = atoms.iter().map(atom_as_term).collect::<Option<Vec<_>>>()?;
    fo_unify_set(&ts)
}

/// Most general simultaneous unifier of a list of atom sets.
pub fn simultaneous_mgu(w: &[Vec<Formula>]) -> Option<SSubstitution> {
    let mut pairs = Vec::new();
    for set in w {
        let ts = set.iter().map(atom_as_term).collect::<Option<Vec<_>>>()?;
        pairs.extend(equations_of(&ts).into_iter().map(|e| (e.lhs, e.rhs)));
    }
    fo_unify(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_terms::{name, NumTerm};

    fn v(s: &str) -> IotaTerm {
        IotaTerm::Var(VarExpr::fo(name(s)))
    }
    fn c(s: &str) -> IotaTerm {
        IotaTerm::constant(name(s))
    }
    fn app(f: &str, a: Vec<IotaTerm>) -> IotaTerm {
        IotaTerm::App(name(f), a)
    }

    #[test]
    fn classification() {
        let x = v("x");
        assert_eq!(classify(&Equation::new(app("f", vec![x.clone()]), app("g", vec![x.clone()]))), EqKind::Clash);
        let xn = IotaTerm::Var(VarExpr::new(name("X"), vec![NumTerm::param("n")]));
        assert_eq!(classify(&Equation::new(xn.clone(), app("f", vec![xn.clone()]))), EqKind::Occurs);
        let fh = IotaTerm::Hat(name("f"), vec![x.clone(), v("y")], vec![NumTerm::param("n"), NumTerm::Lit(0)]);
        let gh = IotaTerm::Hat(name("g"), vec![v("u")], vec![NumTerm::param("n")]);
        assert_eq!(classify(&Equation::new(fh, gh)), EqKind::Complex);
    }

    #[test]
    fn fo_examples() {
        let alpha = v("alpha");
        let p = |t| app("P", vec![t]);
        assert_eq!(
            fo_unify(&[(p(alpha.clone()), p(c("a")))]),
            Some(SSubstitution::singleton(VarExpr::fo(name("alpha")), c("a")))
        );
        assert_eq!(fo_unify(&[(v("x"), app("f", vec![v("x")]))]), None);
        assert_eq!(ual(&[c("a"), c("a")], SSubstitution::new()), Outcome::Unifier(SSubstitution::new()));
    }
}
