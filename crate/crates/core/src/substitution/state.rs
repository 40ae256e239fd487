use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::kernel_terms::index::{Constraints, Lin};
use crate::kernel_terms::{name, Assignment, Name};

/// Per-parameter case: `n = 0`, `n = 1` or `n >= 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Cond {
    Zero,
    One,
    Many,
}

impl Cond {
    pub const ALL: [Cond; 3] = [Cond::Zero, Cond::One, Cond::Many];

    pub fn of(v: u64) -> Cond {
        match v {
            0 => Cond::Zero,
            1 => Cond::One,
            _ => Cond::Many,
        }
    }

    pub fn holds(self, v: u64) -> bool {
        Cond::of(v) == self
    }
}

/// Conjunction fixing one [`Cond`] per parameter. Kept sorted by parameter
/// name so that equal states compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct State {
    conds: Vec<(Name, Cond)>,
}

impl State {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(pairs: impl IntoIterator<Item = (Name, Cond)>) -> Self {
        let m: BTreeMap<Name, Cond> = pairs.into_iter().collect();
        State { conds: m.into_iter().collect() }
    }

    pub fn of(pairs: &[(&str, Cond)]) -> Self {
        State::new(pairs.iter().map(|(n, c)| (name(n), *c)))
    }

    pub fn conds(&self) -> &[(Name, Cond)] {
        &self.conds
    }

    pub fn is_empty(&self) -> bool {
        self.conds.is_empty()
    }

    pub fn get(&self, n: &str) -> Option<Cond> {
        self.conds.iter().find(|(m, _)| &**m == n).map(|(_, c)| *c)
    }

    pub fn params(&self) -> BTreeSet<Name> {
        self.conds.iter().map(|(n, _)| n.clone()).collect()
    }

    /// All `3^k` states over `params`, first parameter varying slowest.
    pub fn all_over(params: &[Name]) -> Vec<State> {
        let mut out = vec![Vec::new()];
        for p in params {
            let mut next = Vec::with_capacity(out.len() * 3);
            for prefix in &out {
                for c in Cond::ALL {
                    let mut v: Vec<(Name, Cond)> = prefix.clone();
                    v.push((p.clone(), c));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(State::new).collect()
    }

    /// The state over `params` containing `sigma`.
    pub fn of_assignment(sigma: &Assignment, params: &[Name]) -> Option<State> {
        let mut v = Vec::new();
        for p in params {
            v.push((p.clone(), Cond::of(*sigma.get(p)?)));
        }
        Some(State::new(v))
    }

    pub fn holds(&self, sigma: &Assignment) -> bool {
        self.conds.iter().all(|(n, c)| sigma.get(n).is_some_and(|v| c.holds(*v)))
    }

    /// Union of two states, `None` when they disagree on a parameter.
    pub fn merge(&self, other: &State) -> Option<State> {
        let mut m: BTreeMap<Name, Cond> = self.conds.iter().cloned().collect();
        for (n, c) in &other.conds {
            if let Some(d) = m.insert(n.clone(), *c) {
                if d != *c {
                    return None;
                }
            }
        }
        Some(State { conds: m.into_iter().collect() })
    }

    pub fn restrict(&self, params: &BTreeSet<Name>) -> State {
        State { conds: self.conds.iter().filter(|(n, _)| params.contains(n)).cloned().collect() }
    }

    /// A representative assignment; `extra` shifts the value chosen for
    /// `n >= 2` cases.
    pub fn sample(&self, extra: u64) -> Assignment {
        self.conds
            .iter()
            .map(|(n, c)| {
                let v = match c {
                    Cond::Zero => 0,
                    Cond::One => 1,
                    Cond::Many => 2 + extra,
                };
                (n.clone(), v)
            })
            .collect()
    }

    pub fn constraints(&self) -> Constraints {
        let mut c = Constraints::new();
        for (n, k) in &self.conds {
            let l = Lin::var(n.clone());
            match k {
                Cond::Zero => c.eq(&l, &Lin::constant(0)),
                Cond::One => c.eq(&l, &Lin::constant(1)),
                Cond::Many => c.ge_const(&l, 2),
            }
        }
        c
    }

    /// Renders with parameters in the given order first.
    pub fn display_in(&self, order: &[Name]) -> String {
        if self.conds.is_empty() {
            return "true".into();
        }
        let mut names: Vec<&Name> = order.iter().filter(|n| self.get(n).is_some()).collect();
        for (n, _) in &self.conds {
            if !names.contains(&n) {
                names.push(n);
            }
        }
        names
            .iter()
            .map(|n| match self.get(n).unwrap() {
                Cond::Zero => format!("{n}=0"),
                Cond::One => format!("{n}!=0 & p({n})=0"),
                Cond::Many => format!("{n}!=0 & p({n})!=0"),
            })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in(&[]))
    }
}

/// `n = 0`, `n != 0`, `p(n) = 0` or `p(n) != 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CondAtom {
    pub param: Name,
    pub pred: bool,
    pub zero: bool,
}

impl CondAtom {
    pub fn allows(&self, c: Cond) -> bool {
        match (self.pred, self.zero) {
            (false, true) => c == Cond::Zero,
            (false, false) => c != Cond::Zero,
            (true, true) => c != Cond::Many,
            (true, false) => c == Cond::Many,
        }
    }
}

/// Conjunction of [`CondAtom`]s. The empty conjunction is `true`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Condition {
    pub atoms: Vec<CondAtom>,
}

impl Condition {
    pub fn truth() -> Self {
        Self::default()
    }

    pub fn is_true(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn params(&self) -> BTreeSet<Name> {
        self.atoms.iter().map(|a| a.param.clone()).collect()
    }

    pub fn holds(&self, sigma: &Assignment) -> bool {
        self.atoms.iter().all(|a| sigma.get(&a.param).is_some_and(|v| a.allows(Cond::of(*v))))
    }

    /// Parameters absent from `state` are unconstrained.
    pub fn allows(&self, state: &State) -> bool {
        self.atoms.iter().all(|a| state.get(&a.param).map_or(true, |c| a.allows(c)))
    }

    /// Reads a condition that fixes every mentioned parameter as a state.
    pub fn to_state(&self) -> Option<State> {
        let ps: Vec<Name> = self.params().into_iter().collect();
        let fits: Vec<State> = State::all_over(&ps).into_iter().filter(|s| self.allows(s)).collect();
        if fits.len() == 1 {
            fits.into_iter().next()
        } else {
            None
        }
    }

    pub fn from_state(s: &State) -> Condition {
        let mut atoms = Vec::new();
        for (n, c) in s.conds() {
            let a = |pred, zero| CondAtom { param: n.clone(), pred, zero };
            match c {
                Cond::Zero => atoms.push(a(false, true)),
                Cond::One => {
                    atoms.push(a(false, false));
                    atoms.push(a(true, true));
                }
                Cond::Many => {
                    atoms.push(a(false, false));
                    atoms.push(a(true, false));
                }
            }
        }
        Condition { atoms }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "true");
        }
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| {
                let lhs = if a.pred { format!("p({})", a.param) } else { a.param.to_string() };
                format!("{lhs}{}0", if a.zero { "=" } else { "!=" })
            })
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}

/// Value per state over a fixed list of parameters.
#[derive(Clone, PartialEq, Debug)]
pub struct CaseMap<V> {
    pub params: Vec<Name>,
    pub entries: Vec<(State, V)>,
}

impl<V: Clone + PartialEq> CaseMap<V> {
    pub fn constant(v: V) -> Self {
        CaseMap { params: Vec::new(), entries: vec![(State::empty(), v)] }
    }

    pub fn is_constant(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].1 == w[1].1)
    }

    pub fn get(&self, s: &State) -> Option<&V> {
        self.entries.iter().find(|(t, _)| t == s).map(|(_, v)| v)
    }

    /// Value for the state containing `sigma`.
    pub fn at(&self, sigma: &Assignment) -> Option<&V> {
        self.entries.iter().find(|(s, _)| s.holds(sigma)).map(|(_, v)| v)
    }

    /// Groups states with equal values, in first-occurrence order.
    pub fn merged(&self) -> Vec<(Vec<State>, V)> {
        let mut out: Vec<(Vec<State>, V)> = Vec::new();
        for (s, v) in &self.entries {
            match out.iter_mut().find(|(_, w)| w == v) {
                Some((ss, _)) => ss.push(s.clone()),
                None => out.push((vec![s.clone()], v.clone())),
            }
        }
        out
    }

    pub fn map<W>(&self, f: impl Fn(&State, &V) -> W) -> CaseMap<W> {
        CaseMap { params: self.params.clone(), entries: self.entries.iter().map(|(s, v)| (s.clone(), f(s, v))).collect() }
    }
}

impl<V: fmt::Display + Clone + PartialEq> fmt::Display for CaseMap<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}] {}", s.display_in(&self.params), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_partition_small_assignments() {
        let ps = vec![name("n"), name("m")];
        let all = State::all_over(&ps);
        assert_eq!(all.len(), 9);
        for n in 0..5 {
            for m in 0..5 {
                let sigma: Assignment = [(name("n"), n), (name("m"), m)].into_iter().collect();
                assert_eq!(all.iter().filter(|s| s.holds(&sigma)).count(), 1);
            }
        }
    }

    #[test]
    fn condition_to_state() {
        let c = Condition {
            atoms: vec![
                CondAtom { param: name("n"), pred: false, zero: false },
                CondAtom { param: name("n"), pred: true, zero: true },
            ],
        };
        assert_eq!(c.to_state(), Some(State::of(&[("n", Cond::One)])));
        assert_eq!(State::of(&[("n", Cond::Many)]).to_string(), "n!=0 & p(n)!=0");
    }
}
