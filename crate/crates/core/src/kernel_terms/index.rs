//! Index reasoning with difference constraints over natural numbers.
//!
//! Numeric terms built from parameters, numerals, `s` and `p` are affine in
//! at most one parameter once `p` is split into its two cases. Satisfiability
//! of a conjunction of such constraints is decided with Bellman-Ford.

use std::collections::BTreeMap;

use super::{Name, NumTerm, VarExpr};

/// `var + off`, or the constant `off` when `var` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lin {
    pub var: Option<Name>,
    pub off: i64,
}

impl Lin {
    pub fn constant(k: i64) -> Self {
        Lin { var: None, off: k }
    }

    pub fn var(n: Name) -> Self {
        Lin { var: Some(n), off: 0 }
    }
}

/// Conjunction of `a - b <= c` over naturals.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    edges: Vec<(Option<Name>, Option<Name>, i64)>,
}

impl Constraints {
    pub fn new() -> Self {
        Self::default()
    }

    /// `a <= b`
    pub fn le(&mut self, a: &Lin, b: &Lin) {
        self.edges.push((a.var.clone(), b.var.clone(), b.off - a.off));
    }

    pub fn eq(&mut self, a: &Lin, b: &Lin) {
        self.le(a, b);
        self.le(b, a);
    }

    pub fn ge_const(&mut self, a: &Lin, k: i64) {
        self.le(&Lin::constant(k), a);
    }

    pub fn le_const(&mut self, a: &Lin, k: i64) {
        self.le(a, &Lin::constant(k));
    }

    pub fn extend(&mut self, other: &Constraints) {
        self.edges.extend(other.edges.iter().cloned());
    }

    pub fn with(&self, other: &Constraints) -> Constraints {
        let mut c = self.clone();
        c.extend(other);
        c
    }

    pub fn feasible(&self) -> bool {
        let mut ids: BTreeMap<Option<Name>, usize> = BTreeMap::new();
        ids.insert(None, 0);
        for (a, b, _) in &self.edges {
            for v in [a, b] {
                let n = ids.len();
                ids.entry(v.clone()).or_insert(n);
            }
        }
        // Edge b -> a with weight c for each a - b <= c, plus v >= 0.
        let mut es: Vec<(usize, usize, i64)> =
            self.edges.iter().map(|(a, b, c)| (ids[b], ids[a], *c)).collect();
        for (v, &i) in &ids {
            if v.is_some() {
                es.push((i, 0, 0));
            }
        }
        let n = ids.len();
        let mut dist = vec![0i64; n];
        for _ in 0..n {
            let mut changed = false;
            for &(u, v, w) in &es {
                if dist[u] + w < dist[v] {
                    dist[v] = dist[u] + w;
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
        false
    }
}

/// Affine case split of a numeric term: each case is a value together with
/// the side conditions under which it holds. `None` when the term uses
/// defined numeric functions.
pub fn lin_cases(t: &NumTerm) -> Option<Vec<(Lin, Constraints)>> {
    match t {
        NumTerm::Lit(k) => Some(vec![(Lin::constant(*k as i64), Constraints::new())]),
        NumTerm::Param(n) => Some(vec![(Lin::var(n.clone()), Constraints::new())]),
        NumTerm::Succ(a) => Some(
            lin_cases(a)?
                .into_iter()
                .map(|(l, c)| (Lin { var: l.var, off: l.off + 1 }, c))
                .collect(),
        ),
        NumTerm::Pred(a) => {
            let mut out = Vec::new();
            for (l, c) in lin_cases(a)? {
                let mut pos = c.clone();
                pos.ge_const(&l, 1);
                out.push((Lin { var: l.var.clone(), off: l.off - 1 }, pos));
                let mut zero = c;
                zero.le_const(&l, 0);
                out.push((Lin::constant(0), zero));
            }
            Some(out)
        }
        NumTerm::App(..) => None,
    }
}

/// Whether the index lists can take equal values under `ctx`. Conservative
/// (answers `true`) when some index is outside the affine fragment.
pub fn indices_may_agree(a: &[NumTerm], b: &[NumTerm], ctx: &Constraints) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut cases = Vec::new();
    for (x, y) in a.iter().zip(b) {
        match (lin_cases(x), lin_cases(y)) {
            (Some(cx), Some(cy)) => cases.push((cx, cy)),
            _ => return true,
        }
    }
    search(&cases, 0, ctx)
}

fn search(cases: &[(Vec<(Lin, Constraints)>, Vec<(Lin, Constraints)>)], i: usize, acc: &Constraints) -> bool {
    if i == cases.len() {
        return acc.feasible();
    }
    if !acc.feasible() {
        return false;
    }
    let (cx, cy) = &cases[i];
    for (lx, kx) in cx {
        for (ly, ky) in cy {
            let mut c = acc.with(kx);
            c.extend(ky);
            c.eq(lx, ly);
            if search(cases, i + 1, &c) {
                return true;
            }
        }
    }
    false
}

/// Two variable expressions evaluate to the same variable for some
/// assignment satisfying `ctx`.
pub fn unifiable_in(v: &VarExpr, w: &VarExpr, ctx: &Constraints) -> bool {
    v.class == w.class && indices_may_agree(&v.idx, &w.idx, ctx)
}

/// Parameter-unifiability without side conditions.
pub fn parameter_unifiable(v: &VarExpr, w: &VarExpr) -> bool {
    unifiable_in(v, w, &Constraints::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_terms::name;

    fn ve(c: &str, idx: Vec<NumTerm>) -> VarExpr {
        VarExpr::new(name(c), idx)
    }

    #[test]
    fn successor_and_parameter_meet() {
        let n = NumTerm::param("n");
        let m = NumTerm::param("m");
        assert!(parameter_unifiable(&ve("X", vec![NumTerm::succ(n.clone())]), &ve("X", vec![m.clone()])));
        assert!(!parameter_unifiable(&ve("X", vec![NumTerm::succ(n.clone())]), &ve("X", vec![n.clone()])));
        assert!(!parameter_unifiable(&ve("X", vec![n.clone()]), &ve("Y", vec![n.clone()])));
    }

    #[test]
    fn truncated_predecessor() {
        let n = NumTerm::param("n");
        let pn = NumTerm::pred(n.clone());
        // p(n) = n only at n = 0
        assert!(parameter_unifiable(&ve("X", vec![pn.clone()]), &ve("X", vec![n.clone()])));
        let mut c = Constraints::new();
        c.ge_const(&Lin::var(name("n")), 1);
        assert!(!unifiable_in(&ve("X", vec![pn]), &ve("X", vec![n]), &c));
    }

    #[test]
    fn negative_cycle_detected() {
        let mut c = Constraints::new();
        let a = Lin::var(name("a"));
        let b = Lin::var(name("b"));
        c.le(&Lin { var: a.var.clone(), off: 1 }, &b);
        c.le(&b, &a);
        assert!(!c.feasible());
    }
}
