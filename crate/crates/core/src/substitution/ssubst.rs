use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel_formulas::Formula;
use crate::kernel_terms::{eval_iota, Assignment, IotaTerm, Name, NumTerm, Theory, VarExpr};

/// Finite map from variable expressions to term schemata. First-order
/// substitutions are the case without parameters or defined symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SSubstitution {
    map: BTreeMap<VarExpr, IotaTerm>,
}

pub type FoSubstitution = SSubstitution;

impl SSubstitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rejects a repeated left-hand side.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarExpr, IotaTerm)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (v, t) in pairs {
            if map.contains_key(&v) {
                return Err(Error::DomainCollision(format!("{v} bound twice")));
            }
            map.insert(v, t);
        }
        Ok(SSubstitution { map })
    }

    pub fn singleton(v: VarExpr, t: IotaTerm) -> Self {
        let mut map = BTreeMap::new();
        map.insert(v, t);
        SSubstitution { map }
    }

    pub fn insert(&mut self, v: VarExpr, t: IotaTerm) -> Option<IotaTerm> {
        self.map.insert(v, t)
    }

    pub fn remove(&mut self, v: &VarExpr) -> Option<IotaTerm> {
        self.map.remove(v)
    }

    pub fn get(&self, v: &VarExpr) -> Option<&IotaTerm> {
        self.map.get(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarExpr, &IotaTerm)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &VarExpr> {
        self.map.keys()
    }

    pub fn params(&self) -> BTreeSet<Name> {
        let mut s = BTreeSet::new();
        for (v, t) in &self.map {
            v.idx.iter().for_each(|i| i.collect_params(&mut s));
            t.collect_params(&mut s);
        }
        s
    }

    pub fn is_first_order(&self) -> bool {
        self.map.iter().all(|(v, t)| v.is_ground() && t.is_first_order())
    }

    /// Replaces variable expressions that are syntactically in the domain.
    pub fn apply(&self, t: &IotaTerm) -> IotaTerm {
        if self.map.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| self.map.get(v).cloned())
    }

    /// Applies to the ordinary atoms of a formula; defined atoms are left
    /// alone, so use this on evaluated formulas.
    pub fn apply_formula_fo(&self, f: &Formula) -> Formula {
        f.map_terms(&mut |t| self.apply(t))
    }

    pub fn map_all(&self, f: impl Fn(&VarExpr, &IotaTerm) -> (VarExpr, IotaTerm)) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (v, t) in &self.map {
            let (v2, t2) = f(v, t);
            if let Some(old) = out.get(&v2) {
                if old != &t2 {
                    return Err(Error::DomainCollision(format!("{v2} maps to both {old} and {t2}")));
                }
            }
            out.insert(v2, t2);
        }
        Ok(SSubstitution { map: out })
    }

    /// `Theta[sigma]`: evaluates both sides and drops bindings that become
    /// trivial.
    pub fn eval(&self, sigma: &Assignment, th: &Theory) -> Result<SSubstitution> {
        let mut out: BTreeMap<VarExpr, IotaTerm> = BTreeMap::new();
        for (v, t) in &self.map {
            let lhs = match eval_iota(&IotaTerm::Var(v.clone()), sigma, th)? {
                IotaTerm::Var(w) => w,
                _ => unreachable!(),
            };
            let rhs = eval_iota(t, sigma, th)?;
            if let Some(old) = out.get(&lhs) {
                if old != &rhs {
                    return Err(Error::DomainCollision(format!(
                        "{lhs} maps to both {old} and {rhs} under the assignment"
                    )));
                }
            }
            out.insert(lhs, rhs);
        }
        out.retain(|v, t| t.as_var() != Some(v));
        Ok(SSubstitution { map: out })
    }

    /// First-order composition: `x (self ∘ other) = (x self) other`.
    pub fn compose_fo(&self, other: &SSubstitution) -> SSubstitution {
        let mut out: BTreeMap<VarExpr, IotaTerm> = BTreeMap::new();
        for (v, t) in &self.map {
            let t2 = other.apply(t);
            if t2.as_var() != Some(v) {
                out.insert(v.clone(), t2);
            }
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        SSubstitution { map: out }
    }

    pub fn without_identities(mut self) -> Self {
        self.map.retain(|v, t| t.as_var() != Some(v));
        self
    }

    /// Renames parameters to numerals or other numeric terms.
    pub fn subst_params(&self, f: &dyn Fn(&Name) -> Option<NumTerm>) -> Result<SSubstitution> {
        self.map_all(|v, t| (v.map_nums(&|i| i.subst_params(f)), t.subst_params(f)))
    }
}

impl fmt::Display for SSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} <- {t}")?;
        }
        write!(f, "}}")
    }
}
