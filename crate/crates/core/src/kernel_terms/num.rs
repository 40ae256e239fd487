use std::collections::BTreeSet;
use std::fmt;

use super::Name;

/// Numeric term over parameters. Build through the smart constructors so that
/// numerals stay literal and `p(s(t))` collapses.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum NumTerm {
    Lit(u64),
    Succ(Box<NumTerm>),
    Pred(Box<NumTerm>),
    Param(Name),
    App(Name, Vec<NumTerm>),
}

/// Shape of an index inside a standard variable expression.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IndexShape {
    Zero,
    Param(Name),
    PredParam(Name),
    SuccParam(Name),
    Numeral(u64),
    Other,
}

impl NumTerm {
    pub fn zero() -> Self {
        NumTerm::Lit(0)
    }

    pub fn lit(k: u64) -> Self {
        NumTerm::Lit(k)
    }

    pub fn param(n: &str) -> Self {
        NumTerm::Param(super::name(n))
    }

    pub fn succ(t: NumTerm) -> Self {
        match t {
            NumTerm::Lit(k) => NumTerm::Lit(k + 1),
            t => NumTerm::Succ(Box::new(t)),
        }
    }

    pub fn pred(t: NumTerm) -> Self {
        match t {
            NumTerm::Lit(k) => NumTerm::Lit(k.saturating_sub(1)),
            NumTerm::Succ(b) => *b,
            t => NumTerm::Pred(Box::new(t)),
        }
    }

    pub fn app(f: Name, args: Vec<NumTerm>) -> Self {
        NumTerm::App(f, args)
    }

    pub fn as_lit(&self) -> Option<u64> {
        match self {
            NumTerm::Lit(k) => Some(*k),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            NumTerm::Lit(_) => true,
            NumTerm::Param(_) => false,
            NumTerm::Succ(t) | NumTerm::Pred(t) => t.is_ground(),
            NumTerm::App(_, a) => a.iter().all(|t| t.is_ground()),
        }
    }

    pub fn collect_params(&self, out: &mut BTreeSet<Name>) {
        match self {
            NumTerm::Lit(_) => {}
            NumTerm::Param(n) => {
                out.insert(n.clone());
            }
            NumTerm::Succ(t) | NumTerm::Pred(t) => t.collect_params(out),
            NumTerm::App(_, a) => a.iter().for_each(|t| t.collect_params(out)),
        }
    }

    pub fn params(&self) -> BTreeSet<Name> {
        let mut s = BTreeSet::new();
        self.collect_params(&mut s);
        s
    }

    /// Rebuilds the term with parameters replaced, renormalizing on the way.
    pub fn subst_params(&self, f: &dyn Fn(&Name) -> Option<NumTerm>) -> NumTerm {
        match self {
            NumTerm::Lit(k) => NumTerm::Lit(*k),
            NumTerm::Param(n) => f(n).unwrap_or_else(|| NumTerm::Param(n.clone())),
            NumTerm::Succ(t) => NumTerm::succ(t.subst_params(f)),
            NumTerm::Pred(t) => NumTerm::pred(t.subst_params(f)),
            NumTerm::App(g, a) => NumTerm::App(g.clone(), a.iter().map(|t| t.subst_params(f)).collect()),
        }
    }

    pub fn subst_param(&self, n: &Name, by: &NumTerm) -> NumTerm {
        self.subst_params(&|m| if m == n { Some(by.clone()) } else { None })
    }

    pub fn shape(&self) -> IndexShape {
        match self {
            NumTerm::Lit(0) => IndexShape::Zero,
            NumTerm::Lit(k) => IndexShape::Numeral(*k),
            NumTerm::Param(n) => IndexShape::Param(n.clone()),
            NumTerm::Pred(b) => match &**b {
                NumTerm::Param(n) => IndexShape::PredParam(n.clone()),
                _ => IndexShape::Other,
            },
            NumTerm::Succ(b) => match &**b {
                NumTerm::Param(n) => IndexShape::SuccParam(n.clone()),
                _ => IndexShape::Other,
            },
            NumTerm::App(..) => IndexShape::Other,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            NumTerm::Lit(_) | NumTerm::Param(_) => 1,
            NumTerm::Succ(t) | NumTerm::Pred(t) => 1 + t.size(),
            NumTerm::App(_, a) => 1 + a.iter().map(|t| t.size()).sum::<usize>(),
        }
    }
}

impl fmt::Display for NumTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumTerm::Lit(k) => write!(f, "{k}"),
            NumTerm::Param(n) => write!(f, "{n}"),
            NumTerm::Succ(t) => write!(f, "s({t})"),
            NumTerm::Pred(t) => write!(f, "p({t})"),
            NumTerm::App(g, a) => {
                write!(f, "{g}(")?;
                for (i, t) in a.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pred_of_zero_is_zero() {
        assert_eq!(NumTerm::pred(NumTerm::zero()), NumTerm::Lit(0));
    }

    #[test]
    fn pred_cancels_succ() {
        let n = NumTerm::param("n");
        assert_eq!(NumTerm::pred(NumTerm::succ(n.clone())), n);
        assert_ne!(NumTerm::succ(NumTerm::pred(n.clone())), n);
    }

    #[test]
    fn substitution_renormalizes() {
        let t = NumTerm::succ(NumTerm::pred(NumTerm::param("n")));
        assert_eq!(t.subst_param(&crate::name("n"), &NumTerm::Lit(0)), NumTerm::Lit(1));
        assert_eq!(t.subst_param(&crate::name("n"), &NumTerm::Lit(4)), NumTerm::Lit(4));
    }
}
