use std::collections::BTreeSet;
use std::fmt;

use super::{Name, NumTerm};

/// `X(t1,...,tk)`. With `k = 0` this is an ordinary first-order variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarExpr {
    pub class: Name,
    pub idx: Vec<NumTerm>,
}

impl VarExpr {
    pub fn new(class: Name, idx: Vec<NumTerm>) -> Self {
        VarExpr { class, idx }
    }

    pub fn fo(class: Name) -> Self {
        VarExpr { class, idx: Vec::new() }
    }

    pub fn is_ground(&self) -> bool {
        self.idx.iter().all(|t| t.is_ground())
    }

    pub fn map_nums(&self, f: &dyn Fn(&NumTerm) -> NumTerm) -> VarExpr {
        VarExpr { class: self.class.clone(), idx: self.idx.iter().map(f).collect() }
    }

    pub fn params(&self) -> BTreeSet<Name> {
        let mut s = BTreeSet::new();
        self.idx.iter().for_each(|t| t.collect_params(&mut s));
        s
    }
}

/// Individual term schema.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum IotaTerm {
    Var(VarExpr),
    /// Function application; a constant has no arguments.
    App(Name, Vec<IotaTerm>),
    /// Defined symbol with individual and numeric arguments.
    Hat(Name, Vec<IotaTerm>, Vec<NumTerm>),
}

impl IotaTerm {
    pub fn var(v: VarExpr) -> Self {
        IotaTerm::Var(v)
    }

    pub fn constant(c: Name) -> Self {
        IotaTerm::App(c, Vec::new())
    }

    pub fn as_var(&self) -> Option<&VarExpr> {
        match self {
            IotaTerm::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, IotaTerm::Var(_))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarExpr>) {
        match self {
            IotaTerm::Var(v) => {
                out.insert(v.clone());
            }
            IotaTerm::App(_, a) | IotaTerm::Hat(_, a, _) => a.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<VarExpr> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }

    pub fn collect_params(&self, out: &mut BTreeSet<Name>) {
        match self {
            IotaTerm::Var(v) => v.idx.iter().for_each(|t| t.collect_params(out)),
            IotaTerm::App(_, a) => a.iter().for_each(|t| t.collect_params(out)),
            IotaTerm::Hat(_, a, n) => {
                a.iter().for_each(|t| t.collect_params(out));
                n.iter().for_each(|t| t.collect_params(out));
            }
        }
    }

    pub fn params(&self) -> BTreeSet<Name> {
        let mut s = BTreeSet::new();
        self.collect_params(&mut s);
        s
    }

    pub fn has_hat(&self) -> bool {
        match self {
            IotaTerm::Var(_) => false,
            IotaTerm::App(_, a) => a.iter().any(|t| t.has_hat()),
            IotaTerm::Hat(..) => true,
        }
    }

    /// No parameters anywhere and no defined symbols left.
    pub fn is_first_order(&self) -> bool {
        match self {
            IotaTerm::Var(v) => v.is_ground(),
            IotaTerm::App(_, a) => a.iter().all(|t| t.is_first_order()),
            IotaTerm::Hat(..) => false,
        }
    }

    /// Replaces variable expressions (by syntactic identity as decided by `f`).
    pub fn map_vars(&self, f: &mut dyn FnMut(&VarExpr) -> Option<IotaTerm>) -> IotaTerm {
        match self {
            IotaTerm::Var(v) => f(v).unwrap_or_else(|| IotaTerm::Var(v.clone())),
            IotaTerm::App(g, a) => IotaTerm::App(g.clone(), a.iter().map(|t| t.map_vars(f)).collect()),
            IotaTerm::Hat(g, a, n) => {
                IotaTerm::Hat(g.clone(), a.iter().map(|t| t.map_vars(f)).collect(), n.clone())
            }
        }
    }

    /// Applies `f` to every numeric term, both in indices and hat arguments.
    pub fn map_nums(&self, f: &dyn Fn(&NumTerm) -> NumTerm) -> IotaTerm {
        match self {
            IotaTerm::Var(v) => IotaTerm::Var(v.map_nums(f)),
            IotaTerm::App(g, a) => IotaTerm::App(g.clone(), a.iter().map(|t| t.map_nums(f)).collect()),
            IotaTerm::Hat(g, a, n) => IotaTerm::Hat(
                g.clone(),
                a.iter().map(|t| t.map_nums(f)).collect(),
                n.iter().map(f).collect(),
            ),
        }
    }

    pub fn subst_params(&self, f: &dyn Fn(&Name) -> Option<NumTerm>) -> IotaTerm {
        self.map_nums(&|t| t.subst_params(f))
    }

    /// `v` occurs syntactically in `self`.
    pub fn contains_var(&self, v: &VarExpr) -> bool {
        match self {
            IotaTerm::Var(w) => w == v,
            IotaTerm::App(_, a) | IotaTerm::Hat(_, a, _) => a.iter().any(|t| t.contains_var(v)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            IotaTerm::Var(_) => 1,
            IotaTerm::App(_, a) => 1 + a.iter().map(|t| t.size()).sum::<usize>(),
            IotaTerm::Hat(_, a, n) => {
                1 + a.iter().map(|t| t.size()).sum::<usize>() + n.iter().map(|t| t.size()).sum::<usize>()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            IotaTerm::Var(_) => 0,
            IotaTerm::App(_, a) | IotaTerm::Hat(_, a, _) => {
                a.iter().map(|t| t.depth() + 1).max().unwrap_or(0)
            }
        }
    }
}

pub(crate) fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for VarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.class)?;
        if !self.idx.is_empty() {
            write!(f, "[")?;
            write_list(f, &self.idx)?;
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Display for IotaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IotaTerm::Var(v) => write!(f, "{v}"),
            IotaTerm::App(g, a) if a.is_empty() => write!(f, "{g}"),
            IotaTerm::App(g, a) => {
                write!(f, "{g}(")?;
                write_list(f, a)?;
                write!(f, ")")
            }
            IotaTerm::Hat(g, a, n) => {
                write!(f, "^{g}(")?;
                write_list(f, a)?;
                write!(f, "; ")?;
                write_list(f, n)?;
                write!(f, ")")
            }
        }
    }
}
