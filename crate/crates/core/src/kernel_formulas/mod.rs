//! Formula schemata: propositional structure over atoms, defined predicate
//! atoms and the derived predicates that arise when a schematic substitution
//! meets a defined atom.

mod derived;
mod eval;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::kernel_terms::{write_list, IotaTerm, Name, NumTerm, VarExpr};

pub use derived::{derive, derived_definition, registry_len, DerivedDefinition, DerivedSym};
pub use eval::{eval_formula, eval_pred, unfold_step, unfold_step_in};
pub(crate) use eval::known_nonzero as eval_known_nonzero;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PredRef {
    Base(Name),
    Derived(Arc<DerivedSym>),
}

impl PredRef {
    pub fn base_name(&self) -> &Name {
        match self {
            PredRef::Base(n) => n,
            PredRef::Derived(d) => &d.base,
        }
    }
}

/// `p(X1..Xk; r1..rl)` with class arguments and numeric arguments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HatAtom {
    pub pred: PredRef,
    pub classes: Vec<Name>,
    pub args: Vec<NumTerm>,
}

impl HatAtom {
    pub fn base(p: Name, classes: Vec<Name>, args: Vec<NumTerm>) -> Self {
        HatAtom { pred: PredRef::Base(p), classes, args }
    }

    pub fn with_args(&self, args: Vec<NumTerm>) -> Self {
        HatAtom { pred: self.pred.clone(), classes: self.classes.clone(), args }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    /// Formula variable, only inside step bodies of predicate definitions.
    Var(Name),
    Atom(Name, Vec<IotaTerm>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Hat(HatAtom),
}

impl Formula {
    pub fn atom(p: &str, args: Vec<IotaTerm>) -> Self {
        Formula::Atom(crate::kernel_terms::name(p), args)
    }

    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn hat(p: &str, classes: &[&str], args: Vec<NumTerm>) -> Self {
        Formula::Hat(HatAtom::base(
            crate::kernel_terms::name(p),
            classes.iter().map(|c| crate::kernel_terms::name(c)).collect(),
            args,
        ))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(..) | Formula::Hat(_))
    }

    pub fn has_formula_var(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Atom(..) | Formula::Hat(_) => false,
            Formula::Not(a) => a.has_formula_var(),
            Formula::And(a, b) | Formula::Or(a, b) => a.has_formula_var() || b.has_formula_var(),
        }
    }

    pub fn has_hat(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Atom(_, ts) => ts.iter().any(|t| t.has_hat()),
            Formula::Hat(_) => true,
            Formula::Not(a) => a.has_hat(),
            Formula::And(a, b) | Formula::Or(a, b) => a.has_hat() || b.has_hat(),
        }
    }

    pub fn collect_params(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Var(_) => {}
            Formula::Atom(_, ts) => ts.iter().for_each(|t| t.collect_params(out)),
            Formula::Hat(h) => {
                h.args.iter().for_each(|t| t.collect_params(out));
                if let PredRef::Derived(d) = &h.pred {
                    out.extend(d.theta.params());
                    out.extend(d.state.params());
                }
            }
            Formula::Not(a) => a.collect_params(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    pub fn params(&self) -> BTreeSet<Name> {
        let mut s = BTreeSet::new();
        self.collect_params(&mut s);
        s
    }

    /// No parameters and no formula variables.
    pub fn is_ground(&self) -> bool {
        !self.has_formula_var() && self.params().is_empty()
    }

    /// Variable expressions occurring in ordinary atoms.
    pub fn collect_vars(&self, out: &mut BTreeSet<VarExpr>) {
        match self {
            Formula::Var(_) | Formula::Hat(_) => {}
            Formula::Atom(_, ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Formula::Not(a) => a.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<VarExpr> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }

    pub fn hat_atoms(&self) -> Vec<&HatAtom> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a HatAtom>) {
            match f {
                Formula::Hat(h) => out.push(h),
                Formula::Not(a) => go(a, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    /// Rebuilds with every atom argument mapped.
    pub fn map_terms(&self, f: &mut dyn FnMut(&IotaTerm) -> IotaTerm) -> Formula {
        match self {
            Formula::Var(x) => Formula::Var(x.clone()),
            Formula::Atom(p, ts) => Formula::Atom(p.clone(), ts.iter().map(|t| f(t)).collect()),
            Formula::Hat(h) => Formula::Hat(h.clone()),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::And(a, b) => {
                let a = a.map_terms(f);
                Formula::and(a, b.map_terms(f))
            }
            Formula::Or(a, b) => {
                let a = a.map_terms(f);
                Formula::or(a, b.map_terms(f))
            }
        }
    }

    /// Rebuilds with every hat atom mapped.
    pub fn map_hats(&self, f: &mut dyn FnMut(&HatAtom) -> Formula) -> Formula {
        match self {
            Formula::Hat(h) => f(h),
            Formula::Not(a) => Formula::not(a.map_hats(f)),
            Formula::And(a, b) => {
                let a = a.map_hats(f);
                Formula::and(a, b.map_hats(f))
            }
            Formula::Or(a, b) => {
                let a = a.map_hats(f);
                Formula::or(a, b.map_hats(f))
            }
            other => other.clone(),
        }
    }

    /// Substitutes parameters in term indices and in hat atom arguments.
    pub fn subst_params(&self, f: &dyn Fn(&Name) -> Option<NumTerm>) -> Formula {
        self.map_terms(&mut |t| t.subst_params(f))
            .map_hats(&mut |h| Formula::Hat(h.with_args(h.args.iter().map(|a| a.subst_params(f)).collect())))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Hat(_) => 1,
            Formula::Atom(_, ts) => 1 + ts.iter().map(|t| t.size()).sum::<usize>(),
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Variable expressions of a formula with their side conditions. Defined
/// atoms contribute every variable expression they can reach.
pub fn footprint_vars(
    f: &Formula,
    th: &crate::kernel_terms::Theory,
) -> Vec<(VarExpr, crate::kernel_terms::index::Constraints)> {
    let mut out: Vec<_> = f.vars().into_iter().map(|v| (v, Default::default())).collect();
    for h in f.hat_atoms() {
        match crate::substitution::footprint(h, th) {
            Ok(fp) => out.extend(fp),
            Err(_) => {
                for c in &h.classes {
                    out.push((VarExpr::new(c.clone(), vec![NumTerm::App(crate::kernel_terms::name("?"), vec![])]), Default::default()));
                }
            }
        }
    }
    out
}

/// Renames class formals inside a term.
pub(crate) fn rename_classes(t: &IotaTerm, cmap: &BTreeMap<Name, Name>) -> IotaTerm {
    if cmap.is_empty() {
        return t.clone();
    }
    t.map_vars(&mut |v| {
        cmap.get(&v.class).map(|c| IotaTerm::Var(VarExpr { class: c.clone(), idx: v.idx.clone() }))
    })
}

/// Instantiates a definition body: class formals, numeric formals and the
/// formula variable.
pub(crate) fn instantiate_body(
    body: &Formula,
    cmap: &BTreeMap<Name, Name>,
    nmap: &BTreeMap<Name, NumTerm>,
    xi: Option<&Formula>,
) -> Formula {
    let sub = |n: &Name| nmap.get(n).cloned();
    match body {
        Formula::Var(x) => xi.cloned().unwrap_or_else(|| Formula::Var(x.clone())),
        Formula::Atom(p, ts) => {
            Formula::Atom(p.clone(), ts.iter().map(|t| rename_classes(t, cmap).subst_params(&sub)).collect())
        }
        Formula::Hat(h) => Formula::Hat(HatAtom {
            pred: h.pred.clone(),
            classes: h.classes.iter().map(|c| cmap.get(c).cloned().unwrap_or_else(|| c.clone())).collect(),
            args: h.args.iter().map(|a| a.subst_params(&sub)).collect(),
        }),
        Formula::Not(a) => Formula::not(instantiate_body(a, cmap, nmap, xi)),
        Formula::And(a, b) => {
            Formula::and(instantiate_body(a, cmap, nmap, xi), instantiate_body(b, cmap, nmap, xi))
        }
        Formula::Or(a, b) => Formula::or(instantiate_body(a, cmap, nmap, xi), instantiate_body(b, cmap, nmap, xi)),
    }
}

impl fmt::Display for HatAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pred {
            PredRef::Base(p) => write!(f, "^{p}(")?,
            PredRef::Derived(d) => write!(f, "^{}<{} | {}>(", d.base, d.theta, d.state)?,
        }
        write_list(f, &self.classes)?;
        write!(f, "; ")?;
        write_list(f, &self.args)?;
        write!(f, ")")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(x) => write!(f, "${x}"),
            Formula::Atom(p, ts) if ts.is_empty() => write!(f, "{p}"),
            Formula::Atom(p, ts) => {
                write!(f, "{p}(")?;
                write_list(f, ts)?;
                write!(f, ")")
            }
            Formula::Hat(h) => write!(f, "{h}"),
            Formula::Not(a) => {
                if matches!(**a, Formula::And(..) | Formula::Or(..)) {
                    write!(f, "~({a})")
                } else {
                    write!(f, "~{a}")
                }
            }
            Formula::And(a, b) => {
                if matches!(**a, Formula::And(..) | Formula::Or(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " /\\ ")?;
                if matches!(**b, Formula::Or(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Formula::Or(a, b) => {
                if matches!(**a, Formula::Or(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " \\/ {b}")
            }
        }
    }
}
