use std::collections::{BTreeMap, BTreeSet};

use super::{IndexShape, IotaTerm, Name, NumTerm};
use crate::error::{Error, Result};
use crate::kernel_formulas::{Formula, PredRef};

/// Defining equations of a symbol. `Recursive` recurses on the last numeric
/// formal; `Explicit` is a non-recursive abbreviation.
#[derive(Clone, Debug, PartialEq)]
pub enum DefBody<T> {
    Recursive { base: T, step: T },
    Explicit(T),
}

impl<T> DefBody<T> {
    pub fn is_recursive(&self) -> bool {
        matches!(self, DefBody::Recursive { .. })
    }

    pub fn parts(&self) -> Vec<&T> {
        match self {
            DefBody::Recursive { base, step } => vec![base, step],
            DefBody::Explicit(b) => vec![b],
        }
    }
}

/// `f(x1..xk, 0) = base`, `f(x1..xk, s(y)) = step` where `step` may call
/// `f(x1..xk, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumDef {
    pub name: Name,
    pub formals: Vec<Name>,
    pub body: DefBody<NumTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermDef {
    pub name: Name,
    pub iota_formals: Vec<Name>,
    pub num_formals: Vec<Name>,
    pub body: DefBody<IotaTerm>,
}

/// Predicate definition. The step body refers to the recursive instance
/// through the formula variable `xi`.
#[derive(Clone, Debug, PartialEq)]
pub struct PredDef {
    pub name: Name,
    pub class_formals: Vec<Name>,
    pub num_formals: Vec<Name>,
    pub body: DefBody<Formula>,
}

/// Name of the formula variable standing for the recursive call.
pub const XI: &str = "xi";

/// Signature, variable classes and definitions in one place. Numeric,
/// term-level and predicate-level definitions share the descent order.
#[derive(Clone, Debug, Default)]
pub struct Theory {
    pub params: Vec<Name>,
    /// Class name to its assigned parameters; empty for plain variables.
    pub classes: BTreeMap<Name, Vec<Name>>,
    pub functions: BTreeMap<Name, usize>,
    pub predicates: BTreeMap<Name, usize>,
    pub num_defs: BTreeMap<Name, NumDef>,
    pub term_defs: BTreeMap<Name, TermDef>,
    pub pred_defs: BTreeMap<Name, PredDef>,
    /// Declared `a < b` pairs, added to the pairs implied by dependencies.
    pub order: Vec<(Name, Name)>,
    pub mains: Vec<Name>,
    pub axioms: Vec<Formula>,
}

impl Theory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_param(&mut self, n: Name) {
        if !self.params.contains(&n) {
            self.params.push(n);
        }
    }

    pub fn declare_class(&mut self, c: Name, params: Vec<Name>) {
        for p in &params {
            self.declare_param(p.clone());
        }
        self.classes.insert(c, params);
    }

    pub fn is_class(&self, c: &str) -> bool {
        self.classes.contains_key(c)
    }

    pub fn class_params(&self, c: &str) -> Option<&[Name]> {
        self.classes.get(c).map(|v| v.as_slice())
    }

    pub fn is_defined(&self, f: &str) -> bool {
        self.num_defs.contains_key(f) || self.term_defs.contains_key(f) || self.pred_defs.contains_key(f)
    }

    /// Parameters in declaration order, unknown ones after them by name.
    pub fn sort_params<'a>(&self, ps: impl IntoIterator<Item = &'a Name>) -> Vec<Name> {
        let mut v: Vec<Name> = ps.into_iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        v.sort_by_key(|p| {
            let pos = self.params.iter().position(|q| q == p).unwrap_or(usize::MAX);
            (pos, p.clone())
        });
        v
    }

    /// Defined symbols occurring in the body of `f`, excluding `f` itself.
    pub fn deps(&self, f: &str) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        if let Some(d) = self.num_defs.get(f) {
            for b in d.body.parts() {
                num_symbols(b, &mut out);
            }
        }
        if let Some(d) = self.term_defs.get(f) {
            for b in d.body.parts() {
                term_symbols(b, &mut out);
            }
        }
        if let Some(d) = self.pred_defs.get(f) {
            for b in d.body.parts() {
                formula_symbols(b, &mut out);
            }
        }
        out.retain(|g| &**g != f && self.is_defined(g));
        out
    }

    /// Strict order on defined symbols: declared pairs together with the
    /// dependency relation, closed transitively.
    pub fn less(&self) -> BTreeSet<(Name, Name)> {
        let mut rel: BTreeSet<(Name, Name)> = self.order.iter().cloned().collect();
        for f in self.defined_symbols() {
            for g in self.deps(&f) {
                rel.insert((g, f.clone()));
            }
        }
        loop {
            let mut added = Vec::new();
            for (a, b) in &rel {
                for (c, d) in &rel {
                    if b == c && !rel.contains(&(a.clone(), d.clone())) {
                        added.push((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                return rel;
            }
            rel.extend(added);
        }
    }

    pub fn defined_symbols(&self) -> Vec<Name> {
        self.num_defs
            .keys()
            .chain(self.term_defs.keys())
            .chain(self.pred_defs.keys())
            .cloned()
            .collect()
    }

    /// Checks arities, the shape of recursive calls, the descent order and
    /// that bodies mention only their own numeric formals.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTheory(m));
        for d in self.num_defs.values() {
            if d.formals.is_empty() {
                return bad(format!("`{}` has no numeric formals", d.name));
            }
            let formals: BTreeSet<Name> = d.formals.iter().cloned().collect();
            for b in d.body.parts() {
                if let Some(p) = b.params().into_iter().find(|p| !formals.contains(p)) {
                    return bad(format!("parameter `{p}` is not a formal of `{}`", d.name));
                }
                self.check_num(b, Some((&d.name, &d.formals)))?;
            }
            if let DefBody::Recursive { base, .. } = &d.body {
                if base.params().contains(d.formals.last().unwrap()) {
                    return bad(format!("base case of `{}` uses its recursion variable", d.name));
                }
            }
        }
        for d in self.term_defs.values() {
            let formals: BTreeSet<Name> = d.num_formals.iter().cloned().collect();
            let iformals: BTreeSet<Name> = d.iota_formals.iter().cloned().collect();
            if d.body.is_recursive() && d.num_formals.is_empty() {
                return bad(format!("recursive `{}` needs a numeric formal", d.name));
            }
            for b in d.body.parts() {
                if let Some(p) = b.params().into_iter().find(|p| !formals.contains(p)) {
                    return bad(format!("parameter `{p}` is not a formal of `{}`", d.name));
                }
                if let Some(v) = b.vars().into_iter().find(|v| !v.idx.is_empty() || !iformals.contains(&v.class)) {
                    return bad(format!("variable `{v}` in the body of `{}`", d.name));
                }
                self.check_term(b, Some(d))?;
            }
        }
        for d in self.pred_defs.values() {
            let formals: BTreeSet<Name> = d.num_formals.iter().cloned().collect();
            if d.body.is_recursive() && d.num_formals.is_empty() {
                return bad(format!("recursive `{}` needs a numeric formal", d.name));
            }
            for (i, b) in d.body.parts().into_iter().enumerate() {
                if let Some(p) = b.params().into_iter().find(|p| !formals.contains(p)) {
                    return bad(format!("parameter `{p}` is not a formal of `{}`", d.name));
                }
                let is_step = d.body.is_recursive() && i == 1;
                if b.has_formula_var() && !is_step {
                    return bad(format!("formula variable outside a step body in `{}`", d.name));
                }
                self.check_formula(b, &d.name)?;
            }
            if let DefBody::Recursive { base, .. } = &d.body {
                if base.params().contains(d.num_formals.last().unwrap()) {
                    return bad(format!("base case of `{}` uses its recursion variable", d.name));
                }
            }
        }
        let less = self.less();
        for f in self.defined_symbols() {
            if less.contains(&(f.clone(), f.clone())) {
                return bad(format!("descent order is cyclic at `{f}`"));
            }
            for g in self.deps(&f) {
                if !less.contains(&(g.clone(), f.clone())) {
                    return bad(format!("`{f}` uses `{g}` which is not below it"));
                }
            }
        }
        for m in &self.mains {
            if !self.pred_defs.contains_key(m) {
                return bad(format!("main symbol `{m}` is not a defined predicate"));
            }
        }
        Ok(())
    }

    fn check_num(&self, t: &NumTerm, own: Option<(&Name, &Vec<Name>)>) -> Result<()> {
        match t {
            NumTerm::Lit(_) | NumTerm::Param(_) => Ok(()),
            NumTerm::Succ(a) | NumTerm::Pred(a) => self.check_num(a, own),
            NumTerm::App(g, args) => {
                for a in args {
                    self.check_num(a, own)?;
                }
                if let Some((f, formals)) = own {
                    if g == f {
                        let expect: Vec<NumTerm> = formals.iter().map(|p| NumTerm::Param(p.clone())).collect();
                        if args != &expect {
                            return Err(Error::InvalidTheory(format!(
                                "recursive call of `{f}` must be on its own formals"
                            )));
                        }
                        return Ok(());
                    }
                }
                let d = self.num_defs.get(g).ok_or_else(|| Error::UndeclaredSymbol(g.to_string()))?;
                arity(g, d.formals.len(), args.len())
            }
        }
    }

    fn check_term(&self, t: &IotaTerm, own: Option<&TermDef>) -> Result<()> {
        match t {
            IotaTerm::Var(v) => v.idx.iter().try_for_each(|i| self.check_num(i, None)),
            IotaTerm::App(g, a) => {
                if let Some(k) = self.functions.get(g) {
                    arity(g, *k, a.len())?;
                }
                a.iter().try_for_each(|x| self.check_term(x, own))
            }
            IotaTerm::Hat(g, a, n) => {
                a.iter().try_for_each(|x| self.check_term(x, own))?;
                n.iter().try_for_each(|x| self.check_num(x, None))?;
                if let Some(d) = own {
                    if g == &d.name {
                        let ia: Vec<IotaTerm> =
                            d.iota_formals.iter().map(|x| IotaTerm::Var(super::VarExpr::fo(x.clone()))).collect();
                        let na: Vec<NumTerm> = d.num_formals.iter().map(|p| NumTerm::Param(p.clone())).collect();
                        if a != &ia || n != &na {
                            return Err(Error::InvalidTheory(format!(
                                "recursive call of `{g}` must be on its own formals"
                            )));
                        }
                        return Ok(());
                    }
                }
                let d = self.term_defs.get(g).ok_or_else(|| Error::UndeclaredSymbol(g.to_string()))?;
                arity(g, d.iota_formals.len(), a.len())?;
                arity(g, d.num_formals.len(), n.len())
            }
        }
    }

    fn check_formula(&self, f: &Formula, own: &Name) -> Result<()> {
        match f {
            Formula::Var(_) => Ok(()),
            Formula::Atom(p, ts) => {
                if let Some(k) = self.predicates.get(p) {
                    arity(p, *k, ts.len())?;
                }
                ts.iter().try_for_each(|t| self.check_term(t, None))
            }
            Formula::Not(a) => self.check_formula(a, own),
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.check_formula(a, own)?;
                self.check_formula(b, own)
            }
            Formula::Hat(h) => {
                let PredRef::Base(p) = &h.pred else {
                    return Err(Error::InvalidTheory("derived symbol inside a definition".into()));
                };
                if p == own {
                    return Err(Error::InvalidTheory(format!(
                        "`{own}` calls itself directly; use the recursion variable"
                    )));
                }
                let d = self.pred_defs.get(p).ok_or_else(|| Error::UndeclaredSymbol(p.to_string()))?;
                arity(p, d.class_formals.len(), h.classes.len())?;
                arity(p, d.num_formals.len(), h.args.len())?;
                h.args.iter().try_for_each(|x| self.check_num(x, None))
            }
        }
    }
}

fn arity(name: &Name, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Arity { name: name.to_string(), expected, found })
    }
}

fn num_symbols(t: &NumTerm, out: &mut BTreeSet<Name>) {
    match t {
        NumTerm::Lit(_) | NumTerm::Param(_) => {}
        NumTerm::Succ(a) | NumTerm::Pred(a) => num_symbols(a, out),
        NumTerm::App(g, a) => {
            out.insert(g.clone());
            a.iter().for_each(|x| num_symbols(x, out));
        }
    }
}

fn term_symbols(t: &IotaTerm, out: &mut BTreeSet<Name>) {
    match t {
        IotaTerm::Var(v) => v.idx.iter().for_each(|x| num_symbols(x, out)),
        IotaTerm::App(_, a) => a.iter().for_each(|x| term_symbols(x, out)),
        IotaTerm::Hat(g, a, n) => {
            out.insert(g.clone());
            a.iter().for_each(|x| term_symbols(x, out));
            n.iter().for_each(|x| num_symbols(x, out));
        }
    }
}

fn formula_symbols(f: &Formula, out: &mut BTreeSet<Name>) {
    match f {
        Formula::Var(_) => {}
        Formula::Atom(_, ts) => ts.iter().for_each(|t| term_symbols(t, out)),
        Formula::Not(a) => formula_symbols(a, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            formula_symbols(a, out);
            formula_symbols(b, out);
        }
        Formula::Hat(h) => {
            out.insert(h.pred.base_name().clone());
            h.args.iter().for_each(|x| num_symbols(x, out));
        }
    }
}

/// Parameters, variable expressions and standardness of a term.
#[derive(Clone, Debug, PartialEq)]
pub struct TermAnalysis {
    pub params: Vec<Name>,
    pub vars: Vec<super::VarExpr>,
    pub standard: bool,
}

/// A term is standard when every index of every variable expression is
/// `n`, `0`, `p(n)` or `s(n)` for the parameter assigned to that position.
/// Undeclared classes only need the shape.
pub fn analyze(t: &IotaTerm, th: &Theory) -> TermAnalysis {
    let vars = t.vars();
    let standard = vars.iter().all(|v| is_standard_var(v, th));
    TermAnalysis { params: th.sort_params(&t.params()), vars: vars.into_iter().collect(), standard }
}

pub(crate) fn is_standard_var(v: &super::VarExpr, th: &Theory) -> bool {
    let assigned = th.class_params(&v.class);
    if let Some(a) = assigned {
        if a.len() != v.idx.len() {
            return false;
        }
    }
    v.idx.iter().enumerate().all(|(i, t)| {
        let want = assigned.map(|a| &a[i]);
        match t.shape() {
            IndexShape::Zero => true,
            IndexShape::Param(n) | IndexShape::PredParam(n) | IndexShape::SuccParam(n) => {
                want.map_or(true, |w| *w == n)
            }
            IndexShape::Numeral(_) | IndexShape::Other => false,
        }
    })
}
