//! Herbrand schemata: the substitutions a refutation schema applies,
//! collected along its structure, instantiated to finite sets of
//! first-order substitutions and checked for propositional unsatisfiability.

mod sat;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::calculus::{Node, Rule};
use crate::error::{Error, Result};
use crate::kernel_formulas::{eval_formula, Formula, HatAtom};
use crate::kernel_terms::{Assignment, Name, NumTerm, Theory};
use crate::schemata::{select_case, ProofSchema};
use crate::substitution::{Condition, SSubstitution};
use crate::unification::fo_unify;

pub use sat::{ground_unsat, Verdict};

/// Substitution expression read off a single derivation.
#[derive(Clone, Debug, PartialEq)]
pub enum SubstExpr {
    Empty,
    /// `(a ∪ b) ∘ theta` at a resolution step.
    Res(Box<SubstExpr>, Box<SubstExpr>, SSubstitution),
    /// Global unifier of `a ∪ b` at any other binary step.
    Unif(Box<SubstExpr>, Box<SubstExpr>),
}

impl SubstExpr {
    pub fn is_empty(&self) -> bool {
        matches!(self, SubstExpr::Empty)
    }

    fn subst_param(&self, k: &Name, to: &NumTerm) -> SubstExpr {
        let f = |n: &Name| (n == k).then(|| to.clone());
        match self {
            SubstExpr::Empty => SubstExpr::Empty,
            SubstExpr::Res(a, b, t) => SubstExpr::Res(
                Box::new(a.subst_param(k, to)),
                Box::new(b.subst_param(k, to)),
                t.subst_params(&f).unwrap_or_else(|_| t.clone()),
            ),
            SubstExpr::Unif(a, b) => SubstExpr::Unif(Box::new(a.subst_param(k, to)), Box::new(b.subst_param(k, to))),
        }
    }
}

impl fmt::Display for SubstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstExpr::Empty => write!(f, "{{}}"),
            SubstExpr::Res(a, b, t) => match (a.is_empty(), b.is_empty()) {
                (true, true) => write!(f, "{t}"),
                (false, true) => write!(f, "({a}) o {t}"),
                (true, false) => write!(f, "({b}) o {t}"),
                (false, false) => write!(f, "({a} U {b}) o {t}"),
            },
            SubstExpr::Unif(a, b) => write!(f, "mgu({a} U {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HerbrandSchema {
    Base(SubstExpr),
    Compose(Box<HerbrandSchema>, Box<HerbrandSchema>),
    Closure { body: Box<HerbrandSchema>, param: Name },
    Cases(Vec<(Option<Condition>, HerbrandSchema)>),
}

/// How the composition clause is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CompositionMode {
    /// `Theta1 ∘ Theta2`.
    #[default]
    Compose,
    /// `Theta1 Theta2 ∘ Theta2`, and `Theta*(l) Theta*(l-1)` in the union.
    Literal,
}

fn extract_node(n: &Node) -> SubstExpr {
    let subs: Vec<SubstExpr> = n.premises.iter().map(extract_node).collect();
    match (&n.rule, subs.len()) {
        (Rule::Res(t), 2) => {
            let mut it = subs.into_iter();
            SubstExpr::Res(Box::new(it.next().unwrap()), Box::new(it.next().unwrap()), t.clone())
        }
        (_, 2) => {
            let mut it = subs.into_iter();
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            match (a.is_empty(), b.is_empty()) {
                (true, true) => SubstExpr::Empty,
                (false, true) => a,
                (true, false) => b,
                _ => SubstExpr::Unif(Box::new(a), Box::new(b)),
            }
        }
        (_, 1) => subs.into_iter().next().unwrap(),
        _ => SubstExpr::Empty,
    }
}

/// Herbrand schema parallel to the proof schema.
pub fn extract(s: &ProofSchema) -> HerbrandSchema {
    match s {
        ProofSchema::Leaf(d) => HerbrandSchema::Base(extract_node(&d.root)),
        ProofSchema::Compose(a, b) => HerbrandSchema::Compose(Box::new(extract(a)), Box::new(extract(b))),
        ProofSchema::Closure { body, param, .. } => {
            HerbrandSchema::Closure { body: Box::new(extract(body)), param: param.clone() }
        }
        ProofSchema::Cases(bs) => HerbrandSchema::Cases(bs.iter().map(|(c, b)| (c.clone(), extract(b))).collect()),
    }
}

fn union(a: &SSubstitution, b: &SSubstitution) -> Result<SSubstitution> {
    let mut out = a.clone();
    let mut clash = false;
    for (v, t) in b.iter() {
        match out.get(v) {
            Some(u) if u != t => clash = true,
            Some(_) => {}
            None => {
                out.insert(v.clone(), t.clone());
            }
        }
    }
    if !clash {
        return Ok(out);
    }
    let pairs: Vec<_> =
        a.iter().chain(b.iter()).map(|(v, t)| (crate::IotaTerm::Var(v.clone()), t.clone())).collect();
    fo_unify(&pairs).ok_or_else(|| Error::ExtractionFailed(format!("{a} and {b} have no common unifier")))
}

/// First-order substitution denoted by `e` under `sigma`.
pub fn eval_expr(e: &SubstExpr, sigma: &Assignment, th: &Theory) -> Result<SSubstitution> {
    Ok(match e {
        SubstExpr::Empty => SSubstitution::new(),
        SubstExpr::Res(a, b, t) => {
            let u = union(&eval_expr(a, sigma, th)?, &eval_expr(b, sigma, th)?)?;
            u.compose_fo(&t.eval(sigma, th)?).without_identities()
        }
        SubstExpr::Unif(a, b) => union(&eval_expr(a, sigma, th)?, &eval_expr(b, sigma, th)?)?,
    })
}

fn compose_sets(
    a: &BTreeSet<SSubstitution>,
    b: &BTreeSet<SSubstitution>,
    mode: CompositionMode,
) -> BTreeSet<SSubstitution> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            let c = x.compose_fo(y);
            out.insert(match mode {
                CompositionMode::Compose => c,
                CompositionMode::Literal => c.compose_fo(y),
            });
        }
    }
    out
}

/// Finite set of first-order substitutions denoted by `h` under `sigma`.
pub fn instantiate_hs(
    h: &HerbrandSchema,
    sigma: &Assignment,
    th: &Theory,
    mode: CompositionMode,
    bound: u64,
) -> Result<BTreeSet<SSubstitution>> {
    let mut budget = bound;
    inst(h, sigma, th, mode, bound, &mut budget)
}

fn inst(
    h: &HerbrandSchema,
    sigma: &Assignment,
    th: &Theory,
    mode: CompositionMode,
    bound: u64,
    budget: &mut u64,
) -> Result<BTreeSet<SSubstitution>> {
    match h {
        HerbrandSchema::Base(e) => Ok([eval_expr(e, sigma, th)?].into()),
        HerbrandSchema::Compose(a, b) => {
            let x = inst(a, sigma, th, mode, bound, budget)?;
            let y = inst(b, sigma, th, mode, bound, budget)?;
            Ok(compose_sets(&x, &y, mode))
        }
        HerbrandSchema::Cases(bs) => inst(select_case(bs, sigma)?, sigma, th, mode, bound, budget),
        HerbrandSchema::Closure { body, param } => {
            let k = *sigma.get(param).ok_or_else(|| Error::UnboundParameter(param.to_string()))?;
            let mut at = sigma.clone();
            at.insert(param.clone(), 0);
            let mut star = inst(body, &at, th, mode, bound, budget)?;
            let mut all = star.clone();
            for l in 1..=k {
                if *budget == 0 {
                    return Err(Error::DepthExceeded(bound));
                }
                *budget -= 1;
                at.insert(param.clone(), l);
                let prev = star;
                star = compose_sets(&inst(body, &at, th, mode, bound, budget)?, &prev, CompositionMode::Compose);
                match mode {
                    CompositionMode::Compose => all.extend(star.iter().cloned()),
                    CompositionMode::Literal => all.extend(compose_sets(&star, &prev, CompositionMode::Compose)),
                }
            }
            Ok(all)
        }
    }
}

/// `|- main` instantiated at `sigma`, evaluated and with each substitution
/// applied.
pub fn instance_formulas(
    main: &HatAtom,
    subs: &BTreeSet<SSubstitution>,
    sigma: &Assignment,
    th: &Theory,
) -> Result<Vec<Formula>> {
    let f = eval_formula(&Formula::Hat(main.clone()), sigma, th)?;
    if !f.params().is_empty() || f.has_hat() {
        return Err(Error::NotGround(f.to_string()));
    }
    Ok(subs.iter().map(|t| t.apply_formula_fo(&f)).collect())
}

/// Unsatisfiability of the instances of `|- main` under `subs`.
pub fn verify_set(main: &HatAtom, subs: &BTreeSet<SSubstitution>, sigma: &Assignment, th: &Theory) -> Result<Verdict> {
    ground_unsat(&instance_formulas(main, subs, sigma, th)?)
}

pub fn verify_unsat(
    main: &HatAtom,
    h: &HerbrandSchema,
    sigma: &Assignment,
    th: &Theory,
    mode: CompositionMode,
    bound: u64,
) -> Result<Verdict> {
    verify_set(main, &instantiate_hs(h, sigma, th, mode, bound)?, sigma, th)
}

/// [`verify_unsat`] at every point of a grid, in parallel.
pub fn verify_grid(
    main: &HatAtom,
    h: &HerbrandSchema,
    points: &[Assignment],
    th: &Theory,
    mode: CompositionMode,
    bound: u64,
) -> Vec<(Assignment, Result<Verdict>)> {
    points.par_iter().map(|s| (s.clone(), verify_unsat(main, h, s, th, mode, bound))).collect()
}

/// All assignments over the given ranges, first parameter slowest.
pub fn grid(ranges: &[(Name, std::ops::RangeInclusive<u64>)]) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for (p, r) in ranges {
        out = out
            .into_iter()
            .flat_map(|a| {
                r.clone().map(move |v| {
                    let mut b = a.clone();
                    b.insert(p.clone(), v);
                    b
                })
            })
            .collect();
    }
    out
}

impl HerbrandSchema {
    /// Replaces a parameter in every substitution, for display.
    pub fn subst_param(&self, k: &Name, to: &NumTerm) -> HerbrandSchema {
        match self {
            HerbrandSchema::Base(e) => HerbrandSchema::Base(e.subst_param(k, to)),
            HerbrandSchema::Compose(a, b) => {
                HerbrandSchema::Compose(Box::new(a.subst_param(k, to)), Box::new(b.subst_param(k, to)))
            }
            HerbrandSchema::Closure { body, param } if param != k => {
                HerbrandSchema::Closure { body: Box::new(body.subst_param(k, to)), param: param.clone() }
            }
            HerbrandSchema::Closure { .. } => self.clone(),
            HerbrandSchema::Cases(bs) => HerbrandSchema::Cases(bs.iter().map(|(c, b)| (c.clone(), b.subst_param(k, to))).collect()),
        }
    }
}

fn paren(h: &HerbrandSchema) -> String {
    match h {
        HerbrandSchema::Compose(..) | HerbrandSchema::Cases(..) => format!("({h})"),
        _ => h.to_string(),
    }
}

fn is_unit(h: &HerbrandSchema) -> bool {
    matches!(h, HerbrandSchema::Base(SubstExpr::Empty))
}

impl fmt::Display for HerbrandSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HerbrandSchema::Base(e) => write!(f, "{e}"),
            HerbrandSchema::Compose(a, b) if is_unit(a) => write!(f, "{b}"),
            HerbrandSchema::Compose(a, b) if is_unit(b) => write!(f, "{a}"),
            HerbrandSchema::Compose(a, b) => write!(f, "{} o {}", paren(a), paren(b)),
            HerbrandSchema::Closure { body, param } => write!(
                f,
                "U[l=0..{param}] Theta*({param} <- l) where Theta*({param}) = {{{} : {param}=0, {} o Theta*(p({param})) : {param}!=0}}",
                paren(&body.subst_param(param, &NumTerm::zero())),
                paren(body)
            ),
            HerbrandSchema::Cases(bs) => {
                for (i, (c, b)) in bs.iter().enumerate() {
                    match c {
                        Some(c) if i == 0 => write!(f, "if {c} then {}", paren(b))?,
                        Some(c) => write!(f, " else if {c} then {}", paren(b))?,
                        None => write!(f, " else {}", paren(b))?,
                    }
                }
                Ok(())
            }
        }
    }
}
