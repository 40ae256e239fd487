use std::collections::BTreeMap;

use super::{instantiate_body, rename_classes, Formula, HatAtom, PredRef};
use crate::error::{Error, Result};
use crate::kernel_terms::{eval_iota, eval_num, Assignment, DefBody, Name, NumTerm, Theory};
use crate::substitution::{ap_formula_at, settle_num, ApMode, Cond, State};

/// Evaluates a formula schema to a quantifier-free first-order formula.
pub fn eval_formula(f: &Formula, sigma: &Assignment, th: &Theory) -> Result<Formula> {
    match f {
        Formula::Var(x) => Err(Error::Invalid(format!("formula variable ${x} cannot be evaluated"))),
        Formula::Atom(p, ts) => Ok(Formula::Atom(
            p.clone(),
            ts.iter().map(|t| eval_iota(t, sigma, th)).collect::<Result<_>>()?,
        )),
        Formula::Not(a) => Ok(Formula::not(eval_formula(a, sigma, th)?)),
        Formula::And(a, b) => Ok(Formula::and(eval_formula(a, sigma, th)?, eval_formula(b, sigma, th)?)),
        Formula::Or(a, b) => Ok(Formula::or(eval_formula(a, sigma, th)?, eval_formula(b, sigma, th)?)),
        Formula::Hat(h) => {
            let nums = h.args.iter().map(|a| eval_num(a, sigma, th)).collect::<Result<Vec<_>>>()?;
            match &h.pred {
                PredRef::Base(p) => eval_pred(th, p, &h.classes, &nums),
                PredRef::Derived(d) => {
                    if !d.state.holds(sigma) {
                        return Err(Error::StateMismatch(format!(
                            "{} evaluated outside its state {}",
                            d.name, d.state
                        )));
                    }
                    let body = eval_pred(th, &d.base, &h.classes, &nums)?;
                    let theta = d.theta.eval(sigma, th)?;
                    Ok(theta.apply_formula_fo(&body))
                }
            }
        }
    }
}

/// Unfolds a defined predicate on numerals, iterating over the recursion
/// argument.
pub fn eval_pred(th: &Theory, p: &Name, classes: &[Name], nums: &[u64]) -> Result<Formula> {
    let d = th.pred_defs.get(p).ok_or_else(|| Error::UndeclaredSymbol(p.to_string()))?;
    if d.class_formals.len() != classes.len() {
        return Err(Error::Arity { name: p.to_string(), expected: d.class_formals.len(), found: classes.len() });
    }
    if d.num_formals.len() != nums.len() {
        return Err(Error::Arity { name: p.to_string(), expected: d.num_formals.len(), found: nums.len() });
    }
    let cmap: BTreeMap<Name, Name> = d.class_formals.iter().cloned().zip(classes.iter().cloned()).collect();
    let mut env: Assignment = d.num_formals.iter().cloned().zip(nums.iter().copied()).collect();
    match &d.body {
        DefBody::Explicit(b) => eval_body(th, b, &cmap, &env, None),
        DefBody::Recursive { base, step } => {
            let rec = d.num_formals.last().unwrap().clone();
            let k = *nums.last().unwrap();
            let mut v = eval_body(th, base, &cmap, &env, None)?;
            for j in 0..k {
                env.insert(rec.clone(), j);
                v = eval_body(th, step, &cmap, &env, Some(&v))?;
            }
            Ok(v)
        }
    }
}

fn eval_body(
    th: &Theory,
    f: &Formula,
    cmap: &BTreeMap<Name, Name>,
    env: &Assignment,
    xi: Option<&Formula>,
) -> Result<Formula> {
    match f {
        Formula::Var(x) => xi.cloned().ok_or_else(|| Error::Invalid(format!("unbound formula variable ${x}"))),
        Formula::Atom(p, ts) => Ok(Formula::Atom(
            p.clone(),
            ts.iter().map(|t| eval_iota(&rename_classes(t, cmap), env, th)).collect::<Result<_>>()?,
        )),
        Formula::Not(a) => Ok(Formula::not(eval_body(th, a, cmap, env, xi)?)),
        Formula::And(a, b) => Ok(Formula::and(eval_body(th, a, cmap, env, xi)?, eval_body(th, b, cmap, env, xi)?)),
        Formula::Or(a, b) => Ok(Formula::or(eval_body(th, a, cmap, env, xi)?, eval_body(th, b, cmap, env, xi)?)),
        Formula::Hat(h) => {
            let PredRef::Base(p) = &h.pred else {
                return Err(Error::InvalidTheory("derived symbol inside a definition".into()));
            };
            let classes: Vec<Name> =
                h.classes.iter().map(|c| cmap.get(c).cloned().unwrap_or_else(|| c.clone())).collect();
            let nums = h.args.iter().map(|a| eval_num(a, env, th)).collect::<Result<Vec<_>>>()?;
            eval_pred(th, p, &classes, &nums)
        }
    }
}

/// One unfolding step of a defined atom whose recursion argument is `0`, a
/// numeral or a successor. Explicit definitions unfold unconditionally.
pub fn unfold_step(h: &HatAtom, th: &Theory) -> Result<Formula> {
    unfold_with(h, th, None)
}

/// Like [`unfold_step`] but reads a recursion argument that is nonzero under
/// `state` as `s(p(..))`.
pub fn unfold_step_in(h: &HatAtom, th: &Theory, state: &State) -> Result<Formula> {
    unfold_with(h, th, Some(state))
}

fn unfold_with(h: &HatAtom, th: &Theory, state: Option<&State>) -> Result<Formula> {
    match &h.pred {
        PredRef::Base(p) => unfold_base(p, h, th, state),
        PredRef::Derived(d) => {
            let body = unfold_base(&d.base, h, th, state)?;
            let st = match state {
                Some(s) => d.state.merge(s).ok_or_else(|| {
                    Error::StateMismatch(format!("{} used under incompatible state {}", d.name, s))
                })?,
                None => d.state.clone(),
            };
            ap_formula_at(&d.theta, &body, &st, th, ApMode::Literal)
        }
    }
}

fn unfold_base(p: &Name, h: &HatAtom, th: &Theory, state: Option<&State>) -> Result<Formula> {
    let d = th.pred_defs.get(p).ok_or_else(|| Error::UndeclaredSymbol(p.to_string()))?;
    if d.class_formals.len() != h.classes.len() || d.num_formals.len() != h.args.len() {
        return Err(Error::Arity {
            name: p.to_string(),
            expected: d.class_formals.len() + d.num_formals.len(),
            found: h.classes.len() + h.args.len(),
        });
    }
    let cmap: BTreeMap<Name, Name> = d.class_formals.iter().cloned().zip(h.classes.iter().cloned()).collect();
    let mut nmap: BTreeMap<Name, NumTerm> = d.num_formals.iter().cloned().zip(h.args.iter().cloned()).collect();
    match &d.body {
        DefBody::Explicit(b) => Ok(instantiate_body(b, &cmap, &nmap, None)),
        DefBody::Recursive { base, step } => {
            let rec = d.num_formals.last().unwrap().clone();
            let mut last = h.args.last().unwrap().clone();
            if let Some(s) = state {
                last = settle_num(&last, s, th);
            }
            let r = match &last {
                NumTerm::Lit(0) => return Ok(instantiate_body(base, &cmap, &nmap, None)),
                NumTerm::Lit(k) => NumTerm::Lit(k - 1),
                NumTerm::Succ(t) => (**t).clone(),
                t if state.is_some_and(|s| known_nonzero(t, s)) => NumTerm::pred(t.clone()),
                _ => return Err(Error::NotUnfoldable(h.to_string())),
            };
            let mut args = h.args.clone();
            *args.last_mut().unwrap() = r.clone();
            let xi = Formula::Hat(HatAtom::base(p.clone(), h.classes.clone(), args));
            nmap.insert(rec, r);
            Ok(instantiate_body(step, &cmap, &nmap, Some(&xi)))
        }
    }
}

/// Nonzero for every assignment in `state`.
pub(crate) fn known_nonzero(t: &NumTerm, state: &State) -> bool {
    match t {
        NumTerm::Lit(k) => *k > 0,
        NumTerm::Succ(_) => true,
        NumTerm::Param(n) => matches!(state.get(n), Some(Cond::One | Cond::Many)),
        NumTerm::Pred(b) => matches!(&**b, NumTerm::Param(n) if state.get(n) == Some(Cond::Many)),
        NumTerm::App(..) => false,
    }
}
