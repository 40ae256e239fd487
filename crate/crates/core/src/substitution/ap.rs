use std::collections::{BTreeMap, BTreeSet};

use super::psi::{psi_formula, psi_subst_in, psi_term, settle_subst, settle_term, settle_var};
use super::{CaseMap, SSubstitution, State};
use crate::error::{Error, Result};
use crate::kernel_formulas::{derive, rename_classes, Formula, HatAtom, PredRef};
use crate::kernel_terms::index::{lin_cases, unifiable_in, Constraints, Lin};
use crate::kernel_terms::{name, DefBody, IotaTerm, Name, NumTerm, Theory, VarExpr};

/// How a schematic substitution acts on a defined atom.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ApMode {
    /// Always produce the derived atom `p(Theta)|state`.
    Literal,
    /// Leave the atom unchanged when no variable it can reach is bound.
    Reduce,
}

/// `psi_p(t) psi_p(Theta)`.
pub fn ap_term_at(theta: &SSubstitution, t: &IotaTerm, state: &State, th: &Theory) -> Result<IotaTerm> {
    Ok(psi_subst_in(theta, state, th)?.apply(&psi_term(t, state)))
}

/// True when no left-hand side of `theta` can meet a variable expression of
/// `t` under any assignment.
pub fn independent(theta: &SSubstitution, vars: &BTreeSet<VarExpr>) -> bool {
    let ctx = Constraints::new();
    !theta.domain().any(|l| vars.iter().any(|v| unifiable_in(l, v, &ctx)))
}

/// State-indexed application over the parameters of `theta` and `t`.
pub fn ap_term(theta: &SSubstitution, t: &IotaTerm, th: &Theory) -> Result<CaseMap<IotaTerm>> {
    if independent(theta, &t.vars()) {
        return Ok(CaseMap::constant(t.clone()));
    }
    let mut ps = theta.params();
    ps.extend(t.params());
    let params = th.sort_params(&ps);
    let mut entries = Vec::new();
    for s in State::all_over(&params) {
        entries.push((s.clone(), ap_term_at(theta, t, &s, th)?));
    }
    Ok(CaseMap { params, entries })
}

/// Application to a formula under a fixed state.
pub fn ap_formula_at(theta: &SSubstitution, f: &Formula, state: &State, th: &Theory, mode: ApMode) -> Result<Formula> {
    if theta.is_empty() {
        return Ok(f.clone());
    }
    let pt = psi_subst_in(theta, state, th)?;
    let canon = settle_subst(&pt, state, th)?;
    ap_rec(&pt, &canon, f, state, th, mode)
}

fn ap_rec(pt: &SSubstitution, canon: &SSubstitution, f: &Formula, state: &State, th: &Theory, mode: ApMode) -> Result<Formula> {
    Ok(match f {
        Formula::Var(_) => f.clone(),
        Formula::Atom(..) => pt_apply(pt, &psi_formula(f, state)),
        Formula::Not(a) => Formula::not(ap_rec(pt, canon, a, state, th, mode)?),
        Formula::And(a, b) => Formula::and(ap_rec(pt, canon, a, state, th, mode)?, ap_rec(pt, canon, b, state, th, mode)?),
        Formula::Or(a, b) => Formula::or(ap_rec(pt, canon, a, state, th, mode)?, ap_rec(pt, canon, b, state, th, mode)?),
        Formula::Hat(h) => {
            if mode == ApMode::Reduce && inert(canon, h, state, th)? {
                return Ok(f.clone());
            }
            if canon.is_empty() {
                return Ok(f.clone());
            }
            match &h.pred {
                PredRef::Base(p) => Formula::Hat(HatAtom {
                    pred: PredRef::Derived(derive(p, canon, state)),
                    classes: h.classes.clone(),
                    args: h.args.clone(),
                }),
                PredRef::Derived(d) => {
                    let st = d.state.merge(state).ok_or_else(|| {
                        Error::StateMismatch(format!("{} used under incompatible state {}", d.name, state))
                    })?;
                    let theta2 = compose_at(&d.theta, canon, &st, th)?;
                    let pred = if theta2.is_empty() {
                        PredRef::Base(d.base.clone())
                    } else {
                        PredRef::Derived(derive(&d.base, &theta2, &st))
                    };
                    Formula::Hat(HatAtom { pred, classes: h.classes.clone(), args: h.args.clone() })
                }
            }
        }
    })
}

fn pt_apply(pt: &SSubstitution, f: &Formula) -> Formula {
    pt.apply_formula_fo(f)
}

pub fn ap_formula(theta: &SSubstitution, f: &Formula, th: &Theory, mode: ApMode) -> Result<CaseMap<Formula>> {
    let mut ps = theta.params();
    ps.extend(f.params());
    let params = th.sort_params(&ps);
    let mut entries = Vec::new();
    for s in State::all_over(&params) {
        entries.push((s.clone(), ap_formula_at(theta, f, &s, th, mode)?));
    }
    Ok(CaseMap { params, entries })
}

/// Variable expressions a defined atom can reach, each with the side
/// conditions on the bound recursion variables introduced for it. Derived
/// atoms also reach the right-hand sides of their substitution.
pub fn footprint(h: &HatAtom, th: &Theory) -> Result<Vec<(VarExpr, Constraints)>> {
    let mut out = Vec::new();
    let mut fresh = 0usize;
    fp_pred(th, h.pred.base_name(), &h.classes, &h.args, &Constraints::new(), &mut out, &mut fresh)?;
    if let PredRef::Derived(d) = &h.pred {
        for (_, t) in d.theta.iter() {
            for v in t.vars() {
                out.push((v, d.state.constraints()));
            }
        }
    }
    Ok(out)
}

fn fp_pred(
    th: &Theory,
    p: &Name,
    classes: &[Name],
    args: &[NumTerm],
    sys: &Constraints,
    out: &mut Vec<(VarExpr, Constraints)>,
    fresh: &mut usize,
) -> Result<()> {
    let d = th.pred_defs.get(p).ok_or_else(|| Error::UndeclaredSymbol(p.to_string()))?;
    let cmap: BTreeMap<Name, Name> = d.class_formals.iter().cloned().zip(classes.iter().cloned()).collect();
    let mut nmap: BTreeMap<Name, NumTerm> = d.num_formals.iter().cloned().zip(args.iter().cloned()).collect();
    match &d.body {
        DefBody::Explicit(b) => fp_body(th, b, &cmap, &nmap, sys, out, fresh),
        DefBody::Recursive { base, step } => {
            fp_body(th, base, &cmap, &nmap, sys, out, fresh)?;
            *fresh += 1;
            let j = name(&format!("#j{fresh}"));
            let rec = d.num_formals.last().unwrap().clone();
            nmap.insert(rec, NumTerm::Param(j.clone()));
            let jl = Lin { var: Some(j), off: 1 };
            match lin_cases(args.last().unwrap()) {
                Some(cases) => {
                    for (l, c) in cases {
                        let mut s = sys.with(&c);
                        s.le(&jl, &l);
                        if s.feasible() {
                            fp_body(th, step, &cmap, &nmap, &s, out, fresh)?;
                        }
                    }
                    Ok(())
                }
                None => fp_body(th, step, &cmap, &nmap, sys, out, fresh),
            }
        }
    }
}

fn fp_body(
    th: &Theory,
    f: &Formula,
    cmap: &BTreeMap<Name, Name>,
    nmap: &BTreeMap<Name, NumTerm>,
    sys: &Constraints,
    out: &mut Vec<(VarExpr, Constraints)>,
    fresh: &mut usize,
) -> Result<()> {
    let sub = |n: &Name| nmap.get(n).cloned();
    match f {
        Formula::Var(_) => Ok(()),
        Formula::Atom(_, ts) => {
            for t in ts {
                for v in rename_classes(t, cmap).subst_params(&sub).vars() {
                    out.push((v, sys.clone()));
                }
            }
            Ok(())
        }
        Formula::Not(a) => fp_body(th, a, cmap, nmap, sys, out, fresh),
        Formula::And(a, b) | Formula::Or(a, b) => {
            fp_body(th, a, cmap, nmap, sys, out, fresh)?;
            fp_body(th, b, cmap, nmap, sys, out, fresh)
        }
        Formula::Hat(h) => {
            let classes: Vec<Name> =
                h.classes.iter().map(|c| cmap.get(c).cloned().unwrap_or_else(|| c.clone())).collect();
            let args: Vec<NumTerm> = h.args.iter().map(|a| a.subst_params(&sub)).collect();
            fp_pred(th, h.pred.base_name(), &classes, &args, sys, out, fresh)
        }
    }
}

/// `theta` cannot touch any variable the atom reaches under `state`.
pub fn inert(theta: &SSubstitution, h: &HatAtom, state: &State, th: &Theory) -> Result<bool> {
    if theta.is_empty() {
        return Ok(true);
    }
    let ctx = state.constraints();
    for (v, sys) in footprint(h, th)? {
        let c = ctx.with(&sys);
        if theta.domain().any(|l| unifiable_in(l, &v, &c)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Composition under a state: bindings of `theta1` with `theta2` applied,
/// plus bindings of `theta2` whose variable cannot meet the domain of
/// `theta1`. Right-hand sides are settled under the state.
pub fn compose_at(theta1: &SSubstitution, theta2: &SSubstitution, state: &State, th: &Theory) -> Result<SSubstitution> {
    let a = psi_subst_in(theta1, state, th)?;
    let b = psi_subst_in(theta2, state, th)?;
    let ctx = state.constraints();
    let mut out = SSubstitution::new();
    for (v, t) in a.iter() {
        out.insert(settle_var(v, state, th), settle_term(&b.apply(t), state, th));
    }
    for (v, t) in b.iter() {
        if !a.domain().any(|l| unifiable_in(l, v, &ctx)) {
            out.insert(settle_var(v, state, th), settle_term(t, state, th));
        }
    }
    Ok(out.without_identities())
}

pub fn compose(theta1: &SSubstitution, theta2: &SSubstitution, th: &Theory) -> Result<CaseMap<SSubstitution>> {
    let mut ps = theta1.params();
    ps.extend(theta2.params());
    let params = th.sort_params(&ps);
    let mut entries = Vec::new();
    for s in State::all_over(&params) {
        entries.push((s.clone(), compose_at(theta1, theta2, &s, th)?));
    }
    Ok(CaseMap { params, entries })
}

/// No assignment within `ctx` makes a member of `a` equal to a member of `b`.
pub fn essentially_disjoint_in(a: &[(VarExpr, Constraints)], b: &[(VarExpr, Constraints)], ctx: &Constraints) -> bool {
    for (v, cv) in a {
        for (w, cw) in b {
            let mut c = ctx.with(cv);
            c.extend(cw);
            if unifiable_in(v, w, &c) {
                return false;
            }
        }
    }
    true
}

pub fn essentially_disjoint(a: &BTreeSet<VarExpr>, b: &BTreeSet<VarExpr>) -> bool {
    let wrap = |s: &BTreeSet<VarExpr>| s.iter().map(|v| (v.clone(), Constraints::new())).collect::<Vec<_>>();
    essentially_disjoint_in(&wrap(a), &wrap(b), &Constraints::new())
}
