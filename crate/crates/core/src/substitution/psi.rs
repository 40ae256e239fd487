use super::{Cond, SSubstitution, State};
use crate::error::Result;
use crate::kernel_formulas::{Formula, HatAtom};
use crate::kernel_terms::{eval_hat, eval_num_app, IndexShape, IotaTerm, NumTerm, Theory, VarExpr};

/// Partial evaluation of a standard index under a state. Indices of other
/// shapes are returned unchanged.
pub fn psi_index(t: &NumTerm, state: &State) -> NumTerm {
    let c = |n: &str| state.get(n);
    match t.shape() {
        IndexShape::Param(n) => match c(&n) {
            Some(Cond::Zero) => NumTerm::Lit(0),
            Some(Cond::One) => NumTerm::Lit(1),
            _ => t.clone(),
        },
        IndexShape::PredParam(n) => match c(&n) {
            Some(Cond::Zero | Cond::One) => NumTerm::Lit(0),
            _ => t.clone(),
        },
        IndexShape::SuccParam(n) => match c(&n) {
            Some(Cond::Zero) => NumTerm::Lit(1),
            Some(Cond::One) => NumTerm::Lit(2),
            _ => t.clone(),
        },
        _ => t.clone(),
    }
}

pub fn psi_var(v: &VarExpr, state: &State) -> VarExpr {
    v.map_nums(&|i| psi_index(i, state))
}

/// `psi_p(t)`: rewrites the indices of variable expressions, including those
/// inside the individual arguments of defined symbols.
pub fn psi_term(t: &IotaTerm, state: &State) -> IotaTerm {
    t.map_vars(&mut |v| Some(IotaTerm::Var(psi_var(v, state))))
}

pub fn psi_subst(theta: &SSubstitution, state: &State) -> Result<SSubstitution> {
    theta.map_all(|v, t| (psi_var(v, state), psi_term(t, state)))
}

/// [`psi_subst`], except that bindings which meet under the state are
/// accepted when their right-hand sides settle to the same term.
pub fn psi_subst_in(theta: &SSubstitution, state: &State, th: &Theory) -> Result<SSubstitution> {
    psi_subst(theta, state)
        .or_else(|_| theta.map_all(|v, t| (psi_var(v, state), settle_term(&psi_term(t, state), state, th))))
}

pub fn psi_formula(f: &Formula, state: &State) -> Formula {
    f.map_terms(&mut |t| psi_term(t, state))
}

/// Normal form of a numeric term under a state: parameters fixed by the
/// state become numerals, `s(p(t))` collapses when `t` is nonzero and
/// defined functions on numerals are computed.
pub fn settle_num(t: &NumTerm, state: &State, th: &Theory) -> NumTerm {
    match t {
        NumTerm::Lit(k) => NumTerm::Lit(*k),
        NumTerm::Param(n) => match state.get(n) {
            Some(Cond::Zero) => NumTerm::Lit(0),
            Some(Cond::One) => NumTerm::Lit(1),
            _ => t.clone(),
        },
        NumTerm::Succ(a) => {
            let a = settle_num(a, state, th);
            match a {
                NumTerm::Pred(b) if crate::kernel_formulas::eval_known_nonzero(&b, state) => *b,
                a => NumTerm::succ(a),
            }
        }
        NumTerm::Pred(a) => NumTerm::pred(settle_num(a, state, th)),
        NumTerm::App(g, args) => {
            let args: Vec<NumTerm> = args.iter().map(|a| settle_num(a, state, th)).collect();
            if let Some(lits) = args.iter().map(|a| a.as_lit()).collect::<Option<Vec<u64>>>() {
                if let Ok(v) = eval_num_app(th, g, &lits) {
                    return NumTerm::Lit(v);
                }
            }
            NumTerm::App(g.clone(), args)
        }
    }
}

pub fn settle_var(v: &VarExpr, state: &State, th: &Theory) -> VarExpr {
    v.map_nums(&|i| settle_num(i, state, th))
}

/// Normal form of a term under a state. Defined symbols whose numeric
/// arguments settle to numerals are unfolded.
pub fn settle_term(t: &IotaTerm, state: &State, th: &Theory) -> IotaTerm {
    match t {
        IotaTerm::Var(v) => IotaTerm::Var(settle_var(v, state, th)),
        IotaTerm::App(g, a) => IotaTerm::App(g.clone(), a.iter().map(|x| settle_term(x, state, th)).collect()),
        IotaTerm::Hat(g, a, n) => {
            let a: Vec<IotaTerm> = a.iter().map(|x| settle_term(x, state, th)).collect();
            let n: Vec<NumTerm> = n.iter().map(|x| settle_num(x, state, th)).collect();
            if let Some(lits) = n.iter().map(|x| x.as_lit()).collect::<Option<Vec<u64>>>() {
                if let Ok(v) = eval_hat(th, g, a.clone(), &lits) {
                    return v;
                }
            }
            IotaTerm::Hat(g.clone(), a, n)
        }
    }
}

pub fn settle_formula(f: &Formula, state: &State, th: &Theory) -> Formula {
    f.map_terms(&mut |t| settle_term(t, state, th)).map_hats(&mut |h| {
        Formula::Hat(HatAtom {
            pred: h.pred.clone(),
            classes: h.classes.clone(),
            args: h.args.iter().map(|a| settle_num(a, state, th)).collect(),
        })
    })
}

pub fn settle_subst(theta: &SSubstitution, state: &State, th: &Theory) -> Result<SSubstitution> {
    Ok(theta.map_all(|v, t| (settle_var(v, state, th), settle_term(t, state, th)))?.without_identities())
}
