use std::collections::BTreeMap;

use super::{DefBody, IotaTerm, Name, NumTerm, Theory, VarExpr};
use crate::error::{Error, Result};

/// Parameter assignment.
pub type Assignment = BTreeMap<Name, u64>;

/// Value of a numeric term under `sigma`.
pub fn eval_num(t: &NumTerm, sigma: &Assignment, th: &Theory) -> Result<u64> {
    eval_num_env(t, sigma, th, None)
}

fn eval_num_env(t: &NumTerm, env: &Assignment, th: &Theory, memo: Option<(&Name, u64)>) -> Result<u64> {
    match t {
        NumTerm::Lit(k) => Ok(*k),
        NumTerm::Param(n) => env.get(n).copied().ok_or_else(|| Error::UnboundParameter(n.to_string())),
        NumTerm::Succ(a) => Ok(eval_num_env(a, env, th, memo)? + 1),
        NumTerm::Pred(a) => Ok(eval_num_env(a, env, th, memo)?.saturating_sub(1)),
        NumTerm::App(g, args) => {
            if let Some((f, v)) = memo {
                if f == g {
                    return Ok(v);
                }
            }
            let vals = args.iter().map(|a| eval_num_env(a, env, th, memo)).collect::<Result<Vec<_>>>()?;
            eval_num_app(th, g, &vals)
        }
    }
}

/// Applies a numeric definition to numerals, iterating over the recursion
/// argument.
pub fn eval_num_app(th: &Theory, f: &Name, args: &[u64]) -> Result<u64> {
    let d = th.num_defs.get(f).ok_or_else(|| Error::UndeclaredSymbol(f.to_string()))?;
    if d.formals.len() != args.len() {
        return Err(Error::Arity { name: f.to_string(), expected: d.formals.len(), found: args.len() });
    }
    let mut env: Assignment = d.formals.iter().cloned().zip(args.iter().copied()).collect();
    match &d.body {
        DefBody::Explicit(b) => eval_num_env(b, &env, th, None),
        DefBody::Recursive { base, step } => {
            let rec = d.formals.last().unwrap().clone();
            let k = *args.last().unwrap();
            let mut v = eval_num_env(base, &env, th, None)?;
            for j in 0..k {
                env.insert(rec.clone(), j);
                v = eval_num_env(step, &env, th, Some((f, v)))?;
            }
            Ok(v)
        }
    }
}

/// Evaluates a term schema to a first-order term.
pub fn eval_iota(t: &IotaTerm, sigma: &Assignment, th: &Theory) -> Result<IotaTerm> {
    eval_body(th, t, &BTreeMap::new(), sigma, None)
}

/// Unfolds a defined term symbol on numeral arguments. The individual
/// arguments are substituted as they are, so they may still be schematic.
pub fn eval_hat(th: &Theory, f: &Name, args: Vec<IotaTerm>, nums: &[u64]) -> Result<IotaTerm> {
    let d = th.term_defs.get(f).ok_or_else(|| Error::UndeclaredSymbol(f.to_string()))?;
    if d.iota_formals.len() != args.len() {
        return Err(Error::Arity { name: f.to_string(), expected: d.iota_formals.len(), found: args.len() });
    }
    if d.num_formals.len() != nums.len() {
        return Err(Error::Arity { name: f.to_string(), expected: d.num_formals.len(), found: nums.len() });
    }
    let ienv: BTreeMap<Name, IotaTerm> = d.iota_formals.iter().cloned().zip(args).collect();
    let mut nenv: Assignment = d.num_formals.iter().cloned().zip(nums.iter().copied()).collect();
    match &d.body {
        DefBody::Explicit(b) => eval_body(th, b, &ienv, &nenv, None),
        DefBody::Recursive { base, step } => {
            let rec = d.num_formals.last().unwrap().clone();
            let k = *nums.last().unwrap();
            let mut v = eval_body(th, base, &ienv, &nenv, None)?;
            for j in 0..k {
                nenv.insert(rec.clone(), j);
                v = eval_body(th, step, &ienv, &nenv, Some((f, &v)))?;
            }
            Ok(v)
        }
    }
}

fn eval_body(
    th: &Theory,
    t: &IotaTerm,
    ienv: &BTreeMap<Name, IotaTerm>,
    nenv: &Assignment,
    memo: Option<(&Name, &IotaTerm)>,
) -> Result<IotaTerm> {
    match t {
        IotaTerm::Var(v) => {
            if v.idx.is_empty() {
                if let Some(x) = ienv.get(&v.class) {
                    return Ok(x.clone());
                }
            }
            let idx = v
                .idx
                .iter()
                .map(|i| eval_num_env(i, nenv, th, None).map(NumTerm::Lit))
                .collect::<Result<Vec<_>>>()?;
            Ok(IotaTerm::Var(VarExpr { class: v.class.clone(), idx }))
        }
        IotaTerm::App(g, a) => Ok(IotaTerm::App(
            g.clone(),
            a.iter().map(|x| eval_body(th, x, ienv, nenv, memo)).collect::<Result<_>>()?,
        )),
        IotaTerm::Hat(g, a, n) => {
            if let Some((f, v)) = memo {
                if f == g {
                    return Ok(v.clone());
                }
            }
            let args = a.iter().map(|x| eval_body(th, x, ienv, nenv, memo)).collect::<Result<Vec<_>>>()?;
            let nums = n.iter().map(|x| eval_num_env(x, nenv, th, None)).collect::<Result<Vec<_>>>()?;
            eval_hat(th, g, args, &nums)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_terms::{assignment, name, NumDef, TermDef};

    fn x(s: &str) -> IotaTerm {
        IotaTerm::Var(VarExpr::fo(name(s)))
    }

    fn app(f: &str, a: Vec<IotaTerm>) -> IotaTerm {
        IotaTerm::App(name(f), a)
    }

    fn plus_theory() -> Theory {
        let mut th = Theory::new();
        th.num_defs.insert(
            name("plus"),
            NumDef {
                name: name("plus"),
                formals: vec![name("x"), name("y")],
                body: DefBody::Recursive {
                    base: NumTerm::param("x"),
                    step: NumTerm::succ(NumTerm::App(name("plus"), vec![NumTerm::param("x"), NumTerm::param("y")])),
                },
            },
        );
        th.term_defs.insert(
            name("f"),
            TermDef {
                name: name("f"),
                iota_formals: vec![name("x")],
                num_formals: vec![name("n")],
                body: DefBody::Recursive {
                    base: x("x"),
                    step: app("f", vec![IotaTerm::Hat(name("f"), vec![x("x")], vec![NumTerm::param("n")])]),
                },
            },
        );
        th
    }

    #[test]
    fn plus_two_n_at_three() {
        let th = plus_theory();
        let t = NumTerm::App(name("plus"), vec![NumTerm::Lit(2), NumTerm::param("n")]);
        assert_eq!(eval_num(&t, &assignment(&[("n", 3)]), &th).unwrap(), 5);
    }

    #[test]
    fn hat_f_at_two() {
        let th = plus_theory();
        let t = IotaTerm::Hat(name("f"), vec![x("x")], vec![NumTerm::Lit(2)]);
        let want = app("f", vec![app("f", vec![x("x")])]);
        assert_eq!(eval_iota(&t, &Assignment::new(), &th).unwrap(), want);
    }

    #[test]
    fn unbound_parameter_is_reported() {
        let th = plus_theory();
        let t = IotaTerm::Var(VarExpr::new(name("X"), vec![NumTerm::param("k")]));
        assert_eq!(eval_iota(&t, &Assignment::new(), &th), Err(Error::UnboundParameter("k".into())));
    }
}
