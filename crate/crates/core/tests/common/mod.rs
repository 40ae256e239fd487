//! Generators and σ-instance oracles shared by the property suites and the
//! acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use sr_core::frontend::{parse_document, Document};
use sr_core::kernel_terms::{assignment, eval_iota, eval_num, Assignment};
use sr_core::substitution::{ap_term, compose, psi_subst_in, psi_term, State};
use sr_core::unification::{fo_unify, unify_standard, UnifResult, UnifyOptions};
use sr_core::{name, IotaTerm, NumTerm, SSubstitution, Theory, VarExpr};

pub const CASES: u32 = 256;
pub const MAX_SIGMA: u64 = 6;

pub fn fixture(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(file)
}

pub fn load(file: &str) -> Document {
    parse_document(&std::fs::read_to_string(fixture(file)).unwrap()).unwrap()
}

const GEN_THEORY: &str = "
param n, m;
class X[n, m];
class Y[n];
class Z[m];
var x, y;
fun a:0, b:0, g:1, h:2;
def ^f(y; 0) = y;
def ^f(y; s(n)) = g(^f(y; n));
";

pub fn gen_theory() -> Theory {
    parse_document(GEN_THEORY).unwrap().theory
}

/// Every assignment of `n, m` with components up to [`MAX_SIGMA`].
pub fn sigmas() -> Vec<Assignment> {
    let mut out = Vec::new();
    for n in 0..=MAX_SIGMA {
        for m in 0..=MAX_SIGMA {
            out.push(assignment(&[("n", n), ("m", m)]));
        }
    }
    out
}

fn std_index(p: &'static str) -> impl Strategy<Value = NumTerm> {
    prop_oneof![
        Just(NumTerm::param(p)),
        Just(NumTerm::zero()),
        Just(NumTerm::pred(NumTerm::param(p))),
        Just(NumTerm::succ(NumTerm::param(p))),
    ]
}

/// Standard variable expressions of the generator theory.
pub fn std_var() -> impl Strategy<Value = VarExpr> {
    prop_oneof![
        (std_index("n"), std_index("m")).prop_map(|(i, j)| VarExpr::new(name("X"), vec![i, j])),
        std_index("n").prop_map(|i| VarExpr::new(name("Y"), vec![i])),
        std_index("m").prop_map(|i| VarExpr::new(name("Z"), vec![i])),
        Just(VarExpr::fo(name("x"))),
        Just(VarExpr::fo(name("y"))),
    ]
}

/// Standard terms up to the given depth, with `^f` applied to a parameter
/// or a numeral.
pub fn std_term(depth: u32) -> BoxedStrategy<IotaTerm> {
    let leaf = prop_oneof![
        3 => std_var().prop_map(IotaTerm::Var),
        1 => Just(IotaTerm::constant(name("a"))),
        1 => Just(IotaTerm::constant(name("b"))),
    ]
    .boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = std_term(depth - 1);
    let num = prop_oneof![Just(NumTerm::param("n")), Just(NumTerm::param("m")), (0u64..3).prop_map(NumTerm::Lit)];
    prop_oneof![
        2 => leaf,
        1 => sub.clone().prop_map(|t| IotaTerm::App(name("g"), vec![t])),
        1 => (sub.clone(), sub.clone()).prop_map(|(s, t)| IotaTerm::App(name("h"), vec![s, t])),
        1 => (sub, num).prop_map(|(t, k)| IotaTerm::Hat(name("f"), vec![t], vec![k])),
    ]
    .boxed()
}

/// Terms over few classes, so that variable expressions often meet.
pub fn narrow_term(depth: u32) -> BoxedStrategy<IotaTerm> {
    let leaf = prop_oneof![
        3 => std_index("n").prop_map(|i| IotaTerm::Var(VarExpr::new(name("Y"), vec![i]))),
        1 => (std_index("n"), std_index("m")).prop_map(|(i, j)| IotaTerm::Var(VarExpr::new(name("X"), vec![i, j]))),
        1 => Just(IotaTerm::constant(name("a"))),
    ]
    .boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = narrow_term(depth - 1);
    prop_oneof![
        1 => leaf,
        1 => sub.clone().prop_map(|t| IotaTerm::App(name("g"), vec![t])),
        2 => (sub.clone(), sub).prop_map(|(s, t)| IotaTerm::App(name("h"), vec![s, t])),
    ]
    .boxed()
}

/// A substitution together with a term that mentions its domain classes.
pub fn subst_and_term() -> impl Strategy<Value = (SSubstitution, IotaTerm)> {
    prop_oneof![
        (std_subst(), std_term(3)),
        std_subst().prop_flat_map(|theta| {
            let dom: Vec<VarExpr> = theta.domain().cloned().collect();
            let picks = proptest::collection::vec(
                (proptest::sample::select(dom), std_index("n"), std_index("m")).prop_map(|(v, i, j)| {
                    let idx = match &*v.class {
                        "X" => vec![i, j],
                        "Y" => vec![i],
                        "Z" => vec![j],
                        _ => vec![],
                    };
                    IotaTerm::Var(VarExpr::new(v.class.clone(), idx))
                }),
                1..=3,
            );
            (Just(theta), picks, std_term(1)).prop_map(|(theta, vs, t)| {
                let mut args = vs;
                args.push(t);
                let t = args.into_iter().reduce(|a, b| IotaTerm::App(name("h"), vec![a, b])).unwrap();
                (theta, t)
            })
        }),
    ]
}

/// Candidate s-substitutions; validity is checked by [`valid_everywhere`].
pub fn std_subst() -> impl Strategy<Value = SSubstitution> {
    proptest::collection::vec((std_var(), std_term(2)), 1..=3)
        .prop_filter_map("duplicate domain", |ps| SSubstitution::from_pairs(ps).ok())
}

/// `theta[sigma]` is a substitution for every sampled `sigma`.
pub fn valid_everywhere(theta: &SSubstitution, th: &Theory) -> bool {
    sigmas().iter().all(|s| theta.eval(s, th).is_ok())
}

/// Bindings that meet under a state with right-hand sides equal only
/// semantically are refused; soundness is about the results produced.
fn produced<T>(r: sr_core::Result<T>) -> Result<T, TestCaseError> {
    match r {
        Ok(v) => Ok(v),
        Err(sr_core::Error::DomainCollision(_)) => Err(TestCaseError::reject("bindings meet under a state")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

fn ev(t: &IotaTerm, s: &Assignment, th: &Theory) -> IotaTerm {
    eval_iota(t, s, th).unwrap()
}

/// Ap is sound: `sigma(Ap(theta, t)|p)` equals `sigma(t) theta[sigma]`.
pub fn ap_sound(theta: &SSubstitution, t: &IotaTerm, th: &Theory) -> Result<(), TestCaseError> {
    prop_assume!(valid_everywhere(theta, th));
    let m = produced(ap_term(theta, t, th))?;
    for s in sigmas() {
        let got = ev(m.at(&s).expect("state for sigma"), &s, th);
        let want = theta.eval(&s, th).unwrap().apply(&ev(t, &s, th));
        prop_assert_eq!(&got, &want, "at {:?}", s);
    }
    Ok(())
}

/// Composition is sound: `sigma((a ∘ b)|p)` equals `a[sigma] b[sigma]`.
pub fn compose_sound(a: &SSubstitution, b: &SSubstitution, th: &Theory) -> Result<(), TestCaseError> {
    prop_assume!(valid_everywhere(a, th) && valid_everywhere(b, th));
    let m = produced(compose(a, b, th))?;
    for s in sigmas() {
        let got = m.at(&s).expect("state for sigma").eval(&s, th).unwrap();
        let want = a.eval(&s, th).unwrap().compose_fo(&b.eval(&s, th).unwrap());
        prop_assert_eq!(&got, &want, "at {:?}", s);
    }
    Ok(())
}

/// `psi_p` preserves the σ-instance for every `sigma` in `p` and is
/// idempotent.
pub fn psi_sound(theta: &SSubstitution, t: &IotaTerm, th: &Theory) -> Result<(), TestCaseError> {
    prop_assume!(valid_everywhere(theta, th));
    let params = [name("n"), name("m")];
    for s in sigmas() {
        let p = State::of_assignment(&s, &params).unwrap();
        let pt = produced(psi_subst_in(theta, &p, th))?;
        prop_assert_eq!(pt.eval(&s, th).unwrap(), theta.eval(&s, th).unwrap());
        prop_assert_eq!(ev(&psi_term(t, &p), &s, th), ev(t, &s, th));
        prop_assert_eq!(psi_term(&psi_term(t, &p), &p), psi_term(t, &p));
        prop_assert_eq!(psi_subst_in(&pt, &p, th).unwrap(), pt.clone());
    }
    Ok(())
}

/// Pairs that unify often: either independent or the second an instance of
/// the first.
pub fn unif_problem() -> impl Strategy<Value = (IotaTerm, IotaTerm)> {
    prop_oneof![
        (std_term(2), std_term(2)),
        (narrow_term(2), narrow_term(2)),
        (narrow_term(3), narrow_term(1)),
        (std_term(3), std_subst()).prop_map(|(t, s)| {
            let u = s.apply(&t);
            (t, u)
        }),
        (std_term(2), std_var(), std_term(1)).prop_map(|(t, v, r)| {
            let u = SSubstitution::singleton(v, r).apply(&t);
            (u, t)
        }),
    ]
}

/// A unifier produced for a state unifies every σ-instance in that state.
pub fn unify_sound(t1: &IotaTerm, t2: &IotaTerm, th: &Theory) -> Result<(), TestCaseError> {
    let ts = [t1.clone(), t2.clone()];
    for opts in [UnifyOptions::default(), UnifyOptions { partial_eval: true }] {
        let res = unify_standard(&ts, th, opts);
        for s in sigmas() {
            let out = match &res {
                UnifResult::Single(o) => o,
                UnifResult::PerState(m) => m.at(&s).expect("state for sigma"),
            };
            if let Some(u) = out.unifier() {
                let u = u.eval(&s, th).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(u.apply(&ev(t1, &s, th)), u.apply(&ev(t2, &s, th)), "{} at {:?}", u, s);
            }
        }
    }
    Ok(())
}

/// Exactly one state holds at each assignment, and it is the one
/// `of_assignment` picks.
pub fn partition(ps: &[&str], vals: &[u64]) -> Result<(), TestCaseError> {
    let params: Vec<_> = ps.iter().map(|p| name(p)).collect();
    let sigma: Assignment = params.iter().cloned().zip(vals.iter().copied()).collect();
    let states = State::all_over(&params);
    prop_assert_eq!(states.len(), 3usize.pow(params.len() as u32));
    let holding: Vec<&State> = states.iter().filter(|s| s.holds(&sigma)).collect();
    prop_assert_eq!(holding.len(), 1);
    prop_assert_eq!(Some(holding[0].clone()), State::of_assignment(&sigma, &params));
    Ok(())
}

/// First-order terms over `a, b, f/1, g/2` and the variables `x, y`.
pub fn fo_term(depth: u32) -> BoxedStrategy<IotaTerm> {
    let leaf = prop_oneof![
        Just(IotaTerm::Var(VarExpr::fo(name("x")))),
        Just(IotaTerm::Var(VarExpr::fo(name("y")))),
        Just(IotaTerm::constant(name("a"))),
        Just(IotaTerm::constant(name("b"))),
    ]
    .boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = fo_term(depth - 1);
    prop_oneof![
        1 => leaf,
        1 => sub.clone().prop_map(|t| IotaTerm::App(name("f"), vec![t])),
        1 => (sub.clone(), sub).prop_map(|(s, t)| IotaTerm::App(name("g"), vec![s, t])),
    ]
    .boxed()
}

fn ground_terms(depth: u32) -> Vec<IotaTerm> {
    let mut out = vec![IotaTerm::constant(name("a")), IotaTerm::constant(name("b"))];
    for _ in 0..depth {
        let prev = out.clone();
        let mut next = prev.clone();
        next.extend(prev.iter().map(|t| IotaTerm::App(name("f"), vec![t.clone()])));
        for s in &prev {
            for t in &prev {
                next.push(IotaTerm::App(name("g"), vec![s.clone(), t.clone()]));
            }
        }
        next.sort();
        next.dedup();
        out = next;
    }
    out
}

/// Ground substitutions for `x, y` with ranges of depth at most two.
pub fn ground_candidates() -> Vec<SSubstitution> {
    let gs = ground_terms(2);
    let mut out = Vec::with_capacity(gs.len() * gs.len());
    for s in &gs {
        for t in &gs {
            out.push(
                SSubstitution::from_pairs([(VarExpr::fo(name("x")), s.clone()), (VarExpr::fo(name("y")), t.clone())])
                    .unwrap(),
            );
        }
    }
    out
}

/// `fo_unify` agrees with a search over ground substitutions: its answer
/// unifies, is idempotent and every ground unifier found factors through it;
/// when the search finds a unifier `fo_unify` does too.
pub fn fo_unify_vs_search(s: &IotaTerm, t: &IotaTerm, cands: &[SSubstitution]) -> Result<(), TestCaseError> {
    let mgu = fo_unify(&[(s.clone(), t.clone())]);
    if let Some(u) = &mgu {
        prop_assert_eq!(u.apply(s), u.apply(t));
        prop_assert_eq!(u.compose_fo(u), u.clone());
    }
    let vars: BTreeSet<VarExpr> = s.vars().union(&t.vars()).cloned().collect();
    for g in cands {
        if g.apply(s) == g.apply(t) {
            let u = mgu.as_ref().ok_or_else(|| TestCaseError::fail(format!("missed unifier {g}")))?;
            for v in &vars {
                let x = IotaTerm::Var(v.clone());
                prop_assert_eq!(g.apply(&u.apply(&x)), g.apply(&x), "{} does not factor through {}", g, u);
            }
        }
    }
    Ok(())
}

fn any_index() -> impl Strategy<Value = NumTerm> {
    let p = prop_oneof![Just(NumTerm::param("n")), Just(NumTerm::param("m"))];
    prop_oneof![
        (0u64..4).prop_map(NumTerm::Lit),
        p.clone(),
        p.clone().prop_map(NumTerm::succ),
        p.clone().prop_map(NumTerm::pred),
        p.clone().prop_map(|t| NumTerm::succ(NumTerm::succ(t))),
        p.prop_map(|t| NumTerm::pred(NumTerm::pred(t))),
    ]
}

/// Variable expressions with arbitrary linear indices over `n, m`.
pub fn any_var() -> impl Strategy<Value = VarExpr> {
    prop_oneof![
        (any_index(), any_index()).prop_map(|(i, j)| VarExpr::new(name("X"), vec![i, j])),
        any_index().prop_map(|i| VarExpr::new(name("Y"), vec![i])),
    ]
}

/// Search bound for meeting indices: numerals up to 3 and offsets up to 2
/// per side put every solution below 10.
const MEET_BOUND: u64 = 12;

/// `parameter_unifiable` agrees with a search over assignments.
pub fn param_unif_vs_enumeration(v: &VarExpr, w: &VarExpr, th: &Theory) -> Result<(), TestCaseError> {
    let grid = (0..=MEET_BOUND).flat_map(|n| (0..=MEET_BOUND).map(move |m| assignment(&[("n", n), ("m", m)])));
    let meet = v.class == w.class
        && grid.into_iter().any(|s| {
            v.idx.iter().zip(&w.idx).all(|(a, b)| eval_num(a, &s, th).unwrap() == eval_num(b, &s, th).unwrap())
        });
    prop_assert_eq!(sr_core::substitution::parameter_unifiable(v, w), meet, "{} vs {}", v, w);
    Ok(())
}

/// Runs a property for [`CASES`] cases outside the `proptest!` macro.
pub fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}
