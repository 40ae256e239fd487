//! One line per acceptance criterion, PASS or FAIL with the reason.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use sr_core::calculus::{
    check_derivation, cut_formulas, regularize, to_cut_derivation, total_mgu, CheckConfig, Derivation, Rule,
};
use sr_core::frontend::{parse_expr, pretty, Document, Expr};
use sr_core::herbrand::{extract, grid, instance_formulas, instantiate_hs, verify_grid, verify_set, CompositionMode, Verdict};
use sr_core::kernel_formulas::eval_formula;
use sr_core::kernel_terms::{assignment, eval_iota, Assignment};
use sr_core::schemata::{instantiate, DEFAULT_RECURSION_BOUND};
use sr_core::substitution::{ap_term, compose, Cond, State};
use sr_core::unification::{unify_standard, Outcome, UnifResult, UnifyOptions};
use sr_core::{name, Formula, IotaTerm, SSubstitution};

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(got: &str, want: &str) -> Check {
    ensure(got == want, || format!("got `{got}`, want `{want}`"))
}

fn expr(doc: &Document, src: &str) -> Expr {
    parse_expr(src, &doc.scope()).unwrap()
}

fn term(doc: &Document, src: &str) -> IotaTerm {
    match expr(doc, src) {
        Expr::Term(t) => t,
        Expr::Formula(f) => panic!("{f} is a formula"),
    }
}

fn st(pairs: &[(&str, Cond)]) -> State {
    State::of(pairs)
}

fn c1() -> Check {
    let doc = load("omegaiotao.sr");
    let start = Instant::now();
    let f = match expr(&doc, "^p(X; 3)") {
        Expr::Formula(f) => f,
        Expr::Term(t) => return Err(format!("{t} parsed as a term")),
    };
    let out = pretty::formula(&eval_formula(&f, &Assignment::new(), &doc.theory).map_err(|e| e.to_string())?);
    let took = start.elapsed();
    same(&out, "Q(f(f(X(2\u{304}))),Y(2\u{304})) ∨ Q(f(X(1\u{304})),Y(1\u{304})) ∨ Q(X(0\u{304}),Y(0\u{304})) ∨ ¬P(X(0\u{304}))")?;
    ensure(took < Duration::from_millis(10), || format!("took {took:?}"))
}

fn c2() -> Check {
    let doc = load("s_subst.sr");
    let theta = doc.subst("theta").unwrap().eval(&assignment(&[("n1", 2), ("n2", 1)]), &doc.theory).map_err(|e| e.to_string())?;
    same(&pretty::subst(&theta), "{u←h(g(x2,h(h(x1)))), v←h(h(g(x1,x2)))}")
}

fn c3() -> Check {
    let doc = load("appl_viota2.sr");
    let th = &doc.theory;
    let theta = doc.subst("theta").unwrap();
    let m = ap_term(theta, doc.term("xnm").unwrap(), th).map_err(|e| e.to_string())?;
    use Cond::*;
    let nine = [
        (Zero, Zero, "g(Y(0̄))"),
        (Zero, Many, "g(Y(0̄))"),
        (Zero, One, "g(Y(0̄))"),
        (Many, Zero, "X(n,0̄)"),
        (One, Zero, "X(1̄,0̄)"),
        (One, One, "X(1̄,1̄)"),
        (One, Many, "X(1̄,m)"),
        (Many, One, "X(n,1̄)"),
        (Many, Many, "X(n,m)"),
    ];
    ensure(m.entries.len() == 9, || format!("{} states", m.entries.len()))?;
    for (i, (a, b, want)) in nine.iter().enumerate() {
        let got = m.get(&st(&[("n", *a), ("m", *b)])).ok_or(format!("p{} missing", i + 1))?;
        same(&pretty::term(got), want).map_err(|e| format!("p{}: {e}", i + 1))?;
    }
    let c = ap_term(theta, doc.term("xss").unwrap(), th).map_err(|e| e.to_string())?;
    ensure(c.entries.len() == 1 && c.params.is_empty(), || format!("not constant: {c}"))?;
    same(&pretty::term(&c.entries[0].1), "X(s(n),s(m))")?;

    let doc = load("comp.sr");
    let th = &doc.theory;
    let (a, b) = (doc.subst("theta1").unwrap(), doc.subst("theta2").unwrap());
    let m = compose(a, b, th).map_err(|e| e.to_string())?;
    let p1 = m.get(&st(&[("n", Zero), ("m", Zero), ("k", Zero)])).ok_or("p1 missing")?;
    same(&pretty::subst(p1), "{X(0̄,0̄)←g(Z(0̄)), X(1̄,0̄)←Z(0̄), Y(0̄)←Z(0̄), Y1(0̄,0̄,0̄)←a}")?;
    // The p1 line is also fixed by the σ-instance at the zero assignment.
    let zero = assignment(&[("n", 0), ("m", 0), ("k", 0)]);
    let oracle = a.eval(&zero, th).unwrap().compose_fo(&b.eval(&zero, th).unwrap());
    ensure(p1.eval(&zero, th).unwrap() == oracle, || format!("p1 instance differs from {oracle}"))?;
    let p2 = m.get(&st(&[("n", One), ("m", Zero), ("k", Many)])).ok_or("p2 missing")?;
    same(&pretty::subst(p2), "{X(0̄,0̄)←g(f(Z(1̄))), X(2̄,0̄)←f(Z(1̄)), Y(1̄)←f(Z(1̄)), Y1(0̄,0̄,k)←a}")?;
    let p3 = m.get(&st(&[("n", Many), ("m", Many), ("k", Many)])).ok_or("p3 missing")?;
    same(&pretty::subst(p3), "{X(0̄,m)←g(f̂(Z(n),n)), X(s(n),m)←f̂(Z(n),n), Y(n)←f̂(Z(n),n), Y1(0̄,0̄,k)←a}")
}

fn c4() -> Check {
    let doc = load("ual_example.sr");
    match unify_standard(doc.unify_problem("short").unwrap(), &doc.theory, UnifyOptions::default()) {
        UnifResult::Single(Outcome::Unifier(u)) => same(&pretty::subst(&u), "{u←f\u{302}(x,y,n,m), z←g\u{302}(v,n)}")?,
        r => return Err(format!("worked example gave {r}")),
    }

    let doc = load("uniform.sr");
    let UnifResult::PerState(m) = unify_standard(doc.unify_problem("t").unwrap(), &doc.theory, UnifyOptions::default())
    else {
        return Err("uniform problem was not split".into());
    };
    let want = [
        (Cond::Zero, "{X1(0̄)←X2(0̄)}"),
        (Cond::One, "{X1(0̄)←X2(0̄), X1(1̄)←X2(0̄)}"),
        (Cond::Many, "{X1(0̄)←X2(p(n)), X1(n)←X2(0̄)}"),
    ];
    for (c, w) in want {
        let u = m.get(&st(&[("n", c)])).and_then(|o| o.unifier()).ok_or(format!("no unifier at n {c:?}"))?;
        same(&pretty::subst(u), w)?;
    }

    let doc = load("standard_unif.sr");
    let r = unify_standard(doc.unify_problem("occurs").unwrap(), &doc.theory, UnifyOptions::default());
    let at0 = r.at_state(&st(&[("n1", Cond::Zero), ("n2", Cond::Zero)])).ok_or("p1 missing")?;
    ensure(at0.is_bottom(), || format!("p1 gave {at0}"))
}

fn rules(d: &Derivation) -> Vec<String> {
    d.root.preorder().iter().map(|n| n.rule.tag()).collect()
}

fn c5() -> Check {
    let doc = load("running_regular.sr");
    let th = &doc.theory;
    let d = doc.derivation("rho_r").unwrap();
    let mgu = total_mgu(&regularize(d, th).map_err(|e| e.to_string())?, th).map_err(|e| e.to_string())?.ok_or("no total mgu")?;
    same(&pretty::subst(&mgu), "{beta←a, gamma←f(f(a))}")?;

    let doc = load("running.sr");
    let th = &doc.theory;
    let c = to_cut_derivation(doc.derivation("rho").unwrap(), th).map_err(|e| e.to_string())?;
    let fs: Vec<String> = cut_formulas(&c, th).map_err(|e| e.to_string())?.iter().map(pretty::formula).collect();
    same(&fs.join(", "), "P(a), P(f(f(a))), P(f(f(f(f(a)))))")?;
    let cuts = c.root.count(|r| matches!(r, Rule::Cut));
    ensure(cuts == 3 && c.res_count() == 0, || format!("{cuts} cuts, {} res", c.res_count()))?;
    ensure(check_derivation(&c, th, &CheckConfig::default()).is_empty(), || "cut derivation does not check".into())?;
    let draft = load("running_cut.sr");
    let draft = draft.derivation("rho_cut").unwrap();
    ensure(rules(&c) == rules(draft), || "rule shape differs from the draft".into())?;
    ensure(c.end_sequent().is_some_and(|s| s.is_empty()), || "does not end in the empty sequent".into())
}

fn c6() -> Check {
    let doc = load("ex_proofschema.sr");
    let th = &doc.theory;
    let s = doc.schema("rho0").unwrap();
    let start = Instant::now();
    for n in 0..=8 {
        for m in 0..=4 {
            let at = || format!("n={n} m={m}");
            let d = instantiate(s, &assignment(&[("n", n), ("m", m)]), th, DEFAULT_RECURSION_BOUND)
                .map_err(|e| format!("{}: {e}", at()))?;
            let vs = check_derivation(&d, th, &CheckConfig::default());
            ensure(vs.is_empty(), || format!("{}: {}", at(), vs[0]))?;
            ensure(d.end_sequent().is_some_and(|q| q.is_empty()), || format!("{}: not a refutation", at()))?;
            ensure(d.res_count() as u64 == n + 1, || format!("{}: {} res nodes", at(), d.res_count()))?;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(5), || format!("took {took:?}"))
}

fn truth(f: &Formula, model: &[(Formula, bool)]) -> bool {
    match f {
        Formula::Not(a) => !truth(a, model),
        Formula::And(a, b) => truth(a, model) && truth(b, model),
        Formula::Or(a, b) => truth(a, model) || truth(b, model),
        atom => model.iter().find(|(g, _)| g == atom).is_some_and(|(_, v)| *v),
    }
}

fn c7() -> Check {
    let doc = load("ex_proofschema.sr");
    let th = &doc.theory;
    let h = extract(doc.schema("rho0").unwrap());
    let main = doc.main().unwrap().clone();
    let sigma = assignment(&[("n", 1), ("m", 0)]);
    let subs = instantiate_hs(&h, &sigma, th, CompositionMode::Compose, DEFAULT_RECURSION_BOUND).map_err(|e| e.to_string())?;
    let shown: Vec<String> = subs.iter().map(pretty::subst).collect();
    same(&shown.join(" ; "), "{X(0̄)←Y(0̄), X(1̄)←Y(0̄), Z(0̄)←f(a)} ; {X(0̄)←Y(0̄), Z(0̄)←a}")?;

    let points = grid(&[(name("n"), 0..=8), (name("m"), 0..=4)]);
    for (at, v) in verify_grid(&main, &h, &points, th, CompositionMode::Compose, DEFAULT_RECURSION_BOUND) {
        ensure(matches!(v, Ok(Verdict::Unsat)), || format!("{at:?}: {v:?}"))?;
    }

    for drop in &subs {
        let rest: BTreeSet<SSubstitution> = subs.iter().filter(|t| *t != drop).cloned().collect();
        match verify_set(&main, &rest, &sigma, th).map_err(|e| e.to_string())? {
            Verdict::Sat(model) => {
                let fs = instance_formulas(&main, &rest, &sigma, th).map_err(|e| e.to_string())?;
                ensure(!model.is_empty() && fs.iter().all(|f| truth(f, &model)), || format!("bad model without {drop}"))?;
            }
            Verdict::Unsat => return Err(format!("still unsat without {drop}")),
        }
    }
    Ok(())
}

fn c8() -> Check {
    let th = gen_theory();
    run(subst_and_term(), |(t, s)| ap_sound(&t, &s, &th)).map_err(|e| format!("Ap: {e}"))?;
    run((std_subst(), std_subst()), |(a, b)| compose_sound(&a, &b, &th)).map_err(|e| format!("compose: {e}"))?;
    run(subst_and_term(), |(t, s)| psi_sound(&t, &s, &th)).map_err(|e| format!("psi: {e}"))?;
    run(unif_problem(), |(s, t)| unify_sound(&s, &t, &th)).map_err(|e| format!("unify_standard: {e}"))?;
    run((1usize..=3, proptest::collection::vec(0..=MAX_SIGMA, 3)), |(k, v)| partition(&["n", "m", "k"][..k], &v[..k]))
        .map_err(|e| format!("partition: {e}"))?;
    let cands = ground_candidates();
    run((fo_term(3), fo_term(3)), |(s, t)| fo_unify_vs_search(&s, &t, &cands)).map_err(|e| format!("fo_unify: {e}"))?;
    run((any_var(), any_var()), |(v, w)| param_unif_vs_enumeration(&v, &w, &th))
        .map_err(|e| format!("parameter_unifiable: {e}"))?;
    Ok(())
}

fn sucs(t: &IotaTerm) -> Option<u64> {
    match t {
        IotaTerm::App(f, a) if &**f == "zeroI" && a.is_empty() => Some(0),
        IotaTerm::App(f, a) if &**f == "suc" && a.len() == 1 => Some(sucs(&a[0])? + 1),
        _ => None,
    }
}

fn c9() -> Check {
    let doc = load("prl.sr");
    let th = &doc.theory;
    let num = term(&doc, "^num(x; n)");
    let succ = term(&doc, "^s(x; n)");
    let pred = term(&doc, "^t(x; n)");
    let plus = term(&doc, "^plus(^num(x; m); n)");
    let val = |t: &IotaTerm, s: &Assignment| eval_iota(t, s, th).ok().as_ref().and_then(sucs);
    for n in 0..=20u64 {
        let s = assignment(&[("n", n)]);
        ensure(val(&num, &s) == Some(n), || format!("num at {n}"))?;
        ensure(val(&succ, &s) == Some(n + 1), || format!("s at {n}"))?;
        ensure(val(&pred, &s) == Some(n.saturating_sub(1)), || format!("t at {n}"))?;
        for m in 0..=20u64 {
            let s = assignment(&[("n", n), ("m", m)]);
            ensure(val(&plus, &s) == Some(m + n), || format!("plus at m={m} n={n}"))?;
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("formula normalization", c1),
        ("substitution evaluation", c2),
        ("state machinery", c3),
        ("unification", c4),
        ("resolution", c5),
        ("schema instantiation", c6),
        ("herbrand", c7),
        ("property suites", c8),
        ("numerals in terms", c9),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (label, f)) in criteria.iter().enumerate() {
        let line = match f() {
            Ok(()) => format!("criterion {}: PASS ({label})", i + 1),
            Err(e) => {
                failed.push(i + 1);
                format!("criterion {}: FAIL ({label}): {e}", i + 1)
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
