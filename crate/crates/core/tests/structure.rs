//! Fixture round trips and the derivation transformations on the worked
//! refutation.

mod common;

use common::*;
use sr_core::calculus::{alpha_equivalent, regularize, to_cut_derivation, Judgement};
use sr_core::frontend::{parse, print_source};
use sr_core::kernel_formulas::{eval_formula, unfold_step_in};
use sr_core::kernel_terms::assignment;
use sr_core::substitution::{ap_formula, ApMode};
use sr_core::{name, Formula, IotaTerm, SSubstitution, VarExpr};

#[test]
fn every_fixture_survives_printing() {
    let mut seen = 0;
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "sr") {
            let src = std::fs::read_to_string(&path).unwrap();
            let ast = parse(&src).unwrap();
            let printed = print_source(&ast);
            assert_eq!(parse(&printed).unwrap(), ast, "{}", path.display());
            seen += 1;
        }
    }
    assert!(seen >= 15, "{seen} fixtures");
}

#[test]
fn regularization_renames_apart() {
    let rho = load("running.sr");
    let reg = load("running_regular.sr");
    let r = regularize(rho.derivation("rho").unwrap(), &rho.theory).unwrap();
    assert!(alpha_equivalent(&r, reg.derivation("rho_r").unwrap()));
    assert!(!alpha_equivalent(rho.derivation("rho").unwrap(), reg.derivation("rho_r").unwrap()));
    let again = regularize(reg.derivation("rho_r").unwrap(), &reg.theory).unwrap();
    assert_eq!(&again, reg.derivation("rho_r").unwrap());
}

#[test]
fn cut_form_differs_from_draft_only_by_the_pushed_binding() {
    let doc = load("running.sr");
    let ours = to_cut_derivation(doc.derivation("rho").unwrap(), &doc.theory).unwrap();
    let draft_doc = load("running_cut.sr");
    let draft = draft_doc.derivation("rho_cut").unwrap();
    let push = SSubstitution::singleton(
        VarExpr::fo(name("alpha")),
        IotaTerm::App(name("f"), vec![IotaTerm::App(name("f"), vec![IotaTerm::constant(name("a"))])]),
    );
    let (a, b) = (ours.root.preorder(), draft.root.preorder());
    assert_eq!(a.len(), b.len());
    let mut differing = Vec::new();
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        assert_eq!(x.rule, y.rule, "node {i}");
        if x.concl != y.concl {
            differing.push(i);
            let Judgement::Seq(s) = &y.concl else { panic!("node {i}") };
            assert_eq!(x.concl, Judgement::Seq(s.map(&mut |f| push.apply_formula_fo(f))), "node {i}");
        }
    }
    // Preorder positions 3..=7 are the left branch of the innermost cut.
    assert!(!differing.is_empty() && differing.iter().all(|i| (3..=7).contains(i)), "{differing:?}");
}

#[test]
fn derived_atoms_unfold_to_the_substituted_instance() {
    let doc = load("schemform.sr");
    let th = &doc.theory;
    let theta = doc.subst("theta").unwrap();
    let f = doc.formula("f").unwrap();
    let m = ap_formula(theta, f, th, ApMode::Literal).unwrap();
    assert_eq!(m.entries.len(), 3);
    for (state, g) in &m.entries {
        let Formula::Hat(h) = g else { panic!("{g}") };
        let step = unfold_step_in(h, th, state).unwrap();
        for n in 0..=MAX_SIGMA {
            let sigma = assignment(&[("n", n)]);
            if !state.holds(&sigma) {
                continue;
            }
            let want = theta.eval(&sigma, th).unwrap().apply_formula_fo(&eval_formula(f, &sigma, th).unwrap());
            assert_eq!(eval_formula(&step, &sigma, th).unwrap(), want, "{state} at n={n}");
            assert_eq!(eval_formula(g, &sigma, th).unwrap(), want, "{state} at n={n}");
        }
    }
}
