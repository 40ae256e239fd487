//! Invariants checked on random inputs against σ-instance oracles.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ap_agrees_with_instances((theta, t) in subst_and_term()) {
        ap_sound(&theta, &t, &gen_theory())?;
    }

    #[test]
    fn compose_agrees_with_instances(a in std_subst(), b in std_subst()) {
        compose_sound(&a, &b, &gen_theory())?;
    }

    #[test]
    fn psi_keeps_instances((theta, t) in subst_and_term()) {
        psi_sound(&theta, &t, &gen_theory())?;
    }

    #[test]
    fn standard_unifiers_unify_instances((s, t) in unif_problem()) {
        unify_sound(&s, &t, &gen_theory())?;
    }

    #[test]
    fn states_partition_assignments(k in 1usize..=3, vals in proptest::collection::vec(0..=MAX_SIGMA, 3)) {
        partition(&["n", "m", "k"][..k], &vals[..k])?;
    }

    #[test]
    fn parameter_unifiable_matches_search(v in any_var(), w in any_var()) {
        param_unif_vs_enumeration(&v, &w, &gen_theory())?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fo_unify_matches_search(s in fo_term(3), t in fo_term(3)) {
        thread_local!(static CANDS: Vec<sr_core::SSubstitution> = ground_candidates());
        CANDS.with(|c| fo_unify_vs_search(&s, &t, c))?;
    }
}
