//! The resolution calculus RPL0 with rules for defined predicates and proof
//! variables: derivation trees, inference checking, regularization, the
//! total unifier and conversion to cut derivations.

mod check;
mod transform;
mod types;

pub use check::{check_derivation, check_inference, states_for, AxiomPolicy, CheckConfig, Violation, Witness};
pub use transform::{
    alpha_equivalent, cut_formulas, regularize, resolution_problems, to_cut_derivation, to_cut_derivation_in,
    total_mgu,
};
pub use types::{DefKind, Derivation, Judgement, Node, ProofVar, Rule, Sequent, Side};
