//! Schematic substitutions, parameter states, the state-indexed application
//! `Ap` and composition of s-substitutions.

mod ap;
mod psi;
mod ssubst;
mod state;

pub use ap::{
    ap_formula, ap_formula_at, ap_term, ap_term_at, compose, compose_at, essentially_disjoint,
    essentially_disjoint_in, footprint, independent, inert, ApMode,
};
pub use psi::{
    psi_formula, psi_index, psi_subst, psi_subst_in, psi_term, psi_var, settle_formula, settle_num, settle_subst, settle_term,
    settle_var,
};
pub use ssubst::{FoSubstitution, SSubstitution};
pub use state::{CaseMap, Cond, CondAtom, Condition, State};

pub use crate::kernel_terms::index::parameter_unifiable;
