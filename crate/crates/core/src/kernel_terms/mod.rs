//! Numeric terms, individual term schemata, the definition packages that give
//! defined symbols their meaning, and evaluation under parameter assignments.

mod eval;
pub mod index;
mod iota;
mod num;
mod theory;

use std::sync::Arc;

pub use eval::{eval_hat, eval_iota, eval_num, eval_num_app, Assignment};
pub use iota::{IotaTerm, VarExpr};
pub(crate) use iota::write_list;
pub use num::{IndexShape, NumTerm};
pub use theory::{analyze, DefBody, NumDef, PredDef, TermAnalysis, TermDef, Theory, XI};

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// Builds an assignment from `(parameter, value)` pairs.
pub fn assignment(pairs: &[(&str, u64)]) -> Assignment {
    pairs.iter().map(|(k, v)| (name(k), *v)).collect()
}
