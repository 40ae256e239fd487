//! Schematic resolution kernel.
//!
//! Term and formula schemata defined by primitive recursion over numeric
//! parameters, schematic substitutions evaluated per parameter state, a
//! unification procedure for term schemata, the RPL0 resolution calculus with
//! defined-symbol and proof-variable rules, proof schemata and the Herbrand
//! schemata extracted from them.

pub mod calculus;
pub mod error;
pub mod frontend;
pub mod herbrand;
pub mod kernel_formulas;
pub mod kernel_terms;
pub mod schemata;
pub mod substitution;
pub mod unification;

pub use error::{Error, Result};
pub use kernel_formulas::{Formula, HatAtom, PredRef};
pub use kernel_terms::{name, IotaTerm, Name, NumTerm, Theory, VarExpr};
pub use substitution::{CaseMap, Cond, Condition, SSubstitution, State};
