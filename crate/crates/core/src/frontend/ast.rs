use crate::calculus::{Derivation, ProofVar};
use crate::kernel_formulas::{Formula, HatAtom};
use crate::kernel_terms::{IotaTerm, Name, NumTerm};
use crate::substitution::{Condition, SSubstitution};

/// Parsed source file. Items keep their order so that printing reproduces
/// the file up to layout.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SourceFile {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Params(Vec<Name>),
    /// Variable class with its assigned parameters.
    Class(Name, Vec<Name>),
    /// First-order variables.
    Vars(Vec<Name>),
    Functions(Vec<(Name, usize)>),
    Predicates(Vec<(Name, usize)>),
    Order(Name, Name),
    Main(HatAtom),
    Def(DefEq),
    Axiom(Formula),
    Subst(Name, SSubstitution),
    Unify(Name, Vec<IotaTerm>),
    Formula(Name, Formula),
    Term(Name, IotaTerm),
    Derivation(Derivation),
    Schema(Name, SchemaExpr),
}

/// One defining equation `name(firsts; head) = body`. Numeric definitions
/// have no `firsts`; for term definitions they are the individual formals,
/// for predicate definitions the class formals.
#[derive(Clone, Debug, PartialEq)]
pub struct DefEq {
    pub name: Name,
    pub firsts: Vec<Name>,
    pub head: Vec<NumTerm>,
    pub body: DefRhs,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DefRhs {
    Num(NumTerm),
    Term(IotaTerm),
    Formula(Formula),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SchemaExpr {
    Ref(Name),
    Compose(Box<SchemaExpr>, Box<SchemaExpr>),
    Closure(Box<SchemaExpr>, Name, ProofVar),
    Cases(Vec<(Option<Condition>, SchemaExpr)>),
}
