use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use super::{instantiate_body, Formula};
use crate::error::{Error, Result};
use crate::kernel_terms::{DefBody, Name, NumTerm, Theory};
use crate::substitution::{ap_formula_at, ApMode, SSubstitution, State};

/// Predicate symbol `p(Theta)|state`. Its meaning is the base predicate with
/// `Theta` applied under `state`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DerivedSym {
    pub base: Name,
    pub theta: SSubstitution,
    pub state: State,
    pub name: Name,
}

type Key = (Name, SSubstitution, State);

fn registry() -> &'static RwLock<HashMap<Key, Arc<DerivedSym>>> {
    static REG: OnceLock<RwLock<HashMap<Key, Arc<DerivedSym>>>> = OnceLock::new();
    REG.get_or_init(Default::default)
}

/// Interns `base(theta)|state`. Repeated calls return the same symbol.
pub fn derive(base: &Name, theta: &SSubstitution, state: &State) -> Arc<DerivedSym> {
    let key = (base.clone(), theta.clone(), state.clone());
    if let Some(d) = registry().read().unwrap().get(&key) {
        return d.clone();
    }
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    let sym = Arc::new(DerivedSym {
        base: base.clone(),
        theta: theta.clone(),
        state: state.clone(),
        name: crate::kernel_terms::name(&format!("{}#{:08x}", base, h.finish() as u32)),
    });
    registry().write().unwrap().entry(key).or_insert(sym).clone()
}

pub fn registry_len() -> usize {
    registry().read().unwrap().len()
}

/// Defining equations of a derived symbol, obtained by applying its
/// substitution to the equations of the base symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedDefinition {
    pub sym: Arc<DerivedSym>,
    pub body: DefBody<Formula>,
}

pub fn derived_definition(sym: &Arc<DerivedSym>, th: &Theory) -> Result<DerivedDefinition> {
    let d = th.pred_defs.get(&sym.base).ok_or_else(|| Error::UndeclaredSymbol(sym.base.to_string()))?;
    let id = BTreeMap::new();
    let nid: BTreeMap<Name, NumTerm> = BTreeMap::new();
    let lift = |b: &Formula| ap_formula_at(&sym.theta, &instantiate_body(b, &id, &nid, None), &sym.state, th, ApMode::Literal);
    let body = match &d.body {
        DefBody::Explicit(b) => DefBody::Explicit(lift(b)?),
        DefBody::Recursive { base, step } => DefBody::Recursive { base: lift(base)?, step: lift(step)? },
    };
    Ok(DerivedDefinition { sym: sym.clone(), body })
}
