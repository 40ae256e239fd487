//! Proof schemata: composition of derivations along proof variables,
//! inductive closure, case distinction, refutation-schema recognition and
//! instantiation to concrete derivations.

use std::fmt;
use std::sync::Arc;

use crate::calculus::{check_derivation, states_for, AxiomPolicy, CheckConfig, Derivation, Judgement, Node, ProofVar, Rule, Sequent};
use crate::error::{Error, Result};
use crate::kernel_formulas::{Formula, HatAtom};
use crate::kernel_terms::{eval_num, Assignment, Name, NumTerm, Theory};
use crate::substitution::{CondAtom, Condition};

/// Default cap on closure unrollings per instantiation.
pub const DEFAULT_RECURSION_BOUND: u64 = 10_000;

/// The bound from `SR_RECURSION_BOUND`, or the default.
pub fn recursion_bound() -> u64 {
    std::env::var("SR_RECURSION_BOUND").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_RECURSION_BOUND)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProofSchema {
    Leaf(Arc<Derivation>),
    /// `a ∘ b`: the body of `a` replaces the leaf of `b` carrying the root
    /// variable of `a`.
    Compose(Box<ProofSchema>, Box<ProofSchema>),
    /// Inductive closure over `param`; `var` is the leaf variable `V(k)`.
    Closure { body: Box<ProofSchema>, param: Name, var: ProofVar },
    /// Branches tried in order; `None` is the final `else`.
    Cases(Vec<(Option<Condition>, ProofSchema)>),
}

impl ProofSchema {
    pub fn leaf(d: Derivation) -> Self {
        ProofSchema::Leaf(Arc::new(d))
    }

    pub fn compose(a: ProofSchema, b: ProofSchema) -> Self {
        ProofSchema::Compose(Box::new(a), Box::new(b))
    }

    pub fn closure(body: ProofSchema, param: Name, var: ProofVar) -> Self {
        ProofSchema::Closure { body: Box::new(body), param, var }
    }

    /// Proof variable `V(k)` with `k` replaced by `to`.
    pub fn closure_var_at(var: &ProofVar, param: &Name, to: &NumTerm) -> ProofVar {
        ProofVar { id: var.id.clone(), atom: var.atom.with_args(var.atom.args.iter().map(|a| a.subst_param(param, to)).collect()) }
    }
}

impl fmt::Display for ProofSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofSchema::Leaf(d) => write!(f, "{}", d.name),
            ProofSchema::Compose(a, b) => write!(f, "compose({a}, {b})"),
            ProofSchema::Closure { body, param, var } => write!(f, "closure({body}; {param}; {var})"),
            ProofSchema::Cases(bs) => {
                for (i, (c, s)) in bs.iter().enumerate() {
                    match c {
                        Some(c) if i == 0 => write!(f, "if {c} then {s}")?,
                        Some(c) => write!(f, " else if {c} then {s}")?,
                        None => write!(f, " else {s}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

fn proof_vars(n: &Node) -> Vec<&ProofVar> {
    n.preorder()
        .into_iter()
        .filter_map(|m| match (&m.rule, &m.concl) {
            (Rule::VarLeaf | Rule::VIntro, Judgement::Var(v)) => Some(v),
            _ => None,
        })
        .collect()
}

/// All proof variables are pairwise different.
pub fn is_v_regular(d: &Derivation) -> bool {
    let vs = proof_vars(&d.root);
    vs.iter().enumerate().all(|(i, v)| !vs[..i].contains(v))
}

fn graft(n: &Node, v: &ProofVar, body: &Node, hits: &mut usize) -> Node {
    if n.rule == Rule::VElim && matches!(&n.premises[..], [p] if p.concl == Judgement::Var(v.clone())) {
        *hits += 1;
        return body.clone();
    }
    Node::new(n.rule.clone(), n.concl.clone(), n.premises.iter().map(|p| graft(p, v, body, hits)).collect())
}

fn merge_context(a: &Condition, b: &Condition) -> Condition {
    let mut atoms = a.atoms.clone();
    for x in &b.atoms {
        if !atoms.contains(x) {
            atoms.push(x.clone());
        }
    }
    Condition { atoms }
}

/// `a ∘ b`. A `b` consisting of the bare variable yields `a` unchanged.
pub fn compose_proofs(a: &Derivation, b: &Derivation) -> Result<Derivation> {
    let Judgement::Var(v) = &a.root.concl else {
        return Err(Error::NotComposable(format!("{} does not end in a proof variable", a.name)));
    };
    if a.root.rule != Rule::VIntro {
        return Err(Error::NotComposable(format!("{} does not end with V_I", a.name)));
    }
    if !is_v_regular(a) || !is_v_regular(b) {
        return Err(Error::NotVRegular(format!("{} or {}", a.name, b.name)));
    }
    if b.root.rule == Rule::VarLeaf {
        return if b.root.concl == a.root.concl {
            Ok(a.clone())
        } else {
            Err(Error::NotComposable(format!("{} is not a leaf of {}", v, b.name)))
        };
    }
    let mut hits = 0;
    let root = graft(&b.root, v, &a.root.premises[0], &mut hits);
    if hits == 0 {
        return Err(Error::NotComposable(format!("{} is not a leaf of {}", v, b.name)));
    }
    let out = Derivation::new(
        crate::kernel_terms::name(&format!("{}.{}", a.name, b.name)),
        merge_context(&a.context, &b.context),
        root,
    );
    if hits > 1 || !is_v_regular(&out) {
        return Err(Error::NotVRegular(format!("{} occurs more than once", v)));
    }
    Ok(out)
}

/// Replaces parameters by numerals throughout a derivation.
pub fn instantiate_derivation(d: &Derivation, sigma: &Assignment, th: &Theory) -> Result<Derivation> {
    for p in d.params() {
        if !sigma.contains_key(&p) {
            return Err(Error::UnboundParameter(p.to_string()));
        }
    }
    if !d.context.holds(sigma) {
        return Err(Error::ContextViolated(format!("{} requires {}", d.name, d.context)));
    }
    let root = inst_node(&d.root, sigma, th)?;
    Ok(Derivation::new(d.name.clone(), Condition::truth(), root))
}

fn numeral(t: &NumTerm, sigma: &Assignment, th: &Theory) -> Result<NumTerm> {
    Ok(NumTerm::Lit(eval_num(t, sigma, th)?))
}

fn inst_formula(f: &Formula, sigma: &Assignment, th: &Theory) -> Result<Formula> {
    let g = f.subst_params(&|n| sigma.get(n).map(|v| NumTerm::Lit(*v)));
    let mut err = None;
    let out = g.map_hats(&mut |h| {
        let args = h.args.iter().map(|a| numeral(a, sigma, th)).collect::<Result<Vec<_>>>();
        match args {
            Ok(args) => Formula::Hat(h.with_args(args)),
            Err(e) => {
                err = Some(e);
                Formula::Hat(h.clone())
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn inst_var(v: &ProofVar, sigma: &Assignment, th: &Theory) -> Result<ProofVar> {
    let args = v.atom.args.iter().map(|a| numeral(a, sigma, th)).collect::<Result<Vec<_>>>()?;
    Ok(ProofVar { id: v.id.clone(), atom: HatAtom { pred: v.atom.pred.clone(), classes: v.atom.classes.clone(), args } })
}

fn inst_node(n: &Node, sigma: &Assignment, th: &Theory) -> Result<Node> {
    let concl = match &n.concl {
        Judgement::Seq(s) => Judgement::Seq(s.try_map(&mut |f| inst_formula(f, sigma, th))?),
        Judgement::Var(v) => Judgement::Var(inst_var(v, sigma, th)?),
    };
    let rule = match &n.rule {
        Rule::Res(t) => Rule::Res(t.subst_params(&|p| sigma.get(p).map(|v| NumTerm::Lit(*v)))?),
        r => r.clone(),
    };
    let premises = n.premises.iter().map(|p| inst_node(p, sigma, th)).collect::<Result<_>>()?;
    Ok(Node::new(rule, concl, premises))
}

/// Picks the branch of a case distinction that holds under `sigma`.
pub fn select_case<'a, T>(branches: &'a [(Option<Condition>, T)], sigma: &Assignment) -> Result<&'a T> {
    branches
        .iter()
        .find(|(c, _)| c.as_ref().map_or(true, |c| c.holds(sigma)))
        .map(|(_, s)| s)
        .ok_or_else(|| Error::Invalid("no case applies".into()))
}

/// Unfolds a schema at `sigma` into a concrete derivation, unrolling at
/// most `bound` closure steps in total.
pub fn instantiate(s: &ProofSchema, sigma: &Assignment, th: &Theory, bound: u64) -> Result<Derivation> {
    let mut budget = bound;
    inst(s, sigma, th, bound, &mut budget)
}

fn inst(s: &ProofSchema, sigma: &Assignment, th: &Theory, bound: u64, budget: &mut u64) -> Result<Derivation> {
    match s {
        ProofSchema::Leaf(d) => instantiate_derivation(d, sigma, th),
        ProofSchema::Compose(a, b) => compose_proofs(&inst(a, sigma, th, bound, budget)?, &inst(b, sigma, th, bound, budget)?),
        ProofSchema::Cases(bs) => inst(select_case(bs, sigma)?, sigma, th, bound, budget),
        ProofSchema::Closure { body, param, var } => {
            let k = *sigma.get(param).ok_or_else(|| Error::UnboundParameter(param.to_string()))?;
            let mut at = sigma.clone();
            at.insert(param.clone(), 0);
            let v0 = inst_var(var, &at, th)?;
            let mut acc = Derivation::new(var.id.clone(), Condition::truth(), Node::leaf(Rule::VarLeaf, Judgement::Var(v0)));
            for l in 1..=k {
                if *budget == 0 {
                    return Err(Error::DepthExceeded(bound));
                }
                *budget -= 1;
                at.insert(param.clone(), l);
                acc = compose_proofs(&inst(body, &at, th, bound, budget)?, &acc)?;
            }
            Ok(acc)
        }
    }
}

/// Concrete refutation check: empty end sequent, no open proof variables
/// and every axiom among `axioms`.
pub fn check_refutation(d: &Derivation, axioms: &[Formula], th: &Theory) -> Vec<String> {
    let mut out: Vec<String> = check_derivation(d, th, &CheckConfig { axioms: AxiomPolicy::Only(axioms.to_vec()) })
        .into_iter()
        .map(|v| v.to_string())
        .collect();
    if d.end_sequent().map_or(true, |s| !s.is_empty()) {
        out.push("not empty end-sequent".into());
    }
    if d.root.preorder().iter().any(|n| n.rule == Rule::VarLeaf) {
        out.push("undischarged proof variable".into());
    }
    out
}

#[derive(Clone, Debug)]
struct Shape {
    end: Judgement,
    open: Vec<ProofVar>,
}

/// Structural recognition of a refutation schema of `|- main`.
pub fn is_refutation_schema(s: &ProofSchema, main: &Formula, th: &Theory) -> std::result::Result<(), Vec<String>> {
    let mut errs = Vec::new();
    if let Some(sh) = shape(s, main, th, &mut errs) {
        if sh.end != Judgement::Seq(Sequent::empty()) {
            errs.push(format!("not empty end-sequent: {}", sh.end));
        }
        for v in &sh.open {
            errs.push(format!("undischarged proof variable {v}"));
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

fn shape(s: &ProofSchema, main: &Formula, th: &Theory, errs: &mut Vec<String>) -> Option<Shape> {
    match s {
        ProofSchema::Leaf(d) => {
            let cfg = CheckConfig { axioms: AxiomPolicy::Any };
            for v in check_derivation(d, th, &cfg) {
                errs.push(format!("{}: {v}", d.name));
            }
            if !is_v_regular(d) {
                errs.push(format!("{}: not V-regular", d.name));
            }
            let mut open = Vec::new();
            for n in d.root.preorder() {
                match (&n.rule, &n.concl) {
                    (Rule::Axiom, Judgement::Seq(q)) if q.suc.first() != Some(main) => {
                        errs.push(format!("{}: undischarged leaf {q}", d.name));
                    }
                    (Rule::VarLeaf, Judgement::Var(v)) => open.push(v.clone()),
                    _ => {}
                }
            }
            Some(Shape { end: d.root.concl.clone(), open })
        }
        ProofSchema::Compose(a, b) => {
            let (sa, sb) = (shape(a, main, th, errs)?, shape(b, main, th, errs)?);
            let Judgement::Var(v) = &sa.end else {
                errs.push(format!("left operand of composition ends in {}", sa.end));
                return None;
            };
            if !sb.open.contains(v) {
                errs.push(format!("{v} is not a leaf of the right operand"));
                return None;
            }
            let mut open = sa.open.clone();
            open.extend(sb.open.into_iter().filter(|w| w != v));
            Some(Shape { end: sb.end, open })
        }
        ProofSchema::Closure { body, param, var } => {
            let sb = shape(body, main, th, errs)?;
            let root = ProofSchema::closure_var_at(var, param, &NumTerm::pred(NumTerm::Param(param.clone())));
            if sb.end != Judgement::Var(root.clone()) {
                errs.push(format!("closure body must end in {root}, found {}", sb.end));
                return None;
            }
            if !sb.open.contains(var) {
                errs.push(format!("closure body lacks the leaf {var}"));
                return None;
            }
            let mut open = vec![var.clone()];
            open.extend(sb.open.into_iter().filter(|w| w != var));
            let end = ProofSchema::closure_var_at(var, param, &NumTerm::zero());
            Some(Shape { end: Judgement::Var(end), open })
        }
        ProofSchema::Cases(bs) => {
            if let Err(e) = check_partition(bs, th) {
                errs.push(e);
            }
            let shapes: Vec<Shape> = bs.iter().filter_map(|(_, b)| shape(b, main, th, errs)).collect();
            if shapes.len() != bs.len() {
                return None;
            }
            let first = shapes[0].clone();
            if shapes.iter().any(|x| x.end != first.end) {
                errs.push("case branches end differently".into());
            }
            let mut open = Vec::new();
            for x in shapes {
                for v in x.open {
                    if !open.contains(&v) {
                        open.push(v);
                    }
                }
            }
            Some(Shape { end: first.end, open })
        }
    }
}

/// Every state of the mentioned parameters selects exactly one branch.
pub fn check_partition<T>(bs: &[(Option<Condition>, T)], th: &Theory) -> std::result::Result<(), String> {
    let mut ps = std::collections::BTreeSet::new();
    for (c, _) in bs {
        if let Some(c) = c {
            ps.extend(c.params());
        }
    }
    for st in states_for(&ps, &Condition::truth(), th) {
        let hits = bs.iter().filter(|(c, _)| c.as_ref().map_or(true, |c| c.allows(&st))).count();
        let has_else = bs.iter().any(|(c, _)| c.is_none());
        let explicit = bs.iter().filter(|(c, _)| c.as_ref().is_some_and(|c| c.allows(&st))).count();
        if explicit > 1 || (explicit == 0 && !has_else) || (hits == 0) {
            return Err(format!("conditions do not partition the parameter space at {st}"));
        }
    }
    Ok(())
}

/// `k = 0` as a condition atom.
pub fn zero_condition(k: &Name) -> Condition {
    Condition { atoms: vec![CondAtom { param: k.clone(), pred: false, zero: true }] }
}
