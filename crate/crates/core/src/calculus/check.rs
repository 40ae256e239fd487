use std::collections::BTreeSet;

use super::types::{DefKind, Derivation, Judgement, Node, Rule, Sequent, Side};
use crate::kernel_formulas::{eval_formula, footprint_vars, unfold_step_in, Formula};
use crate::kernel_terms::index::Constraints;
use crate::kernel_terms::{Assignment, Name, Theory, VarExpr};
use crate::substitution::{ap_formula_at, essentially_disjoint_in, settle_formula, settle_num, ApMode, Condition, SSubstitution, State};

/// Which axioms a derivation may start from.
#[derive(Clone, Debug, Default)]
pub enum AxiomPolicy {
    #[default]
    Any,
    Only(Vec<Formula>),
}

#[derive(Clone, Debug, Default)]
pub struct CheckConfig {
    pub axioms: AxiomPolicy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// Pre-order position of the offending node, root is 0.
    pub node: usize,
    pub rule: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "node {} ({}): {}", self.node, self.rule, self.message)
    }
}

/// How an inference was matched.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Leaf,
    /// Index of the principal formula in the premise (the conclusion for
    /// introduction forms of definition rules).
    Unary { principal: usize },
    /// Binary rules: which premise holds the positive occurrences, the
    /// resolved positions and the common image.
    Binary { pos_left: bool, pos: Vec<usize>, neg: Vec<usize>, pivot: Formula },
    Proof,
}

/// States over `params` allowed by `ctx`.
pub fn states_for(params: &BTreeSet<Name>, ctx: &Condition, th: &Theory) -> Vec<State> {
    let mut ps = params.clone();
    ps.extend(ctx.params());
    let sorted = th.sort_params(&ps);
    State::all_over(&sorted).into_iter().filter(|s| ctx.allows(s)).collect()
}

/// Comparison key of a formula under a state: settled, and fully evaluated
/// when nothing schematic is left.
pub(crate) fn key(f: &Formula, s: &State, th: &Theory) -> Formula {
    let g = settle_formula(f, s, th);
    if g.is_ground() {
        if let Ok(e) = eval_formula(&g, &Assignment::new(), th) {
            return e;
        }
    }
    g
}

fn keys(fs: &[Formula], s: &State, th: &Theory) -> Vec<Formula> {
    let mut v: Vec<Formula> = fs.iter().map(|f| key(f, s, th)).collect();
    v.sort();
    v
}

fn same(a: &[Formula], b: &[Formula], s: &State, th: &Theory) -> bool {
    a.len() == b.len() && keys(a, s, th) == keys(b, s, th)
}

fn seq_same(a: &Sequent, b: &Sequent, s: &State, th: &Theory) -> bool {
    same(&a.ant, &b.ant, s, th) && same(&a.suc, &b.suc, s, th)
}

fn node_params(n: &Node) -> BTreeSet<Name> {
    let mut ps = n.concl.params();
    for p in &n.premises {
        ps.extend(p.concl.params());
    }
    if let Rule::Res(t) = &n.rule {
        ps.extend(t.params());
    }
    ps
}

/// Checks one inference under every state its context allows.
pub fn check_inference(n: &Node, ctx: &Condition, th: &Theory) -> Result<Witness, String> {
    if n.premises.len() != n.rule.arity() {
        return Err(format!("expects {} premises, found {}", n.rule.arity(), n.premises.len()));
    }
    let states = states_for(&node_params(n), ctx, th);
    if states.is_empty() {
        return Ok(Witness::Leaf);
    }
    let seq = |j: &Judgement| j.sequent().cloned().ok_or_else(|| "expected a sequent".to_string());
    match &n.rule {
        Rule::Axiom => {
            let c = seq(&n.concl)?;
            if c.ant.is_empty() && c.suc.len() == 1 {
                Ok(Witness::Leaf)
            } else {
                Err("axiom must have the form |- F".into())
            }
        }
        Rule::VarLeaf => match &n.concl {
            Judgement::Var(_) => Ok(Witness::Leaf),
            _ => Err("variable leaf must carry a proof variable".into()),
        },
        Rule::VIntro => {
            let Judgement::Var(v) = &n.concl else { return Err("V_I must conclude a proof variable".into()) };
            let p = seq(&n.premises[0].concl)?;
            let want = Sequent::new(vec![], vec![Formula::Hat(v.atom.clone())]);
            if states.iter().all(|s| seq_same(&p, &want, s, th)) {
                Ok(Witness::Proof)
            } else {
                Err(format!("premise is not |- {}", v.atom))
            }
        }
        Rule::VElim => {
            let Judgement::Var(v) = &n.premises[0].concl else {
                return Err("V_E needs a proof variable premise".into());
            };
            if n.premises[0].rule != Rule::VarLeaf {
                return Err("V_E premise must be a variable leaf".into());
            }
            let c = seq(&n.concl)?;
            let want = Sequent::new(vec![], vec![Formula::Hat(v.atom.clone())]);
            if states.iter().all(|s| seq_same(&c, &want, s, th)) {
                Ok(Witness::Proof)
            } else {
                Err(format!("conclusion is not |- {}", v.atom))
            }
        }
        Rule::Res(theta) => {
            let l = seq(&n.premises[0].concl)?;
            let r = seq(&n.premises[1].concl)?;
            let c = seq(&n.concl)?;
            binary(&l, &r, &c, Some(theta), &states, th)
        }
        Rule::Cut => {
            let l = seq(&n.premises[0].concl)?;
            let r = seq(&n.premises[1].concl)?;
            let c = seq(&n.concl)?;
            binary(&l, &r, &c, None, &states, th)
        }
        Rule::Def { intro: true, kind, side } => {
            let p = seq(&n.premises[0].concl)?;
            let c = seq(&n.concl)?;
            unary(&Rule::Def { kind: *kind, side: *side, intro: false }, &c, &p, &states, th)
        }
        r => {
            let p = seq(&n.premises[0].concl)?;
            let c = seq(&n.concl)?;
            unary(r, &p, &c, &states, th)
        }
    }
}

/// Conclusion of a unary rule for principal `i`, or `None` if `i` does not fit.
pub(crate) fn expected(rule: &Rule, p: &Sequent, i: usize, s: &State, th: &Theory) -> Option<Sequent> {
    let on_right = matches!(
        rule,
        Rule::AndR1 | Rule::AndR2 | Rule::OrR | Rule::NotR | Rule::Def { side: Side::Right, .. }
    );
    let side = if on_right { &p.suc } else { &p.ant };
    let f = settle_formula(side.get(i)?, s, th);
    let mut ant = p.ant.clone();
    let mut suc = p.suc.clone();
    let (here, there) = if on_right { (&mut suc, &mut ant) } else { (&mut ant, &mut suc) };
    here.remove(i);
    match (rule, f) {
        (Rule::AndR1, Formula::And(a, _)) => here.push(*a),
        (Rule::AndR2, Formula::And(_, b)) => here.push(*b),
        (Rule::AndL, Formula::And(a, b)) => {
            here.push(*a);
            here.push(*b);
        }
        (Rule::OrR, Formula::Or(a, b)) => {
            here.push(*a);
            here.push(*b);
        }
        (Rule::OrL1, Formula::Or(a, _)) => here.push(*a),
        (Rule::OrL2, Formula::Or(_, b)) => here.push(*b),
        (Rule::NotR | Rule::NotL, Formula::Not(a)) => there.push(*a),
        (Rule::Def { kind, .. }, Formula::Hat(h)) => {
            let d = th.pred_defs.get(h.pred.base_name())?;
            let last = h.args.last().map(|a| settle_num(a, s, th));
            let ok = match kind {
                DefKind::D => !d.body.is_recursive(),
                DefKind::B => d.body.is_recursive() && last == Some(crate::kernel_terms::NumTerm::Lit(0)),
                DefKind::S => {
                    d.body.is_recursive()
                        && last.as_ref().is_some_and(|l| crate::kernel_formulas::eval_known_nonzero(l, s))
                }
            };
            if !ok {
                return None;
            }
            here.push(unfold_step_in(&h, th, s).ok()?);
        }
        _ => return None,
    }
    Some(Sequent { ant, suc })
}

fn unary(rule: &Rule, p: &Sequent, c: &Sequent, states: &[State], th: &Theory) -> Result<Witness, String> {
    let on_right = matches!(
        rule,
        Rule::AndR1 | Rule::AndR2 | Rule::OrR | Rule::NotR | Rule::Def { side: Side::Right, .. }
    );
    let n = if on_right { p.suc.len() } else { p.ant.len() };
    'cand: for i in 0..n {
        for s in states {
            match expected(rule, p, i, s, th) {
                Some(e) if seq_same(&e, c, s, th) => {}
                _ => continue 'cand,
            }
        }
        return Ok(Witness::Unary { principal: i });
    }
    Err(format!("no principal formula makes `{}` match {}", rule.tag(), c))
}

fn image(theta: Option<&SSubstitution>, f: &Formula, s: &State, th: &Theory) -> Result<Formula, String> {
    let g = match theta {
        Some(t) => ap_formula_at(t, f, s, th, ApMode::Reduce).map_err(|e| e.to_string())?,
        None => f.clone(),
    };
    Ok(key(&g, s, th))
}

fn count(v: &[Formula], x: &Formula) -> usize {
    v.iter().filter(|y| *y == x).count()
}

fn remove_n(v: &[Formula], x: &Formula, k: usize) -> Vec<Formula> {
    let mut left = k;
    v.iter()
        .filter(|y| {
            if left > 0 && *y == x {
                left -= 1;
                false
            } else {
                true
            }
        })
        .cloned()
        .collect()
}

/// Variable expressions of a formula with their side conditions; defined
/// atoms contribute everything they can reach.
fn var_footprint(f: &Formula, th: &Theory) -> Vec<(VarExpr, Constraints)> {
    footprint_vars(f, th)
}

fn binary_at(
    pos: &Sequent,
    neg: &Sequent,
    c: &Sequent,
    theta: Option<&SSubstitution>,
    s: &State,
    th: &Theory,
) -> Result<Option<(Vec<usize>, Vec<usize>, Formula)>, String> {
    let pimg = pos.suc.iter().map(|f| image(theta, f, s, th)).collect::<Result<Vec<_>, _>>()?;
    let nimg = neg.ant.iter().map(|f| image(theta, f, s, th)).collect::<Result<Vec<_>, _>>()?;
    let gam = pos.ant.iter().map(|f| image(theta, f, s, th)).collect::<Result<Vec<_>, _>>()?;
    let lam = neg.suc.iter().map(|f| image(theta, f, s, th)).collect::<Result<Vec<_>, _>>()?;
    let cant = keys(&c.ant, s, th);
    let csuc = keys(&c.suc, s, th);
    let mut seen = BTreeSet::new();
    for u in &pimg {
        if !seen.insert(u.clone()) || !nimg.contains(u) {
            continue;
        }
        let (pa, nb) = (count(&pimg, u), count(&nimg, u));
        let a = (pa + count(&lam, u)) as isize - count(&csuc, u) as isize;
        let b = (nb + count(&gam, u)) as isize - count(&cant, u) as isize;
        if a < 1 || a > pa as isize || b < 1 || b > nb as isize {
            continue;
        }
        let mut esuc: Vec<Formula> = remove_n(&pimg, u, a as usize);
        esuc.extend(lam.iter().cloned());
        let mut eant: Vec<Formula> = gam.clone();
        eant.extend(remove_n(&nimg, u, b as usize));
        esuc.sort();
        eant.sort();
        if esuc != csuc || eant != cant {
            continue;
        }
        let pi: Vec<usize> = (0..pimg.len()).filter(|&i| &pimg[i] == u).take(a as usize).collect();
        let ni: Vec<usize> = (0..nimg.len()).filter(|&i| &nimg[i] == u).take(b as usize).collect();
        if theta.is_some() {
            let fa: Vec<_> = pi.iter().flat_map(|&i| var_footprint(&pos.suc[i], th)).collect();
            let fb: Vec<_> = ni.iter().flat_map(|&i| var_footprint(&neg.ant[i], th)).collect();
            if !essentially_disjoint_in(&fa, &fb, &s.constraints()) {
                return Err("resolved atoms share variables".into());
            }
        }
        return Ok(Some((pi, ni, u.clone())));
    }
    Ok(None)
}

fn binary(
    l: &Sequent,
    r: &Sequent,
    c: &Sequent,
    theta: Option<&SSubstitution>,
    states: &[State],
    th: &Theory,
) -> Result<Witness, String> {
    let mut last_err = None;
    for pos_left in [true, false] {
        let (pos, neg) = if pos_left { (l, r) } else { (r, l) };
        let mut first = None;
        let mut ok = true;
        for s in states {
            match binary_at(pos, neg, c, theta, s, th) {
                Ok(Some(w)) => {
                    if first.is_none() {
                        first = Some(w);
                    }
                }
                Ok(None) => {
                    ok = false;
                    break;
                }
                Err(e) => {
                    last_err = Some(e);
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let (pos, neg, pivot) = first.unwrap();
            return Ok(Witness::Binary { pos_left, pos, neg, pivot });
        }
    }
    Err(last_err.unwrap_or_else(|| {
        format!("no resolvable atoms give the conclusion {c}")
    }))
}

/// Checks every inference plus the placement of proof-variable rules.
pub fn check_derivation(d: &Derivation, th: &Theory, cfg: &CheckConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let nodes = d.root.preorder();
    let allowed: Option<Vec<Vec<Formula>>> = match &cfg.axioms {
        AxiomPolicy::Any => None,
        AxiomPolicy::Only(fs) => Some(fs.iter().map(|f| vec![f.clone()]).collect()),
    };
    for (i, n) in nodes.iter().enumerate() {
        let v = |m: String| Violation { node: i, rule: n.rule.tag(), message: m };
        if n.rule == Rule::VIntro && i != 0 {
            out.push(v("V_I below the root".into()));
        }
        for p in &n.premises {
            if p.rule == Rule::VarLeaf && n.rule != Rule::VElim {
                out.push(v("proof variable leaf outside V_E".into()));
            }
        }
        if let Err(m) = check_inference(n, &d.context, th) {
            out.push(v(m));
            continue;
        }
        if let (Rule::Axiom, Some(allowed)) = (&n.rule, &allowed) {
            let f = &n.sequent().unwrap().suc;
            let states = states_for(&n.concl.params(), &d.context, th);
            if !allowed.iter().any(|a| states.iter().all(|s| same(f, a, s, th))) {
                out.push(v(format!("axiom {} is not admissible", f[0])));
            }
        }
    }
    out
}
