use std::collections::{BTreeMap, BTreeSet};

use super::check::{check_inference, expected, Witness};
use super::types::{Derivation, Judgement, Node, Rule, Sequent};
use crate::error::{Error, Result};
use crate::kernel_formulas::{Formula, HatAtom};
use crate::kernel_terms::{name, IotaTerm, Name, VarExpr};
use crate::kernel_terms::Theory;
use crate::substitution::{ap_formula_at, ApMode, SSubstitution, State};
use crate::unification::{fo_unify_atoms, simultaneous_mgu};

fn require_ground(d: &Derivation) -> Result<()> {
    let ps = d.params();
    if ps.is_empty() {
        Ok(())
    } else {
        Err(Error::NotGround(format!("derivation {} has parameters {:?}", d.name, ps)))
    }
}

fn rename_term(t: &IotaTerm, m: &BTreeMap<Name, Name>) -> IotaTerm {
    t.map_vars(&mut |v| m.get(&v.class).map(|c| IotaTerm::Var(VarExpr::new(c.clone(), v.idx.clone()))))
}

fn rename_formula(f: &Formula, m: &BTreeMap<Name, Name>) -> Formula {
    f.map_terms(&mut |t| rename_term(t, m)).map_hats(&mut |h| {
        Formula::Hat(HatAtom {
            pred: h.pred.clone(),
            classes: h.classes.iter().map(|c| m.get(c).cloned().unwrap_or_else(|| c.clone())).collect(),
            args: h.args.clone(),
        })
    })
}

fn collect_classes(f: &Formula, out: &mut Vec<Name>) {
    fn term(t: &IotaTerm, out: &mut Vec<Name>) {
        match t {
            IotaTerm::Var(v) => {
                if !out.contains(&v.class) {
                    out.push(v.class.clone());
                }
            }
            IotaTerm::App(_, a) | IotaTerm::Hat(_, a, _) => a.iter().for_each(|x| term(x, out)),
        }
    }
    match f {
        Formula::Var(_) => {}
        Formula::Atom(_, ts) => ts.iter().for_each(|t| term(t, out)),
        Formula::Hat(h) => {
            for c in &h.classes {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        }
        Formula::Not(a) => collect_classes(a, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_classes(a, out);
            collect_classes(b, out);
        }
    }
}

/// Renames variables apart per axiom leaf and recomputes every conclusion
/// and resolution unifier below. The first axiom in pre-order that mentions
/// a variable keeps it, so a regular derivation comes back unchanged.
/// First-order derivations only.
pub fn regularize(d: &Derivation, th: &Theory) -> Result<Derivation> {
    require_ground(d)?;
    let mut used: BTreeSet<Name> = BTreeSet::new();
    for n in d.root.preorder() {
        if let Some(s) = n.sequent() {
            let mut v = Vec::new();
            s.ant.iter().chain(&s.suc).for_each(|f| collect_classes(f, &mut v));
            used.extend(v);
        }
    }
    let mut counter = 0usize;
    let mut claimed = BTreeSet::new();
    let root = regularize_node(&d.root, d, th, &mut used, &mut claimed, &mut counter)?;
    Ok(Derivation::new(d.name.clone(), d.context.clone(), root))
}

fn regularize_node(
    n: &Node,
    d: &Derivation,
    th: &Theory,
    used: &mut BTreeSet<Name>,
    claimed: &mut BTreeSet<Name>,
    counter: &mut usize,
) -> Result<Node> {
    if n.rule == Rule::Axiom {
        let s = n.sequent().ok_or_else(|| Error::Invalid("axiom without sequent".into()))?;
        let mut classes = Vec::new();
        s.suc.iter().for_each(|f| collect_classes(f, &mut classes));
        let mut m = BTreeMap::new();
        for c in classes {
            if m.contains_key(&c) {
                continue;
            }
            if claimed.insert(c.clone()) {
                m.insert(c.clone(), c);
                continue;
            }
            let fresh = loop {
                *counter += 1;
                let cand = name(&format!("{c}_{counter}"));
                if !used.contains(&cand) {
                    break cand;
                }
            };
            used.insert(fresh.clone());
            m.insert(c, fresh);
        }
        return Ok(Node::leaf(Rule::Axiom, Judgement::Seq(s.map(&mut |f| rename_formula(f, &m)))));
    }
    let w = check_inference(n, &d.context, th).map_err(Error::Invalid)?;
    let prem: Vec<Node> =
        n.premises.iter().map(|p| regularize_node(p, d, th, used, claimed, counter)).collect::<Result<_>>()?;
    let ps: Vec<Sequent> = prem
        .iter()
        .map(|p| p.sequent().cloned().ok_or_else(|| Error::Invalid("proof variables in a first-order derivation".into())))
        .collect::<Result<_>>()?;
    match (&n.rule, w) {
        (Rule::Res(_), Witness::Binary { pos_left, pos, neg, .. }) => {
            let (p, q) = if pos_left { (&ps[0], &ps[1]) } else { (&ps[1], &ps[0]) };
            let mut atoms: Vec<Formula> = pos.iter().map(|&i| p.suc[i].clone()).collect();
            atoms.extend(neg.iter().map(|&i| q.ant[i].clone()));
            let theta = fo_unify_atoms(&atoms)
                .ok_or_else(|| Error::Invalid("renamed resolution atoms do not unify".into()))?;
            let drop = |v: &[Formula], idx: &[usize]| -> Vec<Formula> {
                v.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, f)| theta.apply_formula_fo(f)).collect()
            };
            let mut ant: Vec<Formula> = p.ant.iter().map(|f| theta.apply_formula_fo(f)).collect();
            ant.extend(drop(&q.ant, &neg));
            let mut suc = drop(&p.suc, &pos);
            suc.extend(q.suc.iter().map(|f| theta.apply_formula_fo(f)));
            Ok(Node::new(Rule::Res(theta), Judgement::Seq(Sequent { ant, suc }), prem))
        }
        (r, Witness::Unary { principal }) => {
            let c = expected(r, &ps[0], principal, &State::empty(), th)
                .ok_or_else(|| Error::Invalid(format!("cannot replay {}", r.tag())))?;
            Ok(Node::new(r.clone(), Judgement::Seq(c), prem))
        }
        (r, _) => Err(Error::Invalid(format!("rule {} cannot be regularized", r.tag()))),
    }
}

/// Resolved atom sets of every resolution inference, in pre-order.
pub fn resolution_problems(d: &Derivation, th: &Theory) -> Result<Vec<Vec<Formula>>> {
    let mut w = Vec::new();
    for n in d.root.preorder() {
        if let Rule::Res(_) = n.rule {
            let Witness::Binary { pos_left, pos, neg, .. } =
                check_inference(n, &d.context, th).map_err(Error::Invalid)?
            else {
                unreachable!()
            };
            let l = n.premises[0].sequent().unwrap();
            let r = n.premises[1].sequent().unwrap();
            let (p, q) = if pos_left { (l, r) } else { (r, l) };
            let mut set: Vec<Formula> = pos.iter().map(|&i| p.suc[i].clone()).collect();
            set.extend(neg.iter().map(|&i| q.ant[i].clone()));
            w.push(set);
        }
    }
    Ok(w)
}

/// Most general simultaneous unifier of all resolution problems of a
/// regular derivation. `None` when they have no common unifier.
pub fn total_mgu(d: &Derivation, th: &Theory) -> Result<Option<SSubstitution>> {
    require_ground(d)?;
    Ok(simultaneous_mgu(&resolution_problems(d, th)?))
}

/// Turns every resolution into a cut by pushing its unifier onto all
/// sequents above it, nearest unifier first.
pub fn to_cut_derivation(d: &Derivation, th: &Theory) -> Result<Derivation> {
    require_ground(d)?;
    to_cut_derivation_in(d, th, &State::empty())
}

/// Per-state version for schematic derivations.
pub fn to_cut_derivation_in(d: &Derivation, th: &Theory, state: &State) -> Result<Derivation> {
    let root = push(&d.root, &[], state, th)?;
    Ok(Derivation::new(d.name.clone(), d.context.clone(), root))
}

fn push(n: &Node, acc: &[SSubstitution], s: &State, th: &Theory) -> Result<Node> {
    let concl = match &n.concl {
        Judgement::Seq(q) => Judgement::Seq(q.try_map(&mut |f| {
            let mut g = f.clone();
            for t in acc {
                g = ap_formula_at(t, &g, s, th, ApMode::Reduce)?;
            }
            Ok(g)
        })?),
        j => j.clone(),
    };
    let (rule, inner): (Rule, Vec<SSubstitution>) = match &n.rule {
        Rule::Res(t) => {
            let mut v = vec![t.clone()];
            v.extend(acc.iter().cloned());
            (Rule::Cut, v)
        }
        r => (r.clone(), acc.to_vec()),
    };
    let premises = n.premises.iter().map(|p| push(p, &inner, s, th)).collect::<Result<_>>()?;
    Ok(Node::new(rule, concl, premises))
}

/// Cut formulas in pre-order.
pub fn cut_formulas(d: &Derivation, th: &Theory) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for n in d.root.preorder() {
        if n.rule == Rule::Cut {
            match check_inference(n, &d.context, th).map_err(Error::Invalid)? {
                Witness::Binary { pivot, .. } => out.push(pivot),
                _ => unreachable!(),
            }
        }
    }
    Ok(out)
}

fn canonical(n: &Node) -> Node {
    let mut order: Vec<Name> = Vec::new();
    for m in n.preorder() {
        match &m.concl {
            Judgement::Seq(s) => s.ant.iter().chain(&s.suc).for_each(|f| collect_classes(f, &mut order)),
            Judgement::Var(v) => collect_classes(&Formula::Hat(v.atom.clone()), &mut order),
        }
        if let Rule::Res(t) = &m.rule {
            for (v, r) in t.iter() {
                collect_classes(&Formula::Atom(name("_"), vec![IotaTerm::Var(v.clone()), r.clone()]), &mut order);
            }
        }
    }
    let map: BTreeMap<Name, Name> =
        order.iter().enumerate().map(|(i, c)| (c.clone(), name(&format!("#v{i}")))).collect();
    rename_node(n, &map)
}

fn rename_node(n: &Node, m: &BTreeMap<Name, Name>) -> Node {
    let concl = match &n.concl {
        Judgement::Seq(s) => Judgement::Seq(s.map(&mut |f| rename_formula(f, m))),
        j => j.clone(),
    };
    let rule = match &n.rule {
        Rule::Res(t) => Rule::Res(
            t.map_all(|v, r| {
                let v2 = m.get(&v.class).map_or(v.clone(), |c| VarExpr::new(c.clone(), v.idx.clone()));
                (v2, rename_term(r, m))
            })
            .unwrap_or_else(|_| t.clone()),
        ),
        r => r.clone(),
    };
    Node::new(rule, concl, n.premises.iter().map(|p| rename_node(p, m)).collect())
}

/// Equal up to a consistent bijective renaming of variable classes.
pub fn alpha_equivalent(a: &Derivation, b: &Derivation) -> bool {
    canonical(&a.root) == canonical(&b.root)
}
