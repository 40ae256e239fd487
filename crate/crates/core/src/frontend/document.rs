use super::ast::{DefEq, DefRhs, Item, SchemaExpr, SourceFile};
use super::parser::{parse, Scope};
use crate::calculus::Derivation;
use crate::error::{Error, Result};
use crate::kernel_formulas::{Formula, HatAtom, PredRef};
use crate::kernel_terms::{DefBody, IotaTerm, Name, NumDef, NumTerm, PredDef, TermDef, Theory, XI};
use crate::schemata::ProofSchema;
use crate::substitution::SSubstitution;

/// A source file turned into a theory plus its named objects.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub theory: Theory,
    pub mains: Vec<HatAtom>,
    pub substs: Vec<(Name, SSubstitution)>,
    pub unify: Vec<(Name, Vec<IotaTerm>)>,
    pub formulas: Vec<(Name, Formula)>,
    pub terms: Vec<(Name, IotaTerm)>,
    pub derivations: Vec<Derivation>,
    pub schemas: Vec<(Name, ProofSchema)>,
}

fn find<'a, T>(xs: &'a [(Name, T)], n: &str) -> Option<&'a T> {
    xs.iter().find(|(m, _)| &**m == n).map(|(_, v)| v)
}

impl Document {
    pub fn scope(&self) -> Scope {
        Scope::of(&self.theory)
    }

    pub fn subst(&self, n: &str) -> Option<&SSubstitution> {
        find(&self.substs, n)
    }

    pub fn unify_problem(&self, n: &str) -> Option<&Vec<IotaTerm>> {
        find(&self.unify, n)
    }

    pub fn formula(&self, n: &str) -> Option<&Formula> {
        find(&self.formulas, n)
    }

    pub fn term(&self, n: &str) -> Option<&IotaTerm> {
        find(&self.terms, n)
    }

    pub fn derivation(&self, n: &str) -> Option<&Derivation> {
        self.derivations.iter().find(|d| &*d.name == n)
    }

    pub fn schema(&self, n: &str) -> Option<&ProofSchema> {
        find(&self.schemas, n)
    }

    /// The main symbol with its declared arguments.
    pub fn main(&self) -> Result<&HatAtom> {
        self.mains.first().ok_or_else(|| Error::Invalid("no `main` declared".into()))
    }
}

pub fn parse_document(src: &str) -> Result<Document> {
    build(&parse(src)?)
}

/// Assembles definitions from their equations, resolves schema names and
/// validates the theory.
pub fn build(src: &SourceFile) -> Result<Document> {
    let mut doc = Document::default();
    let mut eqs: Vec<(Name, Vec<&DefEq>)> = Vec::new();
    for item in &src.items {
        if let Item::Def(e) = item {
            match eqs.iter_mut().find(|(n, _)| n == &e.name) {
                Some((_, v)) => v.push(e),
                None => eqs.push((e.name.clone(), vec![e])),
            }
        }
    }
    let th = &mut doc.theory;
    for item in &src.items {
        match item {
            Item::Params(ps) => ps.iter().for_each(|p| th.declare_param(p.clone())),
            Item::Class(c, ps) => th.declare_class(c.clone(), ps.clone()),
            Item::Vars(vs) => vs.iter().for_each(|v| th.declare_class(v.clone(), Vec::new())),
            Item::Functions(fs) => th.functions.extend(fs.iter().cloned()),
            Item::Predicates(ps) => th.predicates.extend(ps.iter().cloned()),
            Item::Order(a, b) => th.order.push((a.clone(), b.clone())),
            Item::Main(h) => {
                th.mains.push(h.pred.base_name().clone());
                doc.mains.push(h.clone());
            }
            Item::Axiom(f) => th.axioms.push(f.clone()),
            _ => {}
        }
    }
    for (n, group) in &eqs {
        add_definition(th, n, group)?;
    }
    for item in &src.items {
        match item {
            Item::Subst(n, s) => doc.substs.push((n.clone(), s.clone())),
            Item::Unify(n, ts) => doc.unify.push((n.clone(), ts.clone())),
            Item::Formula(n, f) => doc.formulas.push((n.clone(), f.clone())),
            Item::Term(n, t) => doc.terms.push((n.clone(), t.clone())),
            Item::Derivation(d) => {
                if doc.derivation(&d.name).is_some() {
                    return Err(Error::Invalid(format!("derivation `{}` defined twice", d.name)));
                }
                doc.derivations.push(d.clone());
            }
            Item::Schema(n, e) => {
                let s = resolve(&doc, e)?;
                doc.schemas.push((n.clone(), s));
            }
            _ => {}
        }
    }
    doc.theory.validate()?;
    Ok(doc)
}

fn resolve(doc: &Document, e: &SchemaExpr) -> Result<ProofSchema> {
    Ok(match e {
        SchemaExpr::Ref(n) => match (doc.schema(n), doc.derivation(n)) {
            (Some(s), _) => s.clone(),
            (None, Some(d)) => ProofSchema::leaf(d.clone()),
            (None, None) => return Err(Error::UndeclaredSymbol(n.to_string())),
        },
        SchemaExpr::Compose(a, b) => ProofSchema::compose(resolve(doc, a)?, resolve(doc, b)?),
        SchemaExpr::Closure(a, k, v) => ProofSchema::closure(resolve(doc, a)?, k.clone(), v.clone()),
        SchemaExpr::Cases(bs) => {
            ProofSchema::Cases(bs.iter().map(|(c, s)| Ok((c.clone(), resolve(doc, s)?))).collect::<Result<_>>()?)
        }
    })
}

enum Head {
    Base,
    Step(Name),
    Explicit,
}

fn classify(e: &DefEq) -> Result<(Vec<Name>, Head)> {
    let bad = || Error::InvalidTheory(format!("head of `{}` must be on parameters, with 0 or s(n) last", e.name));
    let Some((last, rest)) = e.head.split_last() else {
        return Err(Error::InvalidTheory(format!("`{}` has no numeric arguments", e.name)));
    };
    let mut formals = Vec::new();
    for a in rest {
        match a {
            NumTerm::Param(p) => formals.push(p.clone()),
            _ => return Err(bad()),
        }
    }
    let head = match last {
        NumTerm::Lit(0) => Head::Base,
        NumTerm::Succ(b) => match &**b {
            NumTerm::Param(n) => Head::Step(n.clone()),
            _ => return Err(bad()),
        },
        NumTerm::Param(n) => {
            formals.push(n.clone());
            Head::Explicit
        }
        _ => return Err(bad()),
    };
    Ok((formals, head))
}

fn add_definition(th: &mut Theory, n: &Name, group: &[&DefEq]) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidTheory(format!("`{n}`: {m}")));
    let mut base = None;
    let mut step = None;
    let mut explicit = None;
    let mut formals: Option<Vec<Name>> = None;
    let mut firsts: Option<&Vec<Name>> = None;
    for e in group {
        let (fs, head) = classify(e)?;
        if let Some(f0) = firsts {
            if f0 != &e.firsts {
                return bad("equations disagree on their leading formals");
            }
        }
        firsts = Some(&e.firsts);
        match head {
            Head::Base => {
                if base.replace(*e).is_some() {
                    return bad("two base equations");
                }
                check_formals(&mut formals, &fs, None, n)?;
            }
            Head::Step(r) => {
                if step.is_some() {
                    return bad("two step equations");
                }
                step = Some((*e, r.clone()));
                check_formals(&mut formals, &fs, Some(r), n)?;
            }
            Head::Explicit => {
                if explicit.replace(*e).is_some() {
                    return bad("two explicit equations");
                }
                check_formals(&mut formals, &fs, None, n)?;
            }
        }
    }
    let firsts = firsts.cloned().unwrap_or_default();
    let rhs_kind = |e: &DefEq| std::mem::discriminant(&e.body);
    if group.iter().any(|e| rhs_kind(e) != rhs_kind(group[0])) {
        return bad("equations of different kinds");
    }
    let (all_formals, bodies) = match (explicit, base, step) {
        (Some(e), None, None) => (formals.unwrap(), Bodies::Explicit(&e.body)),
        (None, Some(b), Some((s, r))) => {
            let mut f = formals.unwrap();
            f.push(r);
            (f, Bodies::Recursive(&b.body, &s.body))
        }
        (None, Some(_), None) => return bad("missing step equation"),
        (None, None, Some(_)) => return bad("missing base equation"),
        _ => return bad("mixes explicit and recursive equations"),
    };
    match group[0].body {
        DefRhs::Num(_) => {
            let body = match bodies {
                Bodies::Explicit(DefRhs::Num(b)) => DefBody::Explicit(b.clone()),
                Bodies::Recursive(DefRhs::Num(b), DefRhs::Num(s)) => DefBody::Recursive { base: b.clone(), step: s.clone() },
                _ => unreachable!(),
            };
            th.num_defs.insert(n.clone(), NumDef { name: n.clone(), formals: all_formals, body });
        }
        DefRhs::Term(_) => {
            let body = match bodies {
                Bodies::Explicit(DefRhs::Term(b)) => DefBody::Explicit(b.clone()),
                Bodies::Recursive(DefRhs::Term(b), DefRhs::Term(s)) => DefBody::Recursive { base: b.clone(), step: s.clone() },
                _ => unreachable!(),
            };
            th.term_defs.insert(n.clone(), TermDef { name: n.clone(), iota_formals: firsts, num_formals: all_formals, body });
        }
        DefRhs::Formula(_) => {
            let body = match bodies {
                Bodies::Explicit(DefRhs::Formula(b)) => DefBody::Explicit(b.clone()),
                Bodies::Recursive(DefRhs::Formula(b), DefRhs::Formula(s)) => {
                    let call = HatAtom::base(n.clone(), firsts.clone(), all_formals.iter().map(|p| NumTerm::Param(p.clone())).collect());
                    DefBody::Recursive { base: b.clone(), step: self_call_to_var(s, &call)? }
                }
                _ => unreachable!(),
            };
            th.pred_defs.insert(n.clone(), PredDef { name: n.clone(), class_formals: firsts, num_formals: all_formals, body });
        }
    }
    Ok(())
}

enum Bodies<'a> {
    Explicit(&'a DefRhs),
    Recursive(&'a DefRhs, &'a DefRhs),
}

fn check_formals(acc: &mut Option<Vec<Name>>, fs: &[Name], rec: Option<Name>, n: &Name) -> Result<()> {
    if let Some(r) = &rec {
        if fs.contains(r) {
            return Err(Error::InvalidTheory(format!("`{n}`: recursion variable `{r}` repeated")));
        }
    }
    match acc {
        Some(prev) if prev.as_slice() != fs => {
            Err(Error::InvalidTheory(format!("`{n}`: equations disagree on their numeric formals")))
        }
        _ => {
            *acc = Some(fs.to_vec());
            Ok(())
        }
    }
}

/// The recursive call of a predicate step body becomes the formula variable.
fn self_call_to_var(f: &Formula, call: &HatAtom) -> Result<Formula> {
    let mut err = None;
    let out = f.map_hats(&mut |h| {
        if h.pred.base_name() != call.pred.base_name() {
            return Formula::Hat(h.clone());
        }
        if !matches!(h.pred, PredRef::Base(_)) || h.classes != call.classes || h.args != call.args {
            err = Some(Error::InvalidTheory(format!("recursive call {h} must be {call}")));
        }
        Formula::Var(crate::kernel_terms::name(XI))
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_terms::{assignment, eval_iota, name};

    #[test]
    fn term_schema_from_two_equations() {
        let doc = parse_document("def ^f(x; 0) = x; def ^f(x; s(n)) = f(^f(x; n));").unwrap();
        let d = &doc.theory.term_defs[&name("f")];
        assert_eq!(d.iota_formals, vec![name("x")]);
        assert_eq!(d.num_formals, vec![name("n")]);
        assert!(d.body.is_recursive());
        let t = IotaTerm::Hat(name("f"), vec![IotaTerm::constant(name("a"))], vec![NumTerm::Lit(2)]);
        let v = eval_iota(&t, &assignment(&[]), &doc.theory).unwrap();
        assert_eq!(v.to_string(), "f(f(a))");
    }

    #[test]
    fn predicate_self_call_becomes_variable() {
        let doc = parse_document(
            "param n; class X[n];\n\
             def ^p(X; 0) = ~P(X[0]);\n\
             def ^p(X; s(n)) = ^p(X; n) \\/ P(X[s(n)]);",
        )
        .unwrap();
        let d = &doc.theory.pred_defs[&name("p")];
        match &d.body {
            DefBody::Recursive { step, .. } => assert!(step.has_formula_var()),
            _ => panic!("not recursive"),
        }
    }

    #[test]
    fn missing_base_equation_is_rejected() {
        let e = parse_document("def plus(k, s(n)) = s(plus(k, n));").unwrap_err();
        assert_eq!(e, Error::InvalidTheory("`plus`: missing base equation".into()));
    }
}
