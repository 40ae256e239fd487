use std::fmt::Write;

use super::ast::{DefRhs, Item, SchemaExpr, SourceFile};
use crate::calculus::{Derivation, Node};
use crate::kernel_terms::Name;

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Source text for a parsed file. Parsing the output gives the same items.
pub fn print_source(src: &SourceFile) -> String {
    let mut out = String::new();
    for item in &src.items {
        out.push_str(&print_item(item));
        out.push('\n');
    }
    out
}

pub fn print_item(item: &Item) -> String {
    match item {
        Item::Params(ps) => format!("param {};", join(ps)),
        Item::Class(c, ps) => format!("class {c}[{}];", join(ps)),
        Item::Vars(vs) => format!("var {};", join(vs)),
        Item::Functions(fs) => format!("fun {};", sig(fs)),
        Item::Predicates(ps) => format!("pred {};", sig(ps)),
        Item::Order(a, b) => format!("order {a} < {b};"),
        Item::Main(h) => format!("main {h};"),
        Item::Def(e) => match &e.body {
            DefRhs::Num(b) => format!("def {}({}) = {b};", e.name, join(&e.head)),
            DefRhs::Term(b) => format!("def ^{}({}; {}) = {b};", e.name, join(&e.firsts), join(&e.head)),
            DefRhs::Formula(b) => format!("def ^{}({}; {}) = {b};", e.name, join(&e.firsts), join(&e.head)),
        },
        Item::Axiom(f) => format!("axiom {f};"),
        Item::Subst(n, s) => format!("subst {n} = {s};"),
        Item::Unify(n, ts) => format!("unify {n} = {};", join(ts)),
        Item::Formula(n, f) => format!("formula {n} = {f};"),
        Item::Term(n, t) => format!("term {n} = {t};"),
        Item::Derivation(d) => print_derivation(d),
        Item::Schema(n, e) => format!("schema {n} = {};", print_schema(e)),
    }
}

fn sig(xs: &[(Name, usize)]) -> String {
    xs.iter().map(|(n, k)| format!("{n}:{k}")).collect::<Vec<_>>().join(", ")
}

/// A derivation block with nodes labelled in pre-order.
pub fn print_derivation(d: &Derivation) -> String {
    let mut out = format!("derivation {}", d.name);
    if !d.context.is_true() {
        write!(out, " if {}", d.context).unwrap();
    }
    out.push_str(" {\n");
    let mut next = 0usize;
    emit(&d.root, &mut next, &mut out);
    out.push('}');
    out
}

fn emit(n: &Node, next: &mut usize, out: &mut String) {
    let me = *next;
    *next += 1;
    let mut kids = Vec::new();
    let mut lines = String::new();
    for p in &n.premises {
        kids.push(format!("n{next}"));
        emit(p, next, &mut lines);
    }
    write!(out, "  n{me} = {}", n.rule).unwrap();
    if !kids.is_empty() {
        write!(out, " ({})", kids.join(", ")).unwrap();
    }
    writeln!(out, " : {};", n.concl).unwrap();
    out.push_str(&lines);
}

pub fn print_schema(e: &SchemaExpr) -> String {
    match e {
        SchemaExpr::Ref(n) => n.to_string(),
        SchemaExpr::Compose(a, b) => format!("compose({}, {})", print_schema(a), print_schema(b)),
        SchemaExpr::Closure(a, k, v) => format!("closure({}; {k}; {v})", print_schema(a)),
        SchemaExpr::Cases(bs) => {
            let mut s = String::new();
            for (i, (c, b)) in bs.iter().enumerate() {
                if i > 0 {
                    s.push_str(" else ");
                }
                let body = match b {
                    SchemaExpr::Cases(_) => format!("({})", print_schema(b)),
                    _ => print_schema(b),
                };
                match c {
                    Some(c) => write!(s, "if {c} then {body}").unwrap(),
                    None => s.push_str(&body),
                }
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse;
    use super::*;

    #[test]
    fn derivation_round_trip() {
        let src = "param n; var x;\n\
                   derivation d if n!=0 {\n\
                     r = res {x <- a} (a1, b1) : |-;\n\
                     a1 = axiom : |- P(x);\n\
                     b1 = not_r (c1) : P(a) |-;\n\
                     c1 = axiom : |- ~P(a);\n\
                   }\n\
                   schema s = if n=0 then d else compose(d, d);";
        let ast = parse(src).unwrap();
        let printed = print_source(&ast);
        assert_eq!(parse(&printed).unwrap(), ast);
    }
}
