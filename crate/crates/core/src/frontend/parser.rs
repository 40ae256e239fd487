use std::collections::{BTreeMap, BTreeSet};

use super::ast::{DefEq, DefRhs, Item, SchemaExpr, SourceFile};
use super::lexer::{lex, Spanned, Tok};
use crate::calculus::{Derivation, Judgement, Node, ProofVar, Rule, Sequent};
use crate::error::{Error, Result};
use crate::kernel_formulas::{derive, Formula, HatAtom, PredRef};
use crate::kernel_terms::{name, IotaTerm, Name, NumTerm, Theory, VarExpr};
use crate::substitution::{CondAtom, Condition, SSubstitution, State};

/// Names the parser needs to tell variables from constants and defined
/// predicates from defined term symbols.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub vars: BTreeSet<String>,
    pub preds: BTreeSet<String>,
    pub terms: BTreeSet<String>,
}

impl Scope {
    pub fn of(th: &Theory) -> Scope {
        Scope {
            vars: th.classes.keys().map(|c| c.to_string()).collect(),
            preds: th.pred_defs.keys().map(|c| c.to_string()).collect(),
            terms: th.term_defs.keys().map(|c| c.to_string()).collect(),
        }
    }
}

pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    pub scope: Scope,
    locals: BTreeSet<String>,
}

pub fn parse(src: &str) -> Result<SourceFile> {
    Parser::new(src, Scope::default())?.file()
}

/// Parses a whole input as one formula.
pub fn parse_formula(src: &str, scope: &Scope) -> Result<Formula> {
    let mut p = Parser::new(src, scope.clone())?;
    let f = p.formula()?;
    p.expect(&Tok::Eof)?;
    Ok(f)
}

pub fn parse_term(src: &str, scope: &Scope) -> Result<IotaTerm> {
    let mut p = Parser::new(src, scope.clone())?;
    let t = p.term()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

pub fn parse_subst(src: &str, scope: &Scope) -> Result<SSubstitution> {
    let mut p = Parser::new(src, scope.clone())?;
    let t = p.subst()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

/// A term or a formula, told apart by the first symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Term(IotaTerm),
    Formula(Formula),
}

pub fn parse_expr(src: &str, scope: &Scope) -> Result<Expr> {
    let p = Parser::new(src, scope.clone())?;
    let term = match (p.peek(), p.peek_at(1)) {
        (Tok::Caret, Tok::Ident(s)) => scope.terms.contains(s),
        (Tok::Ident(s), Tok::LParen) => p.hat_alias(s, &scope.terms).is_some() || (!is_upper(s) && p.hat_alias(s, &scope.preds).is_none()),
        (Tok::Ident(_), Tok::LBracket) => true,
        (Tok::Ident(s), Tok::Eof) => !is_upper(s) || scope.vars.contains(s),
        _ => false,
    };
    if term {
        parse_term(src, scope).map(Expr::Term)
    } else {
        parse_formula(src, scope).map(Expr::Formula)
    }
}

pub fn parse_num(src: &str) -> Result<NumTerm> {
    let mut p = Parser::new(src, Scope::default())?;
    let t = p.num()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

fn is_upper(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase())
}

impl Parser {
    pub fn new(src: &str, scope: Scope) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, scope, locals: BTreeSet::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Syntax { line: s.line, col: s.col, msg: msg.into() })
    }

    fn expected<T>(&self, what: &str) -> Result<T> {
        self.err(format!("expected {what}, found {}", self.peek()))
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.expected(&t.to_string())
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.at_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.expected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.expected("identifier"),
        }
    }

    fn list<T>(&mut self, close: &Tok, f: &mut dyn FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        if self.at(close) {
            return Ok(out);
        }
        loop {
            out.push(f(self)?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    pub fn file(&mut self) -> Result<SourceFile> {
        let mut items = Vec::new();
        while !self.at(&Tok::Eof) {
            items.push(self.item()?);
        }
        Ok(SourceFile { items })
    }

    fn item(&mut self) -> Result<Item> {
        let kw = self.ident()?;
        let item = match kw.as_str() {
            "param" => Item::Params(self.list(&Tok::Semi, &mut |p| p.ident().map(|s| name(&s)))?),
            "class" => {
                let c = self.ident()?;
                self.expect(&Tok::LBracket)?;
                let ps = self.list(&Tok::RBracket, &mut |p| p.ident().map(|s| name(&s)))?;
                self.expect(&Tok::RBracket)?;
                self.scope.vars.insert(c.clone());
                Item::Class(name(&c), ps)
            }
            "var" => {
                let vs = self.list(&Tok::Semi, &mut |p| p.ident())?;
                self.scope.vars.extend(vs.iter().cloned());
                Item::Vars(vs.iter().map(|v| name(v)).collect())
            }
            "fun" | "pred" => {
                let sig = self.list(&Tok::Semi, &mut |p| {
                    let f = p.ident()?;
                    p.expect(&Tok::Colon)?;
                    match p.bump() {
                        Tok::Num(k) => Ok((name(&f), k as usize)),
                        _ => p.expected("arity"),
                    }
                })?;
                if kw == "fun" {
                    Item::Functions(sig)
                } else {
                    Item::Predicates(sig)
                }
            }
            "order" => {
                self.eat(&Tok::Caret);
                let a = self.ident()?;
                self.expect(&Tok::Lt)?;
                self.eat(&Tok::Caret);
                let b = self.ident()?;
                Item::Order(name(&a), name(&b))
            }
            "main" => {
                self.expect(&Tok::Caret)?;
                let p = self.ident()?;
                self.scope.preds.insert(p.clone());
                Item::Main(self.hat_atom(&p)?)
            }
            "def" => Item::Def(self.def()?),
            "axiom" => Item::Axiom(self.formula()?),
            "subst" => {
                let n = self.ident()?;
                self.expect(&Tok::Eq)?;
                Item::Subst(name(&n), self.subst()?)
            }
            "unify" => {
                let n = self.ident()?;
                self.expect(&Tok::Eq)?;
                Item::Unify(name(&n), self.list(&Tok::Semi, &mut |p| p.term())?)
            }
            "formula" => {
                let n = self.ident()?;
                self.expect(&Tok::Eq)?;
                Item::Formula(name(&n), self.formula()?)
            }
            "term" => {
                let n = self.ident()?;
                self.expect(&Tok::Eq)?;
                Item::Term(name(&n), self.term()?)
            }
            "derivation" => return Ok(Item::Derivation(self.derivation()?)),
            "schema" => {
                let n = self.ident()?;
                self.expect(&Tok::Eq)?;
                Item::Schema(name(&n), self.schema()?)
            }
            _ => {
                self.pos -= 1;
                return self.expected("a declaration");
            }
        };
        self.expect(&Tok::Semi)?;
        Ok(item)
    }

    fn def(&mut self) -> Result<DefEq> {
        if !self.eat(&Tok::Caret) {
            let f = self.ident()?;
            self.expect(&Tok::LParen)?;
            let head = self.list(&Tok::RParen, &mut |p| p.num())?;
            self.expect(&Tok::RParen)?;
            self.expect(&Tok::Eq)?;
            let body = self.num()?;
            return Ok(DefEq { name: name(&f), firsts: Vec::new(), head, body: DefRhs::Num(body) });
        }
        let f = self.ident()?;
        self.expect(&Tok::LParen)?;
        let firsts = self.list(&Tok::Semi, &mut |p| p.ident())?;
        let head = if self.eat(&Tok::Semi) { self.list(&Tok::RParen, &mut |p| p.num())? } else { Vec::new() };
        self.expect(&Tok::RParen)?;
        self.expect(&Tok::Eq)?;
        let is_pred = if self.scope.preds.contains(&f) {
            true
        } else if self.scope.terms.contains(&f) {
            false
        } else {
            self.body_is_formula() || (!firsts.is_empty() && firsts.iter().all(|c| is_upper(c)))
        };
        let firsts_n: Vec<Name> = firsts.iter().map(|s| name(s)).collect();
        if is_pred {
            self.scope.preds.insert(f.clone());
            let body = self.formula()?;
            Ok(DefEq { name: name(&f), firsts: firsts_n, head, body: DefRhs::Formula(body) })
        } else {
            self.scope.terms.insert(f.clone());
            let saved = std::mem::replace(&mut self.locals, firsts.into_iter().collect());
            let body = self.term();
            self.locals = saved;
            Ok(DefEq { name: name(&f), firsts: firsts_n, head, body: DefRhs::Term(body?) })
        }
    }

    /// Looks ahead to the end of the equation for something only a formula
    /// can contain.
    fn body_is_formula(&self) -> bool {
        let mut depth = 0i32;
        let mut i = self.pos;
        while i < self.toks.len() {
            let t = &self.toks[i].tok;
            let next = self.toks.get(i + 1).map(|s| &s.tok);
            match t {
                Tok::Eof => break,
                Tok::Semi if depth == 0 => break,
                Tok::LParen | Tok::LBracket | Tok::LBrace => depth += 1,
                Tok::RParen | Tok::RBracket | Tok::RBrace => depth -= 1,
                Tok::Tilde | Tok::Wedge | Tok::Vee | Tok::Dollar => return true,
                Tok::Caret => {
                    if let Some(Tok::Ident(s)) = next {
                        if self.scope.preds.contains(s) {
                            return true;
                        }
                    }
                }
                Tok::Ident(s) if next == Some(&Tok::LParen) => {
                    if is_upper(s) || self.hat_alias(s, &self.scope.preds).is_some() {
                        return true;
                    }
                }
                _ => {}
            }
            i += 1;
        }
        false
    }

    /// `phat` for `^p` when `p` is a defined symbol of the given kind.
    fn hat_alias(&self, s: &str, known: &BTreeSet<String>) -> Option<String> {
        let stem = s.strip_suffix("hat")?;
        (!stem.is_empty() && known.contains(stem)).then(|| stem.to_string())
    }

    pub fn num(&mut self) -> Result<NumTerm> {
        match self.peek().clone() {
            Tok::Num(k) => {
                self.bump();
                Ok(NumTerm::Lit(k))
            }
            Tok::Ident(s) => {
                self.bump();
                if !self.at(&Tok::LParen) {
                    return Ok(NumTerm::Param(name(&s)));
                }
                self.bump();
                let args = self.list(&Tok::RParen, &mut |p| p.num())?;
                self.expect(&Tok::RParen)?;
                match (s.as_str(), args.len()) {
                    ("s", 1) => Ok(NumTerm::succ(args.into_iter().next().unwrap())),
                    ("p", 1) => Ok(NumTerm::pred(args.into_iter().next().unwrap())),
                    _ => Ok(NumTerm::App(name(&s), args)),
                }
            }
            _ => self.expected("numeric term"),
        }
    }

    fn nums(&mut self) -> Result<Vec<NumTerm>> {
        self.list(&Tok::RParen, &mut |p| p.num())
    }

    pub fn term(&mut self) -> Result<IotaTerm> {
        if self.eat(&Tok::Caret) {
            let f = self.ident()?;
            return self.hat_term(&f);
        }
        let id = self.ident()?;
        if self.eat(&Tok::LBracket) {
            let idx = self.list(&Tok::RBracket, &mut |p| p.num())?;
            self.expect(&Tok::RBracket)?;
            return Ok(IotaTerm::Var(VarExpr::new(name(&id), idx)));
        }
        if self.at(&Tok::LParen) {
            if let Some(stem) = self.hat_alias(&id, &self.scope.terms) {
                return self.hat_term(&stem);
            }
            self.bump();
            let args = self.list(&Tok::RParen, &mut |p| p.term())?;
            self.expect(&Tok::RParen)?;
            return Ok(IotaTerm::App(name(&id), args));
        }
        if self.locals.contains(&id) || self.scope.vars.contains(&id) {
            return Ok(IotaTerm::Var(VarExpr::fo(name(&id))));
        }
        Ok(IotaTerm::constant(name(&id)))
    }

    fn hat_term(&mut self, f: &str) -> Result<IotaTerm> {
        self.expect(&Tok::LParen)?;
        let args = if self.at(&Tok::Semi) { Vec::new() } else { self.list(&Tok::RParen, &mut |p| p.term())? };
        let nums = if self.eat(&Tok::Semi) { self.nums()? } else { Vec::new() };
        self.expect(&Tok::RParen)?;
        Ok(IotaTerm::Hat(name(f), args, nums))
    }

    pub fn formula(&mut self) -> Result<Formula> {
        let a = self.conj()?;
        if self.eat(&Tok::Vee) {
            return Ok(Formula::or(a, self.formula()?));
        }
        Ok(a)
    }

    fn conj(&mut self) -> Result<Formula> {
        let a = self.unary()?;
        if self.eat(&Tok::Wedge) {
            return Ok(Formula::and(a, self.conj()?));
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Dollar => {
                self.bump();
                Ok(Formula::Var(name(&self.ident()?)))
            }
            Tok::Caret => {
                self.bump();
                let p = self.ident()?;
                Ok(Formula::Hat(self.hat_atom(&p)?))
            }
            Tok::Ident(s) => {
                self.bump();
                if !self.at(&Tok::LParen) {
                    return Ok(Formula::Atom(name(&s), Vec::new()));
                }
                if let Some(stem) = self.hat_alias(&s, &self.scope.preds) {
                    return Ok(Formula::Hat(self.hat_atom(&stem)?));
                }
                self.bump();
                let args = self.list(&Tok::RParen, &mut |p| p.term())?;
                self.expect(&Tok::RParen)?;
                Ok(Formula::Atom(name(&s), args))
            }
            _ => self.expected("formula"),
        }
    }

    /// Arguments of a defined atom, after its symbol. A derived symbol
    /// carries `<theta | state>`.
    fn hat_atom(&mut self, p: &str) -> Result<HatAtom> {
        let pred = if self.eat(&Tok::Lt) {
            let theta = self.subst()?;
            self.expect(&Tok::Bar)?;
            let c = self.condition()?;
            let state = if c.is_true() {
                State::empty()
            } else {
                match c.to_state() {
                    Some(s) => s,
                    None => return self.err(format!("`{c}` does not fix a state")),
                }
            };
            self.expect(&Tok::Gt)?;
            PredRef::Derived(derive(&name(p), &theta, &state))
        } else {
            PredRef::Base(name(p))
        };
        self.expect(&Tok::LParen)?;
        let classes = if self.at(&Tok::Semi) {
            Vec::new()
        } else {
            self.list(&Tok::RParen, &mut |p| p.ident().map(|s| name(&s)))?
        };
        let args = if self.eat(&Tok::Semi) { self.nums()? } else { Vec::new() };
        self.expect(&Tok::RParen)?;
        Ok(HatAtom { pred, classes, args })
    }

    pub fn subst(&mut self) -> Result<SSubstitution> {
        self.expect(&Tok::LBrace)?;
        let start = self.pos;
        let pairs = self.list(&Tok::RBrace, &mut |p| {
            let lhs = match p.term()? {
                IotaTerm::Var(v) => v,
                t => return p.err(format!("left-hand side `{t}` is not a variable")),
            };
            p.expect(&Tok::Arrow)?;
            Ok((lhs, p.term()?))
        })?;
        self.expect(&Tok::RBrace)?;
        SSubstitution::from_pairs(pairs).map_err(|e| {
            let s = &self.toks[start];
            Error::Syntax { line: s.line, col: s.col, msg: e.to_string() }
        })
    }

    pub fn condition(&mut self) -> Result<Condition> {
        if self.at_kw("true") {
            self.bump();
            return Ok(Condition::truth());
        }
        let mut atoms = Vec::new();
        loop {
            let id = self.ident()?;
            let (param, pred) = if id == "p" && self.eat(&Tok::LParen) {
                let n = self.ident()?;
                self.expect(&Tok::RParen)?;
                (n, true)
            } else {
                (id, false)
            };
            let zero = match self.bump() {
                Tok::Eq => true,
                Tok::Neq => false,
                _ => {
                    self.pos -= 1;
                    return self.expected("`=` or `!=`");
                }
            };
            if self.bump() != Tok::Num(0) {
                self.pos -= 1;
                return self.expected("`0`");
            }
            atoms.push(CondAtom { param: name(&param), pred, zero });
            if !self.eat(&Tok::Amp) {
                return Ok(Condition { atoms });
            }
        }
    }

    fn proof_var(&mut self) -> Result<ProofVar> {
        self.expect(&Tok::At)?;
        let id = self.ident()?;
        self.expect(&Tok::Caret)?;
        let p = self.ident()?;
        Ok(ProofVar { id: name(&id), atom: self.hat_atom(&p)? })
    }

    fn judgement(&mut self) -> Result<Judgement> {
        if self.at(&Tok::At) {
            return Ok(Judgement::Var(self.proof_var()?));
        }
        let ant = if self.at(&Tok::Turnstile) { Vec::new() } else { self.list(&Tok::Turnstile, &mut |p| p.formula())? };
        self.expect(&Tok::Turnstile)?;
        let suc = if self.at(&Tok::Semi) { Vec::new() } else { self.list(&Tok::Semi, &mut |p| p.formula())? };
        Ok(Judgement::Seq(Sequent::new(ant, suc)))
    }

    fn rule(&mut self) -> Result<Rule> {
        let mut tag = self.ident()?;
        if tag == "res" {
            return Ok(Rule::Res(self.subst()?));
        }
        if self.eat(&Tok::Plus) {
            tag.push('+');
        }
        match Rule::from_tag(&tag) {
            Some(r) => Ok(r),
            None => {
                self.pos -= 1;
                self.err(format!("unknown rule `{tag}`"))
            }
        }
    }

    fn derivation(&mut self) -> Result<Derivation> {
        let n = self.ident()?;
        let context = if self.at_kw("if") {
            self.bump();
            self.condition()?
        } else {
            Condition::truth()
        };
        self.expect(&Tok::LBrace)?;
        let mut order = Vec::new();
        let mut nodes: BTreeMap<String, (Rule, Vec<(String, usize, usize)>, Judgement)> = BTreeMap::new();
        while !self.eat(&Tok::RBrace) {
            let label = self.ident()?;
            if nodes.contains_key(&label) {
                self.pos -= 1;
                return self.err(format!("label `{label}` defined twice"));
            }
            self.expect(&Tok::Eq)?;
            let rule = self.rule()?;
            let mut kids = Vec::new();
            if self.eat(&Tok::LParen) {
                kids = self.list(&Tok::RParen, &mut |p| {
                    let s = &p.toks[p.pos];
                    let (l, c) = (s.line, s.col);
                    Ok((p.ident()?, l, c))
                })?;
                self.expect(&Tok::RParen)?;
            }
            self.expect(&Tok::Colon)?;
            let j = self.judgement()?;
            self.expect(&Tok::Semi)?;
            order.push(label.clone());
            nodes.insert(label, (rule, kids, j));
        }
        let Some(root) = order.first().cloned() else {
            return self.err(format!("derivation `{n}` has no nodes"));
        };
        let mut used = BTreeSet::new();
        let root = build_node(&root, &nodes, &mut used, &mut Vec::new())?;
        if let Some(l) = order.iter().find(|l| !used.contains(*l)) {
            return self.err(format!("node `{l}` of `{n}` is not reachable from the root"));
        }
        Ok(Derivation::new(name(&n), context, root))
    }

    fn schema(&mut self) -> Result<SchemaExpr> {
        if self.at_kw("if") {
            let mut branches = Vec::new();
            while self.at_kw("if") {
                self.bump();
                let c = self.condition()?;
                self.expect_kw("then")?;
                branches.push((Some(c), self.schema_atom()?));
                if !self.at_kw("else") {
                    return Ok(SchemaExpr::Cases(branches));
                }
                self.bump();
            }
            branches.push((None, self.schema_atom()?));
            return Ok(SchemaExpr::Cases(branches));
        }
        self.schema_atom()
    }

    fn schema_atom(&mut self) -> Result<SchemaExpr> {
        if self.eat(&Tok::LParen) {
            let s = self.schema()?;
            self.expect(&Tok::RParen)?;
            return Ok(s);
        }
        let id = self.ident()?;
        match id.as_str() {
            "compose" if self.at(&Tok::LParen) => {
                self.bump();
                let a = self.schema()?;
                self.expect(&Tok::Comma)?;
                let b = self.schema()?;
                self.expect(&Tok::RParen)?;
                Ok(SchemaExpr::Compose(Box::new(a), Box::new(b)))
            }
            "closure" if self.at(&Tok::LParen) => {
                self.bump();
                let a = self.schema()?;
                self.expect(&Tok::Semi)?;
                let k = self.ident()?;
                self.expect(&Tok::Semi)?;
                let v = self.proof_var()?;
                self.expect(&Tok::RParen)?;
                Ok(SchemaExpr::Closure(Box::new(a), name(&k), v))
            }
            _ => Ok(SchemaExpr::Ref(name(&id))),
        }
    }
}

type Table = BTreeMap<String, (Rule, Vec<(String, usize, usize)>, Judgement)>;

fn build_node(label: &str, nodes: &Table, used: &mut BTreeSet<String>, stack: &mut Vec<String>) -> Result<Node> {
    let (rule, kids, j) = &nodes[label];
    if stack.iter().any(|l| l == label) {
        return Err(Error::Invalid(format!("node `{label}` is its own ancestor")));
    }
    used.insert(label.to_string());
    stack.push(label.to_string());
    let mut premises = Vec::new();
    for (k, line, col) in kids {
        if !nodes.contains_key(k) {
            return Err(Error::Syntax { line: *line, col: *col, msg: format!("unknown node `{k}`") });
        }
        premises.push(build_node(k, nodes, used, stack)?);
    }
    stack.pop();
    Ok(Node::new(rule.clone(), j.clone(), premises))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_expression() {
        let t = parse_term("X[n, m]", &Scope::default()).unwrap();
        assert_eq!(t, IotaTerm::Var(VarExpr::new(name("X"), vec![NumTerm::param("n"), NumTerm::param("m")])));
    }

    #[test]
    fn one_binding_substitution() {
        let s = parse_subst("{X[s(n), m] <- Y[n]}", &Scope::default()).unwrap();
        assert_eq!(s.len(), 1);
        let (v, t) = s.iter().next().unwrap();
        assert_eq!(v.idx, vec![NumTerm::succ(NumTerm::param("n")), NumTerm::param("m")]);
        assert_eq!(t, &IotaTerm::Var(VarExpr::new(name("Y"), vec![NumTerm::param("n")])));
    }

    #[test]
    fn connectives_associate_to_the_right() {
        let f = parse_formula("A \\/ B /\\ ~C \\/ D", &Scope::default()).unwrap();
        let a = |s: &str| Formula::Atom(name(s), vec![]);
        assert_eq!(f, Formula::or(a("A"), Formula::or(Formula::and(a("B"), Formula::not(a("C"))), a("D"))));
    }

    #[test]
    fn repeated_binding_is_a_syntax_error() {
        let e = parse_subst("{X[0] <- a, X[0] <- b}", &Scope::default()).unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, col: 2, .. }));
    }

    #[test]
    fn missing_semicolon_is_positioned() {
        let e = parse("param n\nclass X[n];").unwrap_err();
        assert_eq!(e, Error::Syntax { line: 2, col: 1, msg: "expected `;`, found `class`".into() });
    }
}
