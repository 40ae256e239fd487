use std::collections::BTreeSet;
use std::fmt;

use crate::kernel_formulas::{Formula, HatAtom};
use crate::kernel_terms::{write_list, Name};
use crate::substitution::{Condition, SSubstitution};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Sequent {
    pub ant: Vec<Formula>,
    pub suc: Vec<Formula>,
}

impl Sequent {
    pub fn new(ant: Vec<Formula>, suc: Vec<Formula>) -> Self {
        Sequent { ant, suc }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.ant.is_empty() && self.suc.is_empty()
    }

    pub fn map(&self, f: &mut dyn FnMut(&Formula) -> Formula) -> Sequent {
        Sequent { ant: self.ant.iter().map(|x| f(x)).collect(), suc: self.suc.iter().map(|x| f(x)).collect() }
    }

    pub fn try_map(&self, f: &mut dyn FnMut(&Formula) -> crate::Result<Formula>) -> crate::Result<Sequent> {
        Ok(Sequent {
            ant: self.ant.iter().map(|x| f(x)).collect::<crate::Result<_>>()?,
            suc: self.suc.iter().map(|x| f(x)).collect::<crate::Result<_>>()?,
        })
    }

    pub fn params(&self) -> BTreeSet<Name> {
        let mut s = BTreeSet::new();
        self.ant.iter().chain(&self.suc).for_each(|f| f.collect_params(&mut s));
        s
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.ant)?;
        if !self.ant.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "|-")?;
        if !self.suc.is_empty() {
            write!(f, " ")?;
        }
        write_list(f, &self.suc)
    }
}

/// Proof variable with its type `p(X; r)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProofVar {
    pub id: Name,
    pub atom: HatAtom,
}

impl fmt::Display for ProofVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{} {}", self.id, self.atom)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Judgement {
    Seq(Sequent),
    Var(ProofVar),
}

impl Judgement {
    pub fn sequent(&self) -> Option<&Sequent> {
        match self {
            Judgement::Seq(s) => Some(s),
            Judgement::Var(_) => None,
        }
    }

    pub fn params(&self) -> BTreeSet<Name> {
        match self {
            Judgement::Seq(s) => s.params(),
            Judgement::Var(v) => {
                let mut s = BTreeSet::new();
                v.atom.args.iter().for_each(|a| a.collect_params(&mut s));
                s
            }
        }
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgement::Seq(s) => write!(f, "{s}"),
            Judgement::Var(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    Left,
    Right,
}

/// `B` unfolds a base case, `S` a step case, `D` an explicit definition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DefKind {
    B,
    S,
    D,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Rule {
    Axiom,
    /// Leaf carrying a proof variable.
    VarLeaf,
    AndR1,
    AndR2,
    AndL,
    OrR,
    OrL1,
    OrL2,
    NotR,
    NotL,
    Res(SSubstitution),
    Cut,
    /// Unfolding of a defined atom; `intro` is the reverse direction.
    Def { kind: DefKind, side: Side, intro: bool },
    VIntro,
    VElim,
}

impl Rule {
    pub fn tag(&self) -> String {
        match self {
            Rule::Axiom => "axiom".into(),
            Rule::VarLeaf => "var".into(),
            Rule::AndR1 => "and_r1".into(),
            Rule::AndR2 => "and_r2".into(),
            Rule::AndL => "and_l".into(),
            Rule::OrR => "or_r".into(),
            Rule::OrL1 => "or_l1".into(),
            Rule::OrL2 => "or_l2".into(),
            Rule::NotR => "not_r".into(),
            Rule::NotL => "not_l".into(),
            Rule::Res(_) => "res".into(),
            Rule::Cut => "cut".into(),
            Rule::Def { kind, side, intro } => format!(
                "{}_{}{}",
                match kind {
                    DefKind::B => "B",
                    DefKind::S => "S",
                    DefKind::D => "D",
                },
                match side {
                    Side::Left => "l",
                    Side::Right => "r",
                },
                if *intro { "+" } else { "" }
            ),
            Rule::VIntro => "V_I".into(),
            Rule::VElim => "V_E".into(),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Rule> {
        Some(match tag {
            "axiom" => Rule::Axiom,
            "var" => Rule::VarLeaf,
            "and_r1" => Rule::AndR1,
            "and_r2" => Rule::AndR2,
            "and_l" => Rule::AndL,
            "or_r" => Rule::OrR,
            "or_l1" => Rule::OrL1,
            "or_l2" => Rule::OrL2,
            "not_r" => Rule::NotR,
            "not_l" => Rule::NotL,
            "cut" => Rule::Cut,
            "V_I" => Rule::VIntro,
            "V_E" => Rule::VElim,
            _ => {
                let (body, intro) = match tag.strip_suffix('+') {
                    Some(b) => (b, true),
                    None => (tag, false),
                };
                let (k, s) = body.split_once('_')?;
                let kind = match k {
                    "B" => DefKind::B,
                    "S" => DefKind::S,
                    "D" => DefKind::D,
                    _ => return None,
                };
                let side = match s {
                    "l" => Side::Left,
                    "r" => Side::Right,
                    _ => return None,
                };
                Rule::Def { kind, side, intro }
            }
        })
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Axiom | Rule::VarLeaf => 0,
            Rule::Res(_) | Rule::Cut => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Res(t) => write!(f, "res {t}"),
            r => write!(f, "{}", r.tag()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Node {
    pub rule: Rule,
    pub concl: Judgement,
    pub premises: Vec<Node>,
}

impl Node {
    pub fn new(rule: Rule, concl: Judgement, premises: Vec<Node>) -> Self {
        Node { rule, concl, premises }
    }

    pub fn leaf(rule: Rule, concl: Judgement) -> Self {
        Node { rule, concl, premises: Vec::new() }
    }

    /// Nodes in pre-order.
    pub fn preorder(&self) -> Vec<&Node> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            for p in n.premises.iter().rev() {
                stack.push(p);
            }
        }
        out
    }

    pub fn count(&self, pred: impl Fn(&Rule) -> bool) -> usize {
        self.preorder().iter().filter(|n| pred(&n.rule)).count()
    }

    pub fn sequent(&self) -> Option<&Sequent> {
        self.concl.sequent()
    }
}

/// A derivation with the condition on parameters under which it is meant.
#[derive(Clone, PartialEq, Debug)]
pub struct Derivation {
    pub name: Name,
    pub context: Condition,
    pub root: Node,
}

impl Derivation {
    pub fn new(name: Name, context: Condition, root: Node) -> Self {
        Derivation { name, context, root }
    }

    pub fn end_sequent(&self) -> Option<&Sequent> {
        self.root.sequent()
    }

    pub fn res_count(&self) -> usize {
        self.root.count(|r| matches!(r, Rule::Res(_)))
    }

    pub fn params(&self) -> BTreeSet<Name> {
        let mut s = self.context.params();
        for n in self.root.preorder() {
            s.extend(n.concl.params());
            if let Rule::Res(t) = &n.rule {
                s.extend(t.params());
            }
        }
        s
    }
}
