use std::ffi::OsString;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Parser as ClapParser, Subcommand, ValueEnum};

use super::document::{parse_document, Document};
use super::parser::{parse_expr, Expr};
use super::{pretty, printer};
use crate::calculus::{
    check_derivation, cut_formulas, regularize, to_cut_derivation, total_mgu, AxiomPolicy, CheckConfig, Derivation, Node,
};
use crate::error::Error;
use crate::herbrand::{extract, grid, instantiate_hs, verify_grid, CompositionMode, Verdict};
use crate::kernel_formulas::{eval_formula, Formula};
use crate::kernel_terms::{eval_iota, name, Assignment, IotaTerm};
use crate::schemata::{instantiate, is_refutation_schema, recursion_bound, ProofSchema};
use crate::substitution::{ap_formula, ap_term, compose, ApMode, CaseMap, SSubstitution};
use crate::unification::{unify_standard, Outcome, UnifResult, UnifyOptions};

#[derive(ClapParser, Debug)]
#[command(name = "sr", version, about = "Schematic resolution toolkit")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Plain ASCII instead of mathematical symbols.
    #[arg(long, global = true)]
    pub ascii: bool,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cap on closure unrollings; defaults to SR_RECURSION_BOUND or 10000.
    #[arg(long, global = true)]
    pub bound: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One line per derivation node: depth, rule and judgement, tab separated.
    Tree,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a term or formula schema.
    Eval {
        expr: String,
        #[arg(long)]
        theory: PathBuf,
        /// Parameter binding `name=value`.
        #[arg(long = "set")]
        set: Vec<String>,
    },
    /// Show a substitution, its evaluation, or its action on a term.
    Subst {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long = "set")]
        set: Vec<String>,
        /// Term or formula, by name or as source text.
        #[arg(long, alias = "formula")]
        term: Option<String>,
    },
    /// State-wise composition of two named substitutions.
    Compose {
        file: PathBuf,
        first: String,
        second: String,
        #[arg(long = "set")]
        set: Vec<String>,
    },
    /// Run the unification algorithm on a named problem.
    Unify {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        partial_eval: bool,
    },
    /// Check derivations, or a proof schema as a refutation schema.
    Check {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        /// Admit any axiom even when the file declares axioms.
        #[arg(long)]
        any_axiom: bool,
        /// For ground derivations also print the total unifier and the cut form.
        #[arg(long)]
        cut: bool,
    },
    /// Instantiate a proof schema at a parameter assignment.
    Instantiate {
        file: PathBuf,
        #[arg(long)]
        schema: Option<String>,
        #[arg(long = "set")]
        set: Vec<String>,
    },
    /// Extract the Herbrand schema, or its instance at an assignment.
    Herbrand {
        file: PathBuf,
        #[arg(long)]
        schema: Option<String>,
        #[arg(long = "set")]
        set: Vec<String>,
        /// Compose substitutions in the literal `Theta1 Theta2 o Theta2` reading.
        #[arg(long)]
        literal: bool,
    },
    /// Check unsatisfiability of Herbrand instances over a grid (bounds inclusive).
    Verify {
        file: PathBuf,
        #[arg(long)]
        schema: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        m: Option<String>,
        /// Extra range `k=a..b`.
        #[arg(long = "range")]
        ranges: Vec<String>,
        #[arg(long)]
        literal: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Fail {
    /// Exit code 1 with a message.
    Logical(String),
    /// Exit code 2.
    Usage(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::UnboundParameter(_)
            | Error::UndeclaredSymbol(_)
            | Error::Arity { .. }
            | Error::InvalidTheory(_) => Fail::Usage(e.to_string()),
            e => Fail::Logical(e.to_string()),
        }
    }
}

type Run = Result<(String, bool), Fail>;

/// Parses arguments (program name first) and runs the command.
pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(cfg: &CliConfig) -> CliOutput {
    match dispatch(cfg) {
        Ok((out, ok)) => CliOutput { code: if ok { 0 } else { 1 }, stdout: out, stderr: String::new() },
        Err(Fail::Logical(m)) => CliOutput { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Fail::Usage(m)) => CliOutput { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn load(path: &Path) -> Result<Document, Fail> {
    let src = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    parse_document(&src).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn assignment(set: &[String]) -> Result<Assignment, Fail> {
    let mut out = Assignment::new();
    for s in set {
        let (k, v) = s.split_once('=').ok_or_else(|| Fail::Usage(format!("`{s}` is not `name=value`")))?;
        let v: u64 = v.trim().parse().map_err(|_| Fail::Usage(format!("`{v}` is not a natural number")))?;
        out.insert(name(k.trim()), v);
    }
    Ok(out)
}

fn range(s: &str) -> Result<RangeInclusive<u64>, Fail> {
    let bad = || Fail::Usage(format!("`{s}` is not a range `a..b`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    Ok(a..=b)
}

fn missing(kind: &str, n: &str) -> Fail {
    Fail::Usage(format!("no {kind} named `{n}`"))
}

struct Render {
    ascii: bool,
}

impl Render {
    fn term(&self, t: &IotaTerm) -> String {
        if self.ascii {
            t.to_string()
        } else {
            pretty::term(t)
        }
    }

    fn formula(&self, f: &Formula) -> String {
        if self.ascii {
            f.to_string()
        } else {
            pretty::formula(f)
        }
    }

    fn subst(&self, s: &SSubstitution) -> String {
        if self.ascii {
            s.to_string()
        } else {
            pretty::subst(s)
        }
    }

    fn state_map<V: Clone + PartialEq>(&self, m: &CaseMap<V>, show: impl Fn(&V) -> String) -> String {
        if self.ascii {
            m.entries.iter().map(|(s, v)| format!("[{}] {}", s.display_in(&m.params), show(v))).collect::<Vec<_>>().join("\n")
        } else {
            pretty::case_map(m, show)
        }
    }

    fn outcome(&self, o: &Outcome) -> String {
        match o {
            Outcome::Unifier(s) => self.subst(s),
            Outcome::Bottom { equation, kind } => {
                let bot = if self.ascii { "BOT" } else { "⊥" };
                format!("{bot} ({kind:?} at {} = {})", self.term(&equation.lhs), self.term(&equation.rhs))
            }
        }
    }

    fn derivation(&self, d: &Derivation, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Tree => tree(&d.root, 0, &mut out),
            Format::Text if self.ascii => out.push_str(&printer::print_derivation(d)),
            Format::Text => indented(&d.root, 0, &mut out),
        }
        out
    }
}

fn tree(n: &Node, depth: usize, out: &mut String) {
    writeln!(out, "{depth}\t{}\t{}", n.rule, n.concl).unwrap();
    n.premises.iter().for_each(|p| tree(p, depth + 1, out));
}

fn indented(n: &Node, depth: usize, out: &mut String) {
    let rule = match &n.rule {
        crate::calculus::Rule::Res(t) => format!("res {}", pretty::subst(t)),
        r => r.tag(),
    };
    writeln!(out, "{}{}  [{}]", "  ".repeat(depth), pretty::judgement(&n.concl), rule).unwrap();
    n.premises.iter().for_each(|p| indented(p, depth + 1, out));
}

fn pick_schema<'a>(doc: &'a Document, n: &Option<String>) -> Result<(&'a str, &'a ProofSchema), Fail> {
    match n {
        Some(n) => doc.schemas.iter().find(|(m, _)| &**m == n).map(|(m, s)| (&**m, s)).ok_or_else(|| missing("schema", n)),
        None => doc.schemas.last().map(|(m, s)| (&**m, s)).ok_or_else(|| Fail::Usage("no schema declared".into())),
    }
}

fn mode(literal: bool) -> CompositionMode {
    if literal {
        CompositionMode::Literal
    } else {
        CompositionMode::Compose
    }
}

fn dispatch(cfg: &CliConfig) -> Run {
    let r = Render { ascii: cfg.ascii || cfg.format == Format::Tree };
    let bound = cfg.bound.unwrap_or_else(recursion_bound);
    match &cfg.command {
        Command::Eval { expr, theory, set } => {
            let doc = load(theory)?;
            let sigma = assignment(set)?;
            let th = &doc.theory;
            let line = match named_expr(&doc, expr)? {
                Expr::Formula(f) => r.formula(&eval_formula(&f, &sigma, th)?),
                Expr::Term(t) => r.term(&eval_iota(&t, &sigma, th)?),
            };
            Ok((line + "\n", true))
        }
        Command::Subst { file, name: n, set, term } => {
            let doc = load(file)?;
            let theta = match n {
                Some(n) => doc.subst(n).ok_or_else(|| missing("substitution", n))?,
                None => doc.substs.first().map(|(_, s)| s).ok_or_else(|| Fail::Usage("no substitution declared".into()))?,
            };
            let th = &doc.theory;
            let e = match term {
                Some(src) => Some(named_expr(&doc, src)?),
                None => None,
            };
            let out = match (e, set.is_empty()) {
                (None, true) => r.subst(theta),
                (None, false) => r.subst(&theta.eval(&assignment(set)?, th)?),
                (Some(Expr::Term(t)), true) => r.state_map(&ap_term(theta, &t, th)?, |v| r.term(v)),
                (Some(Expr::Formula(f)), true) => {
                    r.state_map(&ap_formula(theta, &f, th, ApMode::Literal)?, |v| r.formula(v))
                }
                (Some(Expr::Term(t)), false) => {
                    let sigma = assignment(set)?;
                    r.term(&theta.eval(&sigma, th)?.apply(&eval_iota(&t, &sigma, th)?))
                }
                (Some(Expr::Formula(f)), false) => {
                    let sigma = assignment(set)?;
                    r.formula(&theta.eval(&sigma, th)?.apply_formula_fo(&eval_formula(&f, &sigma, th)?))
                }
            };
            Ok((out + "\n", true))
        }
        Command::Compose { file, first, second, set } => {
            let doc = load(file)?;
            let a = doc.subst(first).ok_or_else(|| missing("substitution", first))?;
            let b = doc.subst(second).ok_or_else(|| missing("substitution", second))?;
            let m = compose(a, b, &doc.theory)?;
            let out = if set.is_empty() {
                r.state_map(&m, |v| r.subst(v))
            } else {
                let sigma = assignment(set)?;
                let (s, v) = m
                    .entries
                    .iter()
                    .find(|(s, _)| s.holds(&sigma))
                    .ok_or_else(|| Fail::Usage("assignment does not bind every parameter".into()))?;
                let one = CaseMap { params: m.params.clone(), entries: vec![(s.clone(), v.clone())] };
                r.state_map(&one, |v| r.subst(v))
            };
            Ok((out + "\n", true))
        }
        Command::Unify { file, name: n, partial_eval } => {
            let doc = load(file)?;
            let ts = match n {
                Some(n) => doc.unify_problem(n).ok_or_else(|| missing("unification problem", n))?,
                None => doc.unify.first().map(|(_, t)| t).ok_or_else(|| Fail::Usage("no unification problem declared".into()))?,
            };
            let res = unify_standard(ts, &doc.theory, UnifyOptions { partial_eval: *partial_eval });
            let out = match &res {
                UnifResult::Single(o) => r.outcome(o),
                UnifResult::PerState(m) => r.state_map(m, |o| r.outcome(o)),
            };
            Ok((out + "\n", res.unifiable()))
        }
        Command::Check { file, name: n, any_axiom, cut } => {
            let doc = load(file)?;
            let th = &doc.theory;
            let mut out = String::new();
            let mut ok = true;
            if let Some(n) = n {
                if doc.schema(n).is_some() {
                    let (_, s) = pick_schema(&doc, &Some(n.clone()))?;
                    let main = Formula::Hat(doc.main()?.clone());
                    match is_refutation_schema(s, &main, th) {
                        Ok(()) => writeln!(out, "{n}: refutation schema").unwrap(),
                        Err(vs) => {
                            ok = false;
                            vs.iter().for_each(|v| writeln!(out, "{n}: {v}").unwrap());
                        }
                    }
                    return Ok((out, ok));
                }
            }
            let ds: Vec<&Derivation> = match n {
                Some(n) => vec![doc.derivation(n).ok_or_else(|| missing("derivation", n))?],
                None => doc.derivations.iter().collect(),
            };
            let ccfg = CheckConfig {
                axioms: if th.axioms.is_empty() || *any_axiom {
                    AxiomPolicy::Any
                } else {
                    AxiomPolicy::Only(th.axioms.clone())
                },
            };
            for d in ds {
                let vs = check_derivation(d, th, &ccfg);
                if vs.is_empty() {
                    writeln!(out, "{}: ok", d.name).unwrap();
                    if *cut {
                        let reg = regularize(d, th)?;
                        match total_mgu(&reg, th)? {
                            Some(t) => writeln!(out, "total mgu: {}", r.subst(&t)).unwrap(),
                            None => {
                                ok = false;
                                writeln!(out, "total mgu: none").unwrap();
                            }
                        }
                        let c = to_cut_derivation(d, th)?;
                        let fs: Vec<String> = cut_formulas(&c, th)?.iter().map(|f| r.formula(f)).collect();
                        writeln!(out, "cut formulas: {}", fs.join(", ")).unwrap();
                        out.push_str(&r.derivation(&c, cfg.format));
                    }
                } else {
                    ok = false;
                    vs.iter().for_each(|v| writeln!(out, "{}: {v}", d.name).unwrap());
                }
            }
            Ok((out, ok))
        }
        Command::Instantiate { file, schema, set } => {
            let doc = load(file)?;
            let (_, s) = pick_schema(&doc, schema)?;
            let sigma = assignment(set)?;
            let d = instantiate(s, &sigma, &doc.theory, bound)?;
            let vs = check_derivation(&d, &doc.theory, &CheckConfig::default());
            let mut out = r.derivation(&d, cfg.format);
            if cfg.format == Format::Text {
                writeln!(out, "res inferences: {}", d.res_count()).unwrap();
                for v in &vs {
                    writeln!(out, "violation: {v}").unwrap();
                }
            }
            Ok((out, vs.is_empty()))
        }
        Command::Herbrand { file, schema, set, literal } => {
            let doc = load(file)?;
            let (_, s) = pick_schema(&doc, schema)?;
            let h = extract(s);
            if set.is_empty() {
                return Ok((format!("{h}\n"), true));
            }
            let sigma = assignment(set)?;
            let subs = instantiate_hs(&h, &sigma, &doc.theory, mode(*literal), bound)?;
            let out: String = subs.iter().map(|t| r.subst(t) + "\n").collect();
            Ok((out, true))
        }
        Command::Verify { file, schema, n, m, ranges, literal } => {
            let doc = load(file)?;
            let (_, s) = pick_schema(&doc, schema)?;
            let main = doc.main()?.clone();
            let mut rs = Vec::new();
            if let Some(n) = n {
                rs.push((name("n"), range(n)?));
            }
            if let Some(m) = m {
                rs.push((name("m"), range(m)?));
            }
            for x in ranges {
                let (k, v) = x.split_once('=').ok_or_else(|| Fail::Usage(format!("`{x}` is not `k=a..b`")))?;
                rs.push((name(k.trim()), range(v)?));
            }
            let h = extract(s);
            let results = verify_grid(&main, &h, &grid(&rs), &doc.theory, mode(*literal), bound);
            let mut out = String::new();
            let mut ok = true;
            for (sigma, v) in results {
                let at = rs.iter().map(|(k, _)| format!("{k}={}", sigma[k])).collect::<Vec<_>>().join(" ");
                match v {
                    Ok(Verdict::Unsat) => writeln!(out, "{at}: unsat").unwrap(),
                    Ok(Verdict::Sat(model)) => {
                        ok = false;
                        let m: Vec<String> =
                            model.iter().map(|(a, b)| format!("{}={}", r.formula(a), if *b { 1 } else { 0 })).collect();
                        writeln!(out, "{at}: sat {}", m.join(" ")).unwrap();
                    }
                    Err(e) => {
                        ok = false;
                        writeln!(out, "{at}: error: {e}").unwrap();
                    }
                }
            }
            Ok((out, ok))
        }
    }
}

fn named_expr(doc: &Document, src: &str) -> Result<Expr, Fail> {
    if let Some(f) = doc.formula(src) {
        return Ok(Expr::Formula(f.clone()));
    }
    if let Some(t) = doc.term(src) {
        return Ok(Expr::Term(t.clone()));
    }
    Ok(parse_expr(src, &doc.scope())?)
}
