use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kernel_formulas::Formula;

/// Outcome of the ground satisfiability check.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Unsat,
    /// A satisfying assignment to the atoms.
    Sat(Vec<(Formula, bool)>),
}

impl Verdict {
    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }
}

type Lit = i32;

struct Cnf {
    atoms: BTreeMap<Formula, i32>,
    clauses: Vec<Vec<Lit>>,
    next: i32,
}

impl Cnf {
    fn fresh(&mut self) -> i32 {
        self.next += 1;
        self.next
    }

    /// Literal equivalent to `f`, adding defining clauses.
    fn encode(&mut self, f: &Formula) -> Result<Lit> {
        Ok(match f {
            Formula::Atom(..) => {
                if let Some(&v) = self.atoms.get(f) {
                    v
                } else {
                    let v = self.fresh();
                    self.atoms.insert(f.clone(), v);
                    v
                }
            }
            Formula::Not(a) => -self.encode(a)?,
            Formula::And(a, b) => {
                let (x, y) = (self.encode(a)?, self.encode(b)?);
                let t = self.fresh();
                self.clauses.extend([vec![-t, x], vec![-t, y], vec![t, -x, -y]]);
                t
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.encode(a)?, self.encode(b)?);
                let t = self.fresh();
                self.clauses.extend([vec![-t, x, y], vec![t, -x], vec![t, -y]]);
                t
            }
            Formula::Hat(_) | Formula::Var(_) => return Err(Error::NotGround(f.to_string())),
        })
    }
}

fn value(assign: &[i8], l: Lit) -> i8 {
    let v = assign[l.unsigned_abs() as usize];
    if l > 0 {
        v
    } else {
        -v
    }
}

fn dpll(clauses: &[Vec<Lit>], assign: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        for c in clauses {
            let mut open = None;
            let mut n_open = 0;
            let mut sat = false;
            for &l in c {
                match value(assign, l) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        n_open += 1;
                        open = Some(l);
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            if n_open == 0 {
                for v in trail {
                    assign[v] = 0;
                }
                return false;
            }
            if n_open == 1 {
                unit = open;
                break;
            }
        }
        match unit {
            Some(l) => {
                let v = l.unsigned_abs() as usize;
                assign[v] = if l > 0 { 1 } else { -1 };
                trail.push(v);
            }
            None => break,
        }
    }
    let Some(v) = (1..assign.len()).find(|&v| assign[v] == 0) else {
        return true;
    };
    for b in [1i8, -1] {
        assign[v] = b;
        if dpll(clauses, assign) {
            return true;
        }
    }
    assign[v] = 0;
    for v in trail {
        assign[v] = 0;
    }
    false
}

/// Decides the conjunction of quantifier-free formulas, atoms read as
/// propositional letters.
pub fn ground_unsat(fs: &[Formula]) -> Result<Verdict> {
    let mut cnf = Cnf { atoms: BTreeMap::new(), clauses: Vec::new(), next: 0 };
    for f in fs {
        let l = cnf.encode(f)?;
        cnf.clauses.push(vec![l]);
    }
    let mut assign = vec![0i8; cnf.next as usize + 1];
    if !dpll(&cnf.clauses, &mut assign) {
        return Ok(Verdict::Unsat);
    }
    Ok(Verdict::Sat(cnf.atoms.into_iter().map(|(a, v)| (a, assign[v as usize] >= 0)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_terms::{name, IotaTerm};

    fn pa(c: &str) -> Formula {
        Formula::atom("P", vec![IotaTerm::constant(name(c))])
    }

    #[test]
    fn contradiction() {
        let f = Formula::and(pa("a"), Formula::not(pa("a")));
        assert_eq!(ground_unsat(&[f]).unwrap(), Verdict::Unsat);
    }

    #[test]
    fn disjunction_has_model() {
        let f = Formula::or(pa("a"), Formula::atom("Q", vec![IotaTerm::constant(name("b"))]));
        let Verdict::Sat(m) = ground_unsat(&[f.clone()]).unwrap() else { panic!() };
        let holds = m.iter().any(|(_, v)| *v);
        assert!(holds);
    }

    #[test]
    fn empty_set_is_sat() {
        assert!(!ground_unsat(&[]).unwrap().is_unsat());
    }
}
