//! The 3-CNF hardness gadget: a formula maps to a three-attribute relation
//! with one tuple per literal occurrence, a single FD tying variables to
//! their truth value, and an exact one-per-clause representation constraint.
//! The formula is satisfiable exactly when an optimal repair retains at
//! least one tuple per clause.

use crate::error::{Error, Result};
use crate::fd::{Fd, FdSet};
use crate::rc::{Proportion, ReprConstraint};
use crate::relation::{Relation, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    /// 1-based variable index.
    pub variable: u32,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    n_vars: u32,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    /// Clauses of at most three literals over variables `1..=n_vars`.
    pub fn new(n_vars: u32, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::EmptyFormula);
        }
        for clause in &clauses {
            if clause.len() > 3 {
                return Err(Error::Schema(format!(
                    "clause has {} literals, at most 3 allowed",
                    clause.len()
                )));
            }
            for literal in clause {
                if literal.variable == 0 || literal.variable > n_vars {
                    return Err(Error::Schema(format!(
                        "literal references variable {} of {n_vars}",
                        literal.variable
                    )));
                }
            }
        }
        Ok(CnfFormula { n_vars, clauses })
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// Truth-table satisfiability check; the independent oracle for the
    /// gadget equivalence. Guarded to 20 variables.
    pub fn is_satisfiable_brute_force(&self) -> Result<bool> {
        if self.n_vars > 20 {
            return Err(Error::OracleGuard(self.n_vars as usize));
        }
        for assignment in 0u32..(1u32 << self.n_vars) {
            let satisfied = self.clauses.iter().all(|clause| {
                clause.iter().any(|literal| {
                    let value = assignment >> (literal.variable - 1) & 1 == 1;
                    value == literal.positive
                })
            });
            if satisfied {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// The generated instance plus the decision threshold: the formula is
/// satisfiable iff an optimal repair has at least `target` rows.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub relation: Relation,
    pub fds: FdSet,
    pub rc: ReprConstraint,
    pub target: u64,
}

/// Builds the instance: for every occurrence of variable `v_i` in clause
/// `c_j`, one tuple `(v_i, 1, c_j)` if the literal is positive and
/// `(v_i, 0, c_j)` otherwise; the FD forces one truth value per variable
/// and each clause value gets the exact lower bound `1/m`.
pub fn sat_gadget(formula: &CnfFormula) -> Result<GadgetInstance> {
    let m = formula.clauses().len() as u64;
    let schema = Schema::new(vec!["A", "B", "C"], 2)?;
    let mut rows = Vec::new();
    for (index, clause) in formula.clauses().iter().enumerate() {
        let clause_name = format!("c{}", index + 1);
        for literal in clause {
            rows.push(vec![
                format!("v{}", literal.variable),
                if literal.positive { "1" } else { "0" }.to_string(),
                clause_name.clone(),
            ]);
        }
    }
    let relation = Relation::new(schema, rows)?;
    let fds = FdSet::new(vec![Fd::new([0], 1)?]);
    let bounds: Vec<(String, Proportion)> = (1..=m)
        .map(|j| Ok((format!("c{j}"), Proportion::new(1, m)?)))
        .collect::<Result<_>>()?;
    let rc = ReprConstraint::new(bounds)?;
    Ok(GadgetInstance {
        relation,
        fds,
        rc,
        target: m,
    })
}
