//! DIMACS CNF input for the hardness-gadget generator.

use anyhow::{anyhow, bail, Context, Result};
use rsrepair_core::gadget::{CnfFormula, Literal};

/// Parses DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then whitespace-separated literals with `0` terminating each
/// clause (clauses may span lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut n_vars: Option<u32> = None;
    let mut declared_clauses: Option<usize> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();

    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let mut parts = rest.split_whitespace();
            if parts.next() != Some("cnf") {
                bail!("expected `p cnf <vars> <clauses>`, got {line:?}");
            }
            n_vars = Some(
                parts
                    .next()
                    .ok_or_else(|| anyhow!("missing variable count in {line:?}"))?
                    .parse()
                    .context("variable count")?,
            );
            declared_clauses = Some(
                parts
                    .next()
                    .ok_or_else(|| anyhow!("missing clause count in {line:?}"))?
                    .parse()
                    .context("clause count")?,
            );
            continue;
        }
        if n_vars.is_none() {
            bail!("literals before the `p cnf` header: {line:?}");
        }
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .with_context(|| format!("bad literal {token:?}"))?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(Literal {
                    variable: value.unsigned_abs() as u32,
                    positive: value > 0,
                });
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let n_vars = n_vars.ok_or_else(|| anyhow!("missing `p cnf` header"))?;
    if let Some(declared) = declared_clauses {
        if declared != clauses.len() {
            log::warn!(
                "header declares {declared} clauses, file contains {}",
                clauses.len()
            );
        }
    }
    Ok(CnfFormula::new(n_vars, clauses)?)
}
