//! Text formats for FD sets and representation constraints.
//!
//! FD files: one statement per line or `;`-separated, `LHS -> RHS` with
//! comma-separated attribute names on both sides (an empty LHS denotes a
//! consensus FD); a multi-attribute RHS is split into one FD per attribute;
//! `#` starts a comment.
//!
//! RC files: one bound per line, `value >= num/den`. The `value = num/den`
//! form also yields a lower bound but requires the whole file to sum to
//! exactly one, since only an exact constraint can force equality.

use anyhow::{anyhow, bail, Context, Result};
use rsrepair_core::fd::{Fd, FdSet};
use rsrepair_core::rc::{Proportion, ReprConstraint};
use rsrepair_core::relation::Schema;

/// An FD over attribute names, before binding to a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFd {
    pub lhs: Vec<String>,
    pub rhs: String,
}

impl std::fmt::Display for NamedFd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} -> {}", self.lhs.join(","), self.rhs)
    }
}

pub fn parse_fd_dsl(text: &str) -> Result<Vec<NamedFd>> {
    let mut out = Vec::new();
    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        for statement in line.split(';') {
            let statement = statement.trim();
            if statement.is_empty() {
                continue;
            }
            let mut sides = statement.splitn(2, "->");
            let lhs_text = sides.next().unwrap_or("").trim();
            let rhs_text = sides
                .next()
                .ok_or_else(|| anyhow!("line {line_no}: expected `LHS -> RHS` in {statement:?}"))?
                .trim();
            if rhs_text.contains("->") {
                bail!("line {line_no}: more than one `->` in {statement:?}");
            }
            let lhs: Vec<String> = split_names(lhs_text)
                .with_context(|| format!("line {line_no}: bad LHS in {statement:?}"))?;
            let rhs_attrs = split_names(rhs_text)
                .with_context(|| format!("line {line_no}: bad RHS in {statement:?}"))?;
            if rhs_attrs.is_empty() {
                bail!("line {line_no}: empty RHS in {statement:?}");
            }
            for rhs in rhs_attrs {
                if lhs.contains(&rhs) {
                    bail!("line {line_no}: trivial FD, {rhs:?} appears on both sides");
                }
                out.push(NamedFd {
                    lhs: lhs.clone(),
                    rhs,
                });
            }
        }
    }
    Ok(out)
}

fn split_names(text: &str) -> Result<Vec<String>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|name| {
            let name = name.trim();
            if name.is_empty() {
                bail!("empty attribute name");
            }
            Ok(name.to_string())
        })
        .collect()
}

/// Resolves attribute names against a schema.
pub fn bind_fds(named: &[NamedFd], schema: &Schema) -> Result<FdSet> {
    let resolve = |name: &str| {
        schema
            .index_of(name)
            .ok_or_else(|| anyhow!("unknown attribute {name:?} in FD file"))
    };
    let mut fds = Vec::with_capacity(named.len());
    for fd in named {
        let lhs: Vec<usize> = fd
            .lhs
            .iter()
            .map(|name| resolve(name))
            .collect::<Result<_>>()?;
        let rhs = resolve(&fd.rhs)?;
        fds.push(Fd::new(lhs, rhs)?);
    }
    Ok(FdSet::new(fds))
}

/// A synthetic schema over exactly the attributes mentioned in the FDs, in
/// first-appearance order. Used by `classify`, which has no relation.
pub fn schema_from_fd_names(named: &[NamedFd]) -> Result<Schema> {
    let mut names: Vec<String> = Vec::new();
    for fd in named {
        for name in fd.lhs.iter().chain([&fd.rhs]) {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    if names.is_empty() {
        names.push("A".to_string());
    }
    Ok(Schema::new(names, 0)?)
}

fn parse_proportion(text: &str) -> Result<Proportion> {
    let mut parts = text.splitn(2, '/');
    let num = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse::<u64>()
        .with_context(|| format!("bad numerator in {text:?}"))?;
    let den = parts
        .next()
        .ok_or_else(|| anyhow!("expected num/den, got {text:?}"))?
        .trim()
        .parse::<u64>()
        .with_context(|| format!("bad denominator in {text:?}"))?;
    Ok(Proportion::new(num, den)?)
}

pub fn parse_rc_dsl(text: &str) -> Result<ReprConstraint> {
    let mut bounds: Vec<(String, Proportion)> = Vec::new();
    let mut requires_exact = false;
    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (value_text, fraction_text, exact) = match line.split_once(">=") {
            Some((value, fraction)) => (value, fraction, false),
            None => match line.split_once('=') {
                Some((value, fraction)) => (value, fraction, true),
                None => bail!("line {line_no}: expected `value >= num/den`, got {line:?}"),
            },
        };
        let value = value_text.trim();
        if value.is_empty() {
            bail!("line {line_no}: empty value");
        }
        let proportion = parse_proportion(fraction_text.trim())
            .with_context(|| format!("line {line_no}"))?;
        requires_exact |= exact;
        bounds.push((value.to_string(), proportion));
    }
    let rc = ReprConstraint::new(bounds)?;
    if requires_exact && !rc.is_exact() {
        bail!("`=` bounds require the proportions to sum to exactly 1");
    }
    Ok(rc)
}
