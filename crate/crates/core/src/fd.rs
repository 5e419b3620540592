//! Functional dependencies and FD-set semantics.
//!
//! An FD `X -> Y` has a set of attribute indices on the left and a single
//! attribute index on the right (multi-attribute right-hand sides are split
//! before construction). `X` may be empty: such consensus FDs require all
//! retained tuples to share the `Y` value.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::relation::{Relation, Schema};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fd {
    lhs: BTreeSet<usize>,
    rhs: usize,
}

impl Fd {
    pub fn new(lhs: impl IntoIterator<Item = usize>, rhs: usize) -> Result<Self> {
        let lhs: BTreeSet<usize> = lhs.into_iter().collect();
        if lhs.contains(&rhs) {
            return Err(Error::TrivialFd);
        }
        Ok(Fd { lhs, rhs })
    }

    pub fn lhs(&self) -> &BTreeSet<usize> {
        &self.lhs
    }

    pub fn rhs(&self) -> usize {
        self.rhs
    }

    pub fn is_consensus(&self) -> bool {
        self.lhs.is_empty()
    }

    pub fn max_attribute(&self) -> usize {
        self.lhs.iter().copied().max().map_or(self.rhs, |m| m.max(self.rhs))
    }
}

/// A deduplicated list of non-trivial single-RHS FDs. Order is preserved and
/// used for deterministic tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FdSet {
    fds: Vec<Fd>,
}

impl FdSet {
    pub fn new(fds: Vec<Fd>) -> Self {
        let mut out: Vec<Fd> = Vec::with_capacity(fds.len());
        for fd in fds {
            if !out.contains(&fd) {
                out.push(fd);
            }
        }
        FdSet { fds: out }
    }

    pub fn empty() -> Self {
        FdSet::default()
    }

    pub fn fds(&self) -> &[Fd] {
        &self.fds
    }

    pub fn len(&self) -> usize {
        self.fds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fds.is_empty()
    }

    /// Removes one FD, preserving order of the rest.
    pub fn without(&self, fd: &Fd) -> FdSet {
        FdSet {
            fds: self.fds.iter().filter(|f| *f != fd).cloned().collect(),
        }
    }

    pub fn validate_for(&self, schema: &Schema) -> Result<()> {
        for fd in &self.fds {
            for &a in fd.lhs() {
                schema.check_attribute(a)?;
            }
            schema.check_attribute(fd.rhs())?;
        }
        Ok(())
    }
}

/// Closure of an attribute set under an FD set: the least fixed point that
/// contains `start` and adds `Y` for every FD `L -> Y` with `L` contained in
/// the current set.
pub fn closure(start: &BTreeSet<usize>, fds: &FdSet) -> BTreeSet<usize> {
    let mut out = start.clone();
    loop {
        let mut grew = false;
        for fd in fds.fds() {
            if !out.contains(&fd.rhs()) && fd.lhs().is_subset(&out) {
                out.insert(fd.rhs());
                grew = true;
            }
        }
        if !grew {
            return out;
        }
    }
}

/// True iff every pair of tuples agreeing on the LHS also agrees on the RHS.
///
/// Rows are grouped by their LHS projection; a group violates the FD exactly
/// when it holds more than one RHS value.
pub fn satisfies_fd(relation: &Relation, fd: &Fd) -> Result<bool> {
    let schema = relation.schema();
    for &a in fd.lhs() {
        schema.check_attribute(a)?;
    }
    schema.check_attribute(fd.rhs())?;

    let mut rhs_by_key: HashMap<Vec<&str>, &str> = HashMap::new();
    for (_, row) in relation.rows() {
        let key: Vec<&str> = fd.lhs().iter().map(|&a| row[a].as_str()).collect();
        let rhs = row[fd.rhs()].as_str();
        match rhs_by_key.get(&key) {
            Some(&seen) if seen != rhs => return Ok(false),
            Some(_) => {}
            None => {
                rhs_by_key.insert(key, rhs);
            }
        }
    }
    Ok(true)
}

pub fn satisfies_fdset(relation: &Relation, fds: &FdSet) -> Result<bool> {
    for fd in fds.fds() {
        if !satisfies_fd(relation, fd)? {
            return Ok(false);
        }
    }
    Ok(true)
}
