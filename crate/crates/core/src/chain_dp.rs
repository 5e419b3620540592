//! The exact polynomial-time repair algorithm for LHS-chain FD sets.
//!
//! The dynamic program maintains a *candidate set*: a frontier of subset
//! repairs keyed by their sensitive-value count vectors, free of dominated
//! and duplicate vectors. The recursion peels the FD set apart with
//! consensus and common-LHS steps, combining per-partition frontiers; the
//! top level applies the maximal-subset extraction to each surviving
//! candidate and keeps a largest result.
//!
//! Sub-reductions over disjoint partitions are independent and could run
//! concurrently; merging into a shared frontier requires exclusive access.
//! The implementation here runs them sequentially in a fixed order, which
//! also pins the tie-breaking.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fd::{Fd, FdSet};
use crate::rc::{count_vector, postclean, postclean_size_only, CountVector, ReprConstraint};
use crate::relation::Relation;
use crate::structure::{
    apply_simplification, detect_common_lhs, detect_consensus, is_lhs_chain, Simplification,
};

/// True iff the two vectors agree on every sensitive value.
pub fn repr_equivalent(a: &CountVector, b: &CountVector) -> bool {
    a == b
}

/// True iff `a >= b` componentwise with strict inequality somewhere.
pub fn repr_dominates(a: &CountVector, b: &CountVector) -> bool {
    b.entries().all(|(value, count)| a.count(value) >= count) && a.total() > b.total()
}

/// A subset repair of the working relation, tracked as original row ids plus
/// its cached count vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    rows: Vec<usize>,
    counts: CountVector,
}

impl Candidate {
    /// Caller contract: `counts` tallies the sensitive values of `rows`.
    pub fn new(rows: Vec<usize>, counts: CountVector) -> Self {
        let mut rows = rows;
        rows.sort_unstable();
        rows.dedup();
        Candidate { rows, counts }
    }

    fn from_relation(relation: &Relation) -> Self {
        Candidate {
            rows: relation.row_ids().to_vec(),
            counts: count_vector(relation),
        }
    }

    /// Disjoint union: row-id sets from different partitions never overlap.
    fn union(&self, other: &Candidate) -> Candidate {
        let mut rows = Vec::with_capacity(self.rows.len() + other.rows.len());
        let (mut i, mut j) = (0, 0);
        while i < self.rows.len() && j < other.rows.len() {
            if self.rows[i] < other.rows[j] {
                rows.push(self.rows[i]);
                i += 1;
            } else {
                rows.push(other.rows[j]);
                j += 1;
            }
        }
        rows.extend_from_slice(&self.rows[i..]);
        rows.extend_from_slice(&other.rows[j..]);
        Candidate {
            rows,
            counts: self.counts.merged(&other.counts),
        }
    }

    /// Sorted original row ids.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn counts(&self) -> &CountVector {
        &self.counts
    }
}

type CountKey = Vec<(String, u64)>;

fn count_key(counts: &CountVector) -> CountKey {
    counts.entries().map(|(v, c)| (v.to_string(), c)).collect()
}

/// Tuning knobs for the dynamic program.
#[derive(Debug, Clone)]
pub struct DpOptions {
    /// Hard cap on the candidate frontier; exceeding it aborts with a
    /// diagnostic instead of exhausting memory.
    pub max_frontier: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            max_frontier: 1_000_000,
        }
    }
}

/// A frontier of candidates indexed by count vector: no two entries are
/// representatively equivalent, none dominates another.
#[derive(Debug, Clone, Default)]
pub struct CandidateSet {
    entries: BTreeMap<CountKey, Candidate>,
}

impl CandidateSet {
    pub fn new() -> Self {
        CandidateSet::default()
    }

    fn singleton(candidate: Candidate) -> Self {
        let mut set = CandidateSet::new();
        set.entries.insert(count_key(&candidate.counts), candidate);
        set
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Candidates in ascending count-vector order.
    pub fn iter(&self) -> impl Iterator<Item = &Candidate> {
        self.entries.values()
    }

    /// Inserts a candidate, maintaining the frontier invariants. If an entry
    /// dominates or equals the newcomer the set is unchanged (the incumbent
    /// is kept on equivalence); otherwise every entry the newcomer dominates
    /// is removed and the newcomer inserted.
    pub fn repr_insert(&mut self, candidate: Candidate, cap: usize) -> Result<()> {
        let key = count_key(&candidate.counts);
        if self.entries.contains_key(&key) {
            return Ok(());
        }
        for entry in self.entries.values() {
            if repr_dominates(&entry.counts, &candidate.counts) {
                return Ok(());
            }
        }
        self.entries
            .retain(|_, entry| !repr_dominates(&candidate.counts, &entry.counts));
        self.entries.insert(key, candidate);
        if self.entries.len() > cap {
            return Err(Error::FrontierCapExceeded { cap });
        }
        Ok(())
    }
}

/// Splits the relation by the values of one attribute, partitions in
/// first-occurrence order.
fn partition_by(relation: &Relation, attribute: usize) -> Vec<Relation> {
    let mut order: Vec<&str> = Vec::new();
    let mut ids: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (id, row) in relation.rows() {
        let value = row[attribute].as_str();
        if !ids.contains_key(value) {
            order.push(value);
        }
        ids.entry(value).or_default().push(id);
    }
    order
        .into_iter()
        .map(|value| {
            relation
                .project_rows(&ids[value])
                .expect("partition ids come from the relation")
        })
        .collect()
}

/// Computes the candidate set of `(relation, fds)` for an LHS-chain FD set.
pub fn reduce(relation: &Relation, fds: &FdSet, options: &DpOptions) -> Result<CandidateSet> {
    if !is_lhs_chain(fds) {
        return Err(Error::NotAChain);
    }
    fds.validate_for(relation.schema())?;
    reduce_inner(relation, fds, options)
}

fn reduce_inner(relation: &Relation, fds: &FdSet, options: &DpOptions) -> Result<CandidateSet> {
    if fds.is_empty() || relation.is_empty() {
        // The whole working relation dominates every other subset repair.
        return Ok(CandidateSet::singleton(Candidate::from_relation(relation)));
    }
    if let Some(fd) = detect_consensus(fds) {
        return consensus_reduction_inner(relation, fds, &fd, options);
    }
    let attribute = detect_common_lhs(fds).ok_or(Error::NotAChain)?;
    common_lhs_reduction_inner(relation, fds, attribute, options)
}

/// Reduction step for a consensus FD: recurse per RHS value and merge the
/// per-partition frontiers.
pub fn consensus_reduction(
    relation: &Relation,
    fds: &FdSet,
    fd: &Fd,
    options: &DpOptions,
) -> Result<CandidateSet> {
    if !fd.is_consensus() || !fds.fds().contains(fd) {
        return Err(Error::InvalidSimplification(
            "not a consensus FD of this set".into(),
        ));
    }
    consensus_reduction_inner(relation, fds, fd, options)
}

fn consensus_reduction_inner(
    relation: &Relation,
    fds: &FdSet,
    fd: &Fd,
    options: &DpOptions,
) -> Result<CandidateSet> {
    let remaining = fds.without(fd);
    let mut merged = CandidateSet::new();
    for part in partition_by(relation, fd.rhs()) {
        let sub = reduce_inner(&part, &remaining, options)?;
        for candidate in sub.iter() {
            merged.repr_insert(candidate.clone(), options.max_frontier)?;
        }
    }
    if merged.is_empty() {
        // No partitions: only the empty repair exists.
        merged.repr_insert(
            Candidate::from_relation(&Relation::empty(relation.schema().clone())),
            options.max_frontier,
        )?;
    }
    Ok(merged)
}

/// Reduction step for a common LHS attribute: stage-wise over its values,
/// cross-combining the accumulated frontier with each partition's frontier.
pub fn common_lhs_reduction(
    relation: &Relation,
    fds: &FdSet,
    attribute: usize,
    options: &DpOptions,
) -> Result<CandidateSet> {
    if fds.is_empty() || !fds.fds().iter().all(|fd| fd.lhs().contains(&attribute)) {
        return Err(Error::InvalidSimplification(format!(
            "attribute {attribute} is not a common LHS"
        )));
    }
    common_lhs_reduction_inner(relation, fds, attribute, options)
}

fn common_lhs_reduction_inner(
    relation: &Relation,
    fds: &FdSet,
    attribute: usize,
    options: &DpOptions,
) -> Result<CandidateSet> {
    let reduced_fds = apply_simplification(fds, &Simplification::CommonLhs(attribute))
        .expect("common LHS was validated");
    let empty = Candidate {
        rows: Vec::new(),
        counts: CountVector::default(),
    };
    let mut accumulated = CandidateSet::singleton(empty);
    for part in partition_by(relation, attribute) {
        let sub = reduce_inner(&part, &reduced_fds, options)?;
        let mut next = CandidateSet::new();
        for prior in accumulated.iter() {
            for candidate in sub.iter() {
                next.repr_insert(prior.union(candidate), options.max_frontier)?;
            }
        }
        accumulated = next;
    }
    Ok(accumulated)
}

/// Optimal repair for an LHS-chain FD set under a representation constraint,
/// with default options.
pub fn lhschain_dp(relation: &Relation, fds: &FdSet, rc: &ReprConstraint) -> Result<Relation> {
    lhschain_dp_with(relation, fds, rc, &DpOptions::default())
}

/// Runs the dynamic program, applies the maximal-subset extraction to every
/// candidate, and returns a largest result (ties: lexicographically smallest
/// row-id set).
pub fn lhschain_dp_with(
    relation: &Relation,
    fds: &FdSet,
    rc: &ReprConstraint,
    options: &DpOptions,
) -> Result<Relation> {
    let candidates = reduce(relation, fds, options)?;
    let best_size = candidates
        .iter()
        .map(|c| postclean_size_only(c.counts(), rc))
        .max()
        .expect("reduce always yields at least one candidate");

    let mut best: Option<Relation> = None;
    for candidate in candidates.iter() {
        if postclean_size_only(candidate.counts(), rc) != best_size {
            continue;
        }
        let materialized = relation
            .project_rows(candidate.rows())
            .expect("candidate rows come from the relation");
        let cleaned = postclean(&materialized, rc);
        let better = match &best {
            None => true,
            Some(current) => cleaned.row_ids() < current.row_ids(),
        };
        if better {
            best = Some(cleaned);
        }
    }
    Ok(best.expect("at least one candidate was scored"))
}
