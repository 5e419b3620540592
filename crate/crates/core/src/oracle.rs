//! Desk-scale brute-force oracles: exhaustive subset enumeration for optimal
//! repairs and for the frontier of repair count vectors. Used as the ground
//! truth throughout the test suites; guarded to at most 20 rows.

use crate::conflict::build_conflict_graph;
use crate::error::{Error, Result};
use crate::fd::FdSet;
use crate::rc::{counts_satisfy_rc, CountVector, ReprConstraint};
use crate::relation::Relation;

const GUARD: usize = 20;

struct SubsetScan {
    n: usize,
    conflict_masks: Vec<u32>,
    sensitive: Vec<String>,
    ids: Vec<usize>,
}

fn prepare(relation: &Relation, fds: &FdSet) -> Result<SubsetScan> {
    let n = relation.len();
    if n > GUARD {
        return Err(Error::OracleGuard(n));
    }
    let graph = build_conflict_graph(relation, fds)?;
    let ids: Vec<usize> = relation.row_ids().to_vec();
    let position_of = |id: usize| ids.binary_search(&id).expect("edge id belongs to relation");
    let mut conflict_masks = vec![0u32; n];
    for &(a, b) in graph.edges() {
        let (pa, pb) = (position_of(a), position_of(b));
        conflict_masks[pa] |= 1 << pb;
        conflict_masks[pb] |= 1 << pa;
    }
    let sensitive = (0..n)
        .map(|p| relation.sensitive_value_at(p).to_string())
        .collect();
    Ok(SubsetScan {
        n,
        conflict_masks,
        sensitive,
        ids,
    })
}

impl SubsetScan {
    fn is_independent(&self, mask: u32) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            if self.conflict_masks[p] & mask != 0 {
                return false;
            }
            rest &= rest - 1;
        }
        true
    }

    fn counts(&self, mask: u32) -> CountVector {
        let mut out = CountVector::default();
        let mut rest = mask;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            out.add(&self.sensitive[p], 1);
            rest &= rest - 1;
        }
        out
    }

    fn ids_of(&self, mask: u32) -> Vec<usize> {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        let mut rest = mask;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            out.push(self.ids[p]);
            rest &= rest - 1;
        }
        out
    }
}

/// Enumerates all subsets, keeps those satisfying the FD set and the
/// constraint, and returns a maximum one (ties: lexicographically smallest
/// row-id set). Errors above 20 rows.
pub fn brute_force_optimal(
    relation: &Relation,
    fds: &FdSet,
    rc: &ReprConstraint,
) -> Result<Relation> {
    let scan = prepare(relation, fds)?;
    let mut best: Option<(usize, Vec<usize>)> = None;
    for mask in 0..(1u64 << scan.n) as u64 {
        let mask = mask as u32;
        if !scan.is_independent(mask) {
            continue;
        }
        if !counts_satisfy_rc(&scan.counts(mask), rc) {
            continue;
        }
        let size = mask.count_ones() as usize;
        let better = match &best {
            None => true,
            Some((best_size, best_ids)) => {
                size > *best_size || (size == *best_size && scan.ids_of(mask) < *best_ids)
            }
        };
        if better {
            best = Some((size, scan.ids_of(mask)));
        }
    }
    let (_, ids) = best.expect("the empty subset always qualifies");
    relation.project_rows(&ids)
}

/// The frontier of count vectors over all subsets satisfying the FD set:
/// every vector not dominated by another, deduplicated, in ascending key
/// order. This is the independent reference for the DP candidate sets.
pub fn brute_force_candidate_frontier(
    relation: &Relation,
    fds: &FdSet,
) -> Result<Vec<CountVector>> {
    let scan = prepare(relation, fds)?;
    let mut vectors: Vec<CountVector> = Vec::new();
    for mask in 0..(1u64 << scan.n) as u64 {
        let mask = mask as u32;
        if scan.is_independent(mask) {
            let counts = scan.counts(mask);
            if !vectors.contains(&counts) {
                vectors.push(counts);
            }
        }
    }
    let frontier: Vec<CountVector> = vectors
        .iter()
        .filter(|v| !vectors.iter().any(|other| dominates(other, v)))
        .cloned()
        .collect();
    let mut out = frontier;
    out.sort_by_key(key);
    Ok(out)
}

fn key(counts: &CountVector) -> Vec<(String, u64)> {
    counts.entries().map(|(v, c)| (v.to_string(), c)).collect()
}

fn dominates(a: &CountVector, b: &CountVector) -> bool {
    b.entries().all(|(value, c)| a.count(value) >= c) && a.total() > b.total()
}
