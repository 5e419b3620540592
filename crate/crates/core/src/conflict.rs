//! The conflict graph: one vertex per row, one edge per FD-violating pair.
//!
//! A subset of rows satisfies the FD set exactly when its ids form an
//! independent set of this graph, which is what every repair algorithm in
//! this crate ultimately exploits.

use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::fd::FdSet;
use crate::relation::Relation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    n: usize,
    // (min-id, max-id) lexicographic order.
    edges: Vec<(usize, usize)>,
    adjacency: HashMap<usize, BTreeSet<usize>>,
}

impl ConflictGraph {
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Edges in (min-id, max-id) lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, id: usize) -> Option<&BTreeSet<usize>> {
        self.adjacency.get(&id)
    }

    pub fn degree(&self, id: usize) -> usize {
        self.adjacency.get(&id).map_or(0, BTreeSet::len)
    }

    /// True iff no edge has both endpoints in `ids`.
    pub fn is_independent(&self, ids: &BTreeSet<usize>) -> bool {
        self.edges
            .iter()
            .all(|(a, b)| !(ids.contains(a) && ids.contains(b)))
    }
}

/// Builds the conflict graph of a relation: rows i and j are connected iff
/// they jointly violate some FD (agree on its LHS, disagree on its RHS).
///
/// Rows are grouped by LHS projection per FD, so only rows sharing a key are
/// compared; within a group, rows with different RHS values conflict.
pub fn build_conflict_graph(relation: &Relation, fds: &FdSet) -> Result<ConflictGraph> {
    fds.validate_for(relation.schema())?;

    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    for fd in fds.fds() {
        let mut groups: HashMap<Vec<&str>, Vec<(usize, &str)>> = HashMap::new();
        for (id, row) in relation.rows() {
            let key: Vec<&str> = fd.lhs().iter().map(|&a| row[a].as_str()).collect();
            groups
                .entry(key)
                .or_default()
                .push((id, row[fd.rhs()].as_str()));
        }
        for members in groups.values() {
            for (i, (id_a, rhs_a)) in members.iter().enumerate() {
                for (id_b, rhs_b) in &members[i + 1..] {
                    if rhs_a != rhs_b {
                        let (lo, hi) = if id_a < id_b {
                            (*id_a, *id_b)
                        } else {
                            (*id_b, *id_a)
                        };
                        edge_set.insert((lo, hi));
                    }
                }
            }
        }
    }

    let mut adjacency: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for &(a, b) in &edge_set {
        adjacency.entry(a).or_default().insert(b);
        adjacency.entry(b).or_default().insert(a);
    }
    Ok(ConflictGraph {
        n: relation.len(),
        edges: edge_set.into_iter().collect(),
        adjacency,
    })
}
