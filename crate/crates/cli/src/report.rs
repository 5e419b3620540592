//! Per-run reports. Validity flags are always recomputed from the output
//! relation, never trusted from the algorithm.

use std::time::Instant;

use serde::Serialize;

use rsrepair_core::fd::{satisfies_fdset, FdSet};
use rsrepair_core::heuristics::{run_algorithm, AlgorithmChoice};
use rsrepair_core::rc::{satisfies_rc, ReprConstraint};
use rsrepair_core::relation::Relation;
use rsrepair_core::Result;

#[derive(Debug, Clone, Serialize)]
pub struct RepairReport {
    pub algorithm: String,
    pub input_size: usize,
    pub output_size: usize,
    pub deleted: usize,
    pub satisfies_fds: bool,
    pub satisfies_rc: bool,
    /// Wall-clock runtime; omitted from single-run stats files so identical
    /// runs stay byte-identical, populated in bench output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    pub status: String,
}

/// Runs an algorithm and builds its report; the timing is returned so the
/// caller decides whether it lands in the serialized report.
pub fn execute(
    choice: AlgorithmChoice,
    relation: &Relation,
    fds: &FdSet,
    rc: &ReprConstraint,
    node_cap: u64,
) -> Result<(Relation, RepairReport, u64)> {
    let start = Instant::now();
    let output = run_algorithm(choice, relation, fds, rc, node_cap)?;
    let runtime_ms = start.elapsed().as_millis() as u64;
    let report = RepairReport {
        algorithm: choice.name().to_string(),
        input_size: relation.len(),
        output_size: output.len(),
        deleted: relation.len() - output.len(),
        satisfies_fds: satisfies_fdset(&output, fds)?,
        satisfies_rc: satisfies_rc(&output, rc),
        runtime_ms: None,
        status: choice.status().to_string(),
    };
    Ok((output, report, runtime_ms))
}
