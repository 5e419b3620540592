//! The two study metrics: deletion overhead (the price of representation,
//! measured in extra deletions over the plain optimal subset repair) and
//! repair quality (retained tuples relative to the exact optimum). Both lean
//! on the exact solver, so they are only computable while branch-and-bound
//! stays within its node budget.

use crate::error::{Error, Result};
use crate::fd::{satisfies_fdset, FdSet};
use crate::ilp::{build_rs_ilp, solve_ilp, solve_lp, IlpModel, SolveStatus};
use crate::rc::{satisfies_rc, ReprConstraint};
use crate::relation::Relation;

fn exact_optimum(model: &IlpModel, node_cap: u64) -> Result<u64> {
    let solution = solve_ilp(model, node_cap);
    match solution.status {
        SolveStatus::Optimal => Ok(solution.objective),
        SolveStatus::CapExceeded => {
            let bound = solve_lp::<f64>(model)?.objective;
            Err(Error::NodeCapExceeded {
                cap: node_cap,
                incumbent_size: solution.chosen.len(),
                bound,
            })
        }
        SolveStatus::Infeasible => Err(Error::LpInfeasible),
    }
}

/// Raw deletion counts of the two optima. The ratio is reported alongside
/// the pair because the constrained-only corner (zero unconstrained
/// deletions but positive constrained deletions) has no finite ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeletionOverhead {
    pub s_repair_deletions: u64,
    pub rs_repair_deletions: u64,
}

impl DeletionOverhead {
    /// The overhead as an exact fraction. Zero deletions on both sides is
    /// defined as 1 (no representation cost); `None` means the denominator
    /// is zero while the numerator is not.
    pub fn ratio(&self) -> Option<(u64, u64)> {
        match (self.s_repair_deletions, self.rs_repair_deletions) {
            (0, 0) => Some((1, 1)),
            (0, _) => None,
            (s, rs) => {
                let g = num_integer::gcd(rs, s);
                Some((rs / g, s / g))
            }
        }
    }

    pub fn ratio_f64(&self) -> Option<f64> {
        self.ratio().map(|(num, den)| num as f64 / den as f64)
    }
}

/// Computes both optima exactly and reports their deletion counts. The
/// ratio is at least one whenever the unconstrained optimum deletes
/// anything, since every constrained repair is also a subset repair.
pub fn deletion_overhead(
    relation: &Relation,
    fds: &FdSet,
    rc: &ReprConstraint,
    node_cap: u64,
) -> Result<DeletionOverhead> {
    let n = relation.len() as u64;
    let s_model = build_rs_ilp(relation, fds, &ReprConstraint::empty())?;
    let s_optimum = exact_optimum(&s_model, node_cap)?;
    let rs_model = build_rs_ilp(relation, fds, rc)?;
    let rs_optimum = exact_optimum(&rs_model, node_cap)?;
    Ok(DeletionOverhead {
        s_repair_deletions: n - s_optimum,
        rs_repair_deletions: n - rs_optimum,
    })
}

/// Retained-tuple counts of a repair and of the exact optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepairQuality {
    pub retained: u64,
    pub optimum: u64,
}

impl RepairQuality {
    /// In [0, 1]; an optimum of zero forces an empty repair, scored 1.
    pub fn ratio_f64(&self) -> f64 {
        if self.optimum == 0 {
            1.0
        } else {
            self.retained as f64 / self.optimum as f64
        }
    }
}

/// Scores a repaired relation against the exact optimum. The input must
/// itself be a valid repair of `(fds, rc)`.
pub fn repair_quality(
    relation: &Relation,
    repaired: &Relation,
    fds: &FdSet,
    rc: &ReprConstraint,
    node_cap: u64,
) -> Result<RepairQuality> {
    if !satisfies_fdset(repaired, fds)? {
        return Err(Error::InvalidRepair("the FD set".into()));
    }
    if !satisfies_rc(repaired, rc) {
        return Err(Error::InvalidRepair("the representation constraint".into()));
    }
    let model = build_rs_ilp(relation, fds, rc)?;
    let optimum = exact_optimum(&model, node_cap)?;
    Ok(RepairQuality {
        retained: repaired.len() as u64,
        optimum,
    })
}
