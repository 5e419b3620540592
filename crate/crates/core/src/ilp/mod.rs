//! The 0/1 program for representative repairs: one binary variable per row,
//! a conflict constraint per FD-violating pair, and a homogeneous lower-bound
//! row per constrained sensitive value. Solved by the built-in simplex plus
//! depth-first branch-and-bound; emitted in CPLEX LP text for external
//! solvers; rounded by the two LP heuristics.

mod simplex;

use std::fmt::Write as _;

pub use simplex::{DenseLp, SimplexOutcome};

use crate::conflict::build_conflict_graph;
use crate::error::{Error, Result};
use crate::fd::FdSet;
use crate::rc::{postclean, Proportion, ReprConstraint};
use crate::relation::Relation;
use crate::scalar::LpScalar;

/// The representation constraint for one sensitive value, normalized to the
/// homogeneous form `sum_{members} x_i - p * sum_i x_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReprRow {
    pub value: String,
    /// Variable positions whose row carries this sensitive value.
    pub members: Vec<usize>,
    pub proportion: Proportion,
}

/// Variables are positions 0..n-1 into `row_ids`; emission and solutions
/// translate back to original row ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    n_vars: usize,
    row_ids: Vec<usize>,
    /// Conflict pairs as variable positions, (min, max) lexicographic.
    conflicts: Vec<(usize, usize)>,
    /// One row per bound, ascending value order.
    repr_rows: Vec<ReprRow>,
}

impl IlpModel {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    pub fn conflicts(&self) -> &[(usize, usize)] {
        &self.conflicts
    }

    pub fn repr_rows(&self) -> &[ReprRow] {
        &self.repr_rows
    }

    fn conflict_degree(&self) -> Vec<usize> {
        let mut degree = vec![0usize; self.n_vars];
        for &(a, b) in &self.conflicts {
            degree[a] += 1;
            degree[b] += 1;
        }
        degree
    }
}

/// Builds the exact model for `(relation, fds, rc)`.
pub fn build_rs_ilp(relation: &Relation, fds: &FdSet, rc: &ReprConstraint) -> Result<IlpModel> {
    let graph = build_conflict_graph(relation, fds)?;
    let row_ids: Vec<usize> = relation.row_ids().to_vec();
    let position_of = |id: usize| {
        row_ids
            .binary_search(&id)
            .expect("conflict endpoints are rows of the relation")
    };
    let conflicts: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .map(|&(a, b)| (position_of(a), position_of(b)))
        .collect();

    let mut repr_rows = Vec::new();
    for (value, proportion) in rc.bounds() {
        let members: Vec<usize> = (0..relation.len())
            .filter(|&p| relation.sensitive_value_at(p) == value)
            .collect();
        repr_rows.push(ReprRow {
            value: value.to_string(),
            members,
            proportion,
        });
    }
    Ok(IlpModel {
        n_vars: relation.len(),
        row_ids,
        conflicts,
        repr_rows,
    })
}

/// A feasible point of the LP relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution<T> {
    pub values: Vec<T>,
    pub objective: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    CapExceeded,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::CapExceeded => "cap-exceeded",
        }
    }
}

/// An integral solution; `chosen` holds original row ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpSolution {
    pub chosen: Vec<usize>,
    pub objective: u64,
    pub status: SolveStatus,
}

enum LpOutcome<T> {
    Optimal(FractionalSolution<T>),
    Infeasible,
}

/// Builds and solves the relaxation with some variables pinned to 0/1.
/// Free variables keep their model positions in the result.
fn solve_lp_fixed<T: LpScalar>(model: &IlpModel, fixed: &[Option<bool>]) -> LpOutcome<T> {
    let n = model.n_vars;
    debug_assert_eq!(fixed.len(), n);

    // A variable in conflict with a pinned-1 variable is forced to 0.
    let mut effective: Vec<Option<bool>> = fixed.to_vec();
    for &(a, b) in &model.conflicts {
        if effective[a] == Some(true) && effective[b] == Some(true) {
            return LpOutcome::Infeasible;
        }
        if effective[a] == Some(true) && effective[b].is_none() {
            effective[b] = Some(false);
        }
        if effective[b] == Some(true) && effective[a].is_none() {
            effective[a] = Some(false);
        }
    }

    let free: Vec<usize> = (0..n).filter(|&i| effective[i].is_none()).collect();
    let index_of: Vec<Option<usize>> = {
        let mut map = vec![None; n];
        for (slot, &var) in free.iter().enumerate() {
            map[var] = Some(slot);
        }
        map
    };
    let ones_total = effective.iter().filter(|f| **f == Some(true)).count() as i64;

    let mut rows: Vec<(Vec<(usize, T)>, T)> = Vec::new();
    for &(a, b) in &model.conflicts {
        if let (Some(sa), Some(sb)) = (index_of[a], index_of[b]) {
            rows.push((
                vec![(sa, T::one()), (sb, T::one())],
                T::one(),
            ));
        }
    }
    for repr in &model.repr_rows {
        let num = repr.proportion.num() as i64;
        let den = repr.proportion.den();
        let mut coefs: Vec<(usize, T)> = Vec::new();
        let mut is_member = vec![false; n];
        for &m in &repr.members {
            is_member[m] = true;
        }
        for (slot, &var) in free.iter().enumerate() {
            let coef = if is_member[var] {
                T::from_ratio(num - den as i64, den)
            } else {
                T::from_ratio(num, den)
            };
            if !coef.is_zero() {
                coefs.push((slot, coef));
            }
        }
        let ones_member = repr
            .members
            .iter()
            .filter(|&&m| effective[m] == Some(true))
            .count() as i64;
        // g1 - p*s1 with exact integers, scaled by the denominator.
        let rhs = T::from_ratio(ones_member * den as i64 - num * ones_total, den);
        rows.push((coefs, rhs));
    }
    for slot in 0..free.len() {
        rows.push((vec![(slot, T::one())], T::one()));
    }

    let lp = DenseLp {
        n_vars: free.len(),
        rows,
        objective: vec![T::one(); free.len()],
    };
    match simplex::solve(&lp) {
        SimplexOutcome::Optimal { values, objective } => {
            let mut full = vec![T::zero(); n];
            for (slot, &var) in free.iter().enumerate() {
                full[var] = values[slot].clone();
            }
            for (var, f) in effective.iter().enumerate() {
                if *f == Some(true) {
                    full[var] = T::one();
                }
            }
            LpOutcome::Optimal(FractionalSolution {
                objective: objective + T::from_ratio(ones_total, 1),
                values: full,
            })
        }
        SimplexOutcome::Infeasible => LpOutcome::Infeasible,
        SimplexOutcome::Unbounded => {
            unreachable!("every variable carries an upper bound of one")
        }
    }
}

/// Optimal basic solution of the LP relaxation. Infeasibility is impossible
/// for models built by [`build_rs_ilp`] (the all-zero point is feasible) and
/// signals a malformed model.
pub fn solve_lp<T: LpScalar>(model: &IlpModel) -> Result<FractionalSolution<T>> {
    match solve_lp_fixed(model, &vec![None; model.n_vars]) {
        LpOutcome::Optimal(sol) => Ok(sol),
        LpOutcome::Infeasible => Err(Error::LpInfeasible),
    }
}

/// Depth-first branch-and-bound over the requested scalar type: LP bound per
/// node, branching on the most fractional variable (ties: lowest index), the
/// one-branch explored first. Returns the proven optimum, or the incumbent
/// with `CapExceeded` once `node_cap` nodes were expanded.
pub fn solve_ilp_with<T: LpScalar>(model: &IlpModel, node_cap: u64) -> IlpSolution {
    let n = model.n_vars;
    // The all-zero point satisfies every conflict and homogeneous repr row.
    let mut best_positions: Vec<usize> = Vec::new();
    let mut best_obj: i64 = 0;
    let mut cap_hit = false;

    let mut stack: Vec<Vec<Option<bool>>> = vec![vec![None; n]];
    let mut nodes: u64 = 0;
    while let Some(fixed) = stack.pop() {
        if nodes >= node_cap {
            cap_hit = true;
            break;
        }
        nodes += 1;
        let solution = match solve_lp_fixed::<T>(model, &fixed) {
            LpOutcome::Optimal(sol) => sol,
            LpOutcome::Infeasible => continue,
        };
        // The objective is integral at integer points, so the LP bound can
        // be floored before comparing against the incumbent.
        if solution.objective.floor_with_tolerance() <= best_obj {
            continue;
        }

        let fractional: Vec<usize> = (0..n)
            .filter(|&i| !solution.values[i].is_near(0) && !solution.values[i].is_near(1))
            .collect();
        if fractional.is_empty() {
            let chosen: Vec<usize> = (0..n)
                .filter(|&i| solution.values[i].is_near(1))
                .collect();
            let objective = chosen.len() as i64;
            if objective > best_obj {
                best_obj = objective;
                best_positions = chosen;
            }
            continue;
        }

        // Most fractional: largest distance to the nearest integer.
        let mut branch = fractional[0];
        let mut branch_score = frac_distance(&solution.values[branch]);
        for &i in &fractional[1..] {
            let score = frac_distance(&solution.values[i]);
            if score.gt_approx(&branch_score) {
                branch = i;
                branch_score = score;
            }
        }
        let mut zero_child = fixed.clone();
        zero_child[branch] = Some(false);
        let mut one_child = fixed;
        one_child[branch] = Some(true);
        stack.push(zero_child);
        stack.push(one_child);
    }

    let mut chosen: Vec<usize> = best_positions
        .iter()
        .map(|&p| model.row_ids[p])
        .collect();
    chosen.sort_unstable();
    IlpSolution {
        chosen,
        objective: best_obj as u64,
        status: if cap_hit {
            SolveStatus::CapExceeded
        } else {
            SolveStatus::Optimal
        },
    }
}

fn frac_distance<T: LpScalar>(value: &T) -> T {
    let up = T::one() - value.clone();
    if value.clone() > up.clone() {
        up
    } else {
        value.clone()
    }
}

/// Branch-and-bound on the float path; the production entry point.
pub fn solve_ilp(model: &IlpModel, node_cap: u64) -> IlpSolution {
    solve_ilp_with::<f64>(model, node_cap)
}

/// Renders `num/den` by integer long division, truncated to 12 fractional
/// digits.
fn decimal_12(num: u64, den: u64) -> String {
    let den = den as u128;
    let mut out = format!("{}.", num as u128 / den);
    let mut rem = num as u128 % den;
    for _ in 0..12 {
        rem *= 10;
        out.push(char::from_digit((rem / den) as u32, 10).unwrap());
        rem %= den;
    }
    out
}

/// CPLEX LP text for the model: objective, conflict rows `c<j>`, repr rows
/// `r<l>` with coefficients rendered by [`decimal_12`], a `Binary` section,
/// LF newlines throughout. Byte-identical for identical models.
pub fn emit_lp_file(model: &IlpModel) -> String {
    let name = |p: usize| format!("x{}", model.row_ids[p]);
    let mut out = String::from("Maximize\n obj:");
    for p in 0..model.n_vars {
        let sep = if p == 0 { " " } else { " + " };
        let _ = write!(out, "{sep}{}", name(p));
    }
    out.push('\n');

    if !model.conflicts.is_empty() || !model.repr_rows.is_empty() {
        out.push_str("Subject To\n");
        for (j, &(a, b)) in model.conflicts.iter().enumerate() {
            let _ = writeln!(out, " c{j}: {} + {} <= 1", name(a), name(b));
        }
        for (l, repr) in model.repr_rows.iter().enumerate() {
            let num = repr.proportion.num();
            let den = repr.proportion.den();
            let mut is_member = vec![false; model.n_vars];
            for &m in &repr.members {
                is_member[m] = true;
            }
            let mut terms: Vec<(bool, String, usize)> = Vec::new();
            for (p, &member) in is_member.iter().enumerate() {
                // Member coefficient 1 - p, non-member -p; zeros are omitted.
                let (positive, magnitude) = if member {
                    (true, decimal_12(den - num, den))
                } else {
                    (false, decimal_12(num, den))
                };
                let zero = (member && num == den) || (!member && num == 0);
                if !zero {
                    terms.push((positive, magnitude, p));
                }
            }
            if terms.is_empty() {
                continue;
            }
            let _ = write!(out, " r{l}:");
            for (i, (positive, magnitude, p)) in terms.iter().enumerate() {
                let sign = match (i, positive) {
                    (0, true) => " ",
                    (0, false) => " -",
                    (_, true) => " + ",
                    (_, false) => " - ",
                };
                let _ = write!(out, "{sign}{magnitude} {}", name(*p));
            }
            out.push_str(" >= 0\n");
        }
    }

    out.push_str("Binary\n");
    for p in 0..model.n_vars {
        let _ = writeln!(out, " {}", name(p));
    }
    out.push_str("End\n");
    out
}

fn rounded_relation<T: LpScalar>(
    values: &[T],
    model: &IlpModel,
    relation: &Relation,
    rc: &ReprConstraint,
) -> Relation {
    let retained: Vec<usize> = (0..model.n_vars)
        .filter(|&p| values[p].is_near(1))
        .map(|p| model.row_ids[p])
        .collect();
    let kept = relation
        .project_rows(&retained)
        .expect("model rows come from the relation");
    postclean(&kept, rc)
}

fn fix_variable<T: LpScalar>(values: &mut [T], model: &IlpModel, pick: usize) {
    values[pick] = T::one();
    for &(a, b) in &model.conflicts {
        if a == pick {
            values[b] = T::zero();
        } else if b == pick {
            values[a] = T::zero();
        }
    }
}

fn is_fractional<T: LpScalar>(value: &T) -> bool {
    !value.is_near(0) && !value.is_near(1)
}

/// Picks the fractional variable involved in the fewest conflict constraints
/// (ties: lowest index) among `allowed`.
fn fewest_conflicts<T: LpScalar>(
    values: &[T],
    degree: &[usize],
    allowed: impl Iterator<Item = usize>,
) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in allowed {
        if !is_fractional(&values[i]) {
            continue;
        }
        if best.is_none_or(|b| degree[i] < degree[b]) {
            best = Some(i);
        }
    }
    best
}

/// Greedy rounding: repeatedly fix the least-constrained fractional variable
/// to one, zero its conflict neighbors, then extract the maximal
/// constraint-satisfying subset of the retained rows.
pub fn greedy_rounding<T: LpScalar>(
    model: &IlpModel,
    solution: &FractionalSolution<T>,
    relation: &Relation,
    rc: &ReprConstraint,
) -> Relation {
    let degree = model.conflict_degree();
    let mut values = solution.values.clone();
    while let Some(pick) = fewest_conflicts(&values, &degree, 0..model.n_vars) {
        fix_variable(&mut values, model, pick);
    }
    rounded_relation(&values, model, relation, rc)
}

/// Representation-aware rounding: each step targets the bounded sensitive
/// value with the smallest coverage ratio `sum(x_i) / p` (ties: value
/// order), fixing its least-constrained fractional variable. Groups without
/// fractional variables are skipped for the iteration; with no bounded
/// fractional variable left the step falls back to the greedy pick. Empty
/// constraints delegate to [`greedy_rounding`] entirely.
pub fn repr_rounding<T: LpScalar>(
    model: &IlpModel,
    solution: &FractionalSolution<T>,
    relation: &Relation,
    rc: &ReprConstraint,
) -> Relation {
    if rc.is_empty() {
        return greedy_rounding(model, solution, relation, rc);
    }
    let degree = model.conflict_degree();
    let mut values = solution.values.clone();
    loop {
        if !values.iter().any(is_fractional) {
            break;
        }
        // Coverage ratios over the current values, ascending value order.
        let mut groups: Vec<(&ReprRow, T)> = model
            .repr_rows
            .iter()
            .map(|row| {
                let sum = row
                    .members
                    .iter()
                    .fold(T::zero(), |acc, &m| acc + values[m].clone());
                let p = T::from_ratio(row.proportion.num() as i64, row.proportion.den());
                (row, sum / p)
            })
            .collect();
        groups.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));

        let mut pick = None;
        for (row, _) in &groups {
            pick = fewest_conflicts(&values, &degree, row.members.iter().copied());
            if pick.is_some() {
                break;
            }
        }
        let pick = match pick {
            Some(p) => p,
            // Remaining fractional variables belong to unbounded values.
            None => fewest_conflicts(&values, &degree, 0..model.n_vars)
                .expect("a fractional variable exists"),
        };
        fix_variable(&mut values, model, pick);
    }
    rounded_relation(&values, model, relation, rc)
}
