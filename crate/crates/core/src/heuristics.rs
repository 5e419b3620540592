//! General-FD-set heuristics and the baseline subset-repair algorithms, plus
//! the dispatcher that names every end-to-end algorithm of the tool.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::chain_dp::lhschain_dp;
use crate::conflict::build_conflict_graph;
use crate::error::{Error, Result};
use crate::fd::FdSet;
use crate::ilp::{build_rs_ilp, greedy_rounding, repr_rounding, solve_ilp, solve_lp, SolveStatus};
use crate::rc::{postclean, ReprConstraint};
use crate::relation::Relation;

/// End-to-end repair algorithms addressable from the CLI and the bench
/// harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmChoice {
    GlobalIlp,
    LhsChainDp,
    FdCleanser,
    LpReprRounding,
    LpGreedyRounding,
    IlpBaselinePostClean,
    DpBaselinePostClean,
    VcApproxPostClean,
}

impl AlgorithmChoice {
    pub const ALL: [AlgorithmChoice; 8] = [
        AlgorithmChoice::GlobalIlp,
        AlgorithmChoice::LhsChainDp,
        AlgorithmChoice::FdCleanser,
        AlgorithmChoice::LpReprRounding,
        AlgorithmChoice::LpGreedyRounding,
        AlgorithmChoice::IlpBaselinePostClean,
        AlgorithmChoice::DpBaselinePostClean,
        AlgorithmChoice::VcApproxPostClean,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmChoice::GlobalIlp => "global-ilp",
            AlgorithmChoice::LhsChainDp => "lhschain-dp",
            AlgorithmChoice::FdCleanser => "fdcleanser",
            AlgorithmChoice::LpReprRounding => "lp-repr-rounding",
            AlgorithmChoice::LpGreedyRounding => "lp-greedy-rounding",
            AlgorithmChoice::IlpBaselinePostClean => "ilp-postclean",
            AlgorithmChoice::DpBaselinePostClean => "dp-postclean",
            AlgorithmChoice::VcApproxPostClean => "vc-postclean",
        }
    }

    /// Exact algorithms report an optimal status, the rest are heuristic.
    pub fn status(&self) -> &'static str {
        match self {
            AlgorithmChoice::GlobalIlp | AlgorithmChoice::LhsChainDp => "optimal",
            _ => "heuristic",
        }
    }
}

impl FromStr for AlgorithmChoice {
    type Err = Error;

    fn from_str(name: &str) -> Result<Self> {
        match name {
            "global-ilp" | "ilp" => Ok(AlgorithmChoice::GlobalIlp),
            "lhschain-dp" => Ok(AlgorithmChoice::LhsChainDp),
            "fdcleanser" => Ok(AlgorithmChoice::FdCleanser),
            "lp-repr-rounding" => Ok(AlgorithmChoice::LpReprRounding),
            "lp-greedy-rounding" => Ok(AlgorithmChoice::LpGreedyRounding),
            "ilp-postclean" => Ok(AlgorithmChoice::IlpBaselinePostClean),
            "dp-postclean" => Ok(AlgorithmChoice::DpBaselinePostClean),
            "vc-postclean" => Ok(AlgorithmChoice::VcApproxPostClean),
            other => Err(Error::Schema(format!(
                "unknown algorithm {other:?}; expected one of {}",
                AlgorithmChoice::ALL.map(|a| a.name()).join(", ")
            ))),
        }
    }
}

impl std::fmt::Display for AlgorithmChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One FD at a time: picks the attribute occurring in the most LHSs (each FD
/// counts once per attribute, ties to the lowest index), repairs with the
/// single-FD dynamic program, drops the FD, repeats. Every intermediate
/// repair already satisfies the representation constraint.
pub fn fdcleanser(relation: &Relation, fds: &FdSet, rc: &ReprConstraint) -> Result<Relation> {
    if fds.is_empty() {
        return Ok(postclean(relation, rc));
    }
    let mut current = relation.clone();
    let mut remaining = fds.clone();
    while !remaining.is_empty() {
        let attribute = most_frequent_lhs_attribute(&remaining);
        let fd = match attribute {
            Some(attr) => remaining
                .fds()
                .iter()
                .find(|fd| fd.lhs().contains(&attr))
                .expect("the attribute occurs in some LHS")
                .clone(),
            // Only consensus FDs are left.
            None => remaining.fds()[0].clone(),
        };
        let single = FdSet::new(vec![fd.clone()]);
        current = lhschain_dp(&current, &single, rc)?;
        remaining = remaining.without(&fd);
    }
    Ok(current)
}

fn most_frequent_lhs_attribute(fds: &FdSet) -> Option<usize> {
    let attrs: BTreeSet<usize> = fds
        .fds()
        .iter()
        .flat_map(|fd| fd.lhs().iter().copied())
        .collect();
    attrs
        .into_iter()
        .map(|attr| {
            let count = fds.fds().iter().filter(|fd| fd.lhs().contains(&attr)).count();
            (attr, count)
        })
        // max_by_key keeps the last maximum; reversing the index breaks ties
        // toward the lowest attribute.
        .max_by_key(|&(attr, count)| (count, std::cmp::Reverse(attr)))
        .map(|(attr, _)| attr)
}

/// Maximum subset repair via the exact solver with an empty constraint.
pub fn optimal_srepair(relation: &Relation, fds: &FdSet, node_cap: u64) -> Result<Relation> {
    let model = build_rs_ilp(relation, fds, &ReprConstraint::empty())?;
    let solution = solve_ilp(&model, node_cap);
    if solution.status == SolveStatus::CapExceeded {
        let bound = solve_lp::<f64>(&model)?.objective;
        return Err(Error::NodeCapExceeded {
            cap: node_cap,
            incumbent_size: solution.chosen.len(),
            bound,
        });
    }
    relation.project_rows(&solution.chosen)
}

/// Optimal subset repair through the chain dynamic program.
pub fn dp_baseline_srepair(relation: &Relation, fds: &FdSet) -> Result<Relation> {
    lhschain_dp(relation, fds, &ReprConstraint::empty())
}

/// 2-approximation: greedily builds a maximal matching of the conflict graph
/// (edges scanned in (min, max) lexicographic order) and deletes both
/// endpoints of every matched edge. Deletions are at most twice the minimum.
pub fn vc_approx_srepair(relation: &Relation, fds: &FdSet) -> Result<Relation> {
    let graph = build_conflict_graph(relation, fds)?;
    let mut matched: BTreeSet<usize> = BTreeSet::new();
    for &(a, b) in graph.edges() {
        if !matched.contains(&a) && !matched.contains(&b) {
            matched.insert(a);
            matched.insert(b);
        }
    }
    let keep: Vec<usize> = relation
        .row_ids()
        .iter()
        .copied()
        .filter(|id| !matched.contains(id))
        .collect();
    relation.project_rows(&keep)
}

/// Composes a baseline subset repair with the maximal-subset extraction.
pub fn baseline_postclean(
    relation: &Relation,
    fds: &FdSet,
    rc: &ReprConstraint,
    base: AlgorithmChoice,
    node_cap: u64,
) -> Result<Relation> {
    let repaired = match base {
        AlgorithmChoice::IlpBaselinePostClean => optimal_srepair(relation, fds, node_cap)?,
        AlgorithmChoice::DpBaselinePostClean => dp_baseline_srepair(relation, fds)?,
        AlgorithmChoice::VcApproxPostClean => vc_approx_srepair(relation, fds)?,
        other => {
            return Err(Error::Schema(format!(
                "{other} is not a baseline+postclean composition"
            )))
        }
    };
    Ok(postclean(&repaired, rc))
}

/// Runs the named algorithm end to end. Chain-only algorithms surface
/// `NotAChain` at dispatch. A positive bound on a value absent from the
/// active sensitive domain is legal but only the empty relation can satisfy
/// it, so it is flagged.
pub fn run_algorithm(
    choice: AlgorithmChoice,
    relation: &Relation,
    fds: &FdSet,
    rc: &ReprConstraint,
    node_cap: u64,
) -> Result<Relation> {
    let domain = relation.distinct_values(relation.schema().sensitive_index());
    for (value, _) in rc.bounds() {
        if !domain.contains(&value) {
            log::warn!(
                "bound on {value:?} which does not occur in the sensitive attribute; \
                 only the empty repair can satisfy it"
            );
        }
    }
    match choice {
        AlgorithmChoice::GlobalIlp => {
            let model = build_rs_ilp(relation, fds, rc)?;
            let solution = solve_ilp(&model, node_cap);
            if solution.status == SolveStatus::CapExceeded {
                let bound = solve_lp::<f64>(&model)?.objective;
                return Err(Error::NodeCapExceeded {
                    cap: node_cap,
                    incumbent_size: solution.chosen.len(),
                    bound,
                });
            }
            relation.project_rows(&solution.chosen)
        }
        AlgorithmChoice::LhsChainDp => lhschain_dp(relation, fds, rc),
        AlgorithmChoice::FdCleanser => fdcleanser(relation, fds, rc),
        AlgorithmChoice::LpGreedyRounding => {
            let model = build_rs_ilp(relation, fds, rc)?;
            let solution = solve_lp::<f64>(&model)?;
            Ok(greedy_rounding(&model, &solution, relation, rc))
        }
        AlgorithmChoice::LpReprRounding => {
            let model = build_rs_ilp(relation, fds, rc)?;
            let solution = solve_lp::<f64>(&model)?;
            Ok(repr_rounding(&model, &solution, relation, rc))
        }
        AlgorithmChoice::IlpBaselinePostClean
        | AlgorithmChoice::DpBaselinePostClean
        | AlgorithmChoice::VcApproxPostClean => {
            baseline_postclean(relation, fds, rc, choice, node_cap)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::{satisfies_fdset, Fd};
    use crate::oracle::brute_force_optimal;
    use crate::rc::{satisfies_rc, Proportion};
    use crate::relation::Schema;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(num: u64, den: u64) -> Proportion {
        Proportion::new(num, den).unwrap()
    }

    fn fd(lhs: &[usize], rhs: usize) -> Fd {
        Fd::new(lhs.iter().copied(), rhs).unwrap()
    }

    fn rel(rows: Vec<Vec<&str>>) -> Relation {
        let schema = Schema::new(vec!["A", "B", "S"], 2).unwrap();
        Relation::new(schema, rows).unwrap()
    }

    #[test]
    fn algorithm_names_round_trip() {
        for choice in AlgorithmChoice::ALL {
            assert_eq!(choice.name().parse::<AlgorithmChoice>().unwrap(), choice);
        }
        assert_eq!(
            "ilp".parse::<AlgorithmChoice>().unwrap(),
            AlgorithmChoice::GlobalIlp
        );
        assert!("bogus".parse::<AlgorithmChoice>().is_err());
    }

    #[test]
    fn fdcleanser_single_fd_equals_chain_dp() {
        let r = rel(vec![
            vec!["1", "a", "m"],
            vec!["1", "b", "f"],
            vec!["2", "c", "m"],
        ]);
        let fds = FdSet::new(vec![fd(&[0], 1)]);
        let rc = ReprConstraint::new(vec![("m", p(1, 2))]).unwrap();
        let via_cleanser = fdcleanser(&r, &fds, &rc).unwrap();
        let via_dp = lhschain_dp(&r, &fds, &rc).unwrap();
        assert_eq!(via_cleanser, via_dp);
    }

    #[test]
    fn fdcleanser_empty_fds_is_postclean() {
        let r = rel(vec![vec!["1", "a", "m"], vec!["2", "b", "f"]]);
        let rc = ReprConstraint::new(vec![("m", p(1, 1))]).unwrap();
        let out = fdcleanser(&r, &FdSet::empty(), &rc).unwrap();
        assert_eq!(out, postclean(&r, &rc));
    }

    #[test]
    fn most_frequent_attribute_tie_breaks_low() {
        // Attribute 0 and 1 both occur twice; 0 wins.
        let fds = FdSet::new(vec![fd(&[0, 1], 2), fd(&[0], 2), fd(&[1], 0)]);
        assert_eq!(most_frequent_lhs_attribute(&fds), Some(0));
        // Consensus-only sets have no LHS attribute at all.
        assert_eq!(
            most_frequent_lhs_attribute(&FdSet::new(vec![fd(&[], 1)])),
            None
        );
    }

    #[test]
    fn fdcleanser_handles_consensus_only_sets() {
        let r = rel(vec![vec!["1", "a", "m"], vec!["2", "a", "f"], vec!["3", "b", "m"]]);
        let fds = FdSet::new(vec![fd(&[], 1)]);
        let out = fdcleanser(&r, &fds, &ReprConstraint::empty()).unwrap();
        assert!(satisfies_fdset(&out, &fds).unwrap());
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn fdcleanser_output_always_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        // Non-chain set: {A->B, B->A} LHSs are incomparable.
        let fds = FdSet::new(vec![fd(&[0], 1), fd(&[1], 0)]);
        let rc = ReprConstraint::new(vec![("s0", p(1, 3))]).unwrap();
        let mut optimal_hits = 0;
        let runs = 200;
        for _ in 0..runs {
            let n = rng.gen_range(1..=9);
            let rows: Vec<Vec<String>> = (0..n)
                .map(|_| {
                    vec![
                        rng.gen_range(0..3).to_string(),
                        rng.gen_range(0..3).to_string(),
                        format!("s{}", rng.gen_range(0..2)),
                    ]
                })
                .collect();
            let r = rel(rows.iter().map(|x| x.iter().map(String::as_str).collect()).collect());
            let out = fdcleanser(&r, &fds, &rc).unwrap();
            assert!(satisfies_fdset(&out, &fds).unwrap());
            assert!(satisfies_rc(&out, &rc));
            let optimum = brute_force_optimal(&r, &fds, &rc).unwrap();
            assert!(out.len() <= optimum.len());
            if out.len() == optimum.len() {
                optimal_hits += 1;
            }
        }
        // Reported, not asserted: the greedy FD order is not always optimal.
        println!("fdcleanser matched the optimum on {optimal_hits}/{runs} non-chain instances");
    }

    #[test]
    fn optimal_srepair_matches_brute_force() {
        let r = rel(vec![
            vec!["1", "a", "m"],
            vec!["1", "b", "f"],
            vec!["2", "c", "m"],
        ]);
        let fds = FdSet::new(vec![fd(&[0], 1)]);
        let out = optimal_srepair(&r, &fds, 1_000_000).unwrap();
        assert_eq!(out.len(), 2);

        // Clean input comes back untouched.
        let clean = rel(vec![vec!["1", "a", "m"], vec!["2", "b", "f"]]);
        assert_eq!(optimal_srepair(&clean, &fds, 1_000_000).unwrap(), clean);
    }

    #[test]
    fn dp_baseline_requires_chain() {
        let non_chain = FdSet::new(vec![fd(&[0], 1), fd(&[1], 0)]);
        let r = rel(vec![vec!["1", "a", "m"]]);
        assert!(matches!(
            dp_baseline_srepair(&r, &non_chain),
            Err(Error::NotAChain)
        ));
        assert_eq!(
            dp_baseline_srepair(&r, &FdSet::empty()).unwrap().len(),
            1
        );
    }

    #[test]
    fn vc_approx_bounds() {
        let fds = FdSet::new(vec![fd(&[0], 1)]);

        // Clean relation: empty matching, nothing deleted.
        let clean = rel(vec![vec!["1", "a", "m"], vec!["2", "b", "f"]]);
        assert_eq!(vc_approx_srepair(&clean, &fds).unwrap(), clean);

        // A single conflicting pair: both endpoints deleted, twice the
        // optimal single deletion.
        let pair = rel(vec![vec!["1", "a", "m"], vec!["1", "b", "f"]]);
        let out = vc_approx_srepair(&pair, &fds).unwrap();
        assert_eq!(out.len(), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..40 {
            let n = rng.gen_range(1..=10);
            let rows: Vec<Vec<String>> = (0..n)
                .map(|_| {
                    vec![
                        rng.gen_range(0..3).to_string(),
                        rng.gen_range(0..3).to_string(),
                        "s".to_string(),
                    ]
                })
                .collect();
            let r = rel(rows.iter().map(|x| x.iter().map(String::as_str).collect()).collect());
            let approx = vc_approx_srepair(&r, &fds).unwrap();
            assert!(satisfies_fdset(&approx, &fds).unwrap());
            let optimum = brute_force_optimal(&r, &fds, &ReprConstraint::empty()).unwrap();
            let approx_deletions = r.len() - approx.len();
            let optimal_deletions = r.len() - optimum.len();
            assert!(approx_deletions <= 2 * optimal_deletions);
        }
    }

    #[test]
    fn baseline_postclean_separation_example() {
        // Optimal subset repair keeps the two same-gender rows, after which
        // no balanced subset survives; the global solver keeps two rows.
        let r = rel(vec![
            vec!["1", "a", "male"],
            vec!["1", "b", "female"],
            vec!["2", "c", "male"],
            vec!["2", "d", "female"],
        ]);
        let fds = FdSet::new(vec![fd(&[0], 1)]);
        let rc =
            ReprConstraint::new(vec![("male", p(1, 2)), ("female", p(1, 2))]).unwrap();

        let global = run_algorithm(AlgorithmChoice::GlobalIlp, &r, &fds, &rc, 1 << 20).unwrap();
        assert_eq!(global.len(), 2);

        let composed = baseline_postclean(
            &r,
            &fds,
            &rc,
            AlgorithmChoice::IlpBaselinePostClean,
            1 << 20,
        )
        .unwrap();
        assert_eq!(composed.len(), 0);
    }

    #[test]
    fn baseline_postclean_empty_rc_is_identity_composition() {
        let r = rel(vec![vec!["1", "a", "m"], vec!["1", "b", "f"]]);
        let fds = FdSet::new(vec![fd(&[0], 1)]);
        let base = optimal_srepair(&r, &fds, 1 << 20).unwrap();
        let composed = baseline_postclean(
            &r,
            &fds,
            &ReprConstraint::empty(),
            AlgorithmChoice::IlpBaselinePostClean,
            1 << 20,
        )
        .unwrap();
        assert_eq!(composed, base);
    }

    #[test]
    fn all_algorithms_produce_valid_outputs() {
        let r = rel(vec![
            vec!["1", "a", "m"],
            vec!["1", "b", "f"],
            vec!["2", "c", "m"],
            vec!["3", "d", "f"],
        ]);
        let fds = FdSet::new(vec![fd(&[0], 1)]);
        let rc = ReprConstraint::new(vec![("f", p(1, 3))]).unwrap();
        for choice in AlgorithmChoice::ALL {
            let out = run_algorithm(choice, &r, &fds, &rc, 1 << 20).unwrap();
            assert!(satisfies_fdset(&out, &fds).unwrap(), "{choice}");
            assert!(satisfies_rc(&out, &rc), "{choice}");
        }
    }
}
