//! Property tests for the module invariants.

use std::collections::BTreeSet;

use proptest::prelude::*;

use rsrepair_core::chain_dp::{repr_dominates, CandidateSet};
use rsrepair_core::conflict::build_conflict_graph;
use rsrepair_core::fd::{closure, satisfies_fdset, Fd, FdSet};
use rsrepair_core::rc::{
    count_vector, postclean, postclean_size_only, satisfies_rc, CountVector, Proportion,
    ReprConstraint,
};
use rsrepair_core::relation::{Relation, Schema};

fn small_relation() -> impl Strategy<Value = Relation> {
    // Up to 10 rows over (A, B, S) with tiny value pools.
    prop::collection::vec((0u8..3, 0u8..3, 0u8..3), 0..10).prop_map(|rows| {
        let schema = Schema::new(vec!["A", "B", "S"], 2).unwrap();
        let rows: Vec<Vec<String>> = rows
            .into_iter()
            .map(|(a, b, s)| vec![a.to_string(), b.to_string(), format!("s{s}")])
            .collect();
        Relation::new(schema, rows).unwrap()
    })
}

fn small_fdset() -> impl Strategy<Value = FdSet> {
    let any_fd = (0usize..3, prop::collection::btree_set(0usize..3, 0..2)).prop_filter_map(
        "trivial",
        |(rhs, lhs)| {
            if lhs.contains(&rhs) {
                None
            } else {
                Some(Fd::new(lhs, rhs).unwrap())
            }
        },
    );
    prop::collection::vec(any_fd, 0..3).prop_map(FdSet::new)
}

fn attr_set() -> impl Strategy<Value = BTreeSet<usize>> {
    prop::collection::btree_set(0usize..5, 0..4)
}

fn wide_fdset() -> impl Strategy<Value = FdSet> {
    let any_fd = (0usize..5, prop::collection::btree_set(0usize..5, 0..3)).prop_filter_map(
        "trivial",
        |(rhs, lhs)| {
            if lhs.contains(&rhs) {
                None
            } else {
                Some(Fd::new(lhs, rhs).unwrap())
            }
        },
    );
    prop::collection::vec(any_fd, 0..4).prop_map(FdSet::new)
}

fn small_rc() -> impl Strategy<Value = ReprConstraint> {
    // Up to three bounds with sixths, summing to at most one.
    prop::collection::vec(0u64..=2, 3).prop_map(|nums| {
        let mut bounds = Vec::new();
        let mut budget = 6u64;
        for (value, num) in nums.into_iter().enumerate() {
            let num = num.min(budget);
            budget -= num;
            if num > 0 {
                bounds.push((format!("s{value}"), Proportion::new(num, 6).unwrap()));
            }
        }
        ReprConstraint::new(bounds).unwrap()
    })
}

proptest! {
    #[test]
    fn closure_is_monotone_extensive_idempotent(
        x in attr_set(),
        extra in attr_set(),
        fds in wide_fdset(),
    ) {
        let cl_x = closure(&x, &fds);
        // Extensive.
        prop_assert!(x.is_subset(&cl_x));
        // Idempotent.
        prop_assert_eq!(closure(&cl_x, &fds), cl_x.clone());
        // Monotone.
        let larger: BTreeSet<usize> = x.union(&extra).copied().collect();
        prop_assert!(cl_x.is_subset(&closure(&larger, &fds)));
    }

    /// A subset satisfies the FD set exactly when its ids are independent in
    /// the conflict graph, exhaustively over all subsets.
    #[test]
    fn subset_repairs_are_independent_sets(
        relation in small_relation(),
        fds in small_fdset(),
    ) {
        let graph = build_conflict_graph(&relation, &fds).unwrap();
        let ids: Vec<usize> = relation.row_ids().to_vec();
        for mask in 0u32..(1 << relation.len()) {
            let subset: Vec<usize> = (0..relation.len())
                .filter(|&p| mask >> p & 1 == 1)
                .map(|p| ids[p])
                .collect();
            let sub = relation.project_rows(&subset).unwrap();
            let satisfies = satisfies_fdset(&sub, &fds).unwrap();
            let independent = graph.is_independent(&subset.iter().copied().collect());
            prop_assert_eq!(satisfies, independent);
        }
    }

    /// The extraction size is a function of the count vector alone: row
    /// order and non-sensitive cells are irrelevant.
    #[test]
    fn postclean_size_depends_only_on_counts(
        relation in small_relation(),
        rc in small_rc(),
        salt in 0u8..5,
    ) {
        let direct = postclean(&relation, &rc).len() as u64;
        prop_assert_eq!(direct, postclean_size_only(&count_vector(&relation), &rc));

        // Reverse the rows and relabel every non-sensitive cell.
        let reversed: Vec<Vec<String>> = (0..relation.len())
            .rev()
            .map(|p| {
                let row = relation.row_at(p);
                vec![
                    format!("{}x{salt}", row[0]),
                    format!("{}y{salt}", row[1]),
                    row[2].clone(),
                ]
            })
            .collect();
        let schema = Schema::new(vec!["A", "B", "S"], 2).unwrap();
        let relabeled = Relation::new(schema, reversed).unwrap();
        prop_assert_eq!(postclean(&relabeled, &rc).len() as u64, direct);
    }

    /// Integer satisfaction agrees with the rational comparison
    /// count / total >= proportion.
    #[test]
    fn satisfies_rc_matches_rational_oracle(
        relation in small_relation(),
        rc in small_rc(),
    ) {
        let counts = count_vector(&relation);
        let expected = rc.bounds().all(|(value, p)| {
            if counts.total() == 0 {
                return true;
            }
            let lhs = num_rational::Ratio::new(counts.count(value), counts.total().max(1));
            let rhs = num_rational::Ratio::new(p.num(), p.den());
            lhs >= rhs
        });
        prop_assert_eq!(satisfies_rc(&relation, &rc), expected);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// After any insertion sequence the candidate set equals the Pareto
    /// frontier of the distinct inserted count vectors.
    #[test]
    fn repr_insert_maintains_a_pareto_frontier(
        vectors in prop::collection::vec(prop::collection::vec(0u64..4, 2), 1..20),
    ) {
        let mut set = CandidateSet::new();
        let mut inserted: Vec<CountVector> = Vec::new();
        for (index, vector) in vectors.iter().enumerate() {
            let counts = CountVector::from_counts(vec![
                ("a".to_string(), vector[0]),
                ("b".to_string(), vector[1]),
            ]);
            let candidate =
                rsrepair_core::chain_dp::Candidate::new(vec![index], counts.clone());
            set.repr_insert(candidate, 10_000).unwrap();
            if !inserted.contains(&counts) {
                inserted.push(counts);
            }
        }
        let frontier: Vec<&CountVector> = inserted
            .iter()
            .filter(|v| !inserted.iter().any(|other| repr_dominates(other, v)))
            .collect();
        prop_assert_eq!(set.len(), frontier.len());
        for counts in frontier {
            prop_assert!(set.iter().any(|c| c.counts() == counts));
        }
    }
}
