//! Seeded noise injection and stratified sampling for benchmark inputs.
//!
//! Noise targets the cells of attributes that participate in some FD, so
//! every perturbation can create FD violations. The budget is split between
//! the two groups of a binary sensitive attribute; group membership is taken
//! from the input rows before any perturbation.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fd::FdSet;
use crate::rc::Proportion;
use crate::relation::Relation;

/// Parameters for one noise run.
#[derive(Debug, Clone)]
pub struct NoiseSpec {
    /// Fraction of eligible cells to perturb.
    pub overall_level: Proportion,
    /// Split of the perturbation budget between Group-1 and Group-2; the
    /// parts must sum to one. Group-1 receives the floor of its share,
    /// Group-2 the remainder.
    pub group_split: (Proportion, Proportion),
    /// Explicit (Group-1, Group-2) sensitive values; defaults to the two
    /// distinct values in ascending order.
    pub groups: Option<(String, String)>,
    pub seed: u64,
}

impl NoiseSpec {
    fn validate(&self) -> Result<()> {
        let (a, b) = self.group_split;
        let sum_num = a.num() as u128 * b.den() as u128 + b.num() as u128 * a.den() as u128;
        let sum_den = a.den() as u128 * b.den() as u128;
        if sum_num != sum_den {
            return Err(Error::Noise(format!(
                "group split {a} + {b} does not sum to 1"
            )));
        }
        Ok(())
    }

    fn is_uniform_split(&self) -> bool {
        self.group_split.0 == self.group_split.1
    }
}

fn floor_mul(p: Proportion, value: u64) -> u64 {
    (value as u128 * p.num() as u128 / p.den() as u128) as u64
}

/// Perturbs `floor(level * C)` of the `C` cells under attributes appearing
/// in some FD, splitting the count across the two sensitive groups, each
/// perturbed cell replaced by a uniformly random different value from the
/// attribute's active domain. Deterministic in the seed.
///
/// Cells whose attribute has a singleton domain cannot change and are
/// skipped (another cell is drawn); a shortfall is logged. A non-binary
/// sensitive attribute is accepted only with a 50/50 split, in which case
/// cells are drawn uniformly from all rows.
pub fn inject_noise(relation: &Relation, fds: &FdSet, spec: &NoiseSpec) -> Result<Relation> {
    spec.validate()?;
    fds.validate_for(relation.schema())?;

    let eligible: BTreeSet<usize> = fds
        .fds()
        .iter()
        .flat_map(|fd| fd.lhs().iter().copied().chain([fd.rhs()]))
        .collect();
    let eligible: Vec<usize> = eligible.into_iter().collect();
    let total_cells = (relation.len() * eligible.len()) as u64;
    let budget = floor_mul(spec.overall_level, total_cells);
    if budget == 0 || relation.is_empty() {
        return Ok(relation.clone());
    }

    // Active domain per eligible attribute, sorted for determinism.
    let domains: BTreeMap<usize, Vec<String>> = eligible
        .iter()
        .map(|&attr| {
            let mut values: Vec<String> = relation
                .distinct_values(attr)
                .into_iter()
                .map(str::to_string)
                .collect();
            values.sort_unstable();
            (attr, values)
        })
        .collect();

    let sensitive_values: Vec<String> = {
        let mut values: Vec<String> = relation
            .distinct_values(relation.schema().sensitive_index())
            .into_iter()
            .map(str::to_string)
            .collect();
        values.sort_unstable();
        values
    };

    // Row pools per budget share.
    let pools: Vec<(Vec<usize>, u64)> = if sensitive_values.len() == 2 || spec.groups.is_some() {
        let (group1, group2) = match &spec.groups {
            Some((g1, g2)) => (g1.clone(), g2.clone()),
            None => (sensitive_values[0].clone(), sensitive_values[1].clone()),
        };
        for group in [&group1, &group2] {
            if !sensitive_values.contains(group) {
                return Err(Error::Noise(format!(
                    "group value {group:?} does not occur in the sensitive attribute"
                )));
            }
        }
        let member_positions = |value: &str| -> Vec<usize> {
            (0..relation.len())
                .filter(|&p| relation.sensitive_value_at(p) == value)
                .collect()
        };
        let first_share = floor_mul(spec.group_split.0, budget);
        vec![
            (member_positions(&group1), first_share),
            (member_positions(&group2), budget - first_share),
        ]
    } else if spec.is_uniform_split() {
        vec![((0..relation.len()).collect(), budget)]
    } else {
        return Err(Error::Noise(format!(
            "sensitive attribute has {} values; group splitting needs a binary attribute",
            sensitive_values.len()
        )));
    };

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut rows: Vec<Vec<String>> = (0..relation.len())
        .map(|p| relation.row_at(p).to_vec())
        .collect();

    for (positions, share) in pools {
        let mut cells: Vec<(usize, usize)> = positions
            .iter()
            .flat_map(|&p| eligible.iter().map(move |&attr| (p, attr)))
            .collect();
        cells.shuffle(&mut rng);
        let mut perturbed = 0u64;
        for (position, attr) in cells {
            if perturbed == share {
                break;
            }
            let domain = &domains[&attr];
            if domain.len() < 2 {
                log::warn!(
                    "attribute {} has a singleton domain; skipping cell",
                    relation.schema().attribute_name(attr)
                );
                continue;
            }
            let current = rows[position][attr].clone();
            let choices: Vec<&String> = domain.iter().filter(|v| **v != current).collect();
            rows[position][attr] = choices[rng.gen_range(0..choices.len())].clone();
            perturbed += 1;
        }
        if perturbed < share {
            log::warn!(
                "noise budget shortfall: {perturbed} of {share} cells perturbed in one group"
            );
        }
    }
    Ok(relation.with_rows(rows))
}

/// Uniform without-replacement sample of the requested size per sensitive
/// group, seeded. Rows of groups absent from `sizes` are dropped.
pub fn stratified_sample(
    relation: &Relation,
    sizes: &BTreeMap<String, usize>,
    seed: u64,
) -> Result<Relation> {
    let mut by_group: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (position, (id, _)) in relation.rows().enumerate() {
        by_group
            .entry(relation.sensitive_value_at(position))
            .or_default()
            .push(id);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<usize> = Vec::new();
    for (group, &requested) in sizes {
        let available = by_group.get(group.as_str()).map_or(0, Vec::len);
        if requested > available {
            return Err(Error::InsufficientGroup {
                group: group.clone(),
                available,
                requested,
            });
        }
        chosen.extend(
            by_group[group.as_str()]
                .choose_multiple(&mut rng, requested)
                .copied(),
        );
    }
    chosen.sort_unstable();
    relation.project_rows(&chosen)
}
