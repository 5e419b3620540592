//! Representation constraints over the sensitive attribute, sensitive-value
//! count vectors, and the maximal-subset extraction that turns any relation
//! into its largest constraint-satisfying subset.
//!
//! All proportion arithmetic is exact: a bound `%a >= num/den` holds for a
//! relation of size `n` with `c` matching rows iff `c * den >= num * n`.

use std::collections::BTreeMap;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::relation::Relation;

/// A rational in [0, 1], stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proportion {
    num: u64,
    den: u64,
}

impl Proportion {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Proportion("zero denominator".into()));
        }
        if num > den {
            return Err(Error::Proportion(format!("{num}/{den} exceeds 1")));
        }
        let g = num.gcd(&den);
        Ok(Proportion {
            num: num / g,
            den: den / g,
        })
    }

    pub fn zero() -> Self {
        Proportion { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `ceil(t * self)` in exact integer arithmetic.
    pub fn ceil_mul(&self, t: u64) -> u64 {
        let prod = t as u128 * self.num as u128;
        prod.div_ceil(self.den as u128) as u64
    }
}

impl std::fmt::Display for Proportion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A set of lower-bound constraints `%a >= p` keyed by sensitive value.
///
/// Bounds with zero proportion are dropped at construction; duplicate values
/// and bound sums above one are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReprConstraint {
    bounds: BTreeMap<String, Proportion>,
}

impl ReprConstraint {
    pub fn new<S: Into<String>>(bounds: Vec<(S, Proportion)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        // Exact sum via a common denominator accumulated incrementally.
        let mut sum_num: u128 = 0;
        let mut sum_den: u128 = 1;
        for (value, p) in bounds {
            let value = value.into();
            if map.contains_key(&value) {
                return Err(Error::DuplicateBound(value));
            }
            sum_num = sum_num * p.den() as u128 + p.num() as u128 * sum_den;
            sum_den *= p.den() as u128;
            let g = sum_num.gcd(&sum_den);
            sum_num /= g;
            sum_den /= g;
            if sum_num > sum_den {
                return Err(Error::InfeasibleConstraint {
                    num: sum_num.min(u64::MAX as u128) as u64,
                    den: sum_den.min(u64::MAX as u128) as u64,
                });
            }
            if !p.is_zero() {
                map.insert(value, p);
            }
        }
        Ok(ReprConstraint { bounds: map })
    }

    pub fn empty() -> Self {
        ReprConstraint::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    /// Bounds in ascending value order.
    pub fn bounds(&self) -> impl Iterator<Item = (&str, Proportion)> {
        self.bounds.iter().map(|(v, p)| (v.as_str(), *p))
    }

    /// The lower bound for a value; absent values are unconstrained (zero).
    pub fn bound_for(&self, value: &str) -> Proportion {
        self.bounds.get(value).copied().unwrap_or_else(Proportion::zero)
    }

    /// True iff the bounds sum to exactly one, which forces every proportion
    /// to be matched exactly.
    pub fn is_exact(&self) -> bool {
        let mut sum_num: u128 = 0;
        let mut sum_den: u128 = 1;
        for p in self.bounds.values() {
            sum_num = sum_num * p.den() as u128 + p.num() as u128 * sum_den;
            sum_den *= p.den() as u128;
            let g = sum_num.gcd(&sum_den);
            sum_num /= g;
            sum_den /= g;
        }
        sum_num == sum_den
    }
}

/// Per-value tuple counts of the sensitive attribute. Absent keys mean zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountVector {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl CountVector {
    pub fn from_counts<S: Into<String>>(counts: Vec<(S, u64)>) -> Self {
        let mut map = BTreeMap::new();
        let mut total = 0;
        for (value, count) in counts {
            if count > 0 {
                total += count;
                *map.entry(value.into()).or_insert(0) += count;
            }
        }
        CountVector { counts: map, total }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, value: &str) -> u64 {
        self.counts.get(value).copied().unwrap_or(0)
    }

    /// Entries with non-zero count in ascending value order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(v, c)| (v.as_str(), *c))
    }

    pub fn add(&mut self, value: &str, count: u64) {
        if count > 0 {
            self.total += count;
            *self.counts.entry(value.to_string()).or_insert(0) += count;
        }
    }

    /// Componentwise sum.
    pub fn merged(&self, other: &CountVector) -> CountVector {
        let mut out = self.clone();
        for (value, count) in other.entries() {
            out.add(value, count);
        }
        out
    }
}

/// Exact per-value counts of the sensitive attribute.
pub fn count_vector(relation: &Relation) -> CountVector {
    let mut out = CountVector::default();
    for position in 0..relation.len() {
        out.add(relation.sensitive_value_at(position), 1);
    }
    out
}

/// True iff every bound holds: `count(a) * den >= num * |R|`. The empty
/// relation satisfies every constraint.
pub fn satisfies_rc(relation: &Relation, rc: &ReprConstraint) -> bool {
    counts_satisfy_rc(&count_vector(relation), rc)
}

pub fn counts_satisfy_rc(counts: &CountVector, rc: &ReprConstraint) -> bool {
    let n = counts.total();
    rc.bounds().all(|(value, p)| {
        counts.count(value) as u128 * p.den() as u128 >= p.num() as u128 * n as u128
    })
}

/// The per-value quotas of a maximum constraint-satisfying subset, together
/// with its size; `None` when only the empty subset satisfies the bounds.
///
/// For target sizes T from `total` down to 1, the quota for value `a` is
/// `ceil(T * p_a)`. T is rejected if some quota outstrips the available
/// count or the quotas exceed T; otherwise the slack `T - sum(quotas)` is
/// distributed over values with remaining supply in ascending value order.
fn postclean_quotas(
    counts: &CountVector,
    rc: &ReprConstraint,
) -> Option<BTreeMap<String, u64>> {
    // Values to quota over: the active domain plus every bounded value.
    let mut values: Vec<&str> = counts.entries().map(|(v, _)| v).collect();
    for (v, _) in rc.bounds() {
        if counts.count(v) == 0 {
            values.push(v);
        }
    }
    values.sort_unstable();
    values.dedup();

    'target: for t in (1..=counts.total()).rev() {
        let mut quotas: Vec<u64> = Vec::with_capacity(values.len());
        let mut required = 0u64;
        for &value in &values {
            let quota = rc.bound_for(value).ceil_mul(t);
            if quota > counts.count(value) {
                continue 'target;
            }
            required += quota;
            quotas.push(quota);
        }
        if required > t {
            continue;
        }
        let mut slack = t - required;
        for (i, &value) in values.iter().enumerate() {
            if slack == 0 {
                break;
            }
            let spare = counts.count(value) - quotas[i];
            let take = spare.min(slack);
            quotas[i] += take;
            slack -= take;
        }
        debug_assert_eq!(slack, 0, "supply always covers the slack");
        return Some(
            values
                .iter()
                .zip(quotas)
                .filter(|(_, q)| *q > 0)
                .map(|(v, q)| (v.to_string(), q))
                .collect(),
        );
    }
    None
}

/// `|postclean(R, rc)|` for any relation with the given counts.
pub fn postclean_size_only(counts: &CountVector, rc: &ReprConstraint) -> u64 {
    postclean_quotas(counts, rc).map_or(0, |quotas| quotas.values().sum())
}

/// A maximum subset of `relation` satisfying the constraint. Returns the
/// empty relation when no non-empty subset does.
///
/// Fully deterministic: quota rows are taken lowest-id-first per value.
pub fn postclean(relation: &Relation, rc: &ReprConstraint) -> Relation {
    postclean_impl(relation, rc, None)
}

/// Like [`postclean`] but samples the per-value quota rows uniformly with
/// the given seed instead of taking the lowest ids.
pub fn postclean_seeded(relation: &Relation, rc: &ReprConstraint, seed: u64) -> Relation {
    postclean_impl(relation, rc, Some(seed))
}

fn postclean_impl(relation: &Relation, rc: &ReprConstraint, seed: Option<u64>) -> Relation {
    let counts = count_vector(relation);
    let Some(quotas) = postclean_quotas(&counts, rc) else {
        return Relation::empty(relation.schema().clone());
    };

    let mut by_value: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (position, (id, _)) in relation.rows().enumerate() {
        by_value
            .entry(relation.sensitive_value_at(position))
            .or_default()
            .push(id);
    }

    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut chosen: Vec<usize> = Vec::new();
    for (value, quota) in &quotas {
        let ids = &by_value[value.as_str()];
        match &mut rng {
            Some(rng) => {
                let mut picked: Vec<usize> =
                    ids.choose_multiple(rng, *quota as usize).copied().collect();
                picked.sort_unstable();
                chosen.extend(picked);
            }
            None => chosen.extend(&ids[..*quota as usize]),
        }
    }
    relation
        .project_rows(&chosen)
        .expect("chosen ids come from the relation")
}
