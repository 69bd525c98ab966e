//! The universal coverage function `Φ(A) = λ(fr(A))` on finite unions of intervals,
//! and the construction exhibiting any normalized coverage function `ψ` on `[q]` as a
//! quotient `ψ(I) = Φ(⋃_{i∈I} Q_i)`.
//!
//! Elements of `[q]` are numbered from 1 in the documentation; element `i` is bit `i − 1`.
//! Step 1 sets `Q_i = L_i = [ψ([i−1]), ψ([i]))`. Step `t ≥ 2` visits the nonempty
//! `I ⊆ [t−1]` by decreasing size (ties by increasing mask) and adds to `Q_t` a set
//! `B_t^I` of measure `b_t^I` in the block `[t−1, t)`, placed leftmost over the part of
//! `L_{min I}` covered by the images of exactly the classes in `I` among `Q_1, …, Q_{t−1}`.

mod interval;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};
use crate::setfn::{coverage_decompose, elements, full_mask, popcount, SetFunction, SubsetMask};
use crate::verdict::Verdict;

pub use interval::{phi_measure, RationalIntervalSet};

/// How the classes extend to a partition of the whole real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualRule {
    /// `fr⁻¹(L_i) ∖ ⋃_j Q_j` joins `Q_i`. This changes no value of `Φ` on unions of classes.
    FillFractionalPreimage,
}

/// The classes `Q_1, …, Q_q` restricted to `[0, q)`, with the input `ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalWitness {
    pub psi: SetFunction,
    pub classes: Vec<RationalIntervalSet>,
    pub residual_rule: ResidualRule,
}

/// One placement `B_t^I` made during the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    /// 1-based step.
    pub t: usize,
    pub subset: SubsetMask,
    pub b: Rational,
    /// Measure of the feasible region before placement.
    pub available: Rational,
    pub block: RationalIntervalSet,
}

impl Placement {
    /// `available − b`; never negative in a valid construction.
    pub fn capacity(&self) -> Rational {
        &self.available - &self.b
    }
}

/// The construction's full history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalTrace {
    pub witness: UniversalWitness,
    pub placements: Vec<Placement>,
    /// `snapshots[t−1]` holds the classes right after step `t`.
    pub snapshots: Vec<Vec<RationalIntervalSet>>,
}

fn check_normalized(psi: &SetFunction) -> Result<()> {
    if !psi.value(0).is_zero() {
        return domain("ψ(∅) must be 0");
    }
    if psi.full_value() != &Rational::one() {
        return domain(format!(
            "ψ must be normalized, but ψ([q]) = {}",
            rational::format(psi.full_value())
        ));
    }
    Ok(())
}

/// `b_t^I = Σ_{J⊆I∪{t}} (−1)^{|J|+1} ψ(([t−1]∖I) ∪ J)` for `2 ≤ t ≤ q` and `∅ ≠ I ⊆ [t−1]`.
pub fn compute_b(psi: &SetFunction, t: usize, subset: SubsetMask) -> Result<Rational> {
    check_normalized(psi)?;
    let q = psi.n();
    if t < 2 || t > q {
        return domain(format!("t must lie in [2, {q}], got {t}"));
    }
    let before = full_mask(t - 1);
    if subset == 0 || subset & !before != 0 {
        return domain(format!("I must be a nonempty subset of [{}]", t - 1));
    }
    Ok(b_value(psi, t, subset))
}

fn b_value(psi: &SetFunction, t: usize, subset: SubsetMask) -> Rational {
    let base = full_mask(t - 1) & !subset;
    let free = subset | (1 << (t - 1));
    let mut sum = Rational::zero();
    let mut j = free;
    loop {
        let value = psi.value(base | j);
        if popcount(j) % 2 == 1 {
            sum += value;
        } else {
            sum -= value;
        }
        if j == 0 {
            break;
        }
        j = (j - 1) & free;
    }
    sum
}

/// `L_i = [ψ([i−1]), ψ([i]))` for `i = 1, …, q`.
pub fn levels(psi: &SetFunction) -> Vec<RationalIntervalSet> {
    (1..=psi.n())
        .map(|i| {
            let lo = psi.value(full_mask(i - 1)).clone();
            let hi = psi.value(full_mask(i)).clone();
            RationalIntervalSet::interval(lo.clone(), hi.max(lo)).expect("ordered endpoints")
        })
        .collect()
}

pub fn build_universal_partition(psi: &SetFunction) -> Result<UniversalWitness> {
    build_universal_trace(psi).map(|trace| trace.witness)
}

/// Runs the construction, recording every placement and the classes after each step.
pub fn build_universal_trace(psi: &SetFunction) -> Result<UniversalTrace> {
    check_normalized(psi)?;
    coverage_decompose(psi)?;
    let q = psi.n();
    let levels = levels(psi);
    let mut classes = levels.clone();
    let mut snapshots = vec![classes.clone()];
    let mut placements = Vec::new();

    for t in 2..=q {
        let mut subsets: Vec<SubsetMask> = (1..=full_mask(t - 1)).collect();
        subsets.sort_by_key(|&s| (std::cmp::Reverse(popcount(s)), s));
        let images: Vec<RationalIntervalSet> =
            classes[..t - 1].iter().map(RationalIntervalSet::fractional_image).collect();
        let offset = rational::int(t as i64 - 1);
        let mut added = RationalIntervalSet::empty();
        for subset in subsets {
            let b = b_value(psi, t, subset);
            if b.is_negative() {
                return Err(Error::Internal(format!(
                    "b for step {t} and I = {subset:#b} is negative"
                )));
            }
            let lowest = subset.trailing_zeros() as usize;
            let region = (0..t - 1).fold(levels[lowest].clone(), |acc, i| {
                if subset & (1 << i) != 0 {
                    acc.intersection(&images[i])
                } else {
                    acc.difference(&images[i])
                }
            });
            let available = region.measure();
            let chosen = region.leftmost_subset_of_measure(&b).ok_or_else(|| {
                Error::Internal(format!(
                    "step {t}, I = {subset:#b}: need measure {} but only {} is available",
                    rational::format(&b),
                    rational::format(&available)
                ))
            })?;
            let block = chosen.shift(&offset);
            added = added.union(&block);
            placements.push(Placement {
                t,
                subset,
                b,
                available,
                block,
            });
        }
        classes[t - 1] = classes[t - 1].union(&added);
        snapshots.push(classes.clone());
    }

    Ok(UniversalTrace {
        witness: UniversalWitness {
            psi: psi.clone(),
            classes,
            residual_rule: ResidualRule::FillFractionalPreimage,
        },
        placements,
        snapshots,
    })
}

/// Why a [`UniversalWitness`] fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UniversalViolation {
    /// Two classes intersect (0-based class indices).
    Overlap { first: usize, second: usize },
    /// `Φ(⋃_{i∈I} Q_i) ≠ ψ(I)`.
    Mismatch {
        subset: SubsetMask,
        #[serde(with = "rational::serde_str")]
        expected: Rational,
        #[serde(with = "rational::serde_str")]
        actual: Rational,
    },
}

/// `Φ(⋃_{i∈I} Q_i)` for every `I`, indexed by mask.
pub fn quotient_values(classes: &[RationalIntervalSet]) -> Vec<Rational> {
    let images: Vec<RationalIntervalSet> = classes.iter().map(RationalIntervalSet::fractional_image).collect();
    let mut unions = vec![RationalIntervalSet::empty(); 1 << classes.len()];
    for mask in 1..unions.len() {
        let low = mask.trailing_zeros() as usize;
        unions[mask] = unions[mask & (mask - 1)].union(&images[low]);
    }
    unions.iter().map(RationalIntervalSet::measure).collect()
}

/// Checks pairwise disjointness and `Φ(⋃_{i∈I} Q_i) = ψ(I)` for all `2^q` sets `I`.
///
/// The residual completion adds only points whose fractional parts are already covered,
/// so it is accounted for without materializing it.
pub fn verify_universal(w: &UniversalWitness) -> Result<Verdict<UniversalViolation>> {
    let q = w.classes.len();
    if q != w.psi.n() {
        return domain(format!("{q} classes given for a function on {} elements", w.psi.n()));
    }
    for first in 0..q {
        for second in first + 1..q {
            if !w.classes[first].is_disjoint_from(&w.classes[second]) {
                return Ok(Verdict::Fails(UniversalViolation::Overlap { first, second }));
            }
        }
    }
    let values = quotient_values(&w.classes);
    Ok(Verdict::from_option(values.into_iter().enumerate().find_map(|(mask, actual)| {
        let expected = w.psi.value(mask as SubsetMask);
        (&actual != expected).then(|| UniversalViolation::Mismatch {
            subset: mask as SubsetMask,
            expected: expected.clone(),
            actual,
        })
    })))
}

/// Elements of `I` as 1-based indices, for messages.
pub fn one_based(subset: SubsetMask) -> Vec<usize> {
    elements(subset).map(|i| i + 1).collect()
}
