//! Dense set functions over small finite ground sets.
//!
//! A [`SetFunction`] stores one exact rational per subset, indexed by bitmask
//! (bit `i` set means `labels[i]` is in the subset). Everything here is exact;
//! no floating point is used.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};
use crate::verdict::Verdict;

/// Subset of a ground set, bit `i` ↔ element `i`.
pub type SubsetMask = u32;

/// Largest ground set a dense table may cover.
pub const DENSE_CAP: usize = 24;

/// Hard limit imposed by the 32-bit mask representation, even with caps lifted.
pub const MASK_LIMIT: usize = 30;

pub fn full_mask(n: usize) -> SubsetMask {
    debug_assert!(n <= 31);
    ((1u64 << n) - 1) as SubsetMask
}

pub fn popcount(mask: SubsetMask) -> usize {
    mask.count_ones() as usize
}

/// Indices of the set bits, in increasing order.
pub fn elements(mask: SubsetMask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// Submasks of `mask` in increasing numeric order, `0` and `mask` included.
pub fn submasks(mask: SubsetMask) -> impl Iterator<Item = SubsetMask> {
    let mut next = Some(0 as SubsetMask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(cur)
    })
}

/// Scatters the low bits of `compact` onto the set positions of `positions`.
pub fn scatter(compact: SubsetMask, positions: &[usize]) -> SubsetMask {
    elements(compact).fold(0, |acc, i| acc | (1 << positions[i]))
}

/// Ordered list of distinct element labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::with_cap(labels, DENSE_CAP)
    }

    /// Like [`GroundSet::new`] with an explicit size cap (at most [`MASK_LIMIT`]).
    pub fn with_cap<S: Into<String>>(labels: impl IntoIterator<Item = S>, cap: usize) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let cap = cap.min(MASK_LIMIT);
        if labels.len() > cap {
            return Err(Error::Capacity {
                what: "ground set",
                n: labels.len(),
                cap,
            });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return domain(format!("duplicate ground-set label {l:?}"));
            }
        }
        Ok(Self { labels })
    }

    /// Ground set labelled `"1"`, …, `"n"`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn full(&self) -> SubsetMask {
        full_mask(self.len())
    }

    pub fn subset_count(&self) -> usize {
        1usize << self.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetMask> {
        labels.iter().try_fold(0, |acc, l| {
            let l = l.as_ref();
            self.index_of(l)
                .map(|i| acc | (1 << i))
                .ok_or_else(|| Error::Domain(format!("unknown element {l:?}")))
        })
    }

    pub fn labels_of(&self, mask: SubsetMask) -> Vec<String> {
        elements(mask).map(|i| self.labels[i].clone()).collect()
    }

    pub fn check_mask(&self, mask: SubsetMask) -> Result<()> {
        if self.len() < 32 && (mask >> self.len()) != 0 {
            return domain(format!(
                "mask {mask:#b} has elements outside a ground set of size {}",
                self.len()
            ));
        }
        Ok(())
    }

    /// The ground set of the elements in `mask`, in their original order.
    pub fn restrict(&self, mask: SubsetMask) -> GroundSet {
        GroundSet {
            labels: self.labels_of(mask),
        }
    }

    pub(crate) fn from_labels_unchecked(labels: Vec<String>) -> Self {
        Self { labels }
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(","))
    }
}

/// Read access to a set function, dense or computed on demand.
pub trait SetOracle {
    fn ground_size(&self) -> usize;
    fn value_at(&self, mask: SubsetMask) -> Rational;
}

impl<T: SetOracle + ?Sized> SetOracle for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value_at(&self, mask: SubsetMask) -> Rational {
        (**self).value_at(mask)
    }
}

/// Adapts a closure into a [`SetOracle`].
pub struct FnOracle<F> {
    n: usize,
    f: F,
}

impl<F: Fn(SubsetMask) -> Rational> FnOracle<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(SubsetMask) -> Rational> SetOracle for FnOracle<F> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn value_at(&self, mask: SubsetMask) -> Rational {
        (self.f)(mask)
    }
}

/// A real-valued set function stored as a dense table of `2^n` exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn new(ground: GroundSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != ground.subset_count() {
            return domain(format!(
                "value table has length {} but the ground set has 2^{} = {} subsets",
                values.len(),
                ground.len(),
                ground.subset_count()
            ));
        }
        Ok(Self { ground, values })
    }

    pub fn from_fn(ground: GroundSet, f: impl FnMut(SubsetMask) -> Rational) -> Self {
        let values = (0..ground.subset_count() as SubsetMask).map(f).collect();
        Self { ground, values }
    }

    pub fn from_integers(ground: GroundSet, values: &[i64]) -> Result<Self> {
        Self::new(ground, values.iter().map(|&v| rational::int(v)).collect())
    }

    pub fn from_oracle(ground: GroundSet, oracle: &impl SetOracle) -> Result<Self> {
        if oracle.ground_size() != ground.len() {
            return domain("oracle and ground set sizes differ");
        }
        Ok(Self::from_fn(ground, |m| oracle.value_at(m)))
    }

    pub fn zero(ground: GroundSet) -> Self {
        Self::from_fn(ground, |_| Rational::zero())
    }

    /// `X ↦ Σ_{x∈X} w(x)`.
    pub fn modular(ground: GroundSet, weights: &[Rational]) -> Result<Self> {
        if weights.len() != ground.len() {
            return domain("one weight per element is required");
        }
        Ok(Self::from_fn(ground, |m| elements(m).map(|i| &weights[i]).sum()))
    }

    /// Rank function of the uniform matroid `U_{r,n}` on `ground`.
    pub fn uniform_rank(ground: GroundSet, r: usize) -> Self {
        Self::from_fn(ground, |m| rational::int(popcount(m).min(r) as i64))
    }

    /// The extremal coverage function `φ_A(X) = [X ∩ A ≠ ∅]`.
    pub fn extremal(ground: GroundSet, a: SubsetMask) -> Result<Self> {
        if a == 0 {
            return domain("φ_A requires a nonempty A");
        }
        ground.check_mask(a)?;
        Ok(Self::from_fn(ground, |m| {
            if m & a != 0 {
                rational::one()
            } else {
                Rational::zero()
            }
        }))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    /// Checked lookup.
    pub fn evaluate(&self, mask: SubsetMask) -> Result<&Rational> {
        self.ground.check_mask(mask)?;
        Ok(&self.values[mask as usize])
    }

    /// Unchecked lookup; panics if `mask` is out of range.
    pub fn value(&self, mask: SubsetMask) -> &Rational {
        &self.values[mask as usize]
    }

    pub fn full_value(&self) -> &Rational {
        &self.values[self.ground.full() as usize]
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            ground: self.ground.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        self.map(|v| v * factor)
    }

    pub fn relabel(&self, ground: GroundSet) -> Result<Self> {
        if ground.len() != self.n() {
            return domain("relabelling must keep the ground-set size");
        }
        Ok(Self {
            ground,
            values: self.values.clone(),
        })
    }

    /// The table multiplied by the common denominator, if every entry then fits in `i128`.
    pub fn scaled_integers(&self) -> Option<(Vec<i128>, BigInt)> {
        let den = rational::common_denominator(&self.values);
        let scaled: Option<Vec<i128>> = self
            .values
            .iter()
            .map(|v| (v.numer() * (&den / v.denom())).to_i128())
            .collect();
        scaled.map(|s| (s, den))
    }

    /// Exhaustive check of a named property; see [`check_property`].
    pub fn check(&self, property: Property) -> Verdict<PropertyViolation> {
        check_property(self, property)
    }
}

impl SetOracle for SetFunction {
    fn ground_size(&self) -> usize {
        self.n()
    }
    fn value_at(&self, mask: SubsetMask) -> Rational {
        self.values[mask as usize].clone()
    }
}

/// Properties recognised by [`check_property`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property {
    /// `f(S) = 1`.
    Normalized,
    Increasing,
    Decreasing,
    Submodular,
    Supermodular,
    Modular,
    /// Increasing, submodular, `f(∅) = 0`.
    Polymatroid,
    /// Polymatroid with `f(X) ≤ k·|X|`.
    KPolymatroid(Rational),
    /// Axioms (R1)–(R4) plus integrality.
    MatroidRank,
}

/// The axiom a [`PropertyViolation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `f(∅) ≠ 0` (R1).
    NonzeroEmpty,
    /// `f(S) ≠ 1`.
    NotNormalized,
    /// `sets = [X, X+e]` with `f(X) > f(X+e)` (R2).
    NotIncreasing,
    /// `sets = [X, X+e]` with `f(X) < f(X+e)`.
    NotDecreasing,
    /// `sets = [X, Y]` with `f(X)+f(Y) < f(X∩Y)+f(X∪Y)` (R4).
    NotSubmodular,
    /// `sets = [X, Y]` with `f(X)+f(Y) > f(X∩Y)+f(X∪Y)`.
    NotSupermodular,
    /// `sets = [X]` with `f(X) > k·|X|`.
    ExceedsMultiple,
    /// `sets = [X]` with `f(X) > |X|` (R3).
    ExceedsCardinality,
    /// `sets = [X]` with non-integral `f(X)`.
    NonIntegral,
}

/// Certificate that a property fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyViolation {
    pub axiom: Axiom,
    pub sets: Vec<SubsetMask>,
}

impl PropertyViolation {
    fn new(axiom: Axiom, sets: Vec<SubsetMask>) -> Self {
        Self { axiom, sets }
    }
}

/// Exhaustively checks `property`.
///
/// Monotonicity and (super/sub)modularity are checked through their local forms
/// (`f(X) ≤ f(X+e)` and `f(X+a)+f(X+b) ≥ f(X)+f(X+a+b)`), which are equivalent to the
/// global ones. The reported witness is the first violation with base set `X`
/// ascending, then `a`, then `b` ascending.
pub fn check_property(f: &SetFunction, property: Property) -> Verdict<PropertyViolation> {
    Verdict::from_option(first_violation(f, &property))
}

fn first_violation(f: &SetFunction, property: &Property) -> Option<PropertyViolation> {
    match property {
        Property::Normalized => (f.full_value() != &rational::one())
            .then(|| PropertyViolation::new(Axiom::NotNormalized, vec![f.ground.full()])),
        Property::Increasing => monotone_violation(f, true),
        Property::Decreasing => monotone_violation(f, false),
        Property::Submodular => modularity_violation(f, true),
        Property::Supermodular => modularity_violation(f, false),
        Property::Modular => modularity_violation(f, true).or_else(|| modularity_violation(f, false)),
        Property::Polymatroid => polymatroid_violation(f),
        Property::KPolymatroid(k) => polymatroid_violation(f).or_else(|| {
            (0..f.ground.subset_count() as SubsetMask)
                .find(|&m| f.value(m) > &(k * rational::int(popcount(m) as i64)))
                .map(|m| PropertyViolation::new(Axiom::ExceedsMultiple, vec![m]))
        }),
        Property::MatroidRank => empty_violation(f)
            .or_else(|| monotone_violation(f, true))
            .or_else(|| {
                (0..f.ground.subset_count() as SubsetMask)
                    .find(|&m| f.value(m) > &rational::int(popcount(m) as i64))
                    .map(|m| PropertyViolation::new(Axiom::ExceedsCardinality, vec![m]))
            })
            .or_else(|| modularity_violation(f, true))
            .or_else(|| {
                (0..f.ground.subset_count() as SubsetMask)
                    .find(|&m| !f.value(m).is_integer())
                    .map(|m| PropertyViolation::new(Axiom::NonIntegral, vec![m]))
            }),
    }
}

fn empty_violation(f: &SetFunction) -> Option<PropertyViolation> {
    (!f.value(0).is_zero()).then(|| PropertyViolation::new(Axiom::NonzeroEmpty, vec![0]))
}

fn polymatroid_violation(f: &SetFunction) -> Option<PropertyViolation> {
    empty_violation(f)
        .or_else(|| monotone_violation(f, true))
        .or_else(|| modularity_violation(f, true))
}

/// The table as scaled integers when they are small enough to add without overflow.
fn narrow_table(f: &SetFunction) -> Option<Vec<i128>> {
    f.scaled_integers()
        .map(|(t, _)| t)
        .filter(|t| t.iter().all(|v| v.unsigned_abs() < 1 << 120))
}

fn monotone_violation(f: &SetFunction, increasing: bool) -> Option<PropertyViolation> {
    match narrow_table(f) {
        Some(t) => monotone_scan(&t, f.n(), increasing),
        None => monotone_scan(&f.values, f.n(), increasing),
    }
}

fn monotone_scan<T: Ord>(values: &[T], n: usize, increasing: bool) -> Option<PropertyViolation> {
    for x in 0..values.len() as SubsetMask {
        for e in 0..n {
            if x & (1 << e) != 0 {
                continue;
            }
            let (small, large) = (&values[x as usize], &values[(x | (1 << e)) as usize]);
            let bad = if increasing { small > large } else { small < large };
            if bad {
                let axiom = if increasing {
                    Axiom::NotIncreasing
                } else {
                    Axiom::NotDecreasing
                };
                return Some(PropertyViolation::new(axiom, vec![x, x | (1 << e)]));
            }
        }
    }
    None
}

fn modularity_violation(f: &SetFunction, submodular: bool) -> Option<PropertyViolation> {
    match narrow_table(f) {
        Some(t) => modularity_scan(&t, f.n(), submodular),
        None => modularity_scan(&f.values, f.n(), submodular),
    }
}

fn modularity_scan<T>(values: &[T], n: usize, submodular: bool) -> Option<PropertyViolation>
where
    T: Ord,
    for<'a> &'a T: std::ops::Add<&'a T, Output = T>,
{
    let at = |m: SubsetMask| &values[m as usize];
    for x in 0..values.len() as SubsetMask {
        for a in 0..n {
            if x & (1 << a) != 0 {
                continue;
            }
            for b in a + 1..n {
                if x & (1 << b) != 0 {
                    continue;
                }
                let (xa, xb) = (x | (1 << a), x | (1 << b));
                let lhs = at(xa) + at(xb);
                let rhs = at(x) + at(xa | xb);
                let bad = if submodular { lhs < rhs } else { lhs > rhs };
                if bad {
                    let axiom = if submodular {
                        Axiom::NotSubmodular
                    } else {
                        Axiom::NotSupermodular
                    };
                    return Some(PropertyViolation::new(axiom, vec![xa, xb]));
                }
            }
        }
    }
    None
}

/// A tuple `(A₀, A₁, …, A_k)` whose alternating sum is positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternatingViolation {
    pub sets: Vec<SubsetMask>,
    #[serde(with = "rational::serde_str")]
    pub alternating_sum: Rational,
}

/// Checks `f(∅) = 0` and the `k`-alternating inequality
/// `Σ_{K⊆[k]} (-1)^{|K|} f(A₀ ∪ ⋃_{i∈K} A_i) ≤ 0`.
///
/// `A₀` ranges over all subsets and `A₁, …, A_k` over singletons. Repeating a
/// singleton collapses the inequality to one of lower order, so it suffices to take
/// the singletons of a set `D ⊆ S∖A₀` with `1 ≤ |D| ≤ k`. Witnesses are padded back to
/// `k+1` sets by repeating the last singleton (which leaves the sum unchanged).
/// The first violation in (`A₀`, `D`) ascending order is reported.
pub fn check_k_alternating(f: &SetFunction, k: usize) -> Result<Verdict<AlternatingViolation>> {
    if k == 0 {
        return domain("k must be at least 1");
    }
    if let Some(v) = empty_violation(f) {
        return Ok(Verdict::Fails(AlternatingViolation {
            sets: vec![v.sets[0]; k + 1],
            alternating_sum: f.value(0).clone(),
        }));
    }
    let full = f.ground.full();
    for a0 in 0..f.ground.subset_count() as SubsetMask {
        let free = full & !a0;
        let positions: Vec<usize> = elements(free).collect();
        let m = positions.len();
        // sums[d] = Σ_{K⊆D} (-1)^{|K|} f(A₀ ∪ K), D given in compressed coordinates.
        let mut sums: Vec<Rational> = (0..1u32 << m)
            .map(|d| f.value(a0 | scatter(d, &positions)).clone())
            .collect();
        for bit in 0..m {
            for d in 0..1usize << m {
                if d & (1 << bit) != 0 {
                    let lower = sums[d ^ (1 << bit)].clone();
                    sums[d] = lower - &sums[d];
                }
            }
        }
        for (d, sum) in sums.iter().enumerate().skip(1) {
            let size = (d as u32).count_ones() as usize;
            if size <= k && sum.is_positive() {
                let dmask = scatter(d as SubsetMask, &positions);
                let mut sets = vec![a0];
                sets.extend(elements(dmask).map(|i| 1 << i));
                let last = *sets.last().expect("D is nonempty");
                sets.resize(k + 1, last);
                return Ok(Verdict::Fails(AlternatingViolation {
                    sets,
                    alternating_sum: sum.clone(),
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Like [`check_k_alternating`] but with `A₁, …, A_k` ranging over all subsets.
///
/// Costs `2^{n(k+1)}·2^k` evaluations; `n·(k+1)` is capped at [`DENSE_CAP`].
pub fn check_k_alternating_full(f: &SetFunction, k: usize) -> Result<Verdict<AlternatingViolation>> {
    if k == 0 {
        return domain("k must be at least 1");
    }
    let n = f.n();
    if n * (k + 1) > DENSE_CAP {
        return Err(Error::Capacity {
            what: "full k-alternating check (n·(k+1))",
            n: n * (k + 1),
            cap: DENSE_CAP,
        });
    }
    if let Some(v) = empty_violation(f) {
        return Ok(Verdict::Fails(AlternatingViolation {
            sets: vec![v.sets[0]; k + 1],
            alternating_sum: f.value(0).clone(),
        }));
    }
    let per = f.ground.subset_count() as u64;
    let total = per.pow(k as u32 + 1);
    let mut sets = vec![0 as SubsetMask; k + 1];
    for code in 0..total {
        // A₀ is the most significant digit, so codes run in lexicographic order.
        let mut rest = code;
        for slot in (0..=k).rev() {
            sets[slot] = (rest % per) as SubsetMask;
            rest /= per;
        }
        let mut sum = Rational::zero();
        for kset in 0..1u32 << k {
            let union = elements(kset).fold(sets[0], |acc, i| acc | sets[i + 1]);
            if kset.count_ones() % 2 == 0 {
                sum += f.value(union);
            } else {
                sum -= f.value(union);
            }
        }
        if sum.is_positive() {
            return Ok(Verdict::Fails(AlternatingViolation {
                sets,
                alternating_sum: sum,
            }));
        }
    }
    Ok(Verdict::Holds)
}

/// A partition of a ground set into `q` labelled, possibly empty classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    ground: GroundSet,
    class_of: Vec<usize>,
    classes: GroundSet,
}

impl Partition {
    pub fn new(ground: GroundSet, class_of: Vec<usize>, classes: GroundSet) -> Result<Self> {
        if class_of.len() != ground.len() {
            return domain("every element needs a class");
        }
        if let Some(&c) = class_of.iter().find(|&&c| c >= classes.len()) {
            return domain(format!("class index {c} out of range for q = {}", classes.len()));
        }
        Ok(Self {
            ground,
            class_of,
            classes,
        })
    }

    /// Builds a partition from explicit class masks; they must be disjoint and cover the ground set.
    pub fn from_masks(ground: GroundSet, masks: &[SubsetMask], classes: GroundSet) -> Result<Self> {
        if masks.len() != classes.len() {
            return domain("one label per class is required");
        }
        let mut class_of = vec![usize::MAX; ground.len()];
        for (c, &m) in masks.iter().enumerate() {
            ground.check_mask(m)?;
            for e in elements(m) {
                if class_of[e] != usize::MAX {
                    return domain(format!("element {:?} lies in two classes", ground.label(e)));
                }
                class_of[e] = c;
            }
        }
        if let Some(e) = class_of.iter().position(|&c| c == usize::MAX) {
            return domain(format!("element {:?} lies in no class", ground.label(e)));
        }
        Self::new(ground, class_of, classes)
    }

    /// Every element in its own class, labelled like the element.
    pub fn identity(ground: &GroundSet) -> Self {
        Self {
            ground: ground.clone(),
            class_of: (0..ground.len()).collect(),
            classes: ground.clone(),
        }
    }

    /// One class holding everything.
    pub fn single_class(ground: &GroundSet, label: &str) -> Self {
        Self {
            ground: ground.clone(),
            class_of: vec![0; ground.len()],
            classes: GroundSet::from_labels_unchecked(vec![label.to_string()]),
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn classes(&self) -> &GroundSet {
        &self.classes
    }

    pub fn q(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn class_mask(&self, class: usize) -> SubsetMask {
        self.class_of
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == class)
            .fold(0, |acc, (e, _)| acc | (1 << e))
    }
}

/// The quotient `(f/Q)(X) = f(⋃_{i∈X} S_i)` on the class set of `partition`.
pub fn quotient(f: &SetFunction, partition: &Partition) -> Result<SetFunction> {
    if partition.ground.len() != f.n() {
        return domain(format!(
            "partition covers {} elements but the function has {}",
            partition.ground.len(),
            f.n()
        ));
    }
    if partition.ground != f.ground {
        return domain("partition and function are over different ground sets");
    }
    let masks: Vec<SubsetMask> = (0..partition.q()).map(|c| partition.class_mask(c)).collect();
    Ok(SetFunction::from_fn(partition.classes.clone(), |x| {
        f.value(elements(x).fold(0, |acc, c| acc | masks[c])).clone()
    }))
}

/// Nonnegative coefficients `c_A` with `f = Σ_A c_A·φ_A`; zero coefficients are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageDecomposition {
    n: usize,
    coefficients: BTreeMap<SubsetMask, Rational>,
}

impl CoverageDecomposition {
    /// Validates and stores coefficients; nonpositive ones are rejected except zeros, which are dropped.
    pub fn from_coefficients(
        n: usize,
        coefficients: impl IntoIterator<Item = (SubsetMask, Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, c) in coefficients {
            if c.is_negative() {
                return domain(format!("coefficient of {a:#b} is negative"));
            }
            if !c.is_zero() {
                *map.entry(a).or_insert_with(Rational::zero) += c;
            }
        }
        Ok(Self { n, coefficients: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &BTreeMap<SubsetMask, Rational> {
        &self.coefficients
    }

    pub fn coefficient(&self, a: SubsetMask) -> Rational {
        self.coefficients.get(&a).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.coefficients.values().sum()
    }
}

/// In place: `h(D) ← Σ_{K⊆D} h(K)`.
pub(crate) fn zeta_transform(values: &mut [Rational]) {
    let size = values.len();
    let mut bit = 1;
    while bit < size {
        for d in 0..size {
            if d & bit != 0 {
                let lower = values[d ^ bit].clone();
                values[d] += lower;
            }
        }
        bit <<= 1;
    }
}

/// In place: `h(D) ← Σ_{K⊆D} (-1)^{|D∖K|} h(K)`.
pub(crate) fn mobius_transform(values: &mut [Rational]) {
    let size = values.len();
    let mut bit = 1;
    while bit < size {
        for d in 0..size {
            if d & bit != 0 {
                let lower = values[d ^ bit].clone();
                values[d] -= lower;
            }
        }
        bit <<= 1;
    }
}

/// Signed Möbius coefficients `c_A` with `f(X) = Σ_{A∩X≠∅} c_A`, valid whenever `f(∅) = 0`.
pub fn coverage_coefficients(f: &SetFunction) -> Result<Vec<Rational>> {
    if !f.value(0).is_zero() {
        return domain("coverage decomposition requires f(∅) = 0");
    }
    let full = f.ground.full();
    let top = f.full_value();
    // g(Y) = f(S) − f(S∖Y) = Σ_{∅≠A⊆Y} c_A
    let mut g: Vec<Rational> = (0..f.ground.subset_count() as SubsetMask)
        .map(|y| top - f.value(full & !y))
        .collect();
    mobius_transform(&mut g);
    Ok(g)
}

/// Decomposes `f` into extremal coverage functions, or reports the first negative coefficient.
pub fn coverage_decompose(f: &SetFunction) -> Result<CoverageDecomposition> {
    let coefficients = coverage_coefficients(f)?;
    if let Some((a, c)) = coefficients
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| c.is_negative())
    {
        return Err(Error::NotCoverage {
            subset: a as SubsetMask,
            coefficient: c.clone(),
        });
    }
    Ok(CoverageDecomposition {
        n: f.n(),
        coefficients: coefficients
            .into_iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| (a as SubsetMask, c))
            .collect(),
    })
}

/// `X ↦ Σ_{A∩X≠∅} c_A`.
pub fn coverage_reconstruct(d: &CoverageDecomposition, ground: &GroundSet) -> Result<SetFunction> {
    if d.n != ground.len() {
        return domain("decomposition and ground set sizes differ");
    }
    let mut inner = vec![Rational::zero(); ground.subset_count()];
    for (&a, c) in &d.coefficients {
        if a == 0 {
            return domain("coverage coefficients must be indexed by nonempty sets");
        }
        ground.check_mask(a)?;
        inner[a as usize] += c;
    }
    // inner(Y) = Σ_{A⊆Y} c_A; f(X) = total − inner(S∖X)
    zeta_transform(&mut inner);
    let total = d.total();
    let full = ground.full();
    Ok(SetFunction::from_fn(ground.clone(), |x| &total - &inner[(full & !x) as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn u23() -> SetFunction {
        SetFunction::uniform_rank(GroundSet::indexed(3).unwrap(), 2)
    }

    fn two(values: [i64; 4]) -> SetFunction {
        SetFunction::from_integers(GroundSet::indexed(2).unwrap(), &values).unwrap()
    }

    #[test]
    fn ground_set_rejects_duplicates_and_oversize() {
        assert!(matches!(GroundSet::new(["a", "a"]), Err(Error::Domain(_))));
        let big: Vec<String> = (0..25).map(|i| i.to_string()).collect();
        assert!(matches!(GroundSet::new(big.clone()), Err(Error::Capacity { cap: 24, .. })));
        assert!(GroundSet::with_cap(big, 26).is_ok());
    }

    #[test]
    fn evaluate_uniform_rank() {
        let r = u23();
        assert_eq!(r.evaluate(0).unwrap(), &int(0));
        assert_eq!(r.evaluate(0b111).unwrap(), &int(2));
        assert_eq!(r.evaluate(0b001).unwrap(), &int(1));
        assert!(matches!(r.evaluate(0b1000), Err(Error::Domain(_))));
    }

    #[test]
    fn table_length_is_checked() {
        let g = GroundSet::indexed(2).unwrap();
        assert!(SetFunction::new(g, vec![int(0); 3]).is_err());
    }

    #[test]
    fn submask_iteration_is_ascending() {
        let subs: Vec<_> = submasks(0b1010).collect();
        assert_eq!(subs, vec![0, 0b10, 0b1000, 0b1010]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn matroid_rank_property() {
        assert!(u23().check(Property::MatroidRank).holds());
        let mut values = u23().into_values();
        values[0] = int(1);
        let f = SetFunction::new(GroundSet::indexed(3).unwrap(), values).unwrap();
        let v = f.check(Property::MatroidRank);
        assert_eq!(
            v.witness().unwrap(),
            &PropertyViolation::new(Axiom::NonzeroEmpty, vec![0])
        );
    }

    #[test]
    fn rank_above_cardinality_is_r3() {
        let f = two([0, 2, 1, 2]);
        let w = f.check(Property::MatroidRank);
        assert_eq!(w.witness().unwrap().axiom, Axiom::ExceedsCardinality);
        assert_eq!(w.witness().unwrap().sets, vec![0b01]);
    }

    #[test]
    fn submodularity_witness_is_smallest_local_pair() {
        // supermodular: f(12) = 3 > f(1) + f(2)
        let f = two([0, 1, 1, 3]);
        let v = f.check(Property::Submodular);
        assert_eq!(
            v.witness().unwrap(),
            &PropertyViolation::new(Axiom::NotSubmodular, vec![0b01, 0b10])
        );
        assert!(f.check(Property::Supermodular).holds());
        assert!(!f.check(Property::Modular).holds());
    }

    #[test]
    fn modular_and_normalized() {
        let g = GroundSet::indexed(2).unwrap();
        let f = SetFunction::modular(g, &[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert!(f.check(Property::Modular).holds());
        assert!(f.check(Property::Normalized).holds());
        assert!(f.check(Property::KPolymatroid(ratio(1, 2))).holds());
        assert!(!f.check(Property::KPolymatroid(ratio(1, 3))).holds());
        assert!(!u23().check(Property::Normalized).holds());
    }

    #[test]
    fn decreasing() {
        let f = two([3, 2, 2, 1]);
        assert!(f.check(Property::Decreasing).holds());
        let w = f.check(Property::Increasing);
        assert_eq!(w.witness().unwrap().sets, vec![0, 0b01]);
    }

    #[test]
    fn k_alternating_on_uniform_rank() {
        assert!(check_k_alternating(&u23(), 1).unwrap().holds());
        assert!(check_k_alternating(&u23(), 2).unwrap().holds());
        let v = check_k_alternating(&u23(), 3).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.sets, vec![0, 0b001, 0b010, 0b100]);
        assert_eq!(w.alternating_sum, int(1));
        assert!(check_k_alternating(&u23(), 0).is_err());
    }

    #[test]
    fn k_alternating_modular_always_holds() {
        let g = GroundSet::indexed(4).unwrap();
        let f = SetFunction::modular(g, &[int(1), int(0), ratio(3, 2), int(2)]).unwrap();
        for k in 1..=5 {
            assert!(check_k_alternating(&f, k).unwrap().holds());
        }
        assert!(check_k_alternating_full(&f, 2).unwrap().holds());
    }

    #[test]
    fn full_k_alternating_agrees_on_small_case() {
        let v = check_k_alternating_full(&u23(), 3);
        // 3·4 = 12 bits
        assert!(!v.unwrap().holds());
        assert!(check_k_alternating_full(&u23(), 2).unwrap().holds());
    }

    #[test]
    fn quotient_examples() {
        let r = u23();
        let g = r.ground().clone();
        let p = Partition::from_masks(g.clone(), &[0b011, 0b100], GroundSet::new(["q1", "q2"]).unwrap())
            .unwrap();
        let q = quotient(&r, &p).unwrap();
        assert_eq!(q.values(), &[int(0), int(2), int(1), int(2)]);

        assert_eq!(quotient(&r, &Partition::identity(&g)).unwrap(), r);
        let single = quotient(&r, &Partition::single_class(&g, "S")).unwrap();
        assert_eq!(single.values(), &[int(0), int(2)]);
    }

    #[test]
    fn quotient_allows_empty_classes_and_rejects_mismatch() {
        let r = u23();
        let p = Partition::new(
            r.ground().clone(),
            vec![0, 0, 2],
            GroundSet::new(["x", "empty", "z"]).unwrap(),
        )
        .unwrap();
        let q = quotient(&r, &p).unwrap();
        assert_eq!(q.value(0b010), &int(0));
        assert_eq!(q.value(0b011), &int(2));
        let other = Partition::identity(&GroundSet::indexed(2).unwrap());
        assert!(quotient(&r, &other).is_err());
    }

    #[test]
    fn coverage_examples() {
        let d = coverage_decompose(&two([0, 1, 1, 1])).unwrap();
        assert_eq!(d.coefficients().len(), 1);
        assert_eq!(d.coefficient(0b11), int(1));

        let d = coverage_decompose(&two([0, 1, 1, 2])).unwrap();
        assert_eq!(d.coefficient(0b01), int(1));
        assert_eq!(d.coefficient(0b10), int(1));
        assert_eq!(d.coefficient(0b11), int(0));

        match coverage_decompose(&u23()) {
            Err(Error::NotCoverage { subset, coefficient }) => {
                assert_eq!(subset, 0b111);
                assert_eq!(coefficient, int(-1));
            }
            other => panic!("expected a negative coefficient, got {other:?}"),
        }
        assert!(matches!(coverage_decompose(&two([1, 1, 1, 1])), Err(Error::Domain(_))));
    }

    #[test]
    fn coverage_reconstruct_examples() {
        let g = GroundSet::indexed(2).unwrap();
        let d = CoverageDecomposition::from_coefficients(2, [(0b11, int(1))]).unwrap();
        assert_eq!(coverage_reconstruct(&d, &g).unwrap(), two([0, 1, 1, 1]));
        let empty = CoverageDecomposition::from_coefficients(2, []).unwrap();
        assert_eq!(coverage_reconstruct(&empty, &g).unwrap(), two([0, 0, 0, 0]));
        let bad = CoverageDecomposition::from_coefficients(2, [(0, int(1))]).unwrap();
        assert!(coverage_reconstruct(&bad, &g).is_err());
        assert!(CoverageDecomposition::from_coefficients(2, [(1, int(-1))]).is_err());
    }

    #[test]
    fn scaled_integers_clears_denominators() {
        let g = GroundSet::indexed(1).unwrap();
        let f = SetFunction::new(g, vec![ratio(1, 2), ratio(2, 3)]).unwrap();
        let (ints, den) = f.scaled_integers().unwrap();
        assert_eq!(den, BigInt::from(6));
        assert_eq!(ints, vec![3, 4]);
    }
}
