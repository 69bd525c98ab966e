//! Matroid rank oracles, a builder zoo, axiom certification and greedy machinery.

mod helgason;
mod linear;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::coupling::MatroidCoupling;
use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};
use crate::setfn::{
    elements, full_mask, popcount, scatter, GroundSet, Property, PropertyViolation, SetFunction,
    SetOracle, SubsetMask, DENSE_CAP,
};
use crate::verdict::Verdict;

pub use helgason::{helgason_expand, HelgasonExpansion};
pub use linear::{is_prime, FieldMatrix, MAX_PRIME};

/// Largest ground set [`Matroid::certify`] accepts by default.
pub const CERTIFY_CAP: usize = 16;

/// Labels of the Vámos matroid, in bit order.
pub const VAMOS_LABELS: [&str; 8] = ["a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2"];

/// The five dependent 4-sets of the Vámos matroid: A∪B, A∪C, A∪D, B∪C, B∪D.
pub const VAMOS_CIRCUITS: [SubsetMask; 5] = [0x0F, 0x33, 0xC3, 0x3C, 0xCC];

/// How a [`Matroid`] computes its rank.
#[derive(Debug, Clone)]
pub enum MatroidKind {
    Uniform { r: usize },
    /// Rank counts the blocks a set meets; elements outside every block are loops.
    Partition { blocks: Vec<SubsetMask> },
    Linear(FieldMatrix),
    Vamos,
    Free,
    Zero,
    Explicit(Arc<[u32]>),
    /// Parts occupy consecutive bit ranges in order.
    DirectSum(Vec<Matroid>),
    Restriction { inner: Arc<Matroid>, positions: Vec<usize> },
    Contraction { inner: Arc<Matroid>, positions: Vec<usize>, contracted: SubsetMask },
    Coupling(Arc<MatroidCoupling>),
}

/// A matroid given by its rank oracle.
#[derive(Clone)]
pub struct Matroid {
    ground: GroundSet,
    kind: MatroidKind,
    memo: Arc<OnceLock<Arc<[u32]>>>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground", &self.ground)
            .field("kind", &self.kind_name())
            .finish()
    }
}

impl Matroid {
    fn build(ground: GroundSet, kind: MatroidKind) -> Self {
        Self {
            ground,
            kind,
            memo: Arc::new(OnceLock::new()),
        }
    }

    /// `U_{r,n}` on labels `"1"`, …, `"n"`.
    pub fn uniform(n: usize, r: usize) -> Result<Self> {
        Self::uniform_on(GroundSet::indexed(n)?, r)
    }

    pub fn uniform_on(ground: GroundSet, r: usize) -> Result<Self> {
        if r > ground.len() {
            return domain(format!("U_{{{r},{}}} needs r ≤ n", ground.len()));
        }
        Ok(Self::build(ground, MatroidKind::Uniform { r }))
    }

    pub fn free(ground: GroundSet) -> Self {
        Self::build(ground, MatroidKind::Free)
    }

    pub fn zero(ground: GroundSet) -> Self {
        Self::build(ground, MatroidKind::Zero)
    }

    pub fn vamos() -> Self {
        let ground = GroundSet::new(VAMOS_LABELS).expect("labels are distinct");
        Self::build(ground, MatroidKind::Vamos)
    }

    /// Partition matroid whose blocks are given as label lists.
    pub fn partition<S: AsRef<str>>(ground: GroundSet, blocks: &[Vec<S>]) -> Result<Self> {
        let masks = blocks
            .iter()
            .map(|b| ground.mask_of(b))
            .collect::<Result<Vec<_>>>()?;
        Self::partition_masks(ground, masks)
    }

    pub fn partition_masks(ground: GroundSet, blocks: Vec<SubsetMask>) -> Result<Self> {
        let mut seen = 0;
        for &b in &blocks {
            ground.check_mask(b)?;
            if b & seen != 0 {
                return domain("partition-matroid blocks must be disjoint");
            }
            seen |= b;
        }
        Ok(Self::build(ground, MatroidKind::Partition { blocks }))
    }

    /// Column matroid of `matrix` on labels `"1"`, …, `"cols"`.
    pub fn linear(matrix: FieldMatrix) -> Result<Self> {
        let ground = GroundSet::indexed(matrix.cols())?;
        Self::linear_on(ground, matrix)
    }

    pub fn linear_on(ground: GroundSet, matrix: FieldMatrix) -> Result<Self> {
        if ground.len() != matrix.cols() {
            return domain("one label per matrix column is required");
        }
        Ok(Self::build(ground, MatroidKind::Linear(matrix)))
    }

    /// Matroid with an explicit rank table; values must be nonnegative integers.
    ///
    /// The axioms are not checked here; see [`Matroid::certify`].
    pub fn explicit(f: &SetFunction) -> Result<Self> {
        let table = f
            .values()
            .iter()
            .enumerate()
            .map(|(m, v)| {
                if !v.is_integer() || v.is_negative() {
                    return domain(format!(
                        "rank of {:?} must be a nonnegative integer, got {}",
                        f.ground().labels_of(m as SubsetMask),
                        rational::format(v)
                    ));
                }
                v.to_integer()
                    .to_u32()
                    .ok_or_else(|| Error::Domain("rank value too large".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(Self::from_table(f.ground().clone(), table))
    }

    pub(crate) fn from_table(ground: GroundSet, table: Vec<u32>) -> Self {
        let table: Arc<[u32]> = table.into();
        let m = Self::build(ground, MatroidKind::Explicit(table.clone()));
        let _ = m.memo.set(table);
        m
    }

    /// Direct sum; labels are kept if distinct across parts, otherwise prefixed with `"{i}:"`.
    pub fn direct_sum(parts: Vec<Matroid>) -> Result<Self> {
        let all: Vec<&String> = parts.iter().flat_map(|p| p.ground.labels()).collect();
        let distinct = all.iter().collect::<std::collections::HashSet<_>>().len() == all.len();
        let labels: Vec<String> = parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                p.ground.labels().iter().map(move |l| {
                    if distinct {
                        l.clone()
                    } else {
                        format!("{i}:{l}")
                    }
                })
            })
            .collect();
        Ok(Self::build(GroundSet::new(labels)?, MatroidKind::DirectSum(parts)))
    }

    /// `M | kept`.
    pub fn restrict(&self, kept: SubsetMask) -> Result<Self> {
        self.ground.check_mask(kept)?;
        Ok(Self::build(
            self.ground.restrict(kept),
            MatroidKind::Restriction {
                inner: Arc::new(self.clone()),
                positions: elements(kept).collect(),
            },
        ))
    }

    /// `M / contracted`, on the remaining elements.
    pub fn contract(&self, contracted: SubsetMask) -> Result<Self> {
        self.ground.check_mask(contracted)?;
        let kept = self.ground.full() & !contracted;
        Ok(Self::build(
            self.ground.restrict(kept),
            MatroidKind::Contraction {
                inner: Arc::new(self.clone()),
                positions: elements(kept).collect(),
                contracted,
            },
        ))
    }

    pub(crate) fn from_coupling(coupling: Arc<MatroidCoupling>) -> Self {
        Self::build(coupling.product().ground().clone(), MatroidKind::Coupling(coupling))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            MatroidKind::Uniform { .. } => "uniform",
            MatroidKind::Partition { .. } => "partition",
            MatroidKind::Linear(_) => "linear",
            MatroidKind::Vamos => "vamos",
            MatroidKind::Free => "free",
            MatroidKind::Zero => "zero",
            MatroidKind::Explicit(_) => "explicit",
            MatroidKind::DirectSum(_) => "direct_sum",
            MatroidKind::Restriction { .. } => "restriction",
            MatroidKind::Contraction { .. } => "contraction",
            MatroidKind::Coupling(_) => "coupling",
        }
    }

    /// Checked rank query.
    pub fn rank(&self, x: SubsetMask) -> Result<usize> {
        self.ground.check_mask(x)?;
        Ok(self.rank_at(x))
    }

    /// Rank of `x`, which must lie inside the ground set.
    pub fn rank_at(&self, x: SubsetMask) -> usize {
        if let Some(table) = self.memo.get() {
            return table[x as usize] as usize;
        }
        match &self.kind {
            MatroidKind::Uniform { r } => popcount(x).min(*r),
            MatroidKind::Partition { blocks } => blocks.iter().filter(|&&b| b & x != 0).count(),
            MatroidKind::Linear(m) => m.column_rank(x),
            MatroidKind::Vamos => match popcount(x) {
                k @ 0..=3 => k,
                4 if VAMOS_CIRCUITS.contains(&x) => 3,
                _ => 4,
            },
            MatroidKind::Free => popcount(x),
            MatroidKind::Zero => 0,
            MatroidKind::Explicit(t) => t[x as usize] as usize,
            MatroidKind::DirectSum(parts) => {
                let mut offset = 0;
                let mut total = 0;
                for p in parts {
                    total += p.rank_at((x >> offset) & full_mask(p.n()));
                    offset += p.n();
                }
                total
            }
            MatroidKind::Restriction { inner, positions } => inner.rank_at(scatter(x, positions)),
            MatroidKind::Contraction {
                inner,
                positions,
                contracted,
            } => inner.rank_at(scatter(x, positions) | contracted) - inner.rank_at(*contracted),
            MatroidKind::Coupling(c) => c.rank_at(x),
        }
    }

    pub fn full_rank(&self) -> usize {
        self.rank_at(self.ground.full())
    }

    /// The whole rank table, computed once and cached.
    pub fn rank_table(&self) -> Result<Arc<[u32]>> {
        if let Some(t) = self.memo.get() {
            return Ok(t.clone());
        }
        if self.n() > DENSE_CAP {
            return Err(Error::Capacity {
                what: "matroid rank table",
                n: self.n(),
                cap: DENSE_CAP,
            });
        }
        let table: Arc<[u32]> = match &self.kind {
            MatroidKind::Coupling(c) => c.rank_table()?,
            _ => (0..self.ground.subset_count() as SubsetMask)
                .map(|x| self.rank_at(x) as u32)
                .collect(),
        };
        Ok(self.memo.get_or_init(|| table).clone())
    }

    /// The rank function as an exact set function.
    pub fn rank_function(&self) -> Result<SetFunction> {
        let table = self.rank_table()?;
        SetFunction::new(
            self.ground.clone(),
            table.iter().map(|&v| rational::int(v as i64)).collect(),
        )
    }

    pub fn is_independent(&self, x: SubsetMask) -> bool {
        self.rank_at(x) == popcount(x)
    }

    pub fn is_basis(&self, x: SubsetMask) -> bool {
        self.ground.check_mask(x).is_ok() && self.is_independent(x) && popcount(x) == self.full_rank()
    }

    /// Greedy basis in label order.
    pub fn find_basis(&self) -> SubsetMask {
        let order: Vec<usize> = (0..self.n()).collect();
        self.greedy_basis(&order)
    }

    /// Greedy basis scanning elements in `order`.
    pub fn greedy_basis(&self, order: &[usize]) -> SubsetMask {
        let mut basis = 0;
        let mut rank = 0;
        for &e in order {
            let candidate = basis | (1 << e);
            let r = self.rank_at(candidate);
            if r > rank {
                basis = candidate;
                rank = r;
            }
        }
        basis
    }

    /// Exhaustive (R1)–(R4) and integrality check, for `n ≤ 16`.
    pub fn certify(&self) -> Result<Verdict<PropertyViolation>> {
        self.certify_with_cap(CERTIFY_CAP)
    }

    pub fn certify_with_cap(&self, cap: usize) -> Result<Verdict<PropertyViolation>> {
        if self.n() > cap {
            return Err(Error::Capacity {
                what: "matroid certification",
                n: self.n(),
                cap,
            });
        }
        Ok(self.rank_function()?.check(Property::MatroidRank))
    }
}

impl SetOracle for Matroid {
    fn ground_size(&self) -> usize {
        self.n()
    }
    fn value_at(&self, mask: SubsetMask) -> Rational {
        rational::int(self.rank_at(mask) as i64)
    }
}

/// Nonnegative weights, one per element, defining the modular function `w(X) = Σ_{x∈X} w(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularWeights {
    ground: GroundSet,
    weights: Vec<Rational>,
}

impl ModularWeights {
    pub fn new(ground: GroundSet, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != ground.len() {
            return domain(format!(
                "{} weights given for {} elements",
                weights.len(),
                ground.len()
            ));
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return domain(format!("weight of {:?} is negative", ground.label(i)));
        }
        Ok(Self { ground, weights })
    }

    /// The characteristic vector `χ_B`.
    pub fn characteristic(ground: &GroundSet, b: SubsetMask) -> Result<Self> {
        ground.check_mask(b)?;
        let weights = (0..ground.len())
            .map(|i| rational::int(i64::from(b & (1 << i) != 0)))
            .collect();
        Ok(Self {
            ground: ground.clone(),
            weights,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn value(&self, x: SubsetMask) -> Rational {
        elements(x).map(|i| &self.weights[i]).sum()
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn to_set_function(&self) -> SetFunction {
        SetFunction::modular(self.ground.clone(), &self.weights).expect("lengths agree")
    }

    /// First `Z` with `w(Z) > φ(Z)`, or `S` if `w(S) ≠ φ(S)`; `None` when `w ∈ B(φ)`.
    pub fn base_polyhedron_violation(&self, phi: &SetFunction) -> Option<SubsetMask> {
        if phi.n() != self.ground.len() {
            return Some(self.ground.full());
        }
        let mut running = vec![Rational::zero(); phi.ground().subset_count()];
        for x in 1..running.len() {
            let low = x.trailing_zeros() as usize;
            running[x] = &running[x & (x - 1)] + &self.weights[low];
            if &running[x] > phi.value(x as SubsetMask) {
                return Some(x as SubsetMask);
            }
        }
        let full = phi.ground().full();
        (&running[full as usize] != phi.value(full)).then_some(full)
    }

    pub fn in_base_polyhedron(&self, phi: &SetFunction) -> bool {
        self.base_polyhedron_violation(phi).is_none()
    }
}

/// Greedy vertex of `B(φ)`: `w(e_i) = φ({e_1..e_i}) − φ({e_1..e_{i−1}})` along `order`
/// (label order when `None`).
pub fn base_vertex(phi: &SetFunction, order: Option<&[usize]>) -> Result<ModularWeights> {
    if let Verdict::Fails(v) = phi.check(Property::Polymatroid) {
        return domain(format!(
            "base vertex needs a polymatroid function ({:?} at {:?})",
            v.axiom,
            v.sets
                .iter()
                .map(|&s| phi.ground().labels_of(s))
                .collect::<Vec<_>>()
        ));
    }
    let n = phi.n();
    let default: Vec<usize> = (0..n).collect();
    let order = order.unwrap_or(&default);
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != default {
        return domain("order must be a permutation of the ground set");
    }
    let mut weights = vec![Rational::zero(); n];
    let mut prefix = 0;
    for &e in order {
        let next = prefix | (1 << e);
        weights[e] = phi.value(next) - phi.value(prefix);
        prefix = next;
    }
    ModularWeights::new(phi.ground().clone(), weights)
}
