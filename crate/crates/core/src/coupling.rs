//! Couplings of set functions and matroids on product ground sets.
//!
//! For `φ₁` on `S₁` and `φ₂` on `S₂` with weights `μᵢ`, `μᵢ(Sᵢ) = φᵢ(Sᵢ)`, the function
//!
//! `b(Z) = Σ_{e₁} μ₁(e₁)·φ₂(π₂(Z_{e₁})) + Σ_{e₂} μ₂(e₂)·φ₁(π₁(Z^{e₂})) − Σ_{(e₁,e₂)∈Z} μ₁(e₁)·μ₂(e₂)`
//!
//! is a submodular coupling; its superset-minimum closure is a polymatroid coupling, and
//! with `μᵢ = χ_{Bᵢ}` for bases `Bᵢ` it is the rank function of a matroid coupling.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::matroid::{base_vertex, Matroid, ModularWeights};
use crate::rational::{self, Rational};
use crate::setfn::{
    elements, full_mask, popcount, GroundSet, Partition, Property, SetFunction, SetOracle,
    SubsetMask, DENSE_CAP,
};
use crate::sfm::{self, Algorithm};
use crate::verdict::Verdict;

/// Rank tables of matroid couplings up to this size are computed in one pass.
pub const TABLE_LIMIT: usize = 16;

/// Per-query rank evaluation enumerates supersets when at most this many elements are free.
pub const BRUTE_LIMIT: usize = 20;

/// `S₁ × S₂` with element `(i, j)` at index `i·n₂ + j` and label `"(x,y)"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductGround {
    left: GroundSet,
    right: GroundSet,
    product: GroundSet,
}

impl ProductGround {
    pub fn new(left: &GroundSet, right: &GroundSet) -> Result<Self> {
        Self::with_cap(left, right, DENSE_CAP)
    }

    pub fn with_cap(left: &GroundSet, right: &GroundSet, cap: usize) -> Result<Self> {
        let labels = left
            .labels()
            .iter()
            .flat_map(|x| right.labels().iter().map(move |y| format!("({x},{y})")));
        let product = GroundSet::with_cap(labels.collect::<Vec<_>>(), cap).map_err(|e| match e {
            Error::Capacity { n, cap, .. } => Error::Capacity {
                what: "product ground set",
                n,
                cap,
            },
            other => other,
        })?;
        Ok(Self {
            left: left.clone(),
            right: right.clone(),
            product,
        })
    }

    pub fn left(&self) -> &GroundSet {
        &self.left
    }

    pub fn right(&self) -> &GroundSet {
        &self.right
    }

    pub fn ground(&self) -> &GroundSet {
        &self.product
    }

    pub fn n1(&self) -> usize {
        self.left.len()
    }

    pub fn n2(&self) -> usize {
        self.right.len()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n2() + j
    }

    pub fn pair(&self, index: usize) -> (usize, usize) {
        (index / self.n2(), index % self.n2())
    }

    /// `π₂(Z_{e₁})`: the fiber of `z` over `e₁ ∈ S₁`, as a subset of `S₂`.
    pub fn row(&self, z: SubsetMask, e1: usize) -> SubsetMask {
        (z >> (e1 * self.n2())) & full_mask(self.n2())
    }

    /// `π₁(Z^{e₂})`: the fiber of `z` over `e₂ ∈ S₂`, as a subset of `S₁`.
    pub fn column(&self, z: SubsetMask, e2: usize) -> SubsetMask {
        (0..self.n1())
            .filter(|&e1| z & (1 << self.index(e1, e2)) != 0)
            .fold(0, |acc, e1| acc | (1 << e1))
    }

    /// `Y₁ × Y₂`.
    pub fn rectangle(&self, y1: SubsetMask, y2: SubsetMask) -> SubsetMask {
        elements(y1).fold(0, |acc, e1| acc | (y2 << (e1 * self.n2())))
    }

    /// Partition of the product into the fibers `{e₁} × S₂`, labelled like `S₁`.
    pub fn row_partition(&self) -> Partition {
        let class_of = (0..self.product.len()).map(|k| self.pair(k).0).collect();
        Partition::new(self.product.clone(), class_of, self.left.clone()).expect("valid classes")
    }

    /// Partition of the product into the fibers `S₁ × {e₂}`, labelled like `S₂`.
    pub fn column_partition(&self) -> Partition {
        let class_of = (0..self.product.len()).map(|k| self.pair(k).1).collect();
        Partition::new(self.product.clone(), class_of, self.right.clone()).expect("valid classes")
    }
}

/// Inputs of the coupling constructions: two set functions and a weight vector for each.
#[derive(Debug, Clone)]
pub struct CouplingSpec {
    pub phi1: SetFunction,
    pub phi2: SetFunction,
    pub mu1: ModularWeights,
    pub mu2: ModularWeights,
}

impl CouplingSpec {
    /// Validates `φᵢ(∅) = 0`, `φᵢ ≥ 0`, submodularity and `μᵢ(Sᵢ) = φᵢ(Sᵢ)`.
    pub fn new(phi1: SetFunction, phi2: SetFunction, mu1: ModularWeights, mu2: ModularWeights) -> Result<Self> {
        for (name, phi, mu) in [("φ₁", &phi1, &mu1), ("φ₂", &phi2, &mu2)] {
            if mu.ground() != phi.ground() {
                return domain(format!("weights for {name} are over a different ground set"));
            }
            if !phi.value(0).is_zero() {
                return domain(format!("{name}(∅) must be 0"));
            }
            if let Some(m) = (0..phi.ground().subset_count()).find(|&m| phi.value(m as SubsetMask).is_negative()) {
                return domain(format!(
                    "{name} is negative at {:?}",
                    phi.ground().labels_of(m as SubsetMask)
                ));
            }
            if let Verdict::Fails(w) = phi.check(Property::Submodular) {
                return domain(format!(
                    "{name} is not submodular at {:?}",
                    w.sets.iter().map(|&s| phi.ground().labels_of(s)).collect::<Vec<_>>()
                ));
            }
            if &mu.total() != phi.full_value() {
                return domain(format!(
                    "weights for {name} sum to {} but {name}(S) = {}",
                    rational::format(&mu.total()),
                    rational::format(phi.full_value())
                ));
            }
        }
        Ok(Self { phi1, phi2, mu1, mu2 })
    }

    /// Uses the greedy base vertices in label order as weights; both functions must be polymatroids.
    pub fn with_base_vertices(phi1: SetFunction, phi2: SetFunction) -> Result<Self> {
        let mu1 = base_vertex(&phi1, None)?;
        let mu2 = base_vertex(&phi2, None)?;
        Self::new(phi1, phi2, mu1, mu2)
    }

    pub fn product(&self) -> Result<ProductGround> {
        ProductGround::new(self.phi1.ground(), self.phi2.ground())
    }
}

/// The explicit submodular coupling `b`.
pub fn build_b(spec: &CouplingSpec) -> Result<SetFunction> {
    let product = spec.product()?;
    let (n1, n2) = (product.n1(), product.n2());
    let pair_weight: Vec<Rational> = (0..n1 * n2)
        .map(|k| {
            let (i, j) = product.pair(k);
            spec.mu1.weight(i) * spec.mu2.weight(j)
        })
        .collect();
    Ok(SetFunction::from_fn(product.ground().clone(), |z| {
        let mut value = Rational::zero();
        for e1 in 0..n1 {
            let mu = spec.mu1.weight(e1);
            if !mu.is_zero() {
                value += mu * spec.phi2.value(product.row(z, e1));
            }
        }
        for e2 in 0..n2 {
            let mu = spec.mu2.weight(e2);
            if !mu.is_zero() {
                value += mu * spec.phi1.value(product.column(z, e2));
            }
        }
        for k in elements(z) {
            value -= &pair_weight[k];
        }
        value
    }))
}

/// In place: `values[Z] ← min{values[Z'] : Z' ⊇ Z}`.
pub(crate) fn superset_min_closure<T: Ord + Clone>(values: &mut [T]) {
    let size = values.len();
    let mut bit = 1;
    while bit < size {
        for z in 0..size {
            if z & bit == 0 && values[z | bit] < values[z] {
                values[z] = values[z | bit].clone();
            }
        }
        bit <<= 1;
    }
}

/// The polymatroid coupling `φ(Z) = min{b(Z') : Z' ⊇ Z}`.
///
/// The weights must lie in the base polyhedra of the factors, which must be polymatroids.
pub fn build_polymatroid_coupling(spec: &CouplingSpec) -> Result<SetFunction> {
    for (name, phi, mu) in [("φ₁", &spec.phi1, &spec.mu1), ("φ₂", &spec.phi2, &spec.mu2)] {
        if let Verdict::Fails(w) = phi.check(Property::Polymatroid) {
            return domain(format!("{name} is not a polymatroid function ({:?})", w.axiom));
        }
        if let Some(z) = mu.base_polyhedron_violation(phi) {
            return domain(format!(
                "weights for {name} leave the base polyhedron at {:?}",
                phi.ground().labels_of(z)
            ));
        }
    }
    let b = build_b(spec)?;
    let ground = b.ground().clone();
    let mut values = b.into_values();
    superset_min_closure(&mut values);
    SetFunction::new(ground, values)
}

/// A matroid coupling of `M₁` and `M₂` built from bases `B₁`, `B₂`.
///
/// `r(Z) = min_{W⊇Z} [Σ_{e₁∈B₁} r₂(π₂(W_{e₁})) + Σ_{e₂∈B₂} r₁(π₁(W^{e₂})) − |W ∩ (B₁×B₂)|]`.
pub struct MatroidCoupling {
    m1: Matroid,
    m2: Matroid,
    b1: SubsetMask,
    b2: SubsetMask,
    product: ProductGround,
    table: OnceLock<Arc<[u32]>>,
    cache: RwLock<HashMap<SubsetMask, u32>>,
}

impl std::fmt::Debug for MatroidCoupling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatroidCoupling")
            .field("m1", &self.m1)
            .field("m2", &self.m2)
            .field("b1", &self.b1)
            .field("b2", &self.b2)
            .finish()
    }
}

impl MatroidCoupling {
    pub fn new(m1: &Matroid, m2: &Matroid, b1: SubsetMask, b2: SubsetMask) -> Result<Self> {
        for (name, m, b) in [("B₁", m1, b1), ("B₂", m2, b2)] {
            if !m.is_basis(b) {
                return domain(format!(
                    "{name} = {:?} is not a basis",
                    m.ground().labels_of(b & m.ground().full())
                ));
            }
        }
        Ok(Self {
            m1: m1.clone(),
            m2: m2.clone(),
            b1,
            b2,
            product: ProductGround::new(m1.ground(), m2.ground())?,
            table: OnceLock::new(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn product(&self) -> &ProductGround {
        &self.product
    }

    pub fn bases(&self) -> (SubsetMask, SubsetMask) {
        (self.b1, self.b2)
    }

    /// The integer coupling function `b(W)` with `μᵢ = χ_{Bᵢ}`.
    pub fn b_value(&self, w: SubsetMask) -> i64 {
        let p = &self.product;
        let rows: usize = elements(self.b1).map(|e1| self.m2.rank_at(p.row(w, e1))).sum();
        let cols: usize = elements(self.b2).map(|e2| self.m1.rank_at(p.column(w, e2))).sum();
        (rows + cols) as i64 - popcount(w & p.rectangle(self.b1, self.b2)) as i64
    }

    pub fn rank_at(&self, z: SubsetMask) -> usize {
        if let Some(t) = self.table.get() {
            return t[z as usize] as usize;
        }
        if self.product.ground().len() <= TABLE_LIMIT {
            return self.rank_table().expect("within the table limit")[z as usize] as usize;
        }
        if let Some(&r) = self.cache.read().expect("rank cache poisoned").get(&z) {
            return r as usize;
        }
        let free = self.product.ground().len() - popcount(z);
        let algorithm = if free <= BRUTE_LIMIT {
            Algorithm::Brute
        } else {
            Algorithm::Minnorm
        };
        let r = self
            .rank_query(z, algorithm)
            .or_else(|_| self.rank_query(z, Algorithm::Brute))
            .expect("brute-force superset minimization cannot fail");
        self.cache.write().expect("rank cache poisoned").insert(z, r as u32);
        r
    }

    /// One rank value by minimizing `b` over the supersets of `z`, bypassing all caches.
    pub fn rank_query(&self, z: SubsetMask, algorithm: Algorithm) -> Result<usize> {
        let oracle = crate::setfn::FnOracle::new(self.product.ground().len(), |w| {
            rational::int(self.b_value(w))
        });
        let result = sfm::minimize_over_supersets_oracle(&oracle, z, algorithm, &BigInt::one())?;
        rational::to_i64(&result.min_value)
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| Error::Internal("coupling rank is not a nonnegative integer".into()))
    }

    /// The whole rank table, by superset-minimum closure of the `b` table.
    pub fn rank_table(&self) -> Result<Arc<[u32]>> {
        if let Some(t) = self.table.get() {
            return Ok(t.clone());
        }
        let n = self.product.ground().len();
        if n > DENSE_CAP {
            return Err(Error::Capacity {
                what: "coupling rank table",
                n,
                cap: DENSE_CAP,
            });
        }
        let mut values: Vec<i64> = (0..1u64 << n).map(|w| self.b_value(w as SubsetMask)).collect();
        superset_min_closure(&mut values);
        let table: Arc<[u32]> = values
            .into_iter()
            .map(|v| u32::try_from(v).map_err(|_| Error::Internal("negative coupling rank".into())))
            .collect::<Result<Vec<_>>>()?
            .into();
        Ok(self.table.get_or_init(|| table).clone())
    }
}

/// The matroid coupling of `M₁` and `M₂` with respect to the bases `B₁`, `B₂`.
pub fn build_matroid_coupling(m1: &Matroid, m2: &Matroid, b1: SubsetMask, b2: SubsetMask) -> Result<Matroid> {
    Ok(Matroid::from_coupling(Arc::new(MatroidCoupling::new(m1, m2, b1, b2)?)))
}

/// Couples a list of matroids left to right, using greedy bases in label order.
pub fn couple_many(matroids: &[Matroid]) -> Result<Matroid> {
    let (first, rest) = matroids
        .split_first()
        .ok_or_else(|| Error::Domain("at least one matroid is required".into()))?;
    let total: usize = matroids.iter().map(Matroid::n).product();
    if total > DENSE_CAP {
        return Err(Error::Capacity {
            what: "iterated product ground set",
            n: total,
            cap: DENSE_CAP,
        });
    }
    rest.iter().try_fold(first.clone(), |acc, m| {
        build_matroid_coupling(&acc, m, acc.find_basis(), m.find_basis())
    })
}

/// Relative placement of two ground sets inside their union `T = T₁ ∪ T₂`.
struct Overlay {
    union: GroundSet,
    /// Positions in `T` of the elements of `T₁`, `T₂` and the shared part `T₀`.
    pos1: Vec<usize>,
    pos2: Vec<usize>,
    pos0: Vec<usize>,
}

impl Overlay {
    fn new(t1: &GroundSet, t2: &GroundSet, t0: &GroundSet) -> Result<Self> {
        let mut labels: Vec<String> = t1.labels().to_vec();
        labels.extend(t2.labels().iter().filter(|l| t1.index_of(l).is_none()).cloned());
        let union = GroundSet::new(labels)?;
        let locate = |g: &GroundSet| -> Vec<usize> {
            g.labels().iter().map(|l| union.index_of(l).expect("label in union")).collect()
        };
        let shared: Vec<&String> = t1.labels().iter().filter(|l| t2.index_of(l).is_some()).collect();
        if shared.len() != t0.len() || shared.iter().any(|l| t0.index_of(l).is_none()) {
            return domain("the shared matroid must live exactly on the common elements");
        }
        let (pos1, pos2) = (locate(t1), locate(t2));
        let pos0 = t0.labels().iter().map(|l| union.index_of(l).expect("shared label")).collect();
        Ok(Self { union, pos1, pos2, pos0 })
    }

    /// The part of `y ⊆ T` lying in a factor, in that factor's own bit positions.
    fn gather(y: SubsetMask, positions: &[usize]) -> SubsetMask {
        positions
            .iter()
            .enumerate()
            .filter(|&(_, &p)| y & (1 << p) != 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }
}

/// The proper amalgam `r(Z) = min{r₁(Y∩T₁) + r₂(Y∩T₂) − r₀(Y∩T₁∩T₂) : Y ⊇ Z}`.
///
/// The union is ordered as `T₁`'s labels followed by the new labels of `T₂`. Both `N₁` and
/// `N₂` must restrict to `N₀` on the common elements.
pub fn amalgam_rank(n0: &Matroid, n1: &Matroid, n2: &Matroid) -> Result<SetFunction> {
    let overlay = Overlay::new(n1.ground(), n2.ground(), n0.ground())?;
    if overlay.union.len() > DENSE_CAP {
        return Err(Error::Capacity {
            what: "amalgam ground set",
            n: overlay.union.len(),
            cap: DENSE_CAP,
        });
    }
    // positions of N₀'s elements inside N₁ and inside N₂
    let in1: Vec<usize> = n0.ground().labels().iter().map(|l| n1.ground().index_of(l).expect("shared")).collect();
    let in2: Vec<usize> = n0.ground().labels().iter().map(|l| n2.ground().index_of(l).expect("shared")).collect();
    for y in 0..n0.ground().subset_count() as SubsetMask {
        let r0 = n0.rank_at(y);
        let r1 = n1.rank_at(crate::setfn::scatter(y, &in1));
        let r2 = n2.rank_at(crate::setfn::scatter(y, &in2));
        if r0 != r1 || r0 != r2 {
            return domain(format!(
                "restrictions to the common elements disagree at {:?}: r₀ = {r0}, r₁ = {r1}, r₂ = {r2}",
                n0.ground().labels_of(y)
            ));
        }
    }
    let mut values: Vec<i64> = (0..overlay.union.subset_count() as SubsetMask)
        .map(|y| {
            n1.rank_at(Overlay::gather(y, &overlay.pos1)) as i64
                + n2.rank_at(Overlay::gather(y, &overlay.pos2)) as i64
                - n0.rank_at(Overlay::gather(y, &overlay.pos0)) as i64
        })
        .collect();
    superset_min_closure(&mut values);
    SetFunction::new(
        overlay.union,
        values.into_iter().map(rational::int).collect(),
    )
}

/// The coupling of `M₁` and `M₂` obtained as an amalgam.
///
/// `N₁ = ⊕_{e₂∈B₂} M₁` lives on `S₁ × B₂`, `N₂ = ⊕_{e₁∈B₁} M₂` on `B₁ × S₂`, and they
/// overlap in the free matroid on `B₁ × B₂`; the elements of `(S₁∖B₁) × (S₂∖B₂)` are loops.
pub fn amalgam_coupling(m1: &Matroid, m2: &Matroid, b1: SubsetMask, b2: SubsetMask) -> Result<Matroid> {
    for (name, m, b) in [("B₁", m1, b1), ("B₂", m2, b2)] {
        if !m.is_basis(b) {
            return domain(format!("{name} is not a basis"));
        }
    }
    let product = ProductGround::new(m1.ground(), m2.ground())?;
    let label = |i: usize, j: usize| product.ground().label(product.index(i, j)).to_string();
    let copies = |count: SubsetMask, make: &dyn Fn(usize) -> Result<Matroid>| -> Result<Matroid> {
        Matroid::direct_sum(elements(count).map(make).collect::<Result<Vec<_>>>()?)
    };
    let n1 = copies(b2, &|e2| {
        let labels: Vec<String> = (0..m1.n()).map(|i| label(i, e2)).collect();
        relabel(m1, labels)
    })?;
    let n2 = copies(b1, &|e1| {
        let labels: Vec<String> = (0..m2.n()).map(|j| label(e1, j)).collect();
        relabel(m2, labels)
    })?;
    let shared: Vec<String> = elements(b1)
        .flat_map(|i| elements(b2).map(move |j| (i, j)))
        .map(|(i, j)| label(i, j))
        .collect();
    let n0 = Matroid::free(GroundSet::new(shared)?);
    let amalgam = amalgam_rank(&n0, &n1, &n2)?;
    let table: Vec<u32> = (0..product.ground().subset_count() as SubsetMask)
        .map(|z| {
            let inside = elements(z)
                .filter_map(|k| amalgam.ground().index_of(product.ground().label(k)))
                .fold(0, |acc, p| acc | (1 << p));
            rational::to_i64(amalgam.value(inside)).expect("integer rank") as u32
        })
        .collect();
    Ok(Matroid::from_table(product.ground().clone(), table))
}

fn relabel(m: &Matroid, labels: Vec<String>) -> Result<Matroid> {
    let f = m.rank_function()?.relabel(GroundSet::new(labels)?)?;
    Matroid::explicit(&f)
}

/// A rectangle `Y₁ × Y₂` where a product identity fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RectangleWitness {
    pub left: SubsetMask,
    pub right: SubsetMask,
    #[serde(with = "rational::serde_str")]
    pub expected: Rational,
    #[serde(with = "rational::serde_str")]
    pub actual: Rational,
}

fn check_factors(phi: &impl SetOracle, product: &ProductGround) -> Result<()> {
    if phi.ground_size() != product.ground().len() {
        return domain(format!(
            "function has {} elements but the product has {}",
            phi.ground_size(),
            product.ground().len()
        ));
    }
    Ok(())
}

/// Checks `φ(Y₁×S₂) = φ₁(Y₁)·φ₂(S₂)` for all `Y₁`, then `φ(S₁×Y₂) = φ₁(S₁)·φ₂(Y₂)` for all `Y₂`.
pub fn verify_coupling(
    phi: &impl SetOracle,
    phi1: &SetFunction,
    phi2: &SetFunction,
) -> Result<Verdict<RectangleWitness>> {
    let product = ProductGround::new(phi1.ground(), phi2.ground())?;
    check_factors(phi, &product)?;
    let (full1, full2) = (phi1.ground().full(), phi2.ground().full());
    let rows = (0..=full1).map(|y1| (y1, full2));
    let cols = (0..=full2).map(|y2| (full1, y2));
    Ok(first_rectangle_failure(phi, phi1, phi2, &product, rows.chain(cols)))
}

pub(crate) fn first_rectangle_failure(
    phi: &impl SetOracle,
    phi1: &SetFunction,
    phi2: &SetFunction,
    product: &ProductGround,
    rectangles: impl IntoIterator<Item = (SubsetMask, SubsetMask)>,
) -> Verdict<RectangleWitness> {
    Verdict::from_option(rectangles.into_iter().find_map(|(y1, y2)| {
        let expected = phi1.value(y1) * phi2.value(y2);
        let actual = phi.value_at(product.rectangle(y1, y2));
        (expected != actual).then_some(RectangleWitness {
            left: y1,
            right: y2,
            expected,
            actual,
        })
    }))
}

/// Checks `r(Y₁×Y₂) = r₁(Y₁)·r₂(Y₂)` on every rectangle with `Y₁ ⊆ B₁` or `Y₂ ⊆ B₂`.
pub fn verify_local_tensor(
    m: &Matroid,
    m1: &Matroid,
    m2: &Matroid,
    b1: SubsetMask,
    b2: SubsetMask,
) -> Result<Verdict<RectangleWitness>> {
    let r1 = m1.rank_function()?;
    let r2 = m2.rank_function()?;
    let product = ProductGround::new(r1.ground(), r2.ground())?;
    check_factors(m, &product)?;
    let rectangles = (0..=r1.ground().full()).flat_map(|y1| {
        (0..=r2.ground().full())
            .filter(move |&y2| y1 & !b1 == 0 || y2 & !b2 == 0)
            .map(move |y2| (y1, y2))
    });
    Ok(first_rectangle_failure(m, &r1, &r2, &product, rectangles))
}

/// `φ(Z) = Σ_{(e₁,e₂)∈Z} μ₁(e₁)·μ₂(e₂)`.
pub fn product_measure(mu1: &ModularWeights, mu2: &ModularWeights) -> Result<SetFunction> {
    let product = ProductGround::new(mu1.ground(), mu2.ground())?;
    Ok(SetFunction::from_fn(product.ground().clone(), |z| {
        elements(z)
            .map(|k| {
                let (i, j) = product.pair(k);
                mu1.weight(i) * mu2.weight(j)
            })
            .sum()
    }))
}
