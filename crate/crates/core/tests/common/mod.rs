//! Random instance generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subcouple::matroid::{base_vertex, FieldMatrix, Matroid, ModularWeights};
use subcouple::rational::{int, ratio, Rational};
use subcouple::setfn::{full_mask, GroundSet, SetFunction, SubsetMask};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ground(n: usize) -> GroundSet {
    GroundSet::indexed(n).unwrap()
}

/// Random nonnegative coefficients on random nonempty subsets, as a map `A ↦ c_A`.
pub fn random_coverage_coefficients(rng: &mut impl Rng, n: usize, max_den: i64) -> BTreeMap<SubsetMask, Rational> {
    let terms = rng.gen_range(1..=4);
    let mut coefficients = BTreeMap::new();
    for _ in 0..terms {
        let a = rng.gen_range(1..=full_mask(n));
        let c = ratio(rng.gen_range(1..=6), rng.gen_range(1..=max_den));
        *coefficients.entry(a).or_insert_with(|| int(0)) += c;
    }
    coefficients
}

/// `Σ_A c_A·[X ∩ A ≠ ∅]`, evaluated directly.
pub fn coverage_from(n: usize, coefficients: &BTreeMap<SubsetMask, Rational>) -> SetFunction {
    SetFunction::from_fn(ground(n), |x| {
        coefficients
            .iter()
            .filter(|(&a, _)| a & x != 0)
            .map(|(_, c)| c.clone())
            .sum()
    })
}

pub fn random_coverage(rng: &mut impl Rng, n: usize, max_den: i64) -> SetFunction {
    let c = random_coverage_coefficients(rng, n, max_den);
    coverage_from(n, &c)
}

/// Cut function of a random weighted digraph: weight of arcs leaving `X`.
pub fn random_cut(rng: &mut impl Rng, n: usize, max_den: i64) -> SetFunction {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(0.4) {
                arcs.push((u, v, ratio(rng.gen_range(1..=5), rng.gen_range(1..=max_den))));
            }
        }
    }
    SetFunction::from_fn(ground(n), |x| {
        arcs.iter()
            .filter(|(u, v, _)| x & (1 << u) != 0 && x & (1 << v) == 0)
            .map(|(_, _, w)| w.clone())
            .sum()
    })
}

/// A nonnegative submodular function with `f(∅) = 0`: coverage plus a directed cut.
pub fn random_nonneg_submodular(rng: &mut impl Rng, n: usize) -> SetFunction {
    let c = random_coverage(rng, n, 3);
    let d = random_cut(rng, n, 3);
    SetFunction::from_fn(ground(n), |x| c.value(x) + d.value(x))
}

/// Nonnegative weights summing to `φ(S)`.
pub fn random_normalized_weights(rng: &mut impl Rng, phi: &SetFunction) -> ModularWeights {
    let n = phi.n();
    let mut raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    if raw.iter().all(|&w| w == 0) {
        raw[rng.gen_range(0..n)] = 1;
    }
    let total: i64 = raw.iter().sum();
    let weights = raw.iter().map(|&w| ratio(w, total) * phi.full_value()).collect();
    ModularWeights::new(phi.ground().clone(), weights).unwrap()
}

/// A uniform or partition matroid (possibly with loops) on `n` elements.
pub fn random_matroid(rng: &mut impl Rng, n: usize) -> Matroid {
    if rng.gen_bool(0.5) {
        Matroid::uniform(n, rng.gen_range(0..=n)).unwrap()
    } else {
        let blocks = rng.gen_range(1..=n);
        let mut masks = vec![0; blocks];
        for e in 0..n {
            // index `blocks` leaves the element a loop
            let b = rng.gen_range(0..=blocks);
            if b < blocks {
                masks[b] |= 1 << e;
            }
        }
        Matroid::partition_masks(ground(n), masks).unwrap()
    }
}

/// Sum of `k` random matroid rank functions: an integer `k`-polymatroid.
pub fn random_integer_polymatroid(rng: &mut impl Rng, n: usize, k: usize) -> SetFunction {
    let ranks: Vec<SetFunction> = (0..k)
        .map(|_| random_matroid(rng, n).rank_function().unwrap())
        .collect();
    SetFunction::from_fn(ground(n), |x| ranks.iter().map(|r| r.value(x).clone()).sum())
}

/// A greedy base vertex along a random order.
pub fn random_base_vertex(rng: &mut impl Rng, phi: &SetFunction) -> ModularWeights {
    let mut order: Vec<usize> = (0..phi.n()).collect();
    order.shuffle(rng);
    base_vertex(phi, Some(&order)).unwrap()
}

/// Integer submodular function with a typically negative minimum:
/// coverage + cut + `min(c, |X ∩ T|)` − modular.
pub fn random_integer_submodular(rng: &mut impl Rng, n: usize) -> SetFunction {
    let c = random_coverage(rng, n, 1);
    let d = random_cut(rng, n, 1);
    let t: SubsetMask = rng.gen_range(0..=full_mask(n));
    let cap = rng.gen_range(0..=n as i64);
    let modular: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
    SetFunction::from_fn(ground(n), |x| {
        let concave = int(((x & t).count_ones() as i64).min(cap));
        let linear: i64 = (0..n).filter(|&i| x & (1 << i) != 0).map(|i| modular[i]).sum();
        c.value(x) + d.value(x) + concave - int(linear)
    })
}

/// Brute-force minimum over all subsets.
pub fn brute_min(f: &SetFunction) -> Rational {
    f.values().iter().min().unwrap().clone()
}

/// All bases of `m`, found as sets of size `r(S)` with rank `r(S)`.
pub fn bases(m: &Matroid) -> Vec<SubsetMask> {
    let r = m.full_rank();
    (0..=m.ground().full())
        .filter(|&x| x.count_ones() as usize == r && m.rank_at(x) == r)
        .collect()
}

pub fn gf(p: u32, rows: &[Vec<i64>]) -> Matroid {
    Matroid::linear(FieldMatrix::from_rows(p, rows).unwrap()).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, p: u32, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..p as i64)).collect())
        .collect()
}

/// Index of `(i, j)` in a product with `n2` right elements.
pub fn pair_index(i: usize, j: usize, n2: usize) -> usize {
    i * n2 + j
}

/// `Y₁ × Y₂` as a mask over the product, computed from the pair indexing.
pub fn rectangle(y1: SubsetMask, y2: SubsetMask, n1: usize, n2: usize) -> SubsetMask {
    let mut z = 0;
    for i in 0..n1 {
        for j in 0..n2 {
            if y1 & (1 << i) != 0 && y2 & (1 << j) != 0 {
                z |= 1 << pair_index(i, j, n2);
            }
        }
    }
    z
}

/// Checks `φ(Y₁×S₂) = φ₁(Y₁)·φ₂(S₂)` and `φ(S₁×Y₂) = φ₁(S₁)·φ₂(Y₂)` directly.
pub fn marginals_hold(phi: &SetFunction, phi1: &SetFunction, phi2: &SetFunction) -> bool {
    let (n1, n2) = (phi1.n(), phi2.n());
    let (f1, f2) = (full_mask(n1), full_mask(n2));
    (0..=f1).all(|y1| phi.value(rectangle(y1, f2, n1, n2)) == &(phi1.value(y1) * phi2.full_value()))
        && (0..=f2).all(|y2| phi.value(rectangle(f1, y2, n1, n2)) == &(phi1.full_value() * phi2.value(y2)))
}
