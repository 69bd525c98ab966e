//! Minimum-norm point of the base polytope by Wolfe's algorithm.
//!
//! The iteration runs in `f64`. The answer is certified exactly: the final convex
//! weights are turned into rationals, giving a point `x̂` of `B(f)` and the lower bound
//! `Σ_e min(x̂_e, 0) ≤ min f`. With `D` the common denominator of `f`, a candidate `W`
//! with `D·(f(W) − bound) < 1` is an exact minimizer.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::setfn::SubsetMask;

/// Relative threshold below which a convex weight or pivot counts as zero.
const EPS: f64 = 1e-12;

pub(crate) struct Solution {
    pub minimizer: SubsetMask,
    /// `f(minimizer)`, exact.
    pub value: Rational,
    pub iterations: usize,
}

struct Corral {
    exact: Vec<Vec<Rational>>,
    points: Vec<Vec<f64>>,
    lambda: Vec<f64>,
}

impl Corral {
    fn combination(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (p, &l) in self.points.iter().zip(&self.lambda) {
            for (xi, pi) in x.iter_mut().zip(p) {
                *xi += l * pi;
            }
        }
        x
    }

    fn prune(&mut self) {
        let mut i = 0;
        while i < self.lambda.len() {
            if self.lambda[i] <= EPS {
                self.lambda.swap_remove(i);
                self.points.swap_remove(i);
                self.exact.swap_remove(i);
            } else {
                i += 1;
            }
        }
        let total: f64 = self.lambda.iter().sum();
        self.lambda.iter_mut().for_each(|l| *l /= total);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Greedy vertex of `B(f − f(∅))` minimizing `⟨x, ·⟩`: elements in increasing order of `x`.
fn greedy_vertex(f: &dyn Fn(SubsetMask) -> Rational, f0: &Rational, x: &[f64]) -> Vec<Rational> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let mut q = vec![Rational::zero(); x.len()];
    let mut prefix = 0;
    let mut previous = Rational::zero();
    for e in order {
        prefix |= 1 << e;
        let value = f(prefix) - f0;
        q[e] = &value - &previous;
        previous = value;
    }
    q
}

/// Affine minimizer of the norm over the points: solves `[G 1; 1ᵀ 0][α; ν] = [0; 1]`.
fn affine_minimizer(points: &[Vec<f64>]) -> Option<Vec<f64>> {
    let m = points.len();
    let size = m + 1;
    let mut a = vec![vec![0.0; size + 1]; size];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = dot(&points[i], &points[j]);
        }
        a[i][m] = 1.0;
        a[m][i] = 1.0;
    }
    a[m][size] = 1.0;
    let scale = a
        .iter()
        .flat_map(|row| row[..size].iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..size {
        let pivot = (col..size).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot][col].abs() <= EPS * scale.max(1.0) {
            return None;
        }
        a.swap(col, pivot);
        for r in 0..size {
            if r != col && a[r][col] != 0.0 {
                let factor = a[r][col] / a[col][col];
                for c in col..=size {
                    a[r][c] -= factor * a[col][c];
                }
            }
        }
    }
    Some((0..m).map(|i| a[i][size] / a[i][i]).collect())
}

/// Runs Wolfe's algorithm on `f` over `n` elements and certifies the best level set.
///
/// `denominator` must clear every denominator of `f`.
pub(crate) fn solve(
    n: usize,
    f: &dyn Fn(SubsetMask) -> Rational,
    denominator: &BigInt,
    tol: f64,
) -> Result<Solution> {
    let f0 = f(0);
    if n == 0 {
        return Ok(Solution {
            minimizer: 0,
            value: f0,
            iterations: 0,
        });
    }
    let cap = (10 * n * n).max(10);
    let start = greedy_vertex(f, &f0, &vec![0.0; n]);
    let mut corral = Corral {
        points: vec![start.iter().map(rational::to_f64).collect()],
        exact: vec![start],
        lambda: vec![1.0],
    };
    let mut x = corral.points[0].clone();
    let mut iterations = 0;
    while iterations < cap {
        iterations += 1;
        let q = greedy_vertex(f, &f0, &x);
        let qf: Vec<f64> = q.iter().map(rational::to_f64).collect();
        let largest = corral
            .points
            .iter()
            .chain(std::iter::once(&qf))
            .map(|p| dot(p, p))
            .fold(1.0f64, f64::max);
        if dot(&x, &x) - dot(&x, &qf) <= tol * largest || corral.points.contains(&qf) {
            break;
        }
        corral.points.push(qf);
        corral.exact.push(q);
        corral.lambda.push(0.0);
        let mut stalled = false;
        for _ in 0..=n + 1 {
            let Some(alpha) = affine_minimizer(&corral.points) else {
                stalled = true;
                break;
            };
            if alpha.iter().all(|&a| a > EPS) {
                corral.lambda = alpha;
                break;
            }
            let theta = corral
                .lambda
                .iter()
                .zip(&alpha)
                .filter(|&(_, &a)| a <= EPS)
                .map(|(&l, &a)| if l - a > 0.0 { l / (l - a) } else { 0.0 })
                .fold(1.0f64, f64::min);
            for (l, a) in corral.lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            corral.prune();
        }
        corral.prune();
        x = corral.combination(n);
        if stalled {
            // The new vertex is affinely dependent on the corral: no further progress.
            break;
        }
    }
    certify(n, f, &f0, &corral, &x, denominator, iterations)
}

fn certify(
    n: usize,
    f: &dyn Fn(SubsetMask) -> Rational,
    f0: &Rational,
    corral: &Corral,
    x: &[f64],
    denominator: &BigInt,
    iterations: usize,
) -> Result<Solution> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let mut best = (0 as SubsetMask, f0.clone());
    let mut prefix = 0;
    for &e in &order {
        prefix |= 1 << e;
        let value = f(prefix);
        if value < best.1 {
            best = (prefix, value);
        }
    }

    let weights: Vec<Rational> = corral
        .lambda
        .iter()
        .map(|&l| rational::from_f64(l.max(0.0)).unwrap_or_else(Rational::zero))
        .collect();
    let total: Rational = weights.iter().sum();
    let mut bound = f0.clone();
    if total.is_positive() {
        for e in 0..n {
            let coord: Rational = weights
                .iter()
                .zip(&corral.exact)
                .map(|(w, p)| w * &p[e])
                .sum::<Rational>()
                / &total;
            if coord.is_negative() {
                bound += coord;
            }
        }
    } else {
        bound = best.1.clone() - Rational::one();
    }

    let gap = (&best.1 - &bound) * Rational::from_integer(denominator.clone());
    if gap < Rational::one() {
        Ok(Solution {
            minimizer: best.0,
            value: best.1,
            iterations,
        })
    } else {
        Err(Error::Solver {
            message: format!("min-norm iteration stopped after {iterations} major cycles without an exact certificate"),
            best_value: best.1,
            lower_bound: bound,
        })
    }
}
