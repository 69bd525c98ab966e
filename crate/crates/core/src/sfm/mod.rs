//! Submodular function minimization: exhaustive reference and min-norm-point solver.
//!
//! Both routines return the lattice-minimum minimizer, i.e. the intersection of all
//! minimizers, which is itself a minimizer when `f` is submodular.

mod minnorm;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::setfn::{elements, full_mask, scatter, SetFunction, SetOracle, SubsetMask, DENSE_CAP};

/// Default residual tolerance for the min-norm solver.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Brute,
    Minnorm,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Brute => "brute",
            Algorithm::Minnorm => "minnorm",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Algorithm::Brute),
            "minnorm" => Ok(Algorithm::Minnorm),
            _ => Err(Error::Parse(format!("unknown algorithm {s:?}; expected brute or minnorm"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimizationResult {
    pub minimizer: SubsetMask,
    #[serde(with = "rational::serde_str")]
    pub min_value: Rational,
    pub algorithm: Algorithm,
    pub iterations: usize,
}

/// Global minimum by enumerating all `2^n` subsets.
pub fn minimize_brute(f: &impl SetOracle) -> Result<MinimizationResult> {
    minimize_brute_with_cap(f, DENSE_CAP)
}

pub fn minimize_brute_with_cap(f: &impl SetOracle, cap: usize) -> Result<MinimizationResult> {
    let n = f.ground_size();
    if n > cap {
        return Err(Error::Capacity {
            what: "brute-force minimization",
            n,
            cap,
        });
    }
    Ok(brute(n, &|m| f.value_at(m)))
}

fn brute(n: usize, f: &dyn Fn(SubsetMask) -> Rational) -> MinimizationResult {
    let count = 1u64 << n;
    let mut best = f(0);
    let mut meet = 0;
    let mut smallest = 0;
    for m in 1..count {
        let m = m as SubsetMask;
        let v = f(m);
        match v.cmp(&best) {
            std::cmp::Ordering::Less => {
                best = v;
                meet = m;
                smallest = m;
            }
            std::cmp::Ordering::Equal => {
                meet &= m;
                if m.count_ones() < smallest.count_ones() {
                    smallest = m;
                }
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    // Without submodularity the intersection need not be a minimizer.
    let minimizer = if f(meet) == best { meet } else { smallest };
    MinimizationResult {
        minimizer,
        min_value: best,
        algorithm: Algorithm::Brute,
        iterations: count as usize,
    }
}

/// Minimum by Wolfe's min-norm-point algorithm, certified exactly.
///
/// `f` must be submodular. Returns [`Error::Solver`] if the final iterate does not
/// certify an exact minimum.
pub fn minimize_minnorm(f: &SetFunction, tol: f64) -> Result<MinimizationResult> {
    let denominator = rational::common_denominator(f.values());
    minnorm_oracle(f.n(), &|m| f.value(m).clone(), &denominator, tol)
}

/// [`minimize_minnorm`] on an oracle whose values all have denominators dividing `denominator`.
pub fn minimize_minnorm_oracle(
    f: &impl SetOracle,
    denominator: &BigInt,
    tol: f64,
) -> Result<MinimizationResult> {
    minnorm_oracle(f.ground_size(), &|m| f.value_at(m), denominator, tol)
}

fn minnorm_oracle(
    n: usize,
    f: &dyn Fn(SubsetMask) -> Rational,
    denominator: &BigInt,
    tol: f64,
) -> Result<MinimizationResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let first = minnorm::solve(n, f, denominator, tol)?;
    let mut minimizer = first.minimizer;
    let mut iterations = first.iterations;
    // Shrink to the lattice minimum: `e` can go iff some minimizer lies inside `W − e`.
    for e in elements(first.minimizer) {
        let rest = minimizer & !(1 << e);
        if rest == minimizer {
            continue;
        }
        let positions: Vec<usize> = elements(rest).collect();
        let inner = minnorm::solve(positions.len(), &|m| f(scatter(m, &positions)), denominator, tol)?;
        iterations += inner.iterations;
        if inner.value == first.value {
            minimizer = scatter(inner.minimizer, &positions);
        }
    }
    Ok(MinimizationResult {
        minimizer,
        min_value: first.value,
        algorithm: Algorithm::Minnorm,
        iterations,
    })
}

pub fn minimize(f: &SetFunction, algorithm: Algorithm) -> Result<MinimizationResult> {
    match algorithm {
        Algorithm::Brute => minimize_brute(f),
        Algorithm::Minnorm => minimize_minnorm(f, DEFAULT_TOL),
    }
}

/// Minimizes `f` over the supersets of `z`, i.e. `g(W) = f(Z ∪ W)` over `W ⊆ S∖Z`.
pub fn minimize_over_supersets(
    f: &SetFunction,
    z: SubsetMask,
    algorithm: Algorithm,
) -> Result<MinimizationResult> {
    f.ground().check_mask(z)?;
    let denominator = rational::common_denominator(f.values());
    minimize_over_supersets_oracle(f, z, algorithm, &denominator)
}

pub(crate) fn minimize_over_supersets_oracle(
    f: &impl SetOracle,
    z: SubsetMask,
    algorithm: Algorithm,
    denominator: &BigInt,
) -> Result<MinimizationResult> {
    let n = f.ground_size();
    let positions: Vec<usize> = elements(full_mask(n) & !z).collect();
    let g = |w: SubsetMask| f.value_at(z | scatter(w, &positions));
    let mut result = match algorithm {
        Algorithm::Brute => {
            if positions.len() > DENSE_CAP {
                return Err(Error::Capacity {
                    what: "brute-force minimization",
                    n: positions.len(),
                    cap: DENSE_CAP,
                });
            }
            brute(positions.len(), &g)
        }
        Algorithm::Minnorm => minnorm_oracle(positions.len(), &g, denominator, DEFAULT_TOL)?,
    };
    result.minimizer = z | scatter(result.minimizer, &positions);
    Ok(result)
}
