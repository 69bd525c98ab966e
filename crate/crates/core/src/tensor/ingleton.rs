//! Exhaustive screening for Ingleton's inequality
//! `r(AB) + r(AC) + r(AD) + r(BC) + r(BD) ≥ r(A) + r(B) + r(ABC) + r(ABD) + r(CD)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::rational::{self, Rational};
use crate::setfn::{submasks, SetFunction, SubsetMask};

/// Largest ground set for [`IngletonMode::All`] (`16^n` quadruples).
pub const INGLETON_ALL_CAP: usize = 8;

/// Largest ground set for [`IngletonMode::DisjointOnly`] (`5^n` quadruples).
pub const INGLETON_DISJOINT_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IngletonMode {
    /// All quadruples of subsets.
    All,
    /// Pairwise disjoint quadruples only.
    DisjointOnly,
}

impl IngletonMode {
    pub fn default_cap(self) -> usize {
        match self {
            IngletonMode::All => INGLETON_ALL_CAP,
            IngletonMode::DisjointOnly => INGLETON_DISJOINT_CAP,
        }
    }
}

impl fmt::Display for IngletonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IngletonMode::All => "all",
            IngletonMode::DisjointOnly => "disjoint_only",
        })
    }
}

impl FromStr for IngletonMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(IngletonMode::All),
            "disjoint_only" | "disjoint-only" => Ok(IngletonMode::DisjointOnly),
            _ => Err(Error::Parse(format!("unknown Ingleton mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngletonWitness {
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub c: SubsetMask,
    pub d: SubsetMask,
    #[serde(with = "rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngletonReport {
    pub holds: bool,
    pub witness: Option<IngletonWitness>,
    pub mode: IngletonMode,
}

/// Checks Ingleton's inequality over every quadruple allowed by `mode`.
///
/// Quadruples are scanned in colexicographic order (`D` most significant, then `C`,
/// `B`, `A`), and the first violation in that order is reported regardless of how the
/// scan is split across threads.
pub fn check_ingleton(f: &SetFunction, mode: IngletonMode) -> Result<IngletonReport> {
    check_ingleton_with_cap(f, mode, mode.default_cap())
}

pub fn check_ingleton_with_cap(f: &SetFunction, mode: IngletonMode, cap: usize) -> Result<IngletonReport> {
    if f.n() > cap {
        return Err(Error::Capacity {
            what: match mode {
                IngletonMode::All => "Ingleton check over all quadruples",
                IngletonMode::DisjointOnly => "Ingleton check over disjoint quadruples",
            },
            n: f.n(),
            cap,
        });
    }
    let (table, scale) = f.scaled_integers().ok_or_else(|| {
        Error::Domain("values are too large for the Ingleton scan".into())
    })?;
    // Sums of five values must not overflow; i64 is markedly faster when it suffices.
    let narrow: Option<Vec<i64>> = table
        .iter()
        .map(|&v| i64::try_from(v).ok().filter(|v| v.abs() < 1 << 59))
        .collect();
    let found = match narrow {
        Some(t) => scan(&t, f.ground().full(), mode)
            .map(|(a, b, c, d, l, r)| (a, b, c, d, i128::from(l), i128::from(r))),
        None => scan(&table, f.ground().full(), mode),
    };
    let witness = found.map(|(a, b, c, d, lhs, rhs)| IngletonWitness {
        a,
        b,
        c,
        d,
        lhs: Rational::new(BigInt::from(lhs), scale.clone()),
        rhs: Rational::new(BigInt::from(rhs), scale.clone()),
    });
    Ok(IngletonReport {
        holds: witness.is_none(),
        witness,
        mode,
    })
}

/// [`check_ingleton`] on a matroid's rank function.
pub fn check_ingleton_matroid(m: &Matroid, mode: IngletonMode) -> Result<IngletonReport> {
    check_ingleton(&m.rank_function()?, mode)
}

type Hit<T> = (SubsetMask, SubsetMask, SubsetMask, SubsetMask, T, T);

fn violation<T>(r: &[T], a: SubsetMask, b: SubsetMask, c: SubsetMask, d: SubsetMask) -> Option<Hit<T>>
where
    T: Copy + Ord + std::ops::Add<Output = T>,
{
    let at = |m: SubsetMask| r[m as usize];
    let lhs = at(a | b) + at(a | c) + at(a | d) + at(b | c) + at(b | d);
    let rhs = at(a) + at(b) + at(a | b | c) + at(a | b | d) + at(c | d);
    (lhs < rhs).then_some((a, b, c, d, lhs, rhs))
}

fn scan<T>(r: &[T], full: SubsetMask, mode: IngletonMode) -> Option<Hit<T>>
where
    T: Copy + Ord + Send + Sync + std::ops::Add<Output = T>,
{
    (0..=full).into_par_iter().find_map_first(|d| match mode {
        IngletonMode::All => (0..=full).find_map(|c| {
            (0..=full).find_map(|b| (0..=full).find_map(|a| violation(r, a, b, c, d)))
        }),
        IngletonMode::DisjointOnly => submasks(full & !d).find_map(|c| {
            submasks(full & !(c | d))
                .find_map(|b| submasks(full & !(b | c | d)).find_map(|a| violation(r, a, b, c, d)))
        }),
    })
}
