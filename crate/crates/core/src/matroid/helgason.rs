//! Expansion of an integer polymatroid into a matroid with parallel copies.

use num_traits::{Signed, ToPrimitive};

use super::Matroid;
use crate::error::{domain, Error, Result};
use crate::setfn::{elements, GroundSet, Property, SetFunction, SubsetMask, DENSE_CAP};
use crate::verdict::Verdict;

/// A matroid `M = (S', r)` together with `θ: S' → S` such that `φ(X) = r(θ⁻¹(X))`.
#[derive(Debug, Clone)]
pub struct HelgasonExpansion {
    pub matroid: Matroid,
    /// `theta[i]` is the element of `S` that copy `i` of `S'` maps to.
    pub theta: Vec<usize>,
}

impl HelgasonExpansion {
    /// `θ⁻¹(X)` as a mask over `S'`.
    pub fn preimage(&self, x: SubsetMask) -> SubsetMask {
        self.theta
            .iter()
            .enumerate()
            .filter(|&(_, &s)| x & (1 << s) != 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }
}

/// Expands an integer polymatroid `φ` into a matroid with `φ({s})` parallel copies of each `s`.
///
/// The rank is `r(X') = min_{Y⊆S} φ(Y) + |X' ∖ θ⁻¹(Y)|`, evaluated through the recursion
/// `r(X') = min(φ(θ(X')), min_{x∈X'} r(X'−x) + 1)`. Copies of `s` are labelled `s` when
/// there is one of them and `s#1`, `s#2`, … otherwise; loops get no copies.
pub fn helgason_expand(phi: &SetFunction) -> Result<HelgasonExpansion> {
    if !phi.is_integral() {
        return domain("expansion needs an integer-valued function");
    }
    if let Verdict::Fails(v) = phi.check(Property::Polymatroid) {
        return domain(format!("expansion needs a polymatroid function ({:?})", v.axiom));
    }
    let values: Vec<u64> = phi
        .values()
        .iter()
        .map(|v| {
            debug_assert!(!v.is_negative());
            v.to_integer().to_u64().ok_or_else(|| Error::Domain("value too large".into()))
        })
        .collect::<Result<_>>()?;
    let n = phi.n();
    let copies: Vec<u64> = (0..n).map(|s| values[1 << s]).collect();
    let total: u64 = copies.iter().sum();
    if total > DENSE_CAP as u64 {
        return Err(Error::Capacity {
            what: "expanded ground set",
            n: total as usize,
            cap: DENSE_CAP,
        });
    }

    let mut labels = Vec::new();
    let mut theta = Vec::new();
    for (s, &c) in copies.iter().enumerate() {
        let label = phi.ground().label(s);
        for k in 1..=c {
            labels.push(if c == 1 {
                label.to_string()
            } else {
                format!("{label}#{k}")
            });
            theta.push(s);
        }
    }
    let ground = GroundSet::new(labels)?;

    let size = 1usize << ground.len();
    let mut image = vec![0 as SubsetMask; size];
    let mut table = vec![0u32; size];
    for x in 1..size {
        let low = x.trailing_zeros() as usize;
        image[x] = image[x & (x - 1)] | (1 << theta[low]);
        let mut best = values[image[x] as usize];
        for e in elements(x as SubsetMask) {
            best = best.min(table[x ^ (1 << e)] as u64 + 1);
        }
        table[x] = best as u32;
    }
    Ok(HelgasonExpansion {
        matroid: Matroid::from_table(ground, table),
        theta,
    })
}
