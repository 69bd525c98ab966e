//! Finite unions of half-open intervals with exact rational endpoints.

use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};
use crate::rational::{self, Rational};

/// A finite union of half-open intervals `[p, q)`, kept sorted, disjoint and with
/// touching intervals merged, so equal sets have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalIntervalSet {
    intervals: Vec<(Rational, Rational)>,
}

impl RationalIntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[p, q)`; empty when `p = q`.
    pub fn interval(p: Rational, q: Rational) -> Result<Self> {
        if p > q {
            return domain(format!(
                "interval [{}, {}) has its endpoints reversed",
                rational::format(&p),
                rational::format(&q)
            ));
        }
        Ok(Self::normalize(vec![(p, q)]))
    }

    /// `[0, 1)`.
    pub fn unit() -> Self {
        Self {
            intervals: vec![(Rational::zero(), Rational::one())],
        }
    }

    /// Union of arbitrary (possibly overlapping or unordered) intervals.
    pub fn from_intervals(intervals: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let intervals: Vec<_> = intervals.into_iter().collect();
        if let Some((p, q)) = intervals.iter().find(|(p, q)| p > q) {
            return domain(format!(
                "interval [{}, {}) has its endpoints reversed",
                rational::format(p),
                rational::format(q)
            ));
        }
        Ok(Self::normalize(intervals))
    }

    fn normalize(mut raw: Vec<(Rational, Rational)>) -> Self {
        raw.retain(|(p, q)| p < q);
        raw.sort();
        let mut intervals: Vec<(Rational, Rational)> = Vec::with_capacity(raw.len());
        for (p, q) in raw {
            match intervals.last_mut() {
                Some((_, end)) if p <= *end => {
                    if q > *end {
                        *end = q;
                    }
                }
                _ => intervals.push((p, q)),
            }
        }
        Self { intervals }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length.
    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(|(p, q)| q - p).sum()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|(p, q)| p <= x && x < q)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalize(self.intervals.iter().chain(&other.intervals).cloned().collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, a1) = &self.intervals[i];
            let (b0, b1) = &other.intervals[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::normalize(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for (p, q) in &self.intervals {
            let mut start = p.clone();
            for (r, s) in &other.intervals {
                if s <= &start || r >= q {
                    continue;
                }
                if r > &start {
                    out.push((start.clone(), r.clone()));
                }
                start = s.clone();
                if &start >= q {
                    break;
                }
            }
            if &start < q {
                out.push((start, q.clone()));
            }
        }
        Self::normalize(out)
    }

    /// `[0, 1) ∖ self`.
    pub fn complement_in_unit(&self) -> Self {
        Self::unit().difference(self)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// `self + t`.
    pub fn shift(&self, t: &Rational) -> Self {
        Self {
            intervals: self.intervals.iter().map(|(p, q)| (p + t, q + t)).collect(),
        }
    }

    /// `{fr(a) : a ∈ self}` inside `[0, 1)`.
    pub fn fractional_image(&self) -> Self {
        let one = Rational::one();
        let mut pieces = Vec::new();
        for (p, q) in &self.intervals {
            if q - p >= one {
                return Self::unit();
            }
            let base = p.floor();
            let (lo, hi) = (p - &base, q - &base);
            if hi <= one {
                pieces.push((lo, hi));
            } else {
                pieces.push((lo, one.clone()));
                pieces.push((Rational::zero(), hi - &one));
            }
        }
        Self::normalize(pieces)
    }

    /// The leftmost subset of the given measure, or `None` if `self` is too small.
    pub fn leftmost_subset_of_measure(&self, amount: &Rational) -> Option<Self> {
        let mut remaining = amount.clone();
        let mut out = Vec::new();
        for (p, q) in &self.intervals {
            if remaining <= Rational::zero() {
                break;
            }
            let length = q - p;
            if length <= remaining {
                remaining -= &length;
                out.push((p.clone(), q.clone()));
            } else {
                out.push((p.clone(), p + &remaining));
                remaining = Rational::zero();
            }
        }
        (remaining <= Rational::zero()).then(|| Self::normalize(out))
    }
}

/// The universal coverage function `Φ(A) = λ(fr(A))`.
pub fn phi_measure(a: &RationalIntervalSet) -> Rational {
    a.fractional_image().measure()
}

impl fmt::Display for RationalIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(p, q)| format!("[{}, {})", rational::format(p), rational::format(q)))
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

impl Serialize for RationalIntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.intervals.len()))?;
        for (p, q) in &self.intervals {
            seq.serialize_element(&[rational::format(p), rational::format(q)])?;
        }
        seq.end()
    }
}
