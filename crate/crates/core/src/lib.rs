//! Exact toolkit for couplings, tensor products and quotients of submodular set
//! functions and matroids.
//!
//! Set functions are dense tables of exact rationals indexed by bitmask. On top of them
//! sit a matroid oracle zoo, submodular minimization, coupling constructions, tensor
//! product checks with Ingleton screening, and the universal coverage function on
//! finite unions of intervals.

pub mod coupling;
pub mod error;
pub mod json;
pub mod matroid;
pub mod rational;
pub mod setfn;
pub mod sfm;
pub mod tensor;
pub mod universal;
pub mod verdict;

pub use error::{Error, Result};
pub use rational::Rational;
pub use verdict::Verdict;
