//! Tensor products: verification, Kronecker products of linear matroids, coverage
//! tensor products, and Ingleton screening.

mod ingleton;

use num_traits::Zero;
use serde::Serialize;

use crate::coupling::{first_rectangle_failure, ProductGround, RectangleWitness};
use crate::error::{domain, Result};
use crate::matroid::{Matroid, MatroidKind};
use crate::rational::Rational;
use crate::setfn::{coverage_decompose, elements, SetFunction, SetOracle, SubsetMask};
use crate::verdict::Verdict;

pub use ingleton::{
    check_ingleton, check_ingleton_matroid, check_ingleton_with_cap, IngletonMode, IngletonReport,
    IngletonWitness, INGLETON_ALL_CAP, INGLETON_DISJOINT_CAP,
};

/// The three equivalent tensor conditions, each with its first failing rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorVerdict {
    /// `φ(Y₁×Y₂) = φ₁(Y₁)·φ₂(Y₂)` on every rectangle.
    pub condition_i: Verdict<RectangleWitness>,
    /// The same identity on the fibers `{e₁}×Y₂` and `Y₁×{e₂}`, and on `S₁×S₂`.
    pub condition_ii: Verdict<RectangleWitness>,
    /// Coupling marginals plus `φ({(e₁,e₂)}) = φ₁(e₁)·φ₂(e₂)`.
    pub condition_iii: Verdict<RectangleWitness>,
    pub is_tensor: bool,
}

impl TensorVerdict {
    /// Whether the three conditions hold or fail together.
    pub fn conditions_agree(&self) -> bool {
        self.condition_i.holds() == self.condition_ii.holds()
            && self.condition_ii.holds() == self.condition_iii.holds()
    }
}

/// Evaluates the three tensor conditions exhaustively.
///
/// Rectangles are scanned row-major over `(Y₁, Y₂)`. Condition (ii) scans
/// `{e₁}×Y₂` for each `e₁`, then `Y₁×{e₂}` for each `e₂`, then the full product;
/// condition (iii) scans the coupling marginals first and the singletons after.
pub fn check_tensor(phi: &impl SetOracle, phi1: &SetFunction, phi2: &SetFunction) -> Result<TensorVerdict> {
    let product = ProductGround::new(phi1.ground(), phi2.ground())?;
    if phi.ground_size() != product.ground().len() {
        return domain(format!(
            "function has {} elements but the product has {}",
            phi.ground_size(),
            product.ground().len()
        ));
    }
    let (n1, n2) = (product.n1(), product.n2());
    let (full1, full2) = (phi1.ground().full(), phi2.ground().full());

    let all = (0..=full1).flat_map(|y1| (0..=full2).map(move |y2| (y1, y2)));
    let condition_i = first_rectangle_failure(phi, phi1, phi2, &product, all);

    let row_fibers = (0..n1).flat_map(|e1| (0..=full2).map(move |y2| (1 << e1, y2)));
    let column_fibers = (0..n2).flat_map(|e2| (0..=full1).map(move |y1| (y1, 1 << e2)));
    let fibers = row_fibers
        .chain(column_fibers)
        .chain(std::iter::once((full1, full2)));
    let condition_ii = first_rectangle_failure(phi, phi1, phi2, &product, fibers);

    let marginals = (0..=full1)
        .map(|y1| (y1, full2))
        .chain((0..=full2).map(|y2| (full1, y2)));
    let singletons = (0..n1).flat_map(|e1| (0..n2).map(move |e2| (1 << e1, 1 << e2)));
    let condition_iii = first_rectangle_failure(phi, phi1, phi2, &product, marginals.chain(singletons));

    Ok(TensorVerdict {
        is_tensor: condition_i.holds(),
        condition_i,
        condition_ii,
        condition_iii,
    })
}

/// The linear matroid of the Kronecker product of two representations over the same GF(p).
///
/// Column `(i, j)` is `a_i ⊗ b_j`, matching the product ground set's element order.
pub fn kronecker_tensor(m1: &Matroid, m2: &Matroid) -> Result<Matroid> {
    let (MatroidKind::Linear(a), MatroidKind::Linear(b)) = (m1.kind(), m2.kind()) else {
        return domain(format!(
            "Kronecker tensor needs two linear matroids, got {} and {}",
            m1.kind_name(),
            m2.kind_name()
        ));
    };
    let product = ProductGround::new(m1.ground(), m2.ground())?;
    Matroid::linear_on(product.ground().clone(), a.kronecker(b)?)
}

/// The tensor product `Σ_A c_A·(φ_A ⊗ φ₂)` of a coverage function `φ₁ = Σ_A c_A·φ_A`
/// with any `φ₂` satisfying `φ₂(∅) = 0`, where `(φ_A ⊗ φ₂)(X) = φ₂(π₂((A×S₂) ∩ X))`.
pub fn coverage_tensor(phi1: &SetFunction, phi2: &SetFunction) -> Result<SetFunction> {
    if !phi2.value(0).is_zero() {
        return domain("the second factor must vanish on the empty set");
    }
    let decomposition = coverage_decompose(phi1)?;
    let product = ProductGround::new(phi1.ground(), phi2.ground())?;
    let terms: Vec<(SubsetMask, &Rational)> = decomposition
        .coefficients()
        .iter()
        .map(|(&a, c)| (a, c))
        .collect();
    let n1 = product.n1();
    Ok(SetFunction::from_fn(product.ground().clone(), |x| {
        let rows: Vec<SubsetMask> = (0..n1).map(|e1| product.row(x, e1)).collect();
        terms
            .iter()
            .map(|&(a, c)| {
                let covered = elements(a).fold(0, |acc, e1| acc | rows[e1]);
                c * phi2.value(covered)
            })
            .sum()
    }))
}
