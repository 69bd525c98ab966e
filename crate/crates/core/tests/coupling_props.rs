//! Property tests for the submodular, polymatroid and matroid coupling constructions.

mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use subcouple::coupling::{
    amalgam_coupling, build_b, build_matroid_coupling, build_polymatroid_coupling, verify_coupling,
    verify_local_tensor, CouplingSpec, ProductGround,
};
use subcouple::matroid::{Matroid, ModularWeights};
use subcouple::rational::int;
use subcouple::setfn::{full_mask, quotient, Property, SubsetMask};
use subcouple::sfm::Algorithm;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn b_is_a_submodular_coupling(seed in any::<u64>(), n1 in 1usize..=4, n2 in 1usize..=3) {
        prop_assume!(n1 * n2 <= 12);
        let mut rng = rng(seed);
        let phi1 = random_nonneg_submodular(&mut rng, n1);
        let phi2 = random_nonneg_submodular(&mut rng, n2);
        let mu1 = random_normalized_weights(&mut rng, &phi1);
        let mu2 = random_normalized_weights(&mut rng, &phi2);
        let spec = CouplingSpec::new(phi1.clone(), phi2.clone(), mu1, mu2).unwrap();
        let b = build_b(&spec).unwrap();
        prop_assert!(b.check(Property::Submodular).holds());
        prop_assert!(verify_coupling(&b, &phi1, &phi2).unwrap().holds());
        let product = ProductGround::new(phi1.ground(), phi2.ground()).unwrap();
        prop_assert_eq!(quotient(&b, &product.row_partition()).unwrap(), phi1.scaled(phi2.full_value()));
        prop_assert_eq!(quotient(&b, &product.column_partition()).unwrap(), phi2.scaled(phi1.full_value()));
    }

    #[test]
    fn polymatroid_coupling_respects_the_product_bound(seed in any::<u64>(), n1 in 1usize..=3, n2 in 1usize..=3, k1 in 1usize..=2, k2 in 1usize..=2) {
        let mut rng = rng(seed);
        let phi1 = random_integer_polymatroid(&mut rng, n1, k1);
        let phi2 = random_integer_polymatroid(&mut rng, n2, k2);
        let mu1 = random_base_vertex(&mut rng, &phi1);
        let mu2 = random_base_vertex(&mut rng, &phi2);
        let spec = CouplingSpec::new(phi1.clone(), phi2.clone(), mu1.clone(), mu2.clone()).unwrap();
        let phi = build_polymatroid_coupling(&spec).unwrap();
        prop_assert!(phi.check(Property::Polymatroid).holds());
        prop_assert!(phi.is_integral());
        for y1 in 0..=full_mask(n1) {
            for y2 in 0..=full_mask(n2) {
                let value = phi.value(rectangle(y1, y2, n1, n2));
                let bound = phi1.value(y1) * phi2.value(y2);
                prop_assert!(value <= &bound);
                if &mu1.value(y1) == phi1.value(y1) || &mu2.value(y2) == phi2.value(y2) {
                    prop_assert_eq!(value, &bound);
                }
            }
        }
    }

    #[test]
    fn matroid_couplings_of_random_matroids(seed in any::<u64>(), n1 in 1usize..=3, n2 in 1usize..=3) {
        let mut rng = rng(seed);
        let m1 = random_matroid(&mut rng, n1);
        let m2 = random_matroid(&mut rng, n2);
        let bases1 = bases(&m1);
        let bases2 = bases(&m2);
        let b1 = bases1[rng.gen_range(0..bases1.len())];
        let b2 = bases2[rng.gen_range(0..bases2.len())];
        let c = build_matroid_coupling(&m1, &m2, b1, b2).unwrap();
        prop_assert!(c.certify().unwrap().holds());
        prop_assert!(verify_local_tensor(&c, &m1, &m2, b1, b2).unwrap().holds());
        let amalgam = amalgam_coupling(&m1, &m2, b1, b2).unwrap();
        prop_assert_eq!(amalgam.rank_function().unwrap(), c.rank_function().unwrap());
    }
}

#[test]
fn zoo_couplings_are_matroids_with_the_local_tensor_property() {
    let u23 = Matroid::uniform(3, 2).unwrap();
    let zoo = [
        Matroid::uniform(2, 1).unwrap(),
        u23,
        Matroid::partition(ground(3), &[vec!["1", "2"], vec!["3"]]).unwrap(),
        Matroid::uniform(2, 2).unwrap(),
    ];
    for m1 in &zoo {
        for m2 in &zoo {
            let (r1, r2) = (m1.rank_function().unwrap(), m2.rank_function().unwrap());
            for b1 in bases(m1) {
                for b2 in bases(m2) {
                    let c = build_matroid_coupling(m1, m2, b1, b2).unwrap();
                    assert!(c.certify().unwrap().holds());
                    assert!(verify_coupling(&c, &r1, &r2).unwrap().holds());
                    assert!(verify_local_tensor(&c, m1, m2, b1, b2).unwrap().holds());
                }
            }
        }
    }
}

#[test]
fn zero_rank_factor_forces_the_zero_coupling() {
    let phi1 = subcouple::setfn::SetFunction::zero(ground(2));
    let phi2 = random_integer_polymatroid(&mut rng(3), 2, 2);
    let mu1 = ModularWeights::new(ground(2), vec![int(0), int(0)]).unwrap();
    let mu2 = subcouple::matroid::base_vertex(&phi2, None).unwrap();
    let spec = CouplingSpec::new(phi1, phi2, mu1, mu2).unwrap();
    let phi = build_polymatroid_coupling(&spec).unwrap();
    assert!(phi.values().iter().all(|v| v == &int(0)));
}

#[test]
fn large_coupling_queries_agree_across_strategies() {
    // 4 × 5 = 20 elements: beyond the full-table strategy, answered per query.
    let m1 = Matroid::uniform(4, 2).unwrap();
    let m2 = Matroid::uniform(5, 3).unwrap();
    let c = subcouple::coupling::MatroidCoupling::new(&m1, &m2, 0b0011, 0b00111).unwrap();
    let mut rng = rng(11);
    for _ in 0..20 {
        let z: SubsetMask = rng.gen_range(0..1 << 20);
        let brute = c.rank_query(z, Algorithm::Brute).unwrap();
        let minnorm = c.rank_query(z, Algorithm::Minnorm).unwrap();
        assert_eq!(brute, minnorm);
        assert_eq!(brute, c.rank_at(z));
    }
}
