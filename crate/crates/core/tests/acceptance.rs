//! End-to-end acceptance gate: ten exact criteria, each reported as one PASS/FAIL line.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_traits::Zero;
use subcouple::coupling::{
    amalgam_coupling, build_b, build_matroid_coupling, build_polymatroid_coupling, verify_coupling,
    verify_local_tensor, CouplingSpec, ProductGround,
};
use subcouple::matroid::{FieldMatrix, Matroid};
use subcouple::rational::{int, Rational};
use subcouple::setfn::{
    check_k_alternating, coverage_decompose, coverage_reconstruct, full_mask, quotient, GroundSet, Property,
    SetFunction, SubsetMask,
};
use subcouple::sfm::{minimize_brute, minimize_minnorm, DEFAULT_TOL};
use subcouple::tensor::{check_ingleton, check_ingleton_matroid, check_tensor, coverage_tensor, kronecker_tensor, IngletonMode};
use subcouple::universal::{build_universal_trace, phi_measure, verify_universal, RationalIntervalSet};

type Outcome = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// A coupling `φ` of `φ₁` and `φ₂` kept for the quotient criterion.
struct Built {
    phi: SetFunction,
    phi1: SetFunction,
    phi2: SetFunction,
}

fn criterion_1(built: &mut Vec<Built>) -> Outcome {
    let mut rng = rng(1);
    for case in 0..100 {
        let (n1, n2) = (rand::Rng::gen_range(&mut rng, 1..=3), rand::Rng::gen_range(&mut rng, 1..=3));
        let phi1 = random_nonneg_submodular(&mut rng, n1);
        let phi2 = random_nonneg_submodular(&mut rng, n2);
        let mu1 = random_normalized_weights(&mut rng, &phi1);
        let mu2 = random_normalized_weights(&mut rng, &phi2);
        let spec = CouplingSpec::new(phi1.clone(), phi2.clone(), mu1, mu2).map_err(|e| e.to_string())?;
        let b = build_b(&spec).map_err(|e| e.to_string())?;
        ensure!(verify_coupling(&b, &phi1, &phi2).unwrap().holds(), "case {case}: marginals fail");
        ensure!(marginals_hold(&b, &phi1, &phi2), "case {case}: direct marginal check fails");
        ensure!(b.check(Property::Submodular).holds(), "case {case}: b is not submodular");
        built.push(Built { phi: b, phi1, phi2 });
    }
    Ok(())
}

fn criterion_2(built: &mut Vec<Built>) -> Outcome {
    let mut rng = rng(2);
    for case in 0..50 {
        let (k1, k2) = (rand::Rng::gen_range(&mut rng, 1..=2), rand::Rng::gen_range(&mut rng, 1..=2));
        let (n1, n2) = (rand::Rng::gen_range(&mut rng, 1..=3), rand::Rng::gen_range(&mut rng, 1..=3));
        let phi1 = random_integer_polymatroid(&mut rng, n1, k1);
        let phi2 = random_integer_polymatroid(&mut rng, n2, k2);
        let mu1 = random_base_vertex(&mut rng, &phi1);
        let mu2 = random_base_vertex(&mut rng, &phi2);
        let spec = CouplingSpec::new(phi1.clone(), phi2.clone(), mu1, mu2).map_err(|e| e.to_string())?;
        let phi = build_polymatroid_coupling(&spec).map_err(|e| e.to_string())?;
        let b = build_b(&spec).unwrap();
        ensure!(phi.check(Property::Increasing).holds(), "case {case}: not increasing");
        ensure!(phi.check(Property::Submodular).holds(), "case {case}: not submodular");
        ensure!(phi.is_integral(), "case {case}: not integer-valued");
        let bound = int((k1 * k2) as i64);
        ensure!(
            (0..n1 * n2).all(|e| phi.value(1 << e) <= &bound),
            "case {case}: a singleton exceeds k₁k₂ = {bound}"
        );
        for y1 in 0..=full_mask(n1) {
            for y2 in 0..=full_mask(n2) {
                let z = rectangle(y1, y2, n1, n2);
                ensure!(phi.value(z) == b.value(z), "case {case}: differs from b on {y1:b}×{y2:b}");
            }
        }
        ensure!(marginals_hold(&phi, &phi1, &phi2), "case {case}: marginals fail");
        built.push(Built { phi, phi1, phi2 });
    }
    Ok(())
}

fn zoo() -> Vec<(&'static str, Matroid)> {
    let u23 = Matroid::uniform(3, 2).unwrap();
    vec![
        ("U12", Matroid::uniform(2, 1).unwrap()),
        ("U23", u23.clone()),
        ("U22", Matroid::uniform(2, 2).unwrap()),
        ("P(12|3)", Matroid::partition(ground(3), &[vec!["1", "2"], vec!["3"]]).unwrap()),
        ("U23+U11", Matroid::direct_sum(vec![u23, Matroid::uniform(1, 1).unwrap()]).unwrap()),
    ]
}

/// Every matroid coupling of the zoo, with its factors and bases.
fn zoo_couplings() -> Vec<(String, Matroid, Matroid, Matroid, SubsetMask, SubsetMask)> {
    let zoo = zoo();
    let mut out = Vec::new();
    for (name1, m1) in &zoo {
        for (name2, m2) in &zoo {
            for b1 in bases(m1) {
                for b2 in bases(m2) {
                    let c = build_matroid_coupling(m1, m2, b1, b2).unwrap();
                    out.push((format!("{name1}×{name2} B₁={b1:b} B₂={b2:b}"), c, m1.clone(), m2.clone(), b1, b2));
                }
            }
        }
    }
    out
}

fn criterion_3(built: &mut Vec<Built>) -> Outcome {
    for (name, c, m1, m2, b1, b2) in zoo_couplings() {
        ensure!(c.certify().unwrap().holds(), "{name}: not a matroid");
        ensure!(verify_local_tensor(&c, &m1, &m2, b1, b2).unwrap().holds(), "{name}: local tensor identity fails");
        let (r1, r2) = (m1.rank_function().unwrap(), m2.rank_function().unwrap());
        let r = c.rank_function().unwrap();
        ensure!(marginals_hold(&r, &r1, &r2), "{name}: marginals fail");
        built.push(Built { phi: r, phi1: r1, phi2: r2 });
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let u23 = Matroid::uniform(3, 2).unwrap();
    let direct = build_matroid_coupling(&u23, &u23, 0b011, 0b011).unwrap().rank_function().unwrap();
    let amalgam = amalgam_coupling(&u23, &u23, 0b011, 0b011).unwrap().rank_function().unwrap();
    ensure!(direct.n() == 9, "product has {} elements", direct.n());
    for z in 0..1u32 << 9 {
        ensure!(direct.value(z) == amalgam.value(z), "ranks differ at mask {z:09b}");
    }
    Ok(())
}

/// All matrices over GF(p) with the given shapes.
fn all_matrices(p: u32, rows: usize, cols: usize) -> Vec<Vec<Vec<i64>>> {
    let cells = rows * cols;
    let count = (p as usize).pow(cells as u32);
    (0..count)
        .map(|mut code| {
            let mut m = vec![vec![0; cols]; rows];
            for cell in 0..cells {
                m[cell / cols][cell % cols] = (code % p as usize) as i64;
                code /= p as usize;
            }
            m
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let mut factors: Vec<(u32, Matroid)> = Vec::new();
    for rows in 1..=2 {
        for cols in 1..=3 {
            for m in all_matrices(2, rows, cols) {
                factors.push((2, gf(2, &m)));
            }
        }
    }
    let mut rng = rng(5);
    for _ in 0..40 {
        let (rows, cols) = (rand::Rng::gen_range(&mut rng, 1..=3), rand::Rng::gen_range(&mut rng, 1..=3));
        factors.push((3, gf(3, &random_matrix(&mut rng, 3, rows, cols))));
    }
    let ranks: Vec<SetFunction> = factors.iter().map(|(_, m)| m.rank_function().unwrap()).collect();
    for (i, (p1, m1)) in factors.iter().enumerate() {
        for (j, (p2, m2)) in factors.iter().enumerate() {
            if p1 != p2 {
                continue;
            }
            let k = kronecker_tensor(m1, m2).unwrap();
            let v = check_tensor(&k, &ranks[i], &ranks[j]).unwrap();
            ensure!(
                v.condition_i.holds() && v.condition_ii.holds() && v.condition_iii.holds(),
                "Kronecker tensor {i}⊗{j} over GF({p1}) fails a condition"
            );
        }
    }
    let mut failing = 0;
    for (name, c, m1, m2, _, _) in zoo_couplings() {
        let (r1, r2) = (m1.rank_function().unwrap(), m2.rank_function().unwrap());
        let v = check_tensor(&c, &r1, &r2).unwrap();
        ensure!(v.conditions_agree(), "{name}: the three conditions disagree");
        let loopless = (0..c.n()).all(|e| c.rank_at(1 << e) == 1);
        ensure!(!loopless || v.is_tensor, "{name}: loopless coupling is not a tensor product");
        failing += usize::from(!v.is_tensor);
    }
    ensure!(failing > 0, "no coupling with loops failed the tensor conditions");
    Ok(())
}

/// Vámos ranks from its list of bases: every 4-set except A∪B, A∪C, A∪D, B∪C, B∪D.
fn vamos_from_bases() -> SetFunction {
    let non_bases: [SubsetMask; 5] = [0x0F, 0x33, 0xC3, 0x3C, 0xCC];
    let bases: Vec<SubsetMask> = (0..256u32)
        .filter(|m| m.count_ones() == 4 && !non_bases.contains(m))
        .collect();
    let g = GroundSet::new(["a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2"]).unwrap();
    SetFunction::from_fn(g, |x| int(bases.iter().map(|b| (x & b).count_ones()).max().unwrap() as i64))
}

fn criterion_6() -> Outcome {
    let r = vamos_from_bases();
    ensure!(
        Matroid::vamos().rank_function().unwrap() == r,
        "the Vámos oracle disagrees with its basis list"
    );
    for mode in [IngletonMode::All, IngletonMode::DisjointOnly] {
        let report = check_ingleton(&r, mode).unwrap();
        let Some(w) = report.witness else {
            return Err(format!("Vámos passes Ingleton in mode {mode}"));
        };
        let v = |m: SubsetMask| r.value(m).clone();
        let lhs = v(w.a | w.b) + v(w.a | w.c) + v(w.a | w.d) + v(w.b | w.c) + v(w.b | w.d);
        let rhs = v(w.a) + v(w.b) + v(w.a | w.b | w.c) + v(w.a | w.b | w.d) + v(w.c | w.d);
        ensure!((lhs.clone(), rhs.clone()) == (int(15), int(16)), "mode {mode}: lhs {lhs}, rhs {rhs}");
        ensure!((w.lhs, w.rhs) == (lhs, rhs), "mode {mode}: reported values differ from recomputed ones");
    }
    let mut linear = vec![
        gf(3, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]),
        gf(2, &[vec![1, 0, 0, 1, 1, 0], vec![0, 1, 0, 1, 0, 1], vec![0, 0, 1, 0, 1, 1]]),
        gf(3, &[vec![1, 0, 0, 1, 1, 1], vec![0, 1, 0, 1, 2, 0], vec![0, 0, 1, 0, 1, 2]]),
        Matroid::linear(FieldMatrix::identity(2, 6).unwrap()).unwrap(),
    ];
    let mut rng = rng(6);
    for p in [2, 3] {
        for _ in 0..3 {
            let rows = rand::Rng::gen_range(&mut rng, 2..=4);
            linear.push(gf(p, &random_matrix(&mut rng, p, rows, 6)));
        }
    }
    for (i, m) in linear.iter().enumerate() {
        let report = check_ingleton_matroid(m, IngletonMode::All).unwrap();
        ensure!(report.holds, "linear matroid {i} violates Ingleton: {:?}", report.witness);
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    for case in 0..200 {
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let coefficients = random_coverage_coefficients(&mut rng, n, 4);
        let f = coverage_from(n, &coefficients);
        let d = coverage_decompose(&f).map_err(|e| format!("case {case}: {e}"))?;
        let expected: Vec<(SubsetMask, Rational)> = coefficients.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let found: Vec<(SubsetMask, Rational)> = d.coefficients().iter().map(|(&a, c)| (a, c.clone())).collect();
        ensure!(found == expected, "case {case}: coefficients differ");
        ensure!(coverage_reconstruct(&d, f.ground()).unwrap() == f, "case {case}: reconstruction differs");
    }
    for case in 0..20 {
        let (n1, n2) = (rand::Rng::gen_range(&mut rng, 1..=3), rand::Rng::gen_range(&mut rng, 1..=3));
        let f1 = random_coverage(&mut rng, n1, 3);
        let f2 = random_coverage(&mut rng, n2, 3);
        let t = coverage_tensor(&f1, &f2).unwrap();
        ensure!(coverage_decompose(&t).is_ok(), "case {case}: tensor of coverage functions is not coverage");
        ensure!(check_tensor(&t, &f1, &f2).unwrap().is_tensor, "case {case}: not a tensor product");
    }
    let partition = Matroid::partition(ground(3), &[vec!["1", "2"], vec!["3"]]).unwrap().rank_function().unwrap();
    let u23 = Matroid::uniform(3, 2).unwrap().rank_function().unwrap();
    let t = coverage_tensor(&partition, &u23).unwrap();
    ensure!(Matroid::explicit(&t).unwrap().certify().unwrap().holds(), "partition ⊗ U23 is not a matroid");
    let verdict = check_k_alternating(&u23, 3).unwrap();
    let w = verdict.witness().ok_or("U23 passes 3-Alt")?;
    ensure!(w.sets == vec![0, 0b001, 0b010, 0b100], "unexpected 3-Alt witness {:?}", w.sets);
    // 0 − (1+1+1) + (2+2+2) − 2
    ensure!(w.alternating_sum == int(1), "alternating sum {}", w.alternating_sum);
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    for case in 0..200 {
        let n = if case % 2 == 0 { 12 } else { rand::Rng::gen_range(&mut rng, 1..=12) };
        let f = random_integer_submodular(&mut rng, n);
        let brute = minimize_brute(&f).unwrap();
        let minnorm = minimize_minnorm(&f, DEFAULT_TOL).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(brute.min_value == brute_min(&f), "case {case}: brute force is not the table minimum");
        ensure!(
            minnorm.min_value == brute.min_value,
            "case {case} (n = {n}): min-norm {} vs brute {}",
            minnorm.min_value,
            brute.min_value
        );
        ensure!(f.value(minnorm.minimizer) == &minnorm.min_value, "case {case}: minimizer value mismatch");
    }
    Ok(())
}

fn union_phi(classes: &[RationalIntervalSet], subset: SubsetMask) -> Rational {
    let union = (0..classes.len())
        .filter(|i| subset & (1 << i) != 0)
        .fold(RationalIntervalSet::empty(), |acc, i| acc.union(&classes[i]));
    phi_measure(&union)
}

fn criterion_9() -> Outcome {
    let mut rng = rng(9);
    for case in 0..100 {
        let q = rand::Rng::gen_range(&mut rng, 1..=5);
        let coefficients = random_coverage_coefficients(&mut rng, q, 5);
        let raw = coverage_from(q, &coefficients);
        let total = raw.full_value().clone();
        let psi = raw.map(|v| v / &total);
        let trace = build_universal_trace(&psi).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(verify_universal(&trace.witness).unwrap().holds(), "case {case}: witness fails");
        for p in &trace.placements {
            ensure!(p.capacity() >= int(0), "case {case}: negative capacity at step {}", p.t);
            let block = RationalIntervalSet::interval(int(p.t as i64 - 1), int(p.t as i64)).unwrap();
            ensure!(p.block.is_subset_of(&block), "case {case}: placement outside its block");
        }
        for subset in 0..1u32 << q {
            ensure!(
                &union_phi(&trace.witness.classes, subset) == psi.value(subset),
                "case {case}: Φ differs from ψ on {subset:b}"
            );
        }
        for t in 1..=q {
            let now = &trace.snapshots[t - 1];
            for subset in 1..1u32 << t {
                if subset & (1 << (t - 1)) != 0 {
                    ensure!(&union_phi(now, subset) == psi.value(subset), "case {case}: (A) fails after step {t}");
                } else {
                    let before = &trace.snapshots[t - 2];
                    ensure!(union_phi(now, subset) == union_phi(before, subset), "case {case}: (B) fails at step {t}");
                }
            }
        }
    }
    Ok(())
}

fn criterion_10(built: &[Built]) -> Outcome {
    ensure!(!built.is_empty(), "no couplings were recorded");
    for (case, b) in built.iter().enumerate() {
        let product = ProductGround::new(b.phi1.ground(), b.phi2.ground()).unwrap();
        let rows = quotient(&b.phi, &product.row_partition()).unwrap();
        let cols = quotient(&b.phi, &product.column_partition()).unwrap();
        ensure!(rows == b.phi1.scaled(b.phi2.full_value()), "coupling {case}: row quotient differs");
        ensure!(cols == b.phi2.scaled(b.phi1.full_value()), "coupling {case}: column quotient differs");
    }
    Ok(())
}

fn report(line: &str) {
    // Written to the raw handle so the line shows up even when test output is captured.
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance() {
    type Run = fn(&mut Vec<Built>) -> Outcome;
    let criteria: [(u32, &str, Duration, Run); 10] = [
        (1, "submodular coupling marginals", Duration::from_secs(10), criterion_1),
        (2, "polymatroid coupling", Duration::from_secs(30), criterion_2),
        (3, "matroid coupling", Duration::from_secs(60), criterion_3),
        (4, "amalgam equivalence", Duration::MAX, |_| criterion_4()),
        (5, "tensor condition equivalence", Duration::MAX, |_| criterion_5()),
        (6, "Ingleton screening", Duration::from_secs(60), |_| criterion_6()),
        (7, "coverage algebra", Duration::MAX, |_| criterion_7()),
        (8, "minimization oracle equivalence", Duration::from_secs(60), |_| criterion_8()),
        (9, "universal construction", Duration::from_secs(60), |_| criterion_9()),
        (10, "fiber quotients", Duration::MAX, |built| criterion_10(built)),
    ];

    let mut built = Vec::new();
    let mut failures = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&mut built))).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > limit {
                Err(format!("took {elapsed:.1?}, limit {limit:?}"))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => report(&format!("PASS criterion {id}: {name} ({elapsed:.2?})")),
            Err(reason) => {
                report(&format!("FAIL criterion {id}: {name} ({elapsed:.2?}): {reason}"));
                failures.push(id);
            }
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
