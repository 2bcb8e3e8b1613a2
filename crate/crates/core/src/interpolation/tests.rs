use super::*;
use crate::products::derivative_at_zero;
use crate::sequences::{ac_parameters, anderson_clunie_zeros, explicit_zeros, lindelof_zeros, ExplicitZero};
use proptest::prelude::*;

fn lindelof(rho: f64) -> CanonicalProduct {
    CanonicalProduct::new(lindelof_zeros(rho).unwrap()).unwrap()
}

fn real_zeros(v: &[f64]) -> CanonicalProduct {
    let pts = v
        .iter()
        .map(|&re| ExplicitZero {
            re,
            im: 0.0,
            multiplicity: 1,
        })
        .collect();
    CanonicalProduct::new(explicit_zeros(pts, Some(0)).unwrap()).unwrap()
}

#[test]
fn two_zero_target() {
    let f = real_zeros(&[-1.0, -2.0]);
    let s = target_sigma(&f, 1).unwrap().to_complex();
    assert!((s - Complex64::new(-2.0, 0.0)).norm() < 1e-15, "{s}");
}

#[test]
fn sigma_matches_cauchy_quotient() {
    let opts = CauchyOptions::default();
    for (f, ks) in [
        (lindelof(0.75), (1..=20).map(|i| i * 37).collect::<Vec<_>>()),
        (lindelof(1.5), (1..=20).map(|i| i * 23).collect()),
    ] {
        for k in ks {
            let z = f.zeros.point(k);
            let d = cauchy_derivatives(&f, z, 2, &opts).unwrap().values;
            let q = -(d[2] / d[1]);
            let s = target_sigma(&f, k).unwrap();
            let rel = (lc_add(q, -s) / s).to_complex().norm();
            assert!(rel < 1e-6, "k={k}: {s:?} vs {q:?}");
        }
    }
    let f = CanonicalProduct::new(anderson_clunie_zeros(ac_parameters(3.0, 4).unwrap())).unwrap();
    for k in 1..=3 {
        let z = f.zeros.point(k);
        let d = cauchy_derivatives(&f, z, 2, &opts).unwrap().values;
        let q = -(d[2] / d[1]);
        let s = target_sigma(&f, k).unwrap();
        assert!((lc_add(q, -s) / s).to_complex().norm() < 1e-6, "k={k}");
    }
}

#[test]
fn lindelof_target_growth() {
    let ks = [10usize, 100, 1000, 10000];
    let r: Vec<f64> = ks
        .iter()
        .map(|&k| sigma_lindelof(0.75, k).abs() / (k as f64).ln())
        .collect();
    for w in r.windows(2) {
        assert!(w[1] <= 1.5 * w[0], "{r:?}");
    }
    let r: Vec<f64> = ks
        .iter()
        .map(|&k| sigma_lindelof(1.5, k).abs() / (k as f64 * (k as f64).ln()))
        .collect();
    for w in r.windows(2) {
        assert!(w[1] <= 1.5 * w[0], "{r:?}");
    }
}

#[test]
fn exponent_rule_examples() {
    assert_eq!(
        ml_exponents(&[3.0], &[0.5], 2.0, Variant::LogOrder, 0).unwrap(),
        vec![0]
    );
    assert_eq!(
        ml_exponents(&[10.0], &[2.0], 2.0, Variant::LogOrder, 1).unwrap(),
        vec![10]
    );
    assert_eq!(
        ml_exponents(&[10.0], &[2.0], 2.0, Variant::FiniteOrder, 1).unwrap(),
        vec![12]
    );
    assert_eq!(
        ml_exponents(&[-50.0], &[3.0], 2.0, Variant::LogOrder, 0).unwrap(),
        vec![0]
    );
    assert!(ml_exponents(&[1.0], &[2.0], 1.0, Variant::LogOrder, 0).is_err());
}

proptest! {
    #[test]
    fn exponent_shift_is_bounded(lc in -30.0f64..60.0, lz in 1.01f64..50.0, n in 1usize..1000, alpha in 1.01f64..4.0) {
        let mut c = vec![0.0; n];
        let mut z = vec![0.5; n];
        c[n - 1] = lc;
        z[n - 1] = lz;
        let q0 = ml_exponents(&c, &z, alpha, Variant::FiniteOrder, 1).unwrap()[n - 1];
        c[n - 1] = lc + 10.0;
        let q1 = ml_exponents(&c, &z, alpha, Variant::FiniteOrder, 1).unwrap()[n - 1];
        prop_assert!(q1 >= q0);
        prop_assert!(q1 - q0 <= (10.0 * alpha / lz).ceil() as u32 + 1);
    }
}

#[test]
fn single_term_series() {
    let t = [PoleTerm {
        index: 1,
        z: LogComplex::from_real(-1.0),
        residue: LogComplex::ONE,
        exponent: 0,
    }];
    let h0 = eval_h(&t, LogComplex::ZERO).unwrap().to_complex();
    assert!((h0 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    let z = Complex64::new(0.3, 2.0);
    let h = eval_h(&t, LogComplex::from_complex(z)).unwrap().to_complex();
    assert!((h - 1.0 / (z + 1.0)).norm() < 1e-15);
    assert!(eval_h(&t, LogComplex::from_real(-1.0)).is_err());
}

#[test]
fn residues_and_symmetry() {
    let art = build_coefficients(&lindelof(0.75), 12, 2.0, Variant::FiniteOrder).unwrap();
    for t in art.terms.iter().take(6) {
        for dir in 0..4 {
            let eps = LogComplex::new((1e-11f64).ln() + t.z.log_mag, 0.4 + dir as f64 * PI / 2.0);
            let z = lc_add(t.z, eps);
            let v = (eval_h(&art.terms, z).unwrap() * lc_add(z, -t.z)).to_complex();
            let c = t.residue.to_complex();
            assert!((v - c).norm() <= 1e-8 * c.norm(), "n={}: {v} vs {c}", t.index);
        }
    }
    // real data: H(conj z) = conj H(z)
    let z = LogComplex::new(1.3, 0.7);
    let a = eval_h(&art.terms, z).unwrap().to_complex();
    let b = eval_h(&art.terms, z.conj()).unwrap().to_complex();
    assert!((a - b.conj()).norm() <= 1e-13 * a.norm());
}

#[test]
fn small_zeros_get_zero_exponents() {
    let art = build_coefficients(&lindelof(0.75), 40, 2.0, Variant::FiniteOrder).unwrap();
    for (z, q) in art.zeros.iter().zip(&art.exponents) {
        if z.log_mag <= 1.0 {
            assert_eq!(*q, 0);
        }
    }
    for (n, c) in art.residues.iter().enumerate() {
        assert!(c.is_finite());
        let back = *c * derivative_at_zero(&art.product, n + 1).unwrap();
        let s = art.sigma[n];
        assert!(
            (lc_add(back, -s) / s).to_complex().norm() < 1e-13,
            "{n}: {back:?} vs {s:?}"
        );
    }
}

#[test]
fn lindelof_pipeline_residuals() {
    let f = lindelof(0.75);
    let art = build_coefficients(&f, 40, 2.0, Variant::FiniteOrder).unwrap();
    let rep = interpolation_report(&art).unwrap();
    assert!(
        rep.max_interpolation_residual <= 1e-8,
        "{}",
        rep.max_interpolation_residual
    );
    assert!(rep.max_numerator_residual <= 1e-8, "{}", rep.max_numerator_residual);
    assert!(rep.nontriviality.a_nontrivial && rep.nontriviality.b_nontrivial);
    let radius = 0.5 * art.zeros[39].to_complex().norm();
    let pts = random_regular_points(&f, 20, radius, 0.25, 7);
    let (a, b) = (art.a_evaluator(), art.b_evaluator());
    let res = ode_residual(&[&b, &a], &f, &pts).unwrap();
    assert!(res.max <= 1e-6, "{res:?}");
    assert!(res.flagged.is_empty());
}

#[test]
fn ac_pipeline_and_log_growth() {
    let f = CanonicalProduct::new(anderson_clunie_zeros(ac_parameters(3.0, 4).unwrap())).unwrap();
    let art = build_coefficients(&f, 2, 2.0, Variant::LogOrder).unwrap();
    assert_eq!(art.exponents, vec![0, 0]);
    let rep = interpolation_report(&art).unwrap();
    assert!(rep.max_interpolation_residual <= 1e-8);
    let ev = log_growth_evidence(
        &art,
        &crate::nevanlinna::log_grid(5.0, 150.0, 8),
        &QuadOptions::default(),
    )
    .unwrap();
    let (ef, ea, eb) = (
        ev.f.from_characteristic.estimate,
        ev.a.from_characteristic.estimate,
        ev.b.from_characteristic.estimate,
    );
    assert!(eb <= ea + 0.3 && ea <= ef + 0.3, "{ef} {ea} {eb}");
    assert_eq!(ev.label, EVIDENCE_LABEL);
}

#[test]
fn fixture_equations() {
    use fixtures::*;
    assert!(fixture_residual(&exp_with_sine(), 20, 5.0, 1).unwrap().max <= 1e-10);
    assert!(fixture_residual(&gaussian_sine(), 20, 5.0, 2).unwrap().max <= 1e-10);
    assert!(fixture_residual(&fourth_order(), 10, 3.0, 3).unwrap().max <= 1e-8);
}

#[test]
fn grid_moves_off_zero_moduli() {
    let f = lindelof(0.75);
    // |z_1000| = 10^4 exactly
    let g = off_zero_grid(&f.zeros, &[4.0 * std::f64::consts::LN_10, 0.5]);
    let (lo, hi) = (f.zeros.point(1000).log_mag, f.zeros.point(1001).log_mag);
    assert!((g[0] - 0.5 * (lo + hi)).abs() < 1e-12);
    assert_eq!(g[1], 0.5);
    let ac = anderson_clunie_zeros(ac_parameters(3.0, 4).unwrap());
    assert_eq!(off_zero_grid(&ac, &[2.0, 50.0]), vec![2.0, 50.0]);
    assert_eq!(off_zero_grid(&ac, &[4.005])[0], 0.5 * (4.0 + 324.0));
}
