use super::*;
use crate::products::FnEvaluator;
use crate::sequences::{
    ac_parameters, anderson_clunie_zeros, explicit_zeros, geometric_zeros, lindelof_zeros, ExplicitZero,
};
use proptest::prelude::*;

fn ac3(n: usize) -> CanonicalProduct {
    CanonicalProduct::new(anderson_clunie_zeros(ac_parameters(3.0, n).unwrap())).unwrap()
}

fn lindelof(rho: f64) -> CanonicalProduct {
    CanonicalProduct::new(lindelof_zeros(rho).unwrap()).unwrap()
}

#[test]
fn counting_examples() {
    let f = ac3(4);
    assert_eq!(count_zeros(&f.zeros, 4.0 + 1e-9), 18.0);
    assert_eq!(count_zeros(&f.zeros, 4.0), 2.0);
    // n just below b_3 is 2 = (log b_3)^((rho - 2)/2)
    assert_eq!(count_zeros(&f.zeros, 4.0 - 1e-9), 4f64.powf(0.5));
    assert_eq!(count_zeros(&f.zeros, 324.0 + 1e-9), 104_994.0);
    let l = lindelof_zeros(2.0).unwrap();
    assert_eq!(count_zeros(&l, 3f64.ln() + 1e-12), 9.0);
    assert_eq!(count_zeros(&l, 3f64.ln() - 1e-12), 8.0);
    let g = geometric_zeros(2.0, PI).unwrap();
    assert_eq!(count_zeros(&g, 10.0 * LN_2 + 1e-9), 10.0);
}

#[test]
fn integrated_counting_examples() {
    let f = ac3(4);
    assert_eq!(integrated_counting(&f.zeros, 4.0), 7.0);
    assert!(integrated_counting(&f.zeros, 4.0) <= 4f64.powf(1.5));
    assert_eq!(integrated_counting(&f.zeros, -0.5), 0.0);
    assert_eq!(integrated_counting(&lindelof_zeros(0.75).unwrap(), -0.1), 0.0);
}

#[test]
fn integrated_counting_matches_direct_sums() {
    for &rho in &[0.75, 1.5, 2.5] {
        let seq = lindelof_zeros(rho).unwrap();
        for &log_r in &[0.3, 2.0, 5.5] {
            let mut direct = 0.0;
            let mut k = 1u64;
            loop {
                let l = (k as f64).ln() / rho;
                if l >= log_r {
                    break;
                }
                direct += log_r - l;
                k += 1;
            }
            let got = integrated_counting(&seq, log_r);
            assert!(
                (got - direct).abs() <= 1e-10 * direct.max(1.0),
                "rho={rho} log_r={log_r}: {got} vs {direct}"
            );
        }
    }
    let g = geometric_zeros(1.5, 0.3).unwrap();
    let log_r = 7.7;
    let direct: f64 = (1..)
        .map(|n| n as f64 * 1.5f64.ln())
        .take_while(|&l| l < log_r)
        .map(|l| log_r - l)
        .sum();
    assert!((integrated_counting(&g, log_r) - direct).abs() < 1e-12);
}

#[test]
fn kink_corrected_average_of_cosine() {
    // (1/2pi) int max(0, cos) = 1/pi, with kinks at +-pi/2 off the grid.
    let u = |t: f64| (t + 0.1).cos();
    let exact = 1.0 / PI;
    let mut prev = f64::INFINITY;
    for n in [64usize, 128, 256] {
        let h = 2.0 * PI / n as f64;
        let vals: Vec<f64> = (0..n).map(|i| u(i as f64 * h)).collect();
        let (p, m) = averages_from_nodes(&vals);
        let err = (p - exact).abs().max((m - exact).abs());
        assert!(err < 2e-5 * (64.0 / n as f64).powi(3), "n={n}: err {err}");
        assert!(err < prev);
        prev = err;
    }
}

#[test]
fn proximity_single_factor_against_reference() {
    let z = explicit_zeros(
        vec![ExplicitZero {
            re: -1.0,
            im: 0.0,
            multiplicity: 1,
        }],
        Some(0),
    )
    .unwrap();
    let f = CanonicalProduct::new(z).unwrap();
    let got = proximity(&f, 1.0, Target::Infinity, &QuadOptions::default()).unwrap();
    assert!(got.converged);
    // midpoint rule in ordinary arithmetic
    let n = 200_000;
    let e = std::f64::consts::E;
    let reference: f64 = (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) * 2.0 * PI / n as f64;
            (Complex64::new(1.0, 0.0) + Complex64::from_polar(e, t))
                .norm()
                .ln()
                .max(0.0)
        })
        .sum::<f64>()
        / n as f64;
    assert!((got.value - reference).abs() < 1e-8, "{} vs {}", got.value, reference);
}

#[test]
fn proximity_of_constant_one_is_zero() {
    let one = FnEvaluator(|_| LogComplex::ONE);
    for target in [Target::Infinity, Target::Zero] {
        let m = proximity(&one, 3.0, target, &QuadOptions::default()).unwrap();
        assert_eq!(m.value, 0.0);
        assert!(m.converged);
    }
}

#[test]
fn jensen_lindelof_three_quarters_at_100() {
    let f = lindelof(0.75);
    let s = characteristic_sample(&f, 100f64.ln(), &QuadOptions::default(), true).unwrap();
    assert!(s.converged);
    let res = s.jensen_residual.unwrap();
    assert!(res.abs() <= 1e-6, "{s:?}");
    assert_eq!(s.t, s.m_inf);
}

#[test]
fn jensen_with_a_zero_on_the_circle() {
    // |z_20| = 20^(2/3) for rho = 1.5, and |z_2000| = 2000^(2/3)
    let f = lindelof(1.5);
    let opts = QuadOptions::default().with_rel_tol(1e-10);
    for n in [20f64, 2000.0] {
        let s = characteristic_sample(&f, n.ln() / 1.5, &opts, true).unwrap();
        assert!(s.jensen_residual.unwrap().abs() < 1e-6, "{s:?}");
    }
}

#[test]
fn jensen_on_a_finite_list() {
    let pts = vec![
        ExplicitZero {
            re: 0.5,
            im: 0.5,
            multiplicity: 1,
        },
        ExplicitZero {
            re: -2.0,
            im: 0.1,
            multiplicity: 2,
        },
        ExplicitZero {
            re: 3.0,
            im: -4.0,
            multiplicity: 1,
        },
    ];
    let f = CanonicalProduct::new(explicit_zeros(pts, Some(1)).unwrap()).unwrap();
    for &log_r in &[0.0, 1.0, 1.4, 2.5] {
        let s = characteristic_sample(&f, log_r, &QuadOptions::default(), true).unwrap();
        assert!(s.jensen_residual.unwrap().abs() < 1e-9, "{s:?}");
    }
}

#[test]
fn ac_bounds_at_b3() {
    let f = ac3(4);
    let s = characteristic_sample(&f, 4.0, &QuadOptions::default(), false).unwrap();
    assert!(s.t >= (16.0 - 1.0) / 40.0, "{s:?}");
    assert!(s.n_zeros <= 8.0);
}

#[test]
fn closed_form_examples() {
    assert!((delta_n_lindelof_closed_form(0.75) - (1.0 - 0.5f64.sqrt())).abs() < 1e-15);
    assert!((delta_n_lindelof_closed_form(0.75) - 0.292893).abs() < 1e-6);
    assert!((delta_n_lindelof_closed_form(1.0) - 1.0).abs() < 1e-15);
    assert!((delta_n_lindelof_closed_form(1.25) - 0.585786).abs() < 1e-6);
    assert_eq!(delta_n_lindelof_closed_form(0.5), 0.0);
}

proptest! {
    #[test]
    fn closed_form_range(rho in 0.01f64..12.0) {
        let d = delta_n_lindelof_closed_form(rho);
        prop_assert!((0.0..=1.0).contains(&d));
        if rho > 0.5 {
            prop_assert!(d > 0.0);
        } else {
            prop_assert_eq!(d, 0.0);
        }
    }
}

#[test]
fn deficiency_without_zeros_is_one() {
    // f = 1 has T = 0 at every radius, so every point is excluded.
    let f = CanonicalProduct::new(explicit_zeros(vec![], Some(0)).unwrap()).unwrap();
    assert!(deficiency_scan(&f, Target::Zero, &[0.0, 1.0, 2.0], None, &QuadOptions::default()).is_err());

    let g = FnEvaluator(|z: LogComplex| LogComplex::exp_of(z.to_complex()));
    let grid = [0.0, 1.0, 2.0];
    let scan = deficiency_scan_with(&g, None, Target::Zero, &grid, None, &QuadOptions::default()).unwrap();
    assert_eq!(scan.delta_n_lower, 1.0);
    assert_eq!(scan.delta_v_lower, 1.0);
    for (p, l) in scan.points.iter().zip(grid) {
        // T(r, e^z) = r / pi
        assert!((p.t - l.exp() / PI).abs() < 1e-6, "{p:?}");
    }
}

#[test]
fn deficiency_scan_lindelof_short_grid() {
    let f = lindelof(0.75);
    let grid: Vec<f64> = [2.0, 3.0, 4.0].iter().map(|d| d * std::f64::consts::LN_10).collect();
    let scan = deficiency_scan(&f, Target::Zero, &grid, None, &QuadOptions::default()).unwrap();
    assert!(scan.delta_n_lower <= scan.delta_v_lower);
    assert!((0.0..=1.0).contains(&scan.delta_n_lower));
    assert!(
        (scan.delta_n_lower - delta_n_lindelof_closed_form(0.75)).abs() < 0.1,
        "{scan:?}"
    );
}

#[test]
fn infinite_target_has_full_deficiency() {
    let f = lindelof(0.75);
    let scan = deficiency_scan(&f, Target::Infinity, &[1.0, 2.0, 3.0], None, &QuadOptions::default()).unwrap();
    assert_eq!(scan.delta_n_lower, 1.0);
    assert_eq!(scan.delta_v_lower, 1.0);
}

#[test]
fn lindelof_order_estimate() {
    let f = lindelof(0.75);
    let grid: Vec<f64> = (4..=12).map(|d| d as f64 * std::f64::consts::LN_10).collect();
    let est = order_estimate(&f, &grid, &QuadOptions::default()).unwrap();
    assert!((0.70..=0.80).contains(&est.estimate), "{est:?}");
}

#[test]
fn log_order_routes() {
    let params = ac_parameters(3.0, 4).unwrap();
    let seq = anderson_clunie_zeros(params);
    let ratio = log_counting_ratio(&seq, 324.0 + 1e-9);
    assert!((ratio + 1.0 - 3.0).abs() < 0.01, "{ratio}");
    assert!((ratio - 104_994f64.ln() / 324f64.ln()).abs() < 1e-10);

    let g = geometric_zeros(2.0, PI).unwrap();
    let grid: Vec<f64> = (1..=8).map(|k| 10f64.powi(k)).collect();
    let est = counting_log_order(&g, &grid).unwrap();
    assert!((est.estimate - 2.0).abs() < 0.05, "{est:?}");
}

#[test]
fn lindelof_convergence_exponent() {
    for &rho in &[0.75, 1.5, 2.5] {
        let seq = lindelof_zeros(rho).unwrap();
        let grid = log_grid(10f64.ln(), 1e4f64.ln(), 13);
        let est = convergence_exponent_estimate(&seq, &grid).unwrap();
        assert!((est.estimate - rho).abs() < 0.05, "rho={rho}: {est:?}");
    }
}

#[test]
fn estimation_needs_three_points() {
    assert!(order_fit(&[1.0, 2.0, 3.0], &[1.0, 0.0, -1.0]).is_err());
    assert!(order_estimate(&lindelof(0.75), &[1.0, 2.0, 3.0], &QuadOptions::default()).is_err());
}
