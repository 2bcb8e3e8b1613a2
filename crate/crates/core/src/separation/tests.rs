use super::*;
use crate::logdomain::{log_abs_one_minus, LogComplex};
use crate::products::derivative_at_zero;
use crate::sequences::{
    ac_parameters, anderson_clunie_zeros, bank_zeros, explicit_zeros, geometric_zeros, lindelof_zeros, BankCap,
    ExplicitZero,
};

fn product(seq: ZeroSequence) -> CanonicalProduct {
    CanonicalProduct::new(seq).unwrap()
}

#[test]
fn lindelof_refined_weight_reaches_one() {
    let f = product(lindelof_zeros(0.75).unwrap());
    let w = witness_search_range(&f, Weight::Refined { rho: 0.75 }, 2, 200, 0.0).unwrap();
    let c = w.c.expect("no witness");
    assert!(c <= 1024.0, "{c}");
    assert!(w.report.inf_log >= 0.0);
    assert!(w.report.flagged.is_empty());
}

#[test]
fn lindelof_power_weight_bounded_below() {
    let f = product(lindelof_zeros(0.75).unwrap());
    let w = witness_constant_search(&f, Weight::Power { q: 1.0 }, 200).unwrap();
    let r = separation_scan(&f, Weight::Power { q: 1.0 }, w.c.unwrap(), 200).unwrap();
    assert_eq!(r.per_k.len(), 200);
    assert_eq!(r.verdict, Verdict::BoundedBelow, "{:?}", (r.slope, r.slope_stderr));
    assert_eq!(r.inf_log, r.per_k.iter().cloned().fold(f64::INFINITY, f64::min));
}

#[test]
fn bank_decays_for_every_swept_constant() {
    let f = product(bank_zeros(BankCap::Default));
    for q in [0.0, 1.0, 2.0] {
        for j in WITNESS_EXPONENTS {
            let r = separation_scan(&f, Weight::Power { q }, 2f64.powi(j), 12).unwrap();
            assert_eq!(r.verdict, Verdict::Decaying, "q={q} j={j}");
        }
        assert!(witness_constant_search(&f, Weight::Power { q }, 12)
            .unwrap()
            .c
            .is_none());
    }
    assert!(separation_scan(&f, Weight::Power { q: 0.0 }, 1.0, 81).is_err());
}

#[test]
fn single_zero_takes_the_smallest_constant() {
    let f = product(
        explicit_zeros(
            vec![ExplicitZero {
                re: 2.0,
                im: 0.0,
                multiplicity: 1,
            }],
            Some(0),
        )
        .unwrap(),
    );
    let w = witness_constant_search(&f, Weight::Power { q: 1.0 }, 1).unwrap();
    assert_eq!(w.c, Some(2f64.powi(-10)));
}

#[test]
fn geometric_base_is_zero_separated() {
    let f = product(geometric_zeros(2.0, 0.0).unwrap());
    let w = witness_constant_search(&f, Weight::Power { q: 0.0 }, 40).unwrap();
    let r = separation_scan(&f, Weight::Power { q: 0.0 }, w.c.unwrap(), 40).unwrap();
    assert_eq!(r.verdict, Verdict::BoundedBelow);
}

#[test]
fn ac_small_circles_bounded_below() {
    let f = product(anderson_clunie_zeros(ac_parameters(3.0, 4).unwrap()));
    let weight = Weight::LogPower { q: 2.5 };
    let w = witness_constant_search(&f, weight, 18).unwrap();
    assert!(w.c.is_some());
    assert_eq!(w.report.verdict, Verdict::BoundedBelow);
}

#[test]
fn weight_is_monotone_in_q() {
    let f = product(lindelof_zeros(1.5).unwrap());
    let a = separation_scan(&f, Weight::Power { q: 1.0 }, 0.5, 60).unwrap();
    let b = separation_scan(&f, Weight::Power { q: 1.7 }, 0.5, 60).unwrap();
    let c = separation_scan(&f, Weight::LogPower { q: 1.0 }, 0.5, 60).unwrap();
    let d = separation_scan(&f, Weight::LogPower { q: 1.7 }, 0.5, 60).unwrap();
    for k in 1..=60 {
        if f.zeros.point(k).log_mag >= 1.0 {
            assert!(b.per_k[k - 1] >= a.per_k[k - 1]);
            assert!(d.per_k[k - 1] >= c.per_k[k - 1]);
        }
    }
}

#[test]
fn decomposition_sums_to_the_derivative() {
    let p = ac_parameters(3.0, 4).unwrap();
    let f = product(anderson_clunie_zeros(ac_parameters(3.0, 4).unwrap()));
    let (p1, p2, p3) = ac_separation_decomposition(&p, 2, 1).unwrap();
    assert_eq!(p3, 0.0);
    let mut k = 0;
    for i in 1..=4 {
        let m = p.circle(i).mult.exact().unwrap() as usize;
        for j in [1, m / 2 + 1, m] {
            let idx = k + j;
            let (a, b, c) = ac_separation_decomposition(&p, i, j).unwrap();
            let direct = derivative_at_zero(&f, idx).unwrap().log_mag + f.zeros.point(idx).log_mag;
            assert!((a + b + c - direct).abs() <= 1e-9, "({i},{j})");
        }
        k += m;
    }
    assert!(p1.is_finite() && p2.is_finite());
    let (_, _, p3) = ac_separation_decomposition(&p, 3, 5).unwrap();
    assert!(p3 >= -16.0 * 16f64.ln());
}

#[test]
fn same_circle_chord() {
    let p = ac_parameters(3.0, 4).unwrap();
    for i in 3..=4 {
        let (min, chord) = ac_min_chord(&p, i).unwrap();
        assert!((min - chord).abs() <= 1e-12, "i={i}: {min} vs {chord}");
    }
    assert!(ac_min_chord(&p, 2).is_err());
    // neighbours of the stored points on circle 3
    let c = p.circle(3);
    let z = |j| LogComplex::new(c.log_b, crate::sequences::ac_phase(16, j));
    let min = (1..16)
        .map(|j| c.log_b + log_abs_one_minus(z(j + 1) / z(j)))
        .fold(f64::INFINITY, f64::min);
    assert!((min - ac_min_chord(&p, 3).unwrap().1).abs() <= 1e-12);
}
