//! Derivatives by the trapezoid rule on a Cauchy circle, in log-polar form.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{NevlabError, Result};
use crate::logdomain::{lc_add, LogComplex};
use crate::products::Evaluator;

/// Radius policy for [`cauchy_derivatives`].
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum Radius {
    /// Exactly this `log R`.
    Fixed(f64),
    /// Half the gap to the nearest zero or singularity (`R = 1` without
    /// one), shrunk while `log|f|` varies by more than 8 on the circle.
    HalfGap,
    /// Starts like `HalfGap`, then halves or doubles `R` until the range of
    /// `log|f|` on the circle lies in `[0.5, 4]`.
    Adaptive,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CauchyOptions {
    pub radius: Radius,
    pub n_min: usize,
    pub n_max: usize,
    /// Stop once the scaled Taylor coefficients move by less than this.
    pub tol: f64,
}

impl Default for CauchyOptions {
    fn default() -> Self {
        CauchyOptions {
            radius: Radius::Adaptive,
            n_min: 64,
            n_max: 4096,
            tol: 1e-12,
        }
    }
}

/// `f, f', ..., f^(order)` at one point.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Derivatives {
    pub values: Vec<LogComplex>,
    pub log_radius: f64,
    pub n_nodes: usize,
    pub converged: bool,
}

fn node(z: LogComplex, log_r: f64, psi: f64) -> LogComplex {
    lc_add(z, LogComplex::new(log_r, psi))
}

fn log_range(f: &dyn Evaluator, z: LogComplex, log_r: f64, n: usize) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for m in 0..n {
        let v = f.log_abs(node(z, log_r, 2.0 * PI * m as f64 / n as f64));
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo.is_nan() || hi.is_nan() {
        f64::NAN
    } else {
        hi - lo
    }
}

fn choose_radius(f: &dyn Evaluator, z: LogComplex, policy: Radius) -> f64 {
    let start = match policy {
        Radius::Fixed(l) => return l,
        _ => {
            let g = f.log_gap(z);
            let scale = z.log_mag.max(0.0);
            if !g.is_finite() {
                0.0
            } else if g < scale - 30.0 {
                // z sits on a zero; its gap says nothing about the neighbours
                scale - 4.0 * LN_2
            } else {
                g - LN_2
            }
        }
    };
    let mut l = start;
    match policy {
        Radius::HalfGap => {
            for _ in 0..60 {
                if !(log_range(f, z, l, 32) > 8.0) {
                    break;
                }
                l -= LN_2;
            }
        }
        _ => {
            for _ in 0..60 {
                let r = log_range(f, z, l, 32);
                if r > 4.0 || r.is_nan() {
                    l -= LN_2;
                } else if r < 0.5 && l < start + 20.0 * LN_2 {
                    l += LN_2;
                } else {
                    break;
                }
            }
        }
    }
    l
}

/// Scaled Fourier coefficients `a_j = f^(j) R^j / (j! e^lmax)`.
fn coefficients(vals: &[LogComplex], lmax: f64, order: usize) -> Vec<Complex64> {
    let n = vals.len();
    let scaled: Vec<Complex64> = vals
        .iter()
        .map(|v| {
            if v.is_zero() {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar((v.log_mag - lmax).exp(), v.phase)
            }
        })
        .collect();
    (0..=order)
        .map(|j| {
            let mut s = Complex64::new(0.0, 0.0);
            for (m, v) in scaled.iter().enumerate() {
                // e^(-i j psi_m) with the angle reduced exactly
                let k = (j * m) % n;
                let (sn, cs) = (2.0 * PI * k as f64 / n as f64).sin_cos();
                s += v * Complex64::new(cs, -sn);
            }
            s / n as f64
        })
        .collect()
}

/// `f^(j)(z)` for `j = 0..=order` by the trapezoid rule on a circle around
/// `z`, doubling the node count until the coefficients settle.
pub fn cauchy_derivatives(f: &dyn Evaluator, z: LogComplex, order: usize, opts: &CauchyOptions) -> Result<Derivatives> {
    let log_r = choose_radius(f, z, opts.radius);
    let mut n = opts.n_min;
    let eval = |n: usize, idx: &[usize]| -> Vec<LogComplex> {
        idx.par_iter()
            .map(|&m| f.eval(node(z, log_r, 2.0 * PI * m as f64 / n as f64)))
            .collect()
    };
    let all: Vec<usize> = (0..n).collect();
    let mut vals = eval(n, &all);
    let mut prev: Option<(Vec<Complex64>, f64)> = None;
    loop {
        if vals.iter().any(|v| v.log_mag.is_nan()) {
            return Err(NevlabError::Quadrature(format!(
                "non-finite value on the Cauchy circle at {z:?}"
            )));
        }
        let lmax = vals.iter().map(|v| v.log_mag).fold(f64::NEG_INFINITY, f64::max);
        let a = coefficients(&vals, lmax, order);
        if let Some((pa, pl)) = &prev {
            let s = (pl - lmax).exp();
            let change = a.iter().zip(pa).map(|(x, y)| (x - y * s).norm()).fold(0.0, f64::max);
            if change <= opts.tol || n >= opts.n_max {
                let converged = change <= opts.tol;
                let mut out = Vec::with_capacity(order + 1);
                let mut log_fact = 0.0;
                for (j, aj) in a.iter().enumerate() {
                    if j > 0 {
                        log_fact += (j as f64).ln();
                    }
                    let scale = LogComplex::new(lmax + log_fact - j as f64 * log_r, 0.0);
                    out.push(LogComplex::from_complex(*aj) * scale);
                }
                return Ok(Derivatives {
                    values: out,
                    log_radius: log_r,
                    n_nodes: n,
                    converged,
                });
            }
        }
        prev = Some((a, lmax));
        // interleave the new odd nodes of the doubled rule
        let odd: Vec<usize> = (0..n).map(|m| 2 * m + 1).collect();
        let new = eval(2 * n, &odd);
        let mut merged = Vec::with_capacity(2 * n);
        for (o, e) in vals.into_iter().zip(new) {
            merged.push(o);
            merged.push(e);
        }
        vals = merged;
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products::ComplexFn;

    fn rel(a: LogComplex, b: Complex64) -> f64 {
        (a.to_complex() - b).norm() / b.norm()
    }

    #[test]
    fn exponential_derivatives() {
        let f = ComplexFn(|z: Complex64| z.exp());
        for z in [
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, -1.5),
            Complex64::new(-3.0, 4.0),
        ] {
            let d = cauchy_derivatives(&f, LogComplex::from_complex(z), 4, &CauchyOptions::default()).unwrap();
            assert!(d.converged);
            for v in &d.values {
                assert!(rel(*v, z.exp()) < 1e-13, "{z}: {v:?}");
            }
        }
    }

    #[test]
    fn polynomial_derivatives_at_a_zero() {
        // (z - 1)(z + 2)^2 at z = 1
        let f = ComplexFn(|z: Complex64| (z - 1.0) * (z + 2.0) * (z + 2.0));
        let d = cauchy_derivatives(&f, LogComplex::from_real(1.0), 3, &CauchyOptions::default()).unwrap();
        assert!(d.values[0].to_complex().norm() < 1e-13);
        assert!(rel(d.values[1], Complex64::new(9.0, 0.0)) < 1e-13);
        assert!(rel(d.values[2], Complex64::new(12.0, 0.0)) < 1e-13);
        assert!(rel(d.values[3], Complex64::new(6.0, 0.0)) < 1e-13);
    }

    #[test]
    fn large_argument_scaling() {
        // e^(z^2 / 1000) near |z| = 1e3
        let f = FnEvaluatorSq;
        let z = Complex64::new(600.0, 800.0);
        let d = cauchy_derivatives(&f, LogComplex::from_complex(z), 2, &CauchyOptions::default()).unwrap();
        let w = z * z / 1000.0;
        let g1 = z / 500.0;
        let g2 = g1 * g1 + 1.0 / 500.0;
        let base = LogComplex::exp_of(w);
        assert!(((d.values[1] / base).to_complex() - g1).norm() < 1e-9 * g1.norm());
        assert!(((d.values[2] / base).to_complex() - g2).norm() < 1e-9 * g2.norm());
    }

    struct FnEvaluatorSq;

    impl Evaluator for FnEvaluatorSq {
        fn eval(&self, z: LogComplex) -> LogComplex {
            let z = z.to_complex();
            LogComplex::exp_of(z * z / 1000.0)
        }
    }
}
