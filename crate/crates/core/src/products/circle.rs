//! Sums of `log(1 - z / (b e^(i phi_j)))` over the points of one circle of
//! the Anderson-Clunie product.

use std::f64::consts::{FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, NevlabError, Result};
use crate::logdomain::{cis_exact, log_abs_one_minus, wrap_phase, LogComplex};
use crate::sequences::{ac_phase, ACParameters, Multiplicity, DIRECT_CAP};
use crate::special::{gauss_legendre, pairwise_sum};

const CHUNK: usize = 4096;

/// `S_j / m` where `S_j = sum_i e^(-i j phi_i)`.
fn power_sum_over_m(m: Multiplicity, j: u32) -> f64 {
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let jf = j as f64;
    let v = match m {
        Multiplicity::Exact(1) => 1.0,
        Multiplicity::Exact(m) => {
            let mf = m as f64;
            let delta = PI / (4.0 * (mf - 1.0));
            let th = jf * delta;
            let st = th.sin();
            if st.abs() < 1e-9 {
                let k = (th / PI).round() as u128;
                if (k * (m - 1)) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                // m * theta = j pi / 4 + j delta
                (jf * FRAC_PI_4 + th).sin() / (mf * st)
            }
        }
        Multiplicity::Real { .. } => {
            let x = jf * FRAC_PI_4;
            x.sin() / x
        }
    };
    sign * v
}

/// `-sum_j w^j S_j / j` for `log|w| = l <= -ln 2`.
fn series(m: Multiplicity, l: f64, psi: f64) -> (Complex64, f64) {
    let lnm = m.ln();
    let q = l.exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for j in 1..400u32 {
        let jf = j as f64;
        let lmag = jf * l + lnm - jf.ln();
        let s = power_sum_over_m(m, j);
        let (c, si) = cis_exact(jf * psi);
        let mag = lmag.exp() * s;
        sum -= Complex64::new(mag * c, mag * si);
        // remainder <= m q^(j+1) / ((j+1)(1-q))
        err = ((jf + 1.0) * l + lnm - (jf + 1.0).ln()).exp() / (1.0 - q);
        if err <= 1e-17 * sum.norm() || err < 1e-300 {
            break;
        }
    }
    (sum, err)
}

/// Direct sum over the `m` points with angle lookup `cis(j)`.
fn direct<F>(m: usize, l: f64, psi: f64, cis: F, want_phase: bool) -> Complex64
where
    F: Fn(usize) -> (f64, f64) + Sync,
{
    let r0 = l.exp();
    let (cp, sp) = cis_exact(psi);
    let chunk = |lo: usize, hi: usize| -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for j in lo..hi {
            let (c, s) = cis(j);
            let x = r0 * (cp * c + sp * s);
            let y = r0 * (sp * c - cp * s);
            let a = 1.0 - x;
            let q = a * a + y * y;
            re += if q < 1e-4 {
                log_abs_one_minus(LogComplex::new(l, psi - s.atan2(c)))
            } else {
                0.5 * q.ln()
            };
            if want_phase {
                im += (-y).atan2(a);
            }
        }
        (re, im)
    };
    let n_chunks = m.div_ceil(CHUNK);
    let parts: Vec<(f64, f64)> = if n_chunks <= 1 {
        vec![chunk(0, m)]
    } else {
        (0..n_chunks)
            .into_par_iter()
            .map(|c| chunk(c * CHUNK, ((c + 1) * CHUNK).min(m)))
            .collect()
    };
    let re: Vec<f64> = parts.iter().map(|p| p.0).collect();
    // The point set is symmetric about the real axis.
    let im = if psi == 0.0 {
        0.0
    } else {
        pairwise_sum(&parts.iter().map(|p| p.1).collect::<Vec<_>>())
    };
    Complex64::new(pairwise_sum(&re), im)
}

/// Angle-integral replacement of the direct sum for positive real `z`
/// (`log|w| = l`), with Euler-Maclaurin endpoint corrections.
fn angle_integral(m: f64, l: f64) -> (f64, f64) {
    let r0 = l.exp();
    let g = |phi: f64| 0.5 * (1.0 - 2.0 * r0 * phi.cos() + r0 * r0).ln();
    let gd = |phi: f64| r0 * phi.sin() / (1.0 - 2.0 * r0 * phi.cos() + r0 * r0);
    let (a, b) = (0.75 * PI, 1.25 * PI);
    let (x, w) = gauss_legendre(64);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * g(c + h * xi)).sum::<f64>() * h;
    let delta = PI / (2.0 * (m - 1.0));
    let v = integral / delta + 0.5 * (g(a) + g(b)) + delta / 12.0 * (gd(b) - gd(a));
    let err = delta.powi(3) / 720.0 * (0.5 * PI) * 24.0 * r0.max(1.0).powi(4);
    (v, err)
}

/// `sum_j log(1 - z / (b e^(i phi_j)))` over one circle, with an error
/// bound. `cis` supplies cached angle tables when available.
pub(crate) fn circle_ln(
    m: Multiplicity,
    log_b: f64,
    cis: Option<&[(f64, f64)]>,
    z: LogComplex,
    want_phase: bool,
) -> Result<(Complex64, f64)> {
    if z.is_zero() || log_b == f64::INFINITY {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let l = z.log_mag - log_b;
    let psi = z.phase;
    if l <= -LN_2 {
        return Ok(series(m, l, psi));
    }
    if l >= LN_2 {
        let (s, e) = series(m, -l, -psi);
        let mf = m.as_f64();
        return Ok((Complex64::new(mf * l, mf * psi) + s, e));
    }
    match m.exact().filter(|&c| c <= DIRECT_CAP) {
        Some(c) => {
            let c = c as usize;
            let v = match cis {
                Some(t) => direct(c, l, psi, |j| t[j], want_phase),
                None => direct(
                    c,
                    l,
                    psi,
                    |j| {
                        let (s, co) = ac_phase(c as u128, j as u128 + 1).sin_cos();
                        (co, s)
                    },
                    want_phase,
                ),
            };
            Ok((v, 0.0))
        }
        None if psi == 0.0 && m.as_f64().is_finite() => {
            let (v, e) = angle_integral(m.as_f64(), l);
            Ok((Complex64::new(v, 0.0), e))
        }
        None => domain(format!(
            "circle with {} points near |z| needs direct summation beyond the cap",
            m.as_f64()
        )),
    }
}

/// Complex log of the Anderson-Clunie product and its error bound.
pub(crate) fn ln_ac(params: &ACParameters, z: LogComplex, want_phase: bool) -> Result<(Complex64, f64)> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let n = params.n_max();
    for i in 1..=n {
        let (v, e) = circle_term(params, i, z, want_phase)?;
        acc += v;
        err += e;
    }
    let tail = ac_tail_bound(params, z.log_mag);
    if !(tail <= 1e-3) {
        return Err(NevlabError::Truncation {
            partial: LogComplex::exp_of(acc),
            achieved: tail,
            terms: n,
        });
    }
    Ok((acc, err + tail))
}

pub(crate) fn circle_term(
    params: &ACParameters,
    i: usize,
    z: LogComplex,
    want_phase: bool,
) -> Result<(Complex64, f64)> {
    let c = params.circle(i);
    let direct_ok = c.mult.exact().is_some_and(|m| m <= DIRECT_CAP);
    let l = z.log_mag - c.log_b;
    let cis = if direct_ok && l.abs() < LN_2 {
        Some(params.tables(i).cis.as_slice())
    } else {
        None
    };
    circle_ln(c.mult, c.log_b, cis, z, want_phase)
}

/// `log|f(r e^(i theta))| - log|f(r)|` for the Anderson-Clunie product as
/// `(s, d)` with drop `d e^s`. It is summed from per-term differences, and
/// `s` depends on `r` only, so `d` stays resolvable when the drop is far
/// below the resolution of `log|f(r)|` or below the smallest `f64`.
/// Circles beyond `n_max` are ignored.
pub(crate) fn ac_log_abs_drop(params: &ACParameters, log_r: f64, theta: f64) -> Result<(f64, f64)> {
    let theta = wrap_phase(theta);
    let (sh, st) = ((0.5 * theta).sin(), theta.sin());
    // t = 1 - e^(i theta)
    let t = Complex64::new(2.0 * sh * sh, -st);
    let t2 = 4.0 * sh * sh;
    let circles: Vec<_> = (1..=params.n_max())
        .map(|i| (i, params.circle(i)))
        .filter(|(_, c)| c.log_b != f64::INFINITY)
        .collect();
    let scale = circles
        .iter()
        .map(|(_, c)| {
            let l = log_r - c.log_b;
            let lead = if l.abs() >= LN_2 { -l.abs() } else { 0.0 };
            lead + c.mult.ln()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let mut parts = Vec::with_capacity(circles.len());
    for (i, c) in circles {
        let l = log_r - c.log_b;
        if l.abs() >= LN_2 {
            parts.push(series_drop(c.mult, -l.abs(), theta, scale));
            continue;
        }
        let direct_ok = c.mult.exact().is_some_and(|m| m <= DIRECT_CAP);
        if !direct_ok {
            let z = LogComplex::new(log_r, theta);
            let a = circle_ln(c.mult, c.log_b, None, z, false)?.0.re;
            let b = circle_ln(c.mult, c.log_b, None, LogComplex::new(log_r, 0.0), false)?
                .0
                .re;
            parts.push((a - b) * (-scale).exp());
            continue;
        }
        let r0 = l.exp();
        let cis = &params.tables(i).cis;
        let terms: Vec<f64> = cis
            .par_chunks(CHUNK)
            .map(|ch| {
                ch.iter()
                    .map(|&(co, si)| {
                        // w0 = r e^(-i phi) / b, a = 1 - w0, d = w0 t
                        let w0 = Complex64::new(r0 * co, -r0 * si);
                        let a = Complex64::new(1.0, 0.0) - w0;
                        let d = w0 * t;
                        let x = (2.0 * (a.conj() * d).re + r0 * r0 * t2) / a.norm_sqr();
                        0.5 * x.ln_1p()
                    })
                    .sum::<f64>()
            })
            .collect();
        parts.push(pairwise_sum(&terms) * (-scale).exp());
    }
    Ok((scale, pairwise_sum(&parts)))
}

/// Real part of `series(m, l, theta) - series(m, l, 0)`, times `e^(-scale)`.
fn series_drop(m: Multiplicity, l: f64, theta: f64, scale: f64) -> f64 {
    let lnm = m.ln() - scale;
    let q = l.exp();
    let mut sum = 0.0;
    for j in 1..400u32 {
        let jf = j as f64;
        let mag = (jf * l + lnm - jf.ln()).exp() * power_sum_over_m(m, j);
        let s = (0.5 * jf * theta).sin();
        sum += mag * 2.0 * s * s;
        let err = ((jf + 1.0) * l + lnm - (jf + 1.0).ln()).exp() / (1.0 - q);
        if err <= 1e-17 * sum.abs() || err < 1e-300 {
            break;
        }
    }
    sum
}

/// Bound on the log-magnitude contribution of circles beyond `n_max`.
pub(crate) fn ac_tail_bound(params: &ACParameters, log_r: f64) -> f64 {
    if log_r == f64::NEG_INFINITY {
        return 0.0;
    }
    let n = params.n_max();
    if params.circle(n).log_b == f64::INFINITY {
        return 0.0;
    }
    // sum of multiplicities so far, as a log
    let mut total = 0.0f64;
    for i in 1..=n {
        total += params.circle(i).mult.as_f64();
    }
    let log_b_next = (params.gamma * total.ln()).exp();
    let ln_c_next = (params.rho - 1.0) * log_b_next.ln();
    let l = log_r - log_b_next;
    if l > -LN_2 {
        return f64::INFINITY;
    }
    // c |w| / (1 - |w|) for the next circle, doubled for all later ones
    (LN_2 + LN_2 + ln_c_next + l).exp()
}

/// `log|dist|` from `z` to the nearest point of the circle.
pub(crate) fn circle_log_gap(m: Multiplicity, log_b: f64, z: LogComplex) -> f64 {
    if log_b == f64::INFINITY {
        return f64::INFINITY;
    }
    let l = z.log_mag - log_b;
    let rel = wrap_phase(z.phase - PI);
    let phi = match m.exact() {
        Some(1) => PI,
        Some(c) => {
            let delta = PI / (2.0 * (c as f64 - 1.0));
            let j = (rel / delta + (c as f64 + 1.0) / 2.0).round().clamp(1.0, c as f64);
            ac_phase(c, j as u128)
        }
        None => PI + rel.clamp(-FRAC_PI_4, FRAC_PI_4),
    };
    log_b + log_abs_one_minus(LogComplex::new(l, z.phase - phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(m: usize, log_b: f64, z: LogComplex) -> Complex64 {
        let b = log_b.exp();
        let zc = z.to_complex();
        let mut s = Complex64::new(0.0, 0.0);
        for j in 1..=m {
            let phi = ac_phase(m as u128, j as u128);
            let zj = Complex64::from_polar(b, phi);
            s += (Complex64::new(1.0, 0.0) - zc / zj).ln();
        }
        s
    }

    #[test]
    fn all_regimes_match_brute_force() {
        for &m in &[1usize, 2, 3, 7, 16, 501] {
            for &l in &[-6.0, -0.8, -0.3, 0.0, 0.4, 0.9, 5.0] {
                for &t in &[0.0, 0.4, 2.0, -2.9, PI] {
                    let z = LogComplex::new(1.5 + l, t);
                    let (v, _) = circle_ln(Multiplicity::Exact(m as u128), 1.5, None, z, true).unwrap();
                    let e = brute(m, 1.5, z);
                    if v.re == f64::NEG_INFINITY {
                        // z sits exactly on a zero
                        assert!(e.re < -30.0);
                        continue;
                    }
                    assert!(
                        (v.re - e.re).abs() < 1e-11 * e.re.abs().max(1.0),
                        "m={m} l={l} t={t}: {v} {e}"
                    );
                    assert!(wrap_phase(v.im - e.im).abs() < 1e-9, "m={m} l={l} t={t}: {v} {e}");
                }
            }
        }
    }

    #[test]
    fn poly_examples() {
        let one = LogComplex::ONE;
        let (v, _) = circle_ln(Multiplicity::Exact(1), 0.0, None, one, true).unwrap();
        assert!((v.re - 2f64.ln()).abs() < 1e-15);
        let (v, _) = circle_ln(Multiplicity::Exact(2), 0.0, None, one, true).unwrap();
        assert!((v.re - (2.0 + 2f64.sqrt()).ln()).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn angle_integral_matches_direct() {
        let m = 200_000usize;
        for &l in &[-0.5, 0.0, 0.5] {
            let direct_v = circle_ln(
                Multiplicity::Exact(m as u128),
                0.0,
                None,
                LogComplex::new(l, 0.0),
                false,
            )
            .unwrap()
            .0
            .re;
            let (v, e) = angle_integral(m as f64, l);
            assert!(e < 1e-9);
            assert!((v - direct_v).abs() < 1e-7 * direct_v.abs(), "{v} {direct_v}");
        }
    }
}
