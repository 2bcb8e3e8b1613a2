//! Canonical products `prod (1 - z/z_n) e_p(z/z_n)`, Weierstrass factors,
//! the circle polynomials `P_{m,b}` and derivatives at zeros.

pub mod circle;
mod lindelof;

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, NevlabError, Result};
use crate::logdomain::{ln_one_minus, log_abs_one_minus, wrap_phase, LogComplex};
use crate::sequences::{ac_phase, ACParameters, Multiplicity, SequenceKind, ZeroSequence};

/// Largest supported genus.
pub const MAX_GENUS: u32 = 64;

/// Anything that can be evaluated in log-polar form.
pub trait Evaluator: Sync {
    fn eval(&self, z: LogComplex) -> LogComplex;

    fn log_abs(&self, z: LogComplex) -> f64 {
        self.eval(z).log_mag
    }

    /// `log` of the distance from `z` to the nearest zero or singularity
    /// that limits Cauchy circles; `+inf` when there is none.
    fn log_gap(&self, _z: LogComplex) -> f64 {
        f64::INFINITY
    }

    /// `log|f(r e^(i theta))| - log|f(r)|` as `(s, d)` with value `d e^s`,
    /// when it can be computed more accurately than by subtraction. `s`
    /// must not depend on `theta`.
    fn log_abs_drop(&self, _log_r: f64, _theta: f64) -> Option<(f64, f64)> {
        None
    }
}

/// Wraps a closure as an [`Evaluator`].
pub struct FnEvaluator<F>(pub F);

impl<F: Fn(LogComplex) -> LogComplex + Sync> Evaluator for FnEvaluator<F> {
    fn eval(&self, z: LogComplex) -> LogComplex {
        (self.0)(z)
    }
}

/// Wraps a closure on ordinary complex numbers.
pub struct ComplexFn<F>(pub F);

impl<F: Fn(Complex64) -> Complex64 + Sync> Evaluator for ComplexFn<F> {
    fn eval(&self, z: LogComplex) -> LogComplex {
        LogComplex::from_complex((self.0)(z.to_complex()))
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalProduct {
    pub zeros: ZeroSequence,
    pub genus: u32,
    /// Target bound on the neglected tail of `log|f|`.
    pub trunc_tol: f64,
    pub max_terms: usize,
}

/// Value of a product together with its truncation data.
#[derive(Clone, Copy, Debug)]
pub struct ProductEval {
    pub value: LogComplex,
    /// Complex log with unreduced imaginary part.
    pub ln: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
}

impl CanonicalProduct {
    /// Product over `zeros` with their own genus.
    pub fn new(zeros: ZeroSequence) -> Result<Self> {
        let g = zeros.genus;
        Self::with_genus(zeros, g)
    }

    pub fn with_genus(zeros: ZeroSequence, genus: u32) -> Result<Self> {
        if genus > MAX_GENUS {
            return domain(format!("genus {genus} exceeds the cap {MAX_GENUS}"));
        }
        if let SequenceKind::Lindelof { rho } = zeros.kind {
            if genus != rho.floor() as u32 {
                return domain("the Lindelof product is evaluated with genus floor(rho)");
            }
        }
        Ok(CanonicalProduct {
            zeros,
            genus,
            trunc_tol: 1e-14,
            max_terms: 10_000_000,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.trunc_tol = tol;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }
}

/// `sum_{j=1}^p w^j / j`.
pub fn ln_weierstrass(p: u32, w: LogComplex) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    if p == 0 || w.is_zero() {
        return sum;
    }
    if w.log_mag <= LN_2 {
        let wc = w.to_complex();
        let mut pow = Complex64::new(1.0, 0.0);
        for j in 1..=p {
            pow *= wc;
            sum += pow / j as f64;
        }
    } else {
        for j in 1..=p {
            let jf = j as f64;
            sum += Complex64::from_polar((jf * w.log_mag - jf.ln()).exp(), jf * w.phase);
        }
    }
    sum
}

/// The Weierstrass convergence factor `e_p(w) = exp(sum_{j<=p} w^j / j)`.
pub fn weierstrass_factor(p: u32, w: LogComplex) -> LogComplex {
    LogComplex::exp_of(ln_weierstrass(p, w))
}

/// `log((1 - w) e_p(w))`, free of cancellation for small `w`.
pub fn ln_primary_factor(p: u32, w: LogComplex) -> Complex64 {
    if w.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    if w.log_mag <= -LN_2 {
        // -sum_{j>p} w^j / j
        let wc = w.to_complex();
        let mut pow = wc.powu(p + 1);
        let mut sum = Complex64::new(0.0, 0.0);
        for j in (p + 1)..(p + 200) {
            let t = pow / j as f64;
            sum -= t;
            if t.norm() <= 1e-17 * sum.norm() {
                break;
            }
            pow *= wc;
        }
        return sum;
    }
    let (a, b) = ln_one_minus(w);
    Complex64::new(a, b) + ln_weierstrass(p, w)
}

/// Bound on `sum_{n>k} |w_n|^(p+1) / (1 - |w_n|)` for `log|z| = l`, valid
/// once the remaining ratios are at most 1/2.
fn tail_bound(seq: &ZeroSequence, p: u32, l: f64, k: usize) -> f64 {
    let e = (p + 1) as f64;
    match &seq.kind {
        SequenceKind::Geometric { log_ratio, .. } => {
            let lw = l - (k + 1) as f64 * log_ratio;
            if lw > -LN_2 {
                return f64::INFINITY;
            }
            2.0 * (e * lw).exp() / (1.0 - (-e * log_ratio).exp())
        }
        SequenceKind::Bank { .. } | SequenceKind::PairedGeometric { .. } => {
            let n = (k + 1).div_ceil(2) as f64;
            let lw = l - n * LN_2;
            if lw > -LN_2 {
                return f64::INFINITY;
            }
            4.0 * (e * lw).exp() / (1.0 - (-e * LN_2).exp())
        }
        SequenceKind::ExplicitList(v) => {
            let mut s = 0.0;
            for zr in &v[k.min(v.len())..] {
                let lw = l - zr.point().log_mag;
                s += zr.multiplicity as f64 * (e * lw).exp() / (1.0 - lw.exp().min(0.5));
            }
            s
        }
        _ => f64::INFINITY,
    }
}

fn truncation(ln: Complex64, achieved: f64, terms: usize) -> NevlabError {
    NevlabError::Truncation {
        partial: LogComplex::exp_of(ln),
        achieved,
        terms,
    }
}

/// Direct product over enumerated zeros with the certified tail stop.
fn generic_ln(f: &CanonicalProduct, z: LogComplex, skip: Option<usize>) -> Result<(Complex64, f64, usize)> {
    let seq = &f.zeros;
    let p = f.genus;
    let anchor = match skip {
        Some(k) => seq.point(k),
        None => z,
    };
    let finite = seq.finite_len();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut k = 0usize;
    loop {
        k += 1;
        if finite.is_some_and(|n| k > n) {
            return Ok((acc, 0.0, k - 1));
        }
        if k > f.max_terms {
            let tb = tail_bound(seq, p, anchor.log_mag, k - 1);
            return Err(truncation(acc, tb, k - 1));
        }
        if skip == Some(k) {
            continue;
        }
        let zk = seq.point(k);
        let w = anchor / zk;
        let mult = seq.multiplicity(k) as f64;
        let term = match skip.and_then(|s| seq.partner_ln_one_minus(s, k)) {
            Some((a, b)) => Complex64::new(a, b) + ln_weierstrass(p, w),
            None => ln_primary_factor(p, w),
        };
        acc += term * mult;
        if finite.is_none() && w.log_mag <= -LN_2 && skip.is_none_or(|s| k > s) {
            let tb = tail_bound(seq, p, anchor.log_mag, k);
            if tb <= f.trunc_tol {
                return Ok((acc, tb, k));
            }
        }
    }
}

/// Evaluates `f(z)` with truncation data.
pub fn eval_product_detailed(f: &CanonicalProduct, z: LogComplex, want_phase: bool) -> Result<ProductEval> {
    if z.is_zero() {
        return Ok(ProductEval {
            value: LogComplex::ONE,
            ln: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let (ln, tb, terms) = match &f.zeros.kind {
        SequenceKind::Lindelof { rho } => {
            let (v, e) = lindelof::Lindelof::new(*rho).ln_value(z);
            (v, e, 0)
        }
        SequenceKind::AndersonClunie(params) => {
            let (v, e) = circle::ln_ac(params, z, want_phase)?;
            (v, e, params.n_max())
        }
        _ => generic_ln(f, z, None)?,
    };
    Ok(ProductEval {
        value: LogComplex::exp_of(ln),
        ln,
        tail_bound: tb,
        terms,
    })
}

/// `f(z)` as a [`LogComplex`].
pub fn eval_product(f: &CanonicalProduct, z: LogComplex) -> Result<LogComplex> {
    Ok(eval_product_detailed(f, z, true)?.value)
}

/// `P_{m,b}(z) = prod_k (1 - z / (b e^(i phi_{m,k})))` with an error bound
/// (nonzero only for the angle-integral path).
pub fn eval_poly_factor(m: u128, log_b: f64, z: LogComplex) -> Result<(LogComplex, f64)> {
    if m == 0 {
        return domain("eval_poly_factor needs m >= 1");
    }
    let (v, e) = circle::circle_ln(Multiplicity::Exact(m), log_b, None, z, true)?;
    Ok((LogComplex::exp_of(v), e))
}

/// Log-domain split of `prod_{n != k} (1 - z_k/z_n)` for a zero on circle
/// `i` at position `j`: inner circles, outer circles and the same circle.
pub fn ac_cofactor_parts(params: &ACParameters, i: usize, j: usize) -> Result<[Complex64; 3]> {
    if i == 0 || i > params.addressable_circles() {
        return domain(format!("circle {i} is not materialized with integer multiplicities"));
    }
    let c = params.circle(i);
    let m = c.mult.exact().unwrap() as usize;
    if j == 0 || j > m {
        return domain(format!("position {j} outside 1..={m}"));
    }
    let zk = LogComplex::new(c.log_b, ac_phase(m as u128, j as u128));
    let mut inner = Complex64::new(0.0, 0.0);
    let mut outer = Complex64::new(0.0, 0.0);
    for n in 1..=params.n_max() {
        if n == i {
            continue;
        }
        let (v, _) = circle::circle_term(params, n, zk, true)?;
        if n < i {
            inner += v;
        } else {
            outer += v;
        }
    }
    let tail = circle::ac_tail_bound(params, zk.log_mag);
    if !(tail <= 1e-3) {
        return Err(truncation(inner + outer, tail, params.n_max()));
    }
    let same = if m == 1 {
        Complex64::new(0.0, 0.0)
    } else {
        let t = params.tables(i);
        let mag = t.chord_prefix[m - j] + t.chord_prefix[j - 1];
        let gap = PI / (2.0 * (m as f64 - 1.0));
        let (a, b) = ((m - j) as f64, (j - 1) as f64);
        let phase = 0.5 * PI * (a - b) - 0.5 * gap * (a * (a + 1.0) / 2.0 - b * (b + 1.0) / 2.0);
        Complex64::new(mag, phase)
    };
    Ok([inner, outer, same])
}

/// `f'(z_k)` at the simple zero `z_k`.
pub fn derivative_at_zero(f: &CanonicalProduct, k: usize) -> Result<LogComplex> {
    let seq = &f.zeros;
    if k == 0 || k > seq.addressable() {
        return domain(format!("zero index {k} outside the addressable range"));
    }
    if seq.multiplicity(k) != 1 {
        return domain(format!("zero {k} is not simple"));
    }
    let ln = match &seq.kind {
        SequenceKind::Lindelof { rho } => lindelof::ln_derivative_at_zero(*rho, k),
        SequenceKind::AndersonClunie(params) => {
            let (i, j) = params.locate(k);
            let parts = ac_cofactor_parts(params, i, j)?;
            let zk = seq.point(k);
            Complex64::new(0.0, PI) - zk.ln() + parts[0] + parts[1] + parts[2]
        }
        _ => {
            let (s, _, _) = generic_ln(f, LogComplex::ZERO, Some(k))?;
            let hp: f64 = (1..=f.genus).map(|j| 1.0 / j as f64).sum();
            Complex64::new(hp, PI) - seq.point(k).ln() + s
        }
    };
    Ok(LogComplex::exp_of(ln))
}

/// `log` of the distance from `z` to the nearest zero of `seq`.
pub fn nearest_zero_log_gap(seq: &ZeroSequence, z: LogComplex) -> f64 {
    match &seq.kind {
        SequenceKind::Lindelof { rho } => {
            let zc = z.to_complex();
            let alpha = 1.0 / rho;
            let k0 = if zc.re < 0.0 { (-zc.re).powf(*rho) } else { 1.0 };
            let lo = (k0.floor() - 1.0).max(1.0) as u64;
            let mut best = f64::INFINITY;
            for k in lo..=lo + 3 {
                let zk = LogComplex::new(alpha * (k as f64).ln(), PI);
                best = best.min(zk.log_mag + log_abs_one_minus(z / zk));
            }
            best
        }
        SequenceKind::AndersonClunie(params) => (1..=params.n_max())
            .map(|i| {
                let c = params.circle(i);
                circle::circle_log_gap(c.mult, c.log_b, z)
            })
            .fold(f64::INFINITY, f64::min),
        _ => {
            let mut best = f64::INFINITY;
            let cap = seq.finite_len().unwrap_or(usize::MAX);
            let mut k = 1;
            while k <= cap {
                let zk = seq.point(k);
                // |z_k| - |z| bounds the distance from below.
                if zk.log_mag > z.log_mag && best.is_finite() {
                    let lower = zk.log_mag + log_abs_one_minus(LogComplex::new(z.log_mag - zk.log_mag, 0.0));
                    if lower > best {
                        break;
                    }
                }
                best = best.min(zk.log_mag + log_abs_one_minus(z / zk));
                k += 1;
            }
            best
        }
    }
}

impl Evaluator for CanonicalProduct {
    fn eval(&self, z: LogComplex) -> LogComplex {
        match eval_product_detailed(self, z, true) {
            Ok(v) => v.value,
            Err(NevlabError::Truncation { partial, .. }) => partial,
            Err(_) => LogComplex::raw(f64::NAN, 0.0),
        }
    }

    fn log_abs(&self, z: LogComplex) -> f64 {
        match eval_product_detailed(self, z, false) {
            Ok(v) => v.value.log_mag,
            Err(NevlabError::Truncation { partial, .. }) => partial.log_mag,
            Err(_) => f64::NAN,
        }
    }

    fn log_gap(&self, z: LogComplex) -> f64 {
        nearest_zero_log_gap(&self.zeros, z)
    }

    fn log_abs_drop(&self, log_r: f64, theta: f64) -> Option<(f64, f64)> {
        match &self.zeros.kind {
            SequenceKind::AndersonClunie(params) => circle::ac_log_abs_drop(params, log_r, theta).ok(),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct MaxModulus {
    pub theta_star: f64,
    pub log_m: f64,
}

/// Max of `log|f(r e^(i theta))|` over a uniform grid, refined by golden
/// section around the grid argmax. The search runs on
/// [`Evaluator::log_abs_drop`] where available.
pub fn max_modulus_on_circle(f: &dyn Evaluator, log_r: f64, n_theta: usize) -> Result<MaxModulus> {
    if n_theta < 8 || !n_theta.is_power_of_two() {
        return domain("n_theta must be a power of two >= 8");
    }
    let step = 2.0 * PI / n_theta as f64;
    let base = f.log_abs(LogComplex::new(log_r, 0.0));
    let scale = f.log_abs_drop(log_r, step).map(|(s, _)| s);
    // scores are scaled drops from `base` in relative mode, plain values otherwise
    let at = |t: f64| match scale {
        Some(s) => match f.log_abs_drop(log_r, t) {
            Some((_, d)) => d,
            None => (f.log_abs(LogComplex::new(log_r, t)) - base) * (-s).exp(),
        },
        None => f.log_abs(LogComplex::new(log_r, t)),
    };
    let vals: Vec<f64> = (0..n_theta)
        .into_par_iter()
        .map(|i| at(wrap_phase(i as f64 * step)))
        .collect();
    let mut best = 0usize;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    let t0 = wrap_phase(best as f64 * step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (t0 - step, t0 + step);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (at(c), at(d));
    for _ in 0..80 {
        if b - a < 1e-12 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = at(d);
        }
    }
    let tm = 0.5 * (a + b);
    let fm = at(tm);
    let (theta_star, score) = if fm >= vals[best] {
        (wrap_phase(tm), fm)
    } else {
        (t0, vals[best])
    };
    let log_m = match scale {
        Some(s) => base + score * s.exp(),
        None => score,
    };
    Ok(MaxModulus { theta_star, log_m })
}
