//! Lindelöf product `prod (1 + z n^(-1/rho)) e_p(-z n^(-1/rho))`.
//!
//! Small `|z|`: direct terms while `|z| n^(-1/rho) > 1/2`, then the power
//! series tail through Hurwitz sums. Large `|z|`: a short head of direct
//! terms and Euler-Maclaurin for the rest, with the integral of
//! `g(x) = G(z x^(-1/rho))` in closed form. When the singularity of `g` lies
//! close to the real axis the terms around it are summed directly and the
//! pieces on either side use numeric integrals.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::ln_primary_factor;
use crate::logdomain::{wrap_phase, LogComplex};
use crate::special::{bernoulli_over_factorial, gauss_legendre, hurwitz_scaled, CompensatedSum};

const HEAD: usize = 32;
const EM_ORDER: usize = 8;
const WINDOW: f64 = 64.0;

#[derive(Default)]
struct CSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CSum {
    fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }
    fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Lindelof {
    rho: f64,
    alpha: f64,
    p: u32,
    s: f64,
}

impl Lindelof {
    pub(crate) fn new(rho: f64) -> Self {
        let p = rho.floor() as u32;
        Lindelof {
            rho,
            alpha: 1.0 / rho,
            p,
            s: rho - p as f64,
        }
    }

    /// `G(z n^(-alpha))`, the log of the `n`-th factor.
    fn term(&self, z: LogComplex, n: f64) -> Complex64 {
        ln_primary_factor(self.p, LogComplex::new(z.log_mag - self.alpha * n.ln(), z.phase - PI))
    }

    /// Complex log of the product and an error estimate.
    pub(crate) fn ln_value(&self, z: LogComplex) -> (Complex64, f64) {
        if z.is_zero() {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        if z.log_mag < LN_2 + self.alpha * (HEAD as f64).ln() {
            self.ln_small(z)
        } else {
            self.ln_large(z)
        }
    }

    pub(crate) fn ln_small(&self, z: LogComplex) -> (Complex64, f64) {
        let n = ((self.rho * (z.log_mag + LN_2)).exp().ceil() as usize).max(1);
        let mut acc = CSum::default();
        for k in 1..=n {
            acc.add(self.term(z, k as f64));
        }
        let a = (n + 1) as f64;
        let v = z.to_complex() * a.powf(-self.alpha);
        let (tail, err) = self.power_tail(v, a);
        (acc.value() + tail, err)
    }

    /// `sum_{j>p} (-1)^(j+1) v^j / j * hurwitz_scaled(alpha j, a)` for
    /// `|v| <= 1/2`.
    fn power_tail(&self, v: Complex64, a: f64) -> (Complex64, f64) {
        let vn = v.norm();
        let mut pow = v.powu(self.p + 1);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for j in (self.p + 1)..(self.p + 400) {
            let h = hurwitz_scaled(self.alpha * j as f64, a);
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let t = pow * (sign * h / j as f64);
            sum += t;
            err = t.norm() * vn / (1.0 - vn);
            if err <= 1e-17 * sum.norm() || pow.norm() == 0.0 {
                break;
            }
            pow *= v;
        }
        (sum, err)
    }

    pub(crate) fn ln_large(&self, z: LogComplex) -> (Complex64, f64) {
        // Singularities of g(x): x^alpha = -z on the principal x-sheet.
        let phi = wrap_phase(z.phase + PI);
        let mut window = None;
        for k in -1i32..=1 {
            let ang = self.rho * (phi + 2.0 * PI * k as f64);
            if ang.abs() < PI / 2.0 {
                let m = (self.rho * z.log_mag).exp();
                let (s, c) = ang.sin_cos();
                if (m * s).abs() < WINDOW {
                    window = Some(m * c);
                }
            }
        }
        let mut acc = CSum::default();
        let mut err = 0.0;
        match window {
            None => {
                for n in 1..HEAD {
                    acc.add(self.term(z, n as f64));
                }
                let (t, e) = self.em_tail(z, HEAD as f64, false);
                acc.add(t);
                err += e;
            }
            Some(c) => {
                let nl = (c - WINDOW).floor();
                let nh = (c + WINDOW).ceil();
                let direct_from = if nl <= HEAD as f64 {
                    1.0
                } else {
                    for n in 1..HEAD {
                        acc.add(self.term(z, n as f64));
                    }
                    let (t, e) = self.em_segment(z, HEAD as f64, nl);
                    acc.add(t);
                    err += e;
                    nl + 1.0
                };
                let mut n = direct_from;
                while n < nh {
                    acc.add(self.term(z, n));
                    n += 1.0;
                }
                let (t, e) = self.em_tail(z, nh, true);
                acc.add(t);
                err += e;
            }
        }
        (acc.value(), err)
    }

    /// `(-z)^(p+1)` in ordinary arithmetic.
    fn neg_z_pow(&self, z: LogComplex) -> Complex64 {
        let k = (self.p + 1) as f64;
        let m = (k * z.log_mag).exp();
        if z.phase == 0.0 {
            let sign = if self.p % 2 == 0 { -1.0 } else { 1.0 };
            return Complex64::new(sign * m, 0.0);
        }
        let w = LogComplex::new(z.log_mag, z.phase + PI);
        Complex64::from_polar(m, k * w.phase)
    }

    /// Euler-Maclaurin for `sum_{n>=a} g(n)`.
    fn em_tail(&self, z: LogComplex, a: f64, numeric: bool) -> (Complex64, f64) {
        let ga = self.term(z, a);
        let y = a.powf(self.alpha);
        let (k, kerr) = if numeric {
            self.k_inf_numeric(z, y)
        } else {
            (self.k_closed(z, y), 0.0)
        };
        let zp = self.neg_z_pow(z);
        let integral = -a * ga - zp * k;
        let d = self.odd_derivs(z.to_complex(), a);
        let (corr, cerr) = em_correction(&d);
        (integral + 0.5 * ga - corr, cerr + zp.norm() * kerr)
    }

    /// Euler-Maclaurin for `sum_{n=a}^{b} g(n)`.
    fn em_segment(&self, z: LogComplex, a: f64, b: f64) -> (Complex64, f64) {
        let ga = self.term(z, a);
        let gb = self.term(z, b);
        let (k, kerr) = self.k_numeric(z, a.powf(self.alpha), b.powf(self.alpha));
        let zp = self.neg_z_pow(z);
        let integral = b * gb - a * ga - zp * k;
        let zc = z.to_complex();
        let da = self.odd_derivs(zc, a);
        let db = self.odd_derivs(zc, b);
        let diff: Vec<Complex64> = db.iter().zip(&da).map(|(x, y)| x - y).collect();
        let (corr, cerr) = em_correction(&diff);
        (integral + 0.5 * (ga + gb) + corr, cerr + zp.norm() * kerr)
    }

    /// `K(Y, inf) = int_Y^inf y^(s-1) / (y + z) dy` for `|z| >= 2Y`.
    fn k_closed(&self, z: LogComplex, y: f64) -> Complex64 {
        let zc = z.to_complex();
        if self.s == 0.0 {
            return (Complex64::new(1.0, 0.0) + zc / y).ln() / zc;
        }
        let s = self.s;
        let lead = Complex64::from_polar(((s - 1.0) * z.log_mag).exp(), (s - 1.0) * z.phase) * (PI / (PI * s).sin());
        let t0 = y.powf(s) / zc;
        let ratio = -y / zc;
        let mut pow = t0;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..400 {
            let t = pow / (s + k as f64);
            sum += t;
            if t.norm() <= 1e-17 * sum.norm() {
                break;
            }
            pow *= ratio;
        }
        lead - sum
    }

    fn k_integrand(&self, z: Complex64, t: f64) -> Complex64 {
        let e = t.exp();
        (self.s * t).exp() / (z + e)
    }

    fn k_numeric(&self, z: LogComplex, y1: f64, y2: f64) -> (Complex64, f64) {
        let zc = z.to_complex();
        let (a, b) = (y1.ln(), y2.ln());
        let f = |t: f64| self.k_integrand(zc, t);
        // Magnitude scale from a coarse sample of the integrand.
        let peak = (0..=16)
            .map(|i| f(a + (b - a) * i as f64 / 16.0).norm())
            .fold(0.0, f64::max);
        let tol = 1e-15 * peak * (b - a);
        let v = adaptive(&f, a, b, tol);
        (v, tol)
    }

    fn k_inf_numeric(&self, z: LogComplex, y: f64) -> (Complex64, f64) {
        let zm = z.log_mag.exp();
        let ymax = (4.0 * zm).max(2.0 * y);
        let (head, err) = self.k_numeric(z, y, ymax);
        // sum_k (-z)^k Ymax^(s-1-k) / (1 + k - s)
        let zc = z.to_complex();
        let ratio = -zc / ymax;
        let mut pow = Complex64::new(ymax.powf(self.s - 1.0), 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..400 {
            let t = pow / (1.0 + k as f64 - self.s);
            sum += t;
            if t.norm() <= 1e-17 * sum.norm() {
                break;
            }
            pow *= ratio;
        }
        (head + sum, err)
    }

    /// `g^(2j-1)(x0)` for `j = 1..=EM_ORDER + 1` by Taylor-mode arithmetic.
    fn odd_derivs(&self, z: Complex64, x0: f64) -> Vec<Complex64> {
        let count = EM_ORDER + 1;
        let deg = 2 * count;
        let zero = Complex64::new(0.0, 0.0);
        let mut u = vec![zero; deg + 1];
        let mut v = x0.powf(-self.alpha);
        for (i, ui) in u.iter_mut().enumerate() {
            if i > 0 {
                v *= (-self.alpha - (i - 1) as f64) / (i as f64 * x0);
            }
            *ui = z * v;
        }
        let mut one_plus = u.clone();
        one_plus[0] += 1.0;
        let neg_u: Vec<Complex64> = u.iter().map(|x| -x).collect();
        let mut pw = vec![zero; deg + 1];
        pw[0] = Complex64::new(1.0, 0.0);
        for _ in 0..self.p {
            pw = series_mul(&pw, &neg_u);
        }
        let gp = series_div(&pw, &one_plus);
        let du: Vec<Complex64> = (0..deg).map(|i| u[i + 1] * (i + 1) as f64).collect();
        let gprime = series_mul(&gp[..deg], &du);
        let mut out = Vec::with_capacity(count);
        let mut fact = 1.0;
        for (i, g) in gprime.iter().enumerate().take(deg) {
            if i > 0 {
                fact *= i as f64;
            }
            if i % 2 == 0 {
                out.push(g * fact);
            }
        }
        out
    }
}

/// `sum_j B_2j/(2j)! d_j` over all but the last entry; the last one gives
/// the error estimate.
fn em_correction(d: &[Complex64]) -> (Complex64, f64) {
    let m = d.len() - 1;
    let mut corr = Complex64::new(0.0, 0.0);
    for (j, dj) in d.iter().take(m).enumerate() {
        corr += dj * bernoulli_over_factorial(j + 1);
    }
    (corr, (d[m] * bernoulli_over_factorial(m + 1)).norm())
}

fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    (0..n).map(|i| (0..=i).map(|k| a[k] * b[i - k]).sum()).collect()
}

fn series_div(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    let mut q = Vec::with_capacity(n);
    for i in 0..n {
        let mut t = a[i];
        for k in 1..=i {
            t -= b[k] * q[i - k];
        }
        q.push(t / b[0]);
    }
    q
}

fn gl15() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

fn gl_panel(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let (x, w) = gl15();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = Complex64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        s += f(c + h * xi) * *wi;
    }
    s * h
}

/// Adaptive bisection with 15-point Gauss-Legendre panels, to absolute
/// tolerance `tol` or rounding level.
pub(crate) fn adaptive(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    adaptive_rec(f, a, b, gl_panel(f, a, b), tol, 0)
}

fn adaptive_rec(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, whole: Complex64, tol: f64, depth: u32) -> Complex64 {
    let m = 0.5 * (a + b);
    let left = gl_panel(f, a, m);
    let right = gl_panel(f, m, b);
    let halves = left + right;
    let diff = (halves - whole).norm();
    if diff <= tol || diff <= 1e-14 * halves.norm() || b - a <= 1e-10 * (1.0 + a.abs()) || depth >= 50 {
        return halves;
    }
    adaptive_rec(f, a, m, left, 0.5 * tol, depth + 1) + adaptive_rec(f, m, b, right, 0.5 * tol, depth + 1)
}

/// `log f'(z_k)` at the `k`-th zero, as a real sum over the other zeros.
pub(crate) fn ln_derivative_at_zero(rho: f64, k: usize) -> Complex64 {
    let l = Lindelof::new(rho);
    let p = l.p;
    let alpha = l.alpha;
    let kf = k as f64;
    let n_max = ((2f64.powf(rho) * kf).ceil() as usize).max(k + 1);
    let mut re = CompensatedSum::default();
    for n in 1..=n_max {
        if n == k {
            continue;
        }
        // t = (k/n)^alpha
        let lt = -alpha * ((n as f64 - kf) / kf).ln_1p();
        let t = lt.exp();
        let v = if t <= 0.5 {
            // -sum_{j>p} t^j / j
            let mut pow = t.powi(p as i32 + 1);
            let mut s = 0.0;
            for j in (p + 1)..(p + 200) {
                let term = pow / j as f64;
                s -= term;
                if term <= 1e-18 * s.abs() {
                    break;
                }
                pow *= t;
            }
            s
        } else {
            let lg = if lt < 0.0 {
                (-lt.exp_m1()).ln()
            } else {
                lt.exp_m1().ln()
            };
            let mut poly = 0.0;
            let mut pow = 1.0;
            for j in 1..=p {
                pow *= t;
                poly += pow / j as f64;
            }
            lg + poly
        };
        re.add(v);
    }
    // Tail n > n_max: -sum_{j>p} (k/(N+1))^(alpha j) hurwitz(alpha j, N+1) / j
    let a = (n_max + 1) as f64;
    let v = (kf / a).powf(alpha);
    let mut pow = v.powi(p as i32 + 1);
    for j in (p + 1)..(p + 400) {
        let t = pow * hurwitz_scaled(alpha * j as f64, a) / j as f64;
        re.add(-t);
        if t <= 1e-18 * re.value().abs() {
            break;
        }
        pow *= v;
    }
    let hp: f64 = (1..=p).map(|j| 1.0 / j as f64).sum();
    let phase = PI * ((k - 1) % 2) as f64;
    Complex64::new(hp - alpha * kf.ln() + re.value(), phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Complex log-gamma by recurrence and Stirling series.
    fn ln_gamma(mut z: Complex64) -> Complex64 {
        let mut shift = Complex64::new(0.0, 0.0);
        while z.norm() < 30.0 || z.re < 10.0 {
            shift += z.ln();
            z += 1.0;
        }
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
        (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
    }

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn close_mod_2pi(a: Complex64, b: Complex64, tol: f64) -> bool {
        let dr = (a.re - b.re).abs();
        let di = wrap_phase(a.im - b.im).abs();
        dr <= tol * a.re.abs().max(1.0) && di <= tol * a.norm().max(1.0)
    }

    #[test]
    fn rho_one_matches_gamma() {
        // L_1(z) = 1 / (Gamma(1 + z) e^(gamma z))
        let l = Lindelof::new(1.0);
        for &(r, t) in &[
            (0.3, 0.2),
            (5.0, 1.0),
            (40.0, 0.0),
            (80.0, 2.5),
            (150.0, -1.3),
            (300.0, 0.7),
        ] {
            let z = LogComplex::new(f64::ln(r), t);
            let zc = z.to_complex();
            let expect = -ln_gamma(zc + 1.0) - zc * EULER_GAMMA;
            let (got, _) = l.ln_value(z);
            assert!(close_mod_2pi(got, expect, 1e-11), "r={r} t={t}: {got} vs {expect}");
        }
    }

    #[test]
    fn regimes_agree() {
        for &rho in &[0.75, 1.5, 2.0, 2.6] {
            let l = Lindelof::new(rho);
            let r = 2.0 * 32f64.powf(1.0 / rho) * 1.7;
            for i in 0..24 {
                let t = -PI + 2.0 * PI * (i as f64 + 0.5) / 24.0;
                let z = LogComplex::new(r.ln(), t);
                let (a, ea) = l.ln_small(z);
                let (b, eb) = l.ln_large(z);
                assert!(ea < 1e-9 && eb < 1e-9);
                assert!(close_mod_2pi(a, b, 1e-10), "rho={rho} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn window_case_agrees_with_direct() {
        // theta close to pi puts the singularity of g near the real axis.
        for &rho in &[0.75, 1.5] {
            let l = Lindelof::new(rho);
            let r: f64 = 3000.0;
            for &t in &[PI, PI - 1e-3, -PI + 2e-2, PI - 0.05] {
                let z = LogComplex::new(r.ln(), t);
                let (a, _) = l.ln_small(z);
                let (b, _) = l.ln_large(z);
                assert!(close_mod_2pi(a, b, 1e-10), "rho={rho} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn real_on_positive_axis() {
        let l = Lindelof::new(0.75);
        let (v, _) = l.ln_value(LogComplex::new(30.0, 0.0));
        assert_eq!(v.im, 0.0);
        assert!(v.re > 0.0);
    }

    #[test]
    fn derivative_rho_one() {
        // f = 1/(Gamma(1+z) e^(gamma z)) has f'(-k) = (-1)^(k-1) (k-1)! e^(gamma k)
        for k in [1usize, 2, 5, 30] {
            let d = ln_derivative_at_zero(1.0, k);
            let lnfact: f64 = (1..k).map(|i| (i as f64).ln()).sum();
            let expect = lnfact + EULER_GAMMA * k as f64;
            assert!(
                (d.re - expect).abs() < 1e-10 * expect.abs().max(1.0),
                "k={k}: {} {}",
                d.re,
                expect
            );
            assert_eq!(d.im, PI * ((k - 1) % 2) as f64);
        }
    }
}
