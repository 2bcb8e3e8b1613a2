//! Small numerical kernels shared by the evaluators: Bernoulli numbers,
//! a scaled Hurwitz zeta, Gauss-Legendre rules, Stirling sums and a
//! least-squares line fit.

use std::f64::consts::PI;

/// `B_2, B_4, ..., B_40`.
pub const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

/// `B_{2j} / (2j)!` for `j = 1..=20`.
pub fn bernoulli_over_factorial(j: usize) -> f64 {
    let mut f = 1.0;
    for i in 1..=(2 * j) {
        f *= i as f64;
    }
    BERNOULLI_EVEN[j - 1] / f
}

/// Scaled Hurwitz zeta `sum_{k>=0} (a / (a + k))^s = a^s * zeta(s, a)`,
/// for `s > 1` and `a >= 1`, by Euler-Maclaurin summation.
pub fn hurwitz_scaled(s: f64, a: f64) -> f64 {
    debug_assert!(s > 1.0 && a >= 1.0);
    // Direct terms until the EM derivative terms are tiny.
    let m = (s.ceil().max(16.0) - a).max(8.0).ceil() as usize;
    let mut sum = 0.0;
    for k in 0..m {
        sum += (a / (a + k as f64)).powf(s);
    }
    let x = m as f64;
    // h(x) = (1 + x/a)^(-s)
    let base = 1.0 + x / a;
    let h = base.powf(-s);
    sum += a / (s - 1.0) * base.powf(1.0 - s);
    sum += 0.5 * h;
    // h^(n)(x) = (-s)(-s-1)...(-s-n+1) a^(-n) base^(-s-n)
    let mut deriv = h; // running h^(n)
    let mut n = 0usize;
    for j in 1..=10 {
        // advance to order 2j - 1
        while n < 2 * j - 1 {
            deriv *= (-s - n as f64) / (a * base);
            n += 1;
        }
        let term = bernoulli_over_factorial(j) * deriv;
        sum -= term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `K log x - ln Gamma(K + 1)` with `K = floor(x)`, free of the
/// cancellation between its two terms for large `x`.
pub fn log_power_minus_log_factorial(x: f64) -> f64 {
    let k = x.floor();
    if k < 1.0 {
        return 0.0;
    }
    if k < 20.0 {
        let lx = x.ln();
        let mut s = 0.0;
        for i in 1..=(k as u64) {
            s += lx - (i as f64).ln();
        }
        return s;
    }
    // K log(x/K) + K - 0.5 log(2 pi K) - Stirling corrections.
    let ratio = ((x - k) / k).ln_1p();
    let inv = 1.0 / k;
    let inv2 = inv * inv;
    let corr = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    k * ratio + k - 0.5 * (2.0 * PI * k).ln() - corr
}

/// Pairwise summation in a fixed order, independent of how the inputs were
/// produced.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if !t.is_finite() {
            self.sum = t;
            return;
        }
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        if !self.sum.is_finite() {
            return self.sum;
        }
        self.sum + self.comp
    }
}

/// Ordinary least-squares line `y = a + b x`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub points: usize,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let stderr = if n > 2 {
        let ssr: f64 = (0..n).map(|i| (y[i] - a - b * x[i]).powi(2)).sum();
        (ssr / (nf - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    Some(LineFit {
        intercept: a,
        slope: b,
        slope_stderr: stderr,
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_against_direct_sum() {
        for &(s, a) in &[(2.0, 1.0), (1.5, 3.0), (4.0 / 3.0, 50.0), (7.5, 200.0), (30.0, 2.0)] {
            // Brute force with an integral tail estimate.
            let n = 2_000_000usize;
            let mut sum = 0.0;
            for k in (0..n).rev() {
                sum += (a / (a + k as f64)).powf(s);
            }
            let x = n as f64;
            sum += a / (s - 1.0) * (1.0 + x / a).powf(1.0 - s) + 0.5 * (1.0 + x / a).powf(-s);
            let got = hurwitz_scaled(s, a);
            assert!(((got - sum) / sum).abs() < 1e-10, "s={s} a={a}: {got} vs {sum}");
        }
    }

    #[test]
    fn zeta_two() {
        assert!((hurwitz_scaled(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn stirling_form_matches_direct() {
        for &x in &[20.5f64, 37.0, 1000.25, 123456.7] {
            let k = x.floor() as u64;
            let mut s = 0.0;
            for i in 1..=k {
                s += x.ln() - (i as f64).ln();
            }
            let got = log_power_minus_log_factorial(x);
            assert!((got - s).abs() < 1e-9 * s.abs().max(1.0), "{x}: {got} {s}");
        }
    }

    #[test]
    fn compensated_and_pairwise() {
        let mut c = CompensatedSum::default();
        for x in [1e16, 1.0, -1e16] {
            c.add(x);
        }
        assert_eq!(c.value(), 1.0);
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }

    #[test]
    fn line_fit_exact() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let f = fit_line(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15);
        assert!(f.slope_stderr < 1e-12);
    }
}
