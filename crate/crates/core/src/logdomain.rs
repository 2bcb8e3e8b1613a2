//! Complex numbers in log-polar form.
//!
//! A [`LogComplex`] stores `log|z|` and `arg z`, so products over very many
//! factors and radii far beyond the range of `f64` stay representable.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Complex scalar `exp(log_mag) * exp(i * phase)`.
///
/// Exact zero is encoded as `log_mag = -inf` with `phase = 0`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_phase(phase: f64) -> f64 {
    if phase > -PI && phase <= PI {
        return phase;
    }
    if !phase.is_finite() {
        return 0.0;
    }
    let mut t = phase - TAU * (phase / TAU).round();
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

/// `(cos t, sin t)` with exact values at multiples of `pi/2`.
pub fn cis_exact(t: f64) -> (f64, f64) {
    let w = wrap_phase(t);
    if w == 0.0 {
        (1.0, 0.0)
    } else if w == PI {
        (-1.0, 0.0)
    } else if w == FRAC_PI_2 {
        (0.0, 1.0)
    } else if w == -FRAC_PI_2 {
        (0.0, -1.0)
    } else {
        let (s, c) = w.sin_cos();
        (c, s)
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    /// Builds a value, normalizing the phase (and the zero sentinel).
    pub fn new(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogComplex {
                log_mag,
                phase: wrap_phase(phase),
            }
        }
    }

    /// Builds a value without reducing the phase. Call [`Self::normalized`]
    /// before handing it out.
    pub fn raw(log_mag: f64, phase: f64) -> Self {
        LogComplex { log_mag, phase }
    }

    pub fn normalized(self) -> Self {
        Self::new(self.log_mag, self.phase)
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            LogComplex::new(x.ln(), 0.0)
        } else {
            LogComplex::new((-x).ln(), PI)
        }
    }

    /// Positive real number given by its logarithm.
    pub fn from_log(log_mag: f64) -> Self {
        LogComplex::new(log_mag, 0.0)
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        LogComplex::new(z.re.hypot(z.im).ln(), z.im.atan2(z.re))
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.log_mag.exp();
        let (c, s) = cis_exact(self.phase);
        Complex64::new(m * c, m * s)
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.log_mag.is_finite() && self.phase.is_finite()
    }

    pub fn conj(self) -> Self {
        if self.is_zero() {
            self
        } else {
            LogComplex::new(self.log_mag, -self.phase)
        }
    }

    /// Reciprocal; the reciprocal of zero is reported as `+inf` modulus.
    pub fn recip(self) -> Self {
        LogComplex::new(-self.log_mag, -self.phase)
    }

    /// Integer power.
    pub fn powi(self, n: i64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return if n > 0 { Self::ZERO } else { self.recip() };
        }
        LogComplex::new(self.log_mag * n as f64, self.phase * n as f64)
    }

    /// Principal complex logarithm as an ordinary complex number.
    pub fn ln(self) -> Complex64 {
        Complex64::new(self.log_mag, self.phase)
    }

    pub fn exp_of(w: Complex64) -> Self {
        LogComplex::new(w.re, w.im)
    }
}

impl std::ops::Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        if self.is_zero() {
            self
        } else {
            LogComplex::new(self.log_mag, self.phase + PI)
        }
    }
}

impl std::ops::Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        lc_mul(self, rhs)
    }
}

impl std::ops::Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        lc_mul(self, rhs.recip())
    }
}

impl std::ops::Add for LogComplex {
    type Output = LogComplex;
    fn add(self, rhs: LogComplex) -> LogComplex {
        lc_add(self, rhs)
    }
}

impl std::ops::Sub for LogComplex {
    type Output = LogComplex;
    fn sub(self, rhs: LogComplex) -> LogComplex {
        lc_add(self, -rhs)
    }
}

/// Product in log-polar form.
pub fn lc_mul(a: LogComplex, b: LogComplex) -> LogComplex {
    if a.is_zero() || b.is_zero() {
        return LogComplex::ZERO;
    }
    LogComplex::new(a.log_mag + b.log_mag, a.phase + b.phase)
}

/// Sum in log-polar form, factoring out the operand of larger modulus.
pub fn lc_add(a: LogComplex, b: LogComplex) -> LogComplex {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let (big, small) = if a.log_mag >= b.log_mag { (a, b) } else { (b, a) };
    if big.log_mag == f64::INFINITY {
        return big.normalized();
    }
    let d = small.log_mag - big.log_mag;
    let (c, s) = cis_exact(small.phase - big.phase);
    let m = d.exp();
    let (x, y) = (m * c, m * s);
    if x == -1.0 && y == 0.0 {
        return LogComplex::ZERO;
    }
    // 1 + ratio, with log|1 + ratio| from the regime-aware kernel.
    let la = log_abs_one_minus(LogComplex::new(d, small.phase - big.phase + PI));
    if la == f64::NEG_INFINITY {
        return LogComplex::ZERO;
    }
    let ph = y.atan2(1.0 + x);
    LogComplex::new(big.log_mag + la, big.phase + ph)
}

/// `log|1 - w|`, accurate in every magnitude regime of `w`.
pub fn log_abs_one_minus(w: LogComplex) -> f64 {
    if w.is_zero() {
        return 0.0;
    }
    let l = w.log_mag;
    if l >= 1.0 {
        if l == f64::INFINITY {
            return f64::INFINITY;
        }
        return l + small_branch(-l, -w.phase);
    }
    if l <= -1.0 {
        return small_branch(l, w.phase);
    }
    // |1 - w|^2 = a^2 + y^2 with a = 1 - Re w computed without cancellation
    // in its angular part.
    let r = l.exp();
    let h = (0.5 * w.phase).sin();
    let a = 2.0 * r * h * h - l.exp_m1();
    let y = r * w.phase.sin();
    let q = a * a + y * y;
    if q == 0.0 {
        return f64::NEG_INFINITY;
    }
    0.5 * q.ln()
}

/// `log|1 - w|` for `|w| <= 1/e` via `0.5 * ln_1p(r(r - 2 cos t))`.
fn small_branch(l: f64, phase: f64) -> f64 {
    let r = l.exp();
    if r == 0.0 {
        return 0.0;
    }
    let c = phase.cos();
    let u = r.mul_add(r, -2.0 * r * c);
    0.5 * u.ln_1p()
}

/// Complex logarithm of `1 - w` as `(log|1 - w|, arg(1 - w))`.
///
/// The argument is continuous in `w` away from the ray `w > 1`; for
/// `|w| >= e` it is `arg(-w) + arg(1 - 1/w)` without reduction.
pub fn ln_one_minus(w: LogComplex) -> (f64, f64) {
    if w.is_zero() {
        return (0.0, 0.0);
    }
    let re = log_abs_one_minus(w);
    let l = w.log_mag;
    if l >= 1.0 {
        let r = (-l).exp();
        let (c, s) = cis_exact(-w.phase);
        // 1 - 1/w
        let arg_small = (-r * s).atan2(1.0 - r * c);
        let arg_neg = wrap_phase(w.phase + PI);
        return (re, arg_neg + arg_small);
    }
    let r = l.exp();
    let (c, s) = cis_exact(w.phase);
    let h = (0.5 * w.phase).sin();
    let a = if l <= -1.0 {
        1.0 - r * c
    } else {
        2.0 * r * h * h - l.exp_m1()
    };
    // On the ray w > 1 take the upper side, matching the l >= 1 branch.
    let y = if s == 0.0 { 0.0 } else { -r * s };
    (re, y.atan2(a))
}
