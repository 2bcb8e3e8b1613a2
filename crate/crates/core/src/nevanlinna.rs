//! Counting functions, proximity functions, the characteristic `T(r, f)`
//! and order and deficiency estimators. Radii are always passed as `log r`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, NevlabError, Result};
use crate::logdomain::{lc_add, log_abs_one_minus, wrap_phase, LogComplex};
use crate::products::{CanonicalProduct, Evaluator};
use crate::sequences::{SequenceKind, ZeroSequence};
use crate::special::{fit_line, log_power_minus_log_factorial, pairwise_sum, LineFit};

/// Value whose proximity or counting function is measured.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum Target {
    Zero,
    Infinity,
    Value { re: f64, im: f64 },
}

impl Target {
    fn finite(self) -> Option<Complex64> {
        match self {
            Target::Zero => Some(Complex64::new(0.0, 0.0)),
            Target::Infinity => None,
            Target::Value { re, im } => Some(Complex64::new(re, im)),
        }
    }
}

/// Walks the circles of an Anderson-Clunie product as `(log b, mult)`,
/// continuing the recurrence in real arithmetic past the stored circles.
fn ac_circles_below(seq: &ZeroSequence, log_r: f64, mut visit: impl FnMut(f64, f64)) {
    let params = seq.ac_params().unwrap();
    let mut total = 0.0;
    for c in &params.circles {
        if !(c.log_b < log_r) {
            return;
        }
        let m = c.mult.as_f64();
        visit(c.log_b, m);
        total += m;
    }
    loop {
        let log_b = total.powf(params.gamma);
        if !(log_b < log_r) {
            return;
        }
        let m = log_b.powf(params.rho - 1.0).floor();
        visit(log_b, m);
        total += m;
    }
}

/// Visits `(log|z_n|, multiplicity)` for every zero with `log|z_n| < log_r`
/// of the kinds without a closed form.
fn points_below(seq: &ZeroSequence, log_r: f64, mut visit: impl FnMut(f64, f64)) {
    match &seq.kind {
        SequenceKind::Bank { .. } | SequenceKind::PairedGeometric { .. } => {
            let mut n = 1usize;
            while (n as f64) * LN_2 < log_r {
                visit(n as f64 * LN_2, 1.0);
                let w = seq.point(2 * n).log_mag;
                if w < log_r {
                    visit(w, 1.0);
                }
                n += 1;
            }
        }
        SequenceKind::ExplicitList(v) => {
            for z in v.iter() {
                let l = z.point().log_mag;
                if l < log_r {
                    visit(l, z.multiplicity as f64);
                }
            }
        }
        SequenceKind::AndersonClunie(_) => ac_circles_below(seq, log_r, visit),
        _ => unreachable!(),
    }
}

/// `n(r)`, the number of zeros in `|z| < r`.
pub fn count_zeros(seq: &ZeroSequence, log_r: f64) -> f64 {
    match &seq.kind {
        SequenceKind::Lindelof { rho } => {
            // k^(1/rho) < r  <=>  k < r^rho
            let x = (rho * log_r).exp();
            if x >= 9.0e15 {
                x
            } else {
                (x.ceil() - 1.0).max(0.0)
            }
        }
        SequenceKind::Geometric { log_ratio, .. } => ((log_r / log_ratio).ceil() - 1.0).max(0.0),
        _ => {
            let mut n = 0.0;
            points_below(seq, log_r, |_, m| n += m);
            n
        }
    }
}

/// `N(r, 1/f) = sum_{|z_n| < r} log(r / |z_n|)`, without quadrature.
pub fn integrated_counting(seq: &ZeroSequence, log_r: f64) -> f64 {
    match &seq.kind {
        SequenceKind::Lindelof { rho } => {
            // K log r - (1/rho) log K!  with K = floor(r^rho)
            log_power_minus_log_factorial((rho * log_r).exp()) / rho
        }
        SequenceKind::Geometric { log_ratio, .. } => {
            let k = count_zeros(seq, log_r);
            k * log_r - log_ratio * k * (k + 1.0) / 2.0
        }
        _ => {
            let mut terms = Vec::new();
            points_below(seq, log_r, |l, m| terms.push(m * (log_r - l)));
            pairwise_sum(&terms)
        }
    }
}

/// `log n(r) / log log r`, the single-radius logarithmic counting ratio.
pub fn log_counting_ratio(seq: &ZeroSequence, log_r: f64) -> f64 {
    count_zeros(seq, log_r).ln() / log_r.ln()
}

/// Trapezoid-doubling settings for circle averages.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct QuadOptions {
    /// Starting number of nodes; a power of two, at least 64.
    pub n_theta: usize,
    /// Largest node count tried before giving up.
    pub max_theta: usize,
    /// Doubling stops once successive values differ by less than
    /// `max(1e-8, rel_tol |value|)`.
    pub rel_tol: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            n_theta: 64,
            max_theta: 1 << 18,
            rel_tol: 1e-6,
        }
    }
}

impl QuadOptions {
    pub fn with_n_theta(n_theta: usize) -> Self {
        QuadOptions {
            n_theta,
            ..Self::default()
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n_theta < 64 || !self.n_theta.is_power_of_two() {
            return domain("n_theta must be a power of two >= 64");
        }
        if !(self.rel_tol > 0.0) {
            return domain("rel_tol must be positive");
        }
        Ok(())
    }
}

/// Circle averages of `u^+` and `u^-` for `u(theta) = log|g(r e^(i theta))|`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CircleAverages {
    /// `(1/2pi) int max(0, u)`.
    pub plus: f64,
    /// `(1/2pi) int max(0, -u)`.
    pub minus: f64,
    pub n_theta: usize,
    pub converged: bool,
    /// Some node fell on a zero and was moved by half a step.
    pub perturbed: bool,
}

impl CircleAverages {
    /// `(1/2pi) int u`, free of the kink corrections.
    pub fn mean(&self) -> f64 {
        self.plus - self.minus
    }
}

/// Averages over the nodes `u`, integrating the positive and negative parts
/// of the piecewise-linear interpolant and adding the `h^2/12 |u'|` kink
/// term that the interpolant misses at each sign change.
fn averages_from_nodes(u: &[f64]) -> (f64, f64) {
    let n = u.len();
    let h = 2.0 * PI / n as f64;
    let pieces: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let (a, b) = (u[i], u[(i + 1) % n]);
            if a >= 0.0 && b >= 0.0 {
                (0.5 * h * (a + b), 0.0)
            } else if a <= 0.0 && b <= 0.0 {
                (0.0, -0.5 * h * (a + b))
            } else {
                let d = (a - b).abs();
                let (p, m) = if a > 0.0 { (a, -b) } else { (b, -a) };
                let kink = h * d / 12.0;
                (0.5 * h * p * p / d + kink, 0.5 * h * m * m / d + kink)
            }
        })
        .collect();
    let plus: Vec<f64> = pieces.iter().map(|p| p.0).collect();
    let minus: Vec<f64> = pieces.iter().map(|p| p.1).collect();
    let s = 1.0 / (2.0 * PI);
    (s * pairwise_sum(&plus), s * pairwise_sum(&minus))
}

/// Trapezoid doubling for the circle averages of `u^+` and `u^-`, where
/// `u(theta)` returns `log|g|` on the circle. `want_minus` includes `u^-` in
/// the convergence test.
pub fn circle_averages(
    u: &(dyn Fn(f64) -> f64 + Sync),
    opts: &QuadOptions,
    want_minus: bool,
) -> Result<CircleAverages> {
    let pair = |t: f64| (u(t), 0.0);
    subtracted_averages(&pair, 0.0, opts, want_minus)
}

/// [`circle_averages`] for `u(theta) = (log|g|, s)` where `s` holds the
/// logarithmic singularities of `log|g|` near the circle and has known mean
/// `s_mean`. `u^+` is integrated directly; `u^-` comes from `u^+` and the
/// mean of `u`, which is integrated as `s_mean + mean(log|g| - s)`.
fn subtracted_averages(
    u: &(dyn Fn(f64) -> (f64, f64) + Sync),
    s_mean: f64,
    opts: &QuadOptions,
    want_minus: bool,
) -> Result<CircleAverages> {
    opts.check()?;
    let perturbed = std::sync::atomic::AtomicBool::new(false);
    let node = |theta: f64, h: f64| -> Result<(f64, f64)> {
        let (mut v, s) = u(wrap_phase(theta));
        let mut g = v - s;
        if v == f64::NEG_INFINITY {
            perturbed.store(true, std::sync::atomic::Ordering::Relaxed);
            v = u(wrap_phase(theta + 0.5 * h)).0;
            // the smooth part barely moves over a tiny shift
            let (v2, s2) = u(wrap_phase(theta + 1e-6 * h));
            g = if s == 0.0 { v } else { v2 - s2 };
        }
        if v.is_nan() || v == f64::NEG_INFINITY || !g.is_finite() {
            return Err(NevlabError::Quadrature(format!(
                "integrand undefined at theta = {theta}"
            )));
        }
        Ok((v, g))
    };
    let summarize = |vals: &[(f64, f64)]| -> (f64, f64) {
        let uv: Vec<f64> = vals.iter().map(|p| p.0).collect();
        let gv: Vec<f64> = vals.iter().map(|p| p.1).collect();
        let (plus, _) = averages_from_nodes(&uv);
        (plus, s_mean + pairwise_sum(&gv) / vals.len() as f64)
    };
    let mut n = opts.n_theta;
    let h0 = 2.0 * PI / n as f64;
    let mut vals: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| node(i as f64 * h0, h0))
        .collect::<Result<_>>()?;
    let (mut plus, mut mean) = summarize(&vals);
    let mut converged = false;
    while 2 * n <= opts.max_theta {
        let h = PI / n as f64;
        let odd: Vec<(f64, f64)> = (0..n)
            .into_par_iter()
            .map(|i| node((2 * i + 1) as f64 * h, h))
            .collect::<Result<_>>()?;
        let mut next = Vec::with_capacity(2 * n);
        for i in 0..n {
            next.push(vals[i]);
            next.push(odd[i]);
        }
        vals = next;
        n *= 2;
        let (p, m) = summarize(&vals);
        let ok = |new: f64, old: f64| (new - old).abs() < 1e-8f64.max(opts.rel_tol * new.abs());
        let done = ok(p, plus) && (!want_minus || ok(p - m, plus - mean));
        plus = p;
        mean = m;
        if done {
            converged = true;
            break;
        }
    }
    Ok(CircleAverages {
        plus,
        minus: plus - mean,
        n_theta: n,
        converged,
        perturbed: perturbed.into_inner(),
    })
}

/// Up to two zeros on each side of `log_r`, for kinds whose points are
/// simple and sorted by modulus.
fn nearby_zeros(seq: &ZeroSequence, log_r: f64) -> Vec<LogComplex> {
    match seq.kind {
        SequenceKind::AndersonClunie(_) | SequenceKind::ExplicitList(_) => return Vec::new(),
        _ => {}
    }
    let n = seq.addressable();
    let k = seq.first_above(log_r);
    (k.saturating_sub(2).max(1)..(k + 2).min(n.saturating_add(1)))
        .map(|j| seq.point(j))
        .collect()
}

/// `log|f(z) - c|`, or `log|f(z)|` for the infinite target.
fn log_distance(f: &dyn Evaluator, z: LogComplex, c: Option<Complex64>) -> f64 {
    match c {
        None => f.log_abs(z),
        Some(c) if c.norm() == 0.0 => f.log_abs(z),
        Some(c) => lc_add(f.eval(z), -LogComplex::from_complex(c)).log_mag,
    }
}

/// Proximity `m(r, f, c)` with its quadrature record.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Proximity {
    pub value: f64,
    pub n_theta: usize,
    pub converged: bool,
    pub perturbed: bool,
}

/// `m(r, f)` for `c = inf`, else `m(r, 1/(f - c))`.
pub fn proximity(f: &dyn Evaluator, log_r: f64, target: Target, opts: &QuadOptions) -> Result<Proximity> {
    let c = target.finite();
    let u = |t: f64| log_distance(f, LogComplex::new(log_r, t), c);
    let avg = circle_averages(&u, opts, c.is_some())?;
    Ok(Proximity {
        value: if c.is_some() { avg.minus } else { avg.plus },
        n_theta: avg.n_theta,
        converged: avg.converged,
        perturbed: avg.perturbed,
    })
}

/// Nevanlinna data of a canonical product at one radius.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CharacteristicSample {
    pub log_r: f64,
    pub n_count: f64,
    #[serde(rename = "N_zeros")]
    pub n_zeros: f64,
    pub m_inf: f64,
    /// `m(r, 1/f)`, when requested.
    pub m_zero: Option<f64>,
    #[serde(rename = "T")]
    pub t: f64,
    /// `m(r, f) - m(r, 1/f) - N(r, 1/f)`, zero by Jensen's formula.
    pub jensen_residual: Option<f64>,
    pub n_theta: usize,
    pub converged: bool,
    pub perturbed: bool,
}

/// Samples `n`, `N`, `m` and `T = m(r, f)` at `log_r`; `with_zero` adds
/// `m(r, 1/f)` and the Jensen residual.
pub fn characteristic_sample(
    f: &CanonicalProduct,
    log_r: f64,
    opts: &QuadOptions,
    with_zero: bool,
) -> Result<CharacteristicSample> {
    let near = if with_zero {
        nearby_zeros(&f.zeros, log_r)
    } else {
        Vec::new()
    };
    let s_mean: f64 = near.iter().map(|z| (log_r - z.log_mag).max(0.0)).sum();
    let u = |t: f64| {
        let s = near
            .iter()
            .map(|z| log_abs_one_minus(LogComplex::new(log_r - z.log_mag, t - z.phase)))
            .sum::<f64>();
        (f.log_abs(LogComplex::new(log_r, t)), s)
    };
    let avg = subtracted_averages(&u, s_mean, opts, with_zero)?;
    let n_zeros = integrated_counting(&f.zeros, log_r);
    Ok(CharacteristicSample {
        log_r,
        n_count: count_zeros(&f.zeros, log_r),
        n_zeros,
        m_inf: avg.plus,
        m_zero: with_zero.then_some(avg.minus),
        t: avg.plus,
        jensen_residual: with_zero.then(|| avg.mean() - n_zeros),
        n_theta: avg.n_theta,
        converged: avg.converged,
        perturbed: avg.perturbed,
    })
}

/// Direction of the `N/T` series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Decreasing,
    Increasing,
    Constant,
    Mixed,
}

fn trend_of(v: &[f64]) -> Trend {
    let mut up = false;
    let mut down = false;
    for w in v.windows(2) {
        if w[1] > w[0] {
            up = true;
        } else if w[1] < w[0] {
            down = true;
        }
    }
    match (up, down) {
        (false, false) => Trend::Constant,
        (false, true) => Trend::Decreasing,
        (true, false) => Trend::Increasing,
        (true, true) => Trend::Mixed,
    }
}

/// One grid point of a deficiency scan.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct DeficiencyPoint {
    pub log_r: f64,
    pub n_count: f64,
    #[serde(rename = "N")]
    pub n_target: f64,
    pub m_inf: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// `None` when `T <= 0` and the point is excluded.
    pub ratio: Option<f64>,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DeficiencyScan {
    pub target: Target,
    pub points: Vec<DeficiencyPoint>,
    /// Number of trailing usable points used for the bounds.
    pub tail: usize,
    /// `1 - sup N/T` over the tail.
    pub delta_n_lower: f64,
    /// `1 - inf N/T` over the tail.
    pub delta_v_lower: f64,
    /// Direction of `N/T` over all usable points.
    pub trend: Trend,
    pub tail_trend: Trend,
    pub excluded: Vec<usize>,
}

/// `N/T` over a grid of radii with tail bounds on both deficiencies.
///
/// For `c = 0` the counting function is exact. For another finite `c`,
/// `N(r, 1/(f - c))` comes from Jensen's formula for `f - c` (which needs
/// `c != 1 = f(0)`); for `c = inf`, `N = 0`. The tail defaults to the last
/// third of the usable points.
pub fn deficiency_scan(
    f: &CanonicalProduct,
    target: Target,
    log_r_grid: &[f64],
    tail: Option<usize>,
    opts: &QuadOptions,
) -> Result<DeficiencyScan> {
    deficiency_scan_with(f, Some(&f.zeros), target, log_r_grid, tail, opts)
}

/// [`deficiency_scan`] for any `f` with `f(0) = 1` whose zeros are `zeros`
/// (`None` for a zero-free function).
pub fn deficiency_scan_with(
    f: &dyn Evaluator,
    zeros: Option<&ZeroSequence>,
    target: Target,
    log_r_grid: &[f64],
    tail: Option<usize>,
    opts: &QuadOptions,
) -> Result<DeficiencyScan> {
    if log_r_grid.len() < 3 {
        return domain("deficiency scan needs at least 3 radii");
    }
    if log_r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("deficiency grid must be strictly increasing");
    }
    let c = target.finite().filter(|c| c.norm() != 0.0);
    if let Some(c) = c {
        if c == Complex64::new(1.0, 0.0) {
            return domain("target 1 equals f(0); Jensen's formula for f - 1 is undefined");
        }
    }
    let mut points = Vec::with_capacity(log_r_grid.len());
    for &log_r in log_r_grid {
        let p = match (target, c) {
            (Target::Zero, _) => {
                let m = proximity(f, log_r, Target::Infinity, opts)?;
                DeficiencyPoint {
                    log_r,
                    n_count: zeros.map_or(0.0, |z| count_zeros(z, log_r)),
                    n_target: zeros.map_or(0.0, |z| integrated_counting(z, log_r)),
                    m_inf: m.value,
                    t: m.value,
                    ratio: None,
                    converged: m.converged,
                }
            }
            (Target::Infinity, _) => {
                let m = proximity(f, log_r, Target::Infinity, opts)?;
                DeficiencyPoint {
                    log_r,
                    n_count: 0.0,
                    n_target: 0.0,
                    m_inf: m.value,
                    t: m.value,
                    ratio: None,
                    converged: m.converged,
                }
            }
            (_, Some(c)) => {
                let m = proximity(f, log_r, Target::Infinity, opts)?;
                let u = |t: f64| log_distance(f, LogComplex::new(log_r, t), Some(c));
                let avg = circle_averages(&u, opts, true)?;
                let n_target = avg.mean() - (Complex64::new(1.0, 0.0) - c).norm().ln();
                DeficiencyPoint {
                    log_r,
                    n_count: f64::NAN,
                    n_target,
                    m_inf: m.value,
                    t: m.value,
                    ratio: None,
                    converged: m.converged && avg.converged,
                }
            }
            (Target::Value { .. }, None) => unreachable!(),
        };
        points.push(p);
    }
    let mut excluded = Vec::new();
    let mut usable = Vec::new();
    for (i, p) in points.iter_mut().enumerate() {
        if p.t > 0.0 {
            let r = p.n_target / p.t;
            p.ratio = Some(r);
            usable.push(r);
        } else {
            excluded.push(i);
        }
    }
    if usable.is_empty() {
        return Err(NevlabError::Estimation("T <= 0 at every radius".into()));
    }
    let tail = tail.unwrap_or(usable.len().div_ceil(3)).clamp(1, usable.len());
    let window = &usable[usable.len() - tail..];
    let sup = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let inf = window.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(DeficiencyScan {
        target,
        tail,
        delta_n_lower: 1.0 - sup,
        delta_v_lower: 1.0 - inf,
        trend: trend_of(&usable),
        tail_trend: trend_of(window),
        points,
        excluded,
    })
}

/// `delta_N(0, L_rho)` from the classical piecewise formula.
pub fn delta_n_lindelof_closed_form(rho: f64) -> f64 {
    if !(rho > 0.0) {
        return f64::NAN;
    }
    let q = rho.ceil() - 1.0;
    let s = (PI * rho).sin().abs();
    if rho <= q + 0.5 {
        if q == 0.0 {
            // 1 - s/s, including the limit s -> 0 never reached for rho > 0.
            return 0.0;
        }
        1.0 - s / (q + s)
    } else {
        1.0 - s / (q + 1.0)
    }
}

/// A growth exponent fitted by least squares.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct OrderEstimate {
    pub estimate: f64,
    pub fit: LineFit,
    /// Points excluded because the fitted quantity was not positive.
    pub excluded: usize,
}

fn fit_exponent(x: &[f64], y: &[f64], shift: f64) -> Result<OrderEstimate> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&a, &b) in x.iter().zip(y) {
        if b > 0.0 && b.is_finite() && a.is_finite() {
            xs.push(a);
            ys.push(b.ln());
        }
    }
    if xs.len() < 3 {
        return Err(NevlabError::Estimation(format!(
            "{} usable points, need at least 3",
            xs.len()
        )));
    }
    let fit = fit_line(&xs, &ys).ok_or_else(|| NevlabError::Estimation("degenerate grid".into()))?;
    Ok(OrderEstimate {
        estimate: fit.slope + shift,
        fit,
        excluded: x.len() - xs.len(),
    })
}

/// Slope of `log T` against `log r`.
pub fn order_fit(log_r: &[f64], t: &[f64]) -> Result<OrderEstimate> {
    fit_exponent(log_r, t, 0.0)
}

/// Slope of `log T` against `log log r`; radii with `log r <= 0` are
/// excluded.
pub fn log_order_fit(log_r: &[f64], t: &[f64]) -> Result<OrderEstimate> {
    let x: Vec<f64> = log_r.iter().map(|&l| if l > 0.0 { l.ln() } else { f64::NAN }).collect();
    fit_exponent(&x, t, 0.0)
}

fn characteristic_values(f: &dyn Evaluator, log_r_grid: &[f64], opts: &QuadOptions) -> Result<Vec<f64>> {
    log_r_grid
        .iter()
        .map(|&l| proximity(f, l, Target::Infinity, opts).map(|p| p.value))
        .collect()
}

fn decades(log_r_grid: &[f64]) -> f64 {
    let lo = log_r_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = log_r_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (hi - lo) / std::f64::consts::LN_10
}

/// Order estimate from `T(r, f) = m(r, f)` over a grid spanning at least
/// three decades of `r`.
pub fn order_estimate(f: &dyn Evaluator, log_r_grid: &[f64], opts: &QuadOptions) -> Result<OrderEstimate> {
    if decades(log_r_grid) < 3.0 - 1e-9 {
        return domain("order estimation needs a grid spanning three decades");
    }
    let t = characteristic_values(f, log_r_grid, opts)?;
    order_fit(log_r_grid, &t)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LogOrderEstimate {
    /// Slope of `log T` against `log log r`.
    pub from_characteristic: OrderEstimate,
    /// Slope of `log n` against `log log r`, plus one.
    pub from_counting: Option<OrderEstimate>,
}

/// Logarithmic order from `T`, and from the zeros when `seq` is given.
pub fn log_order_estimate(
    f: &dyn Evaluator,
    seq: Option<&ZeroSequence>,
    log_r_grid: &[f64],
    opts: &QuadOptions,
) -> Result<LogOrderEstimate> {
    let t = characteristic_values(f, log_r_grid, opts)?;
    let from_characteristic = log_order_fit(log_r_grid, &t)?;
    let from_counting = match seq {
        Some(s) => Some(counting_log_order(s, log_r_grid)?),
        None => None,
    };
    Ok(LogOrderEstimate {
        from_characteristic,
        from_counting,
    })
}

/// `lambda_log + 1` from the slope of `log n(r)` against `log log r`.
pub fn counting_log_order(seq: &ZeroSequence, log_r_grid: &[f64]) -> Result<OrderEstimate> {
    let x: Vec<f64> = log_r_grid
        .iter()
        .map(|&l| if l > 0.0 { l.ln() } else { f64::NAN })
        .collect();
    let n: Vec<f64> = log_r_grid.iter().map(|&l| count_zeros(seq, l)).collect();
    fit_exponent(&x, &n, 1.0)
}

/// Exponent of convergence from the slope of `log n(r)` against `log r`.
pub fn convergence_exponent_estimate(seq: &ZeroSequence, log_r_grid: &[f64]) -> Result<OrderEstimate> {
    let n: Vec<f64> = log_r_grid.iter().map(|&l| count_zeros(seq, l)).collect();
    fit_exponent(log_r_grid, &n, 0.0)
}

/// `count` radii log-spaced in `r` between `log_start` and `log_stop`.
pub fn log_grid(log_start: f64, log_stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![log_start],
        _ => (0..count)
            .map(|i| log_start + (log_stop - log_start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests;
