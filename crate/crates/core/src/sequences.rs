//! Zero sequences of the entire functions under study.
//!
//! Every sequence is enumerable by a 1-based index in nondecreasing modulus.
//! Near-coincident pairs (the Bank and paired geometric examples) expose
//! exact logarithms of `1 - z_k/z_n` for partners, so their separation can
//! be measured even when the gap underflows.

use crate::error::{domain, NevlabError, Result};
use crate::logdomain::{ln_one_minus, LogComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_4, LN_2, PI};
use std::path::Path;
use std::sync::{Arc, OnceLock};

/// Circles with more points than this are never summed point by point.
pub const DIRECT_CAP: u128 = 1_000_000;

/// Rule choosing the Bank example gaps `eps_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum BankCap {
    /// `eps_n = min(2^-60, exp(-exp(2^n))) / 2`.
    Default,
    /// `eps_n = exp(-exp(2^n)) / 2`.
    ExpExp,
}

/// Gap rule of the paired geometric sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum PairRule {
    /// `gamma_n = min(1/2, 2^n exp(-2^(nq)))`.
    Ex1,
    /// `eps_n = min(1/2, 2^n exp(-(n log 2)^q))`.
    Exa2,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum Multiplicity {
    Exact(u128),
    /// Too large for exact storage; natural log of the value.
    Real {
        ln: f64,
    },
}

impl Multiplicity {
    pub fn as_f64(self) -> f64 {
        match self {
            Multiplicity::Exact(v) => v as f64,
            Multiplicity::Real { ln } => ln.exp(),
        }
    }

    pub fn ln(self) -> f64 {
        match self {
            Multiplicity::Exact(v) => (v as f64).ln(),
            Multiplicity::Real { ln } => ln,
        }
    }

    pub fn exact(self) -> Option<u128> {
        match self {
            Multiplicity::Exact(v) => Some(v),
            Multiplicity::Real { .. } => None,
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct AcCircle {
    /// `log b_n`; may be `+inf` once the recurrence leaves the real range.
    pub log_b: f64,
    /// `log b_n` as an integer when the recurrence keeps it exact.
    pub log_b_exact: Option<u128>,
    pub mult: Multiplicity,
}

/// Per-circle lookup tables used by the hot loops.
#[derive(Debug)]
pub struct CircleTables {
    /// `(cos phi_j, sin phi_j)` in ascending angle order.
    pub cis: Vec<(f64, f64)>,
    /// `prefix[d] = sum_{i=1..d} log(2 sin(i * gap / 2))`.
    pub chord_prefix: Vec<f64>,
}

/// Radii and multiplicities of the modified Anderson-Clunie product.
#[derive(Debug, serde::Serialize)]
pub struct ACParameters {
    pub rho: f64,
    pub beta: f64,
    pub gamma: f64,
    pub circles: Vec<AcCircle>,
    /// Number of points on circles `1..=i` (exact circles only).
    pub cumulative: Vec<u128>,
    #[serde(skip)]
    tables: Vec<OnceLock<CircleTables>>,
}

/// Approximates `x` by `a/b` with `b <= 12`.
fn small_rational(x: f64) -> Option<(u32, u32)> {
    if x < 0.0 {
        return None;
    }
    for b in 1..=12u32 {
        let a = (x * b as f64).round();
        if (a / b as f64 - x).abs() < 1e-12 && a < 64.0 {
            return Some((a as u32, b));
        }
    }
    None
}

/// `floor(y^(1/b))` for integers.
fn iroot_floor(y: u128, b: u32) -> u128 {
    if b == 1 || y < 2 {
        return y;
    }
    let mut r = (y as f64).powf(1.0 / b as f64) as u128;
    // Fix up the float estimate.
    let pow = |r: u128| -> Option<u128> { r.checked_pow(b) };
    while r > 0 && pow(r).is_none_or(|p| p > y) {
        r -= 1;
    }
    while pow(r + 1).is_some_and(|p| p <= y) {
        r += 1;
    }
    r
}

/// `floor(x^(a/b))` for an integer `x`, when the intermediate fits.
fn exact_rational_pow_floor(x: u128, a: u32, b: u32) -> Option<u128> {
    let y = x.checked_pow(a)?;
    Some(iroot_floor(y, b))
}

/// `x^(a/b)` for an integer `x` when the result is an integer.
fn exact_rational_pow(x: u128, a: u32, b: u32) -> Option<u128> {
    let y = x.checked_pow(a)?;
    let r = iroot_floor(y, b);
    (r.checked_pow(b) == Some(y)).then_some(r)
}

impl ACParameters {
    pub fn new(rho: f64, n_max: usize) -> Result<Self> {
        if rho.is_nan() || rho <= 2.0 {
            return domain(format!("Anderson-Clunie product needs rho > 2, got {rho}"));
        }
        if n_max < 2 {
            return domain("n_max must be at least 2");
        }
        let beta = 2.0 * (rho - 1.0) / (rho - 2.0);
        let gamma = 2.0 / (rho - 2.0);
        let gamma_q = small_rational(gamma);
        let expo_q = small_rational(rho - 1.0);
        let mut circles = vec![AcCircle {
            log_b: 0.0,
            log_b_exact: Some(0),
            mult: Multiplicity::Exact(1),
        }];
        // Running sum of multiplicities, exact while possible.
        let mut sum_exact: Option<u128> = Some(1);
        let mut sum_ln = 0.0f64;
        while circles.len() < n_max {
            let log_b_exact = match (sum_exact, gamma_q) {
                (Some(s), Some((a, b))) => exact_rational_pow(s, a, b),
                _ => None,
            };
            let log_b = match log_b_exact {
                Some(v) => v as f64,
                None => (gamma * sum_ln).exp(),
            };
            let mult = match (log_b_exact, expo_q) {
                (Some(lb), Some((a, b))) => exact_rational_pow_floor(lb, a, b).map(Multiplicity::Exact),
                _ => None,
            };
            let mult = mult.unwrap_or_else(|| {
                let ln = (rho - 1.0) * log_b.ln();
                let v = ln.exp();
                // Exact only when the float floor is unambiguous.
                if v < 4.0e15 && (v - v.round()).abs() > 1e-6 {
                    Multiplicity::Exact(v.floor() as u128)
                } else if v < 4.0e15 && v.fract() == 0.0 {
                    Multiplicity::Exact(v as u128)
                } else {
                    Multiplicity::Real { ln }
                }
            });
            sum_exact = match (sum_exact, mult) {
                (Some(s), Multiplicity::Exact(c)) => s.checked_add(c),
                _ => None,
            };
            sum_ln = match sum_exact {
                Some(s) => (s as f64).ln(),
                None => {
                    let (big, small) = if sum_ln > mult.ln() {
                        (sum_ln, mult.ln())
                    } else {
                        (mult.ln(), sum_ln)
                    };
                    big + (small - big).exp().ln_1p()
                }
            };
            circles.push(AcCircle {
                log_b,
                log_b_exact,
                mult,
            });
        }
        let mut cumulative = Vec::new();
        let mut acc: u128 = 0;
        for c in &circles {
            match c.mult {
                Multiplicity::Exact(m) => match acc.checked_add(m) {
                    Some(v) => {
                        acc = v;
                        cumulative.push(acc);
                    }
                    None => break,
                },
                Multiplicity::Real { .. } => break,
            }
        }
        let tables = (0..circles.len()).map(|_| OnceLock::new()).collect();
        Ok(ACParameters {
            rho,
            beta,
            gamma,
            circles,
            cumulative,
            tables,
        })
    }

    pub fn n_max(&self) -> usize {
        self.circles.len()
    }

    /// Circle `i`, 1-based.
    pub fn circle(&self, i: usize) -> &AcCircle {
        &self.circles[i - 1]
    }

    pub fn log_b(&self) -> Vec<f64> {
        self.circles.iter().map(|c| c.log_b).collect()
    }

    pub fn mult(&self) -> Vec<Multiplicity> {
        self.circles.iter().map(|c| c.mult).collect()
    }

    /// Number of circles whose points can be addressed individually.
    pub fn addressable_circles(&self) -> usize {
        self.cumulative
            .iter()
            .zip(&self.circles)
            .take_while(|(&c, circle)| c <= (1u128 << 53) && circle.mult.exact().is_some_and(|m| m <= DIRECT_CAP))
            .count()
    }

    /// Total number of individually addressable points.
    pub fn addressable_points(&self) -> usize {
        match self.addressable_circles() {
            0 => 0,
            n => self.cumulative[n - 1] as usize,
        }
    }

    /// `(circle, position)` of the 1-based point index `k`.
    pub fn locate(&self, k: usize) -> (usize, usize) {
        let kk = k as u128;
        let i = self.cumulative.partition_point(|&c| c < kk);
        let before = if i == 0 { 0 } else { self.cumulative[i - 1] };
        (i + 1, (kk - before) as usize)
    }

    /// Lazily built angle and chord tables for circle `i` (1-based).
    pub fn tables(&self, i: usize) -> &CircleTables {
        self.tables[i - 1].get_or_init(|| {
            let m = self.circles[i - 1]
                .mult
                .exact()
                .filter(|&m| m <= DIRECT_CAP)
                .expect("tables requested for a circle beyond the direct cap") as usize;
            let cis = (1..=m)
                .map(|j| {
                    let t = ac_phase(m as u128, j as u128);
                    let (s, c) = t.sin_cos();
                    (c, s)
                })
                .collect();
            let mut chord_prefix = Vec::with_capacity(m);
            chord_prefix.push(0.0);
            if m >= 2 {
                let gap = PI / (2.0 * (m as f64 - 1.0));
                let mut acc = 0.0;
                for d in 1..m {
                    acc += (2.0 * (0.5 * d as f64 * gap).sin()).ln();
                    chord_prefix.push(acc);
                }
            }
            CircleTables { cis, chord_prefix }
        })
    }
}

/// Offset of the `j`-th angle (1-based) of `m` from `pi`.
fn ac_offset(m: u128, j: u128) -> f64 {
    if m == 1 {
        return 0.0;
    }
    let num = 2.0 * j as f64 - m as f64 - 1.0;
    FRAC_PI_4 * (num / (m as f64 - 1.0))
}

/// Normalized phase of the `j`-th point of `m` on a circle; mirrored
/// points get exactly negated phases.
pub fn ac_phase(m: u128, j: u128) -> f64 {
    let d = ac_offset(m, j);
    if d <= 0.0 {
        PI + d
    } else {
        -(PI - d)
    }
}

/// The `m` arguments in `[3pi/4, 5pi/4]`, ascending.
pub fn ac_angles(m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return domain("ac_angles needs m >= 1");
    }
    Ok((1..=m as u128).map(|j| PI + ac_offset(m as u128, j)).collect())
}

/// One entry of a user-supplied zero list.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ExplicitZero {
    pub re: f64,
    pub im: f64,
    pub multiplicity: u32,
}

impl ExplicitZero {
    pub fn point(&self) -> LogComplex {
        LogComplex::from_complex(num_complex::Complex64::new(self.re, self.im))
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub enum SequenceKind {
    Lindelof {
        rho: f64,
    },
    Bank {
        cap: BankCap,
    },
    /// Points `r^n e^(i phase)`, `n >= 1`, with `log_ratio = log r > 0`.
    Geometric {
        log_ratio: f64,
        phase: f64,
    },
    PairedGeometric {
        q: f64,
        rule: PairRule,
    },
    AndersonClunie(Arc<ACParameters>),
    ExplicitList(Arc<Vec<ExplicitZero>>),
}

/// A zero sequence with its genus.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ZeroSequence {
    pub kind: SequenceKind,
    pub genus: u32,
}

pub fn lindelof_zeros(rho: f64) -> Result<ZeroSequence> {
    if rho.is_nan() || rho <= 0.5 {
        return domain(format!("Lindelof function needs rho > 1/2, got {rho}"));
    }
    Ok(ZeroSequence {
        kind: SequenceKind::Lindelof { rho },
        genus: rho.floor() as u32,
    })
}

pub fn bank_zeros(cap: BankCap) -> ZeroSequence {
    ZeroSequence {
        kind: SequenceKind::Bank { cap },
        genus: 0,
    }
}

pub fn geometric_zeros(ratio: f64, phase: f64) -> Result<ZeroSequence> {
    if !(ratio > 1.0) {
        return domain("geometric ratio must exceed 1");
    }
    Ok(ZeroSequence {
        kind: SequenceKind::Geometric {
            log_ratio: ratio.ln(),
            phase,
        },
        genus: 0,
    })
}

pub fn paired_geometric_zeros(q: f64, rule: PairRule) -> Result<ZeroSequence> {
    if q.is_nan() || q <= 0.0 {
        return domain("paired geometric sequence needs q > 0");
    }
    Ok(ZeroSequence {
        kind: SequenceKind::PairedGeometric { q, rule },
        genus: 0,
    })
}

pub fn ac_parameters(rho: f64, n_max: usize) -> Result<ACParameters> {
    ACParameters::new(rho, n_max)
}

pub fn anderson_clunie_zeros(params: ACParameters) -> ZeroSequence {
    ZeroSequence {
        kind: SequenceKind::AndersonClunie(Arc::new(params)),
        genus: 0,
    }
}

/// Builds a finite list, sorted by modulus then argument; rejects
/// duplicates and the origin.
pub fn explicit_zeros(points: Vec<ExplicitZero>, genus: Option<u32>) -> Result<ZeroSequence> {
    let mut pts = points;
    for p in &pts {
        if p.re == 0.0 && p.im == 0.0 {
            return domain("zero lists must not contain the origin");
        }
        if !(p.re.is_finite() && p.im.is_finite()) || p.multiplicity == 0 {
            return domain("zero list entries must be finite with multiplicity >= 1");
        }
    }
    pts.sort_by(|a, b| {
        let (la, lb) = (a.point(), b.point());
        la.log_mag.total_cmp(&lb.log_mag).then(la.phase.total_cmp(&lb.phase))
    });
    for w in pts.windows(2) {
        if w[0].re == w[1].re && w[0].im == w[1].im {
            return domain(format!("duplicate zero {} {}", w[0].re, w[0].im));
        }
    }
    let genus = match genus {
        Some(g) => g,
        None => *genus_candidates(&pts).last().unwrap_or(&0),
    };
    Ok(ZeroSequence {
        kind: SequenceKind::ExplicitList(Arc::new(pts)),
        genus,
    })
}

/// Parses `re im [multiplicity]` lines with `#` comments.
pub fn parse_zero_list(text: &str) -> Result<Vec<ExplicitZero>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(NevlabError::Parse {
                line: i + 1,
                msg: format!("expected `re im [multiplicity]`, got {line:?}"),
            });
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| NevlabError::Parse {
                line: i + 1,
                msg: format!("{s:?}: {e}"),
            })
        };
        let multiplicity = match fields.get(2) {
            Some(m) => m.parse::<u32>().map_err(|e| NevlabError::Parse {
                line: i + 1,
                msg: format!("multiplicity {m:?}: {e}"),
            })?,
            None => 1,
        };
        out.push(ExplicitZero {
            re: num(fields[0])?,
            im: num(fields[1])?,
            multiplicity,
        });
    }
    Ok(out)
}

pub fn read_zero_list(path: &Path) -> Result<Vec<ExplicitZero>> {
    let text = std::fs::read_to_string(path)?;
    parse_zero_list(&text)
}

/// Genus candidates for a finite list.
///
/// A finite list has every power sum finite, so the genus cannot be read
/// off it. The heuristic fits the growth of the counting function and
/// returns `floor(lambda)`, or both `lambda - 1` and `lambda` when the fitted
/// exponent is within 0.05 of a positive integer.
pub fn genus_candidates(points: &[ExplicitZero]) -> Vec<u32> {
    let mut pts: Vec<(f64, u32)> = points.iter().map(|p| (p.point().log_mag, p.multiplicity)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut n = 0u64;
    for (i, &(l, m)) in pts.iter().enumerate() {
        n += m as u64;
        if l > 0.0 && (i + 1 == pts.len() || pts[i + 1].0 > l) {
            xs.push(l);
            ys.push((n as f64).ln());
        }
    }
    let lambda = match crate::special::fit_line(&xs, &ys) {
        Some(f) if xs.len() >= 3 && f.slope.is_finite() => f.slope.max(0.0),
        _ => 0.0,
    };
    let r = lambda.round();
    if r >= 1.0 && (lambda - r).abs() < 0.05 {
        vec![r as u32 - 1, r as u32]
    } else {
        vec![lambda.floor() as u32]
    }
}

impl ZeroSequence {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            SequenceKind::Lindelof { .. } => "lindelof",
            SequenceKind::Bank { .. } => "bank",
            SequenceKind::Geometric { .. } => "geometric",
            SequenceKind::PairedGeometric { .. } => "paired_geometric",
            SequenceKind::AndersonClunie(_) => "anderson_clunie",
            SequenceKind::ExplicitList(_) => "explicit_list",
        }
    }

    /// Number of points of a finite list; `None` for infinite sequences.
    pub fn finite_len(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::ExplicitList(v) => Some(v.len()),
            _ => None,
        }
    }

    /// Largest index with exact per-point data.
    pub fn addressable(&self) -> usize {
        match &self.kind {
            SequenceKind::AndersonClunie(p) => p.addressable_points(),
            SequenceKind::ExplicitList(v) => v.len(),
            // The Bank gaps underflow even as logarithms beyond n = 9.
            SequenceKind::Bank { .. } => 18,
            _ => usize::MAX,
        }
    }

    /// First index in `1..=addressable()` whose modulus exceeds `log_r`, or
    /// `addressable() + 1`. Assumes moduli sorted along the index.
    pub fn first_above(&self, log_r: f64) -> usize {
        let n = self.addressable();
        let modulus = |k: usize| self.point(k).log_mag;
        let mut hi = 1;
        while hi <= n && modulus(hi) <= log_r {
            hi = if hi > n / 2 { n + 1 } else { 2 * hi };
        }
        let mut lo = (hi / 2).max(1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if modulus(mid) > log_r {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    pub fn ac_params(&self) -> Option<&ACParameters> {
        match &self.kind {
            SequenceKind::AndersonClunie(p) => Some(p),
            _ => None,
        }
    }

    /// `log eps_n` of the `n`-th pair for the paired kinds.
    pub fn pair_log_gap(&self, n: u32) -> Option<f64> {
        let nf = n as f64;
        match self.kind {
            SequenceKind::Bank { cap } => {
                let ee = -(2f64.powi(n as i32)).exp();
                let base = match cap {
                    BankCap::Default => ee.min(-60.0 * LN_2),
                    BankCap::ExpExp => ee,
                };
                Some(base - LN_2)
            }
            SequenceKind::PairedGeometric { q, rule } => Some(match rule {
                PairRule::Ex1 => (-LN_2).min(nf * LN_2 - 2f64.powf(nf * q)),
                PairRule::Exa2 => (-LN_2).min(nf * LN_2 - (nf * LN_2).powf(q)),
            }),
            _ => None,
        }
    }

    /// The `k`-th point (1-based).
    pub fn point(&self, k: usize) -> LogComplex {
        debug_assert!(k >= 1);
        match &self.kind {
            SequenceKind::Lindelof { rho } => LogComplex::new((k as f64).ln() / rho, PI),
            SequenceKind::Geometric { log_ratio, phase } => LogComplex::new(k as f64 * log_ratio, *phase),
            SequenceKind::Bank { .. } | SequenceKind::PairedGeometric { .. } => {
                let n = k.div_ceil(2) as u32;
                let base = n as f64 * LN_2;
                if k % 2 == 1 {
                    LogComplex::new(base, 0.0)
                } else {
                    let g = self.pair_log_gap(n).unwrap();
                    LogComplex::new(base + (g - base).exp().ln_1p(), 0.0)
                }
            }
            SequenceKind::AndersonClunie(p) => {
                let (i, j) = p.locate(k);
                let c = p.circle(i);
                LogComplex::new(c.log_b, ac_phase(c.mult.exact().unwrap(), j as u128))
            }
            SequenceKind::ExplicitList(v) => v[k - 1].point(),
        }
    }

    pub fn multiplicity(&self, k: usize) -> u32 {
        match &self.kind {
            SequenceKind::ExplicitList(v) => v[k - 1].multiplicity,
            _ => 1,
        }
    }

    /// Exact `ln(1 - z_k / z_n)` for partners of a near-coincident pair.
    pub fn partner_ln_one_minus(&self, k: usize, n: usize) -> Option<(f64, f64)> {
        match self.kind {
            SequenceKind::Bank { .. } | SequenceKind::PairedGeometric { .. } => {
                let (pk, pn) = (k.div_ceil(2), n.div_ceil(2));
                if pk != pn || k == n {
                    return None;
                }
                let m = pk as u32;
                let g = self.pair_log_gap(m)?;
                let base = m as f64 * LN_2;
                if k % 2 == 1 {
                    // 1 - 2^m / (2^m + eps) = eps / (2^m + eps)
                    Some((g - base - (g - base).exp().ln_1p(), 0.0))
                } else {
                    // 1 - (2^m + eps) / 2^m = -eps / 2^m
                    Some((g - base, PI))
                }
            }
            _ => None,
        }
    }

    /// `ln(1 - z_k / z_n)`, exact for near-coincident partners.
    pub fn ln_one_minus_ratio(&self, k: usize, n: usize) -> (f64, f64) {
        if let Some(v) = self.partner_ln_one_minus(k, n) {
            return v;
        }
        ln_one_minus(self.point(k) / self.point(n))
    }

    pub fn exponent_of_convergence(&self) -> Option<f64> {
        match self.kind {
            SequenceKind::Lindelof { rho } => Some(rho),
            SequenceKind::Bank { .. }
            | SequenceKind::Geometric { .. }
            | SequenceKind::PairedGeometric { .. }
            | SequenceKind::AndersonClunie(_) => Some(0.0),
            SequenceKind::ExplicitList(_) => None,
        }
    }
}

/// Outcome of one inequality family in [`check_power_inequalities`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct InequalityReport {
    pub samples: usize,
    pub violations_k_n: usize,
    pub violations_a_b: usize,
}

impl InequalityReport {
    pub fn violations(&self) -> usize {
        self.violations_k_n + self.violations_a_b
    }
}

/// Checks `alpha (k-n) x^(alpha-1)` bounds on `k^alpha - n^alpha` and the
/// analogous bounds on `B^gamma - A^gamma` for random arguments.
pub fn check_power_inequalities(samples: usize, seed: u64) -> InequalityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InequalityReport {
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let n: u64 = rng.gen_range(1..1000);
        let k: u64 = n + rng.gen_range(1..1000);
        let alpha: f64 = (rng.gen_range(-3.0f64..3.0)).exp();
        if !power_bounds_hold(k as f64, n as f64, alpha) {
            report.violations_k_n += 1;
        }
        let a: f64 = rng.gen_range(-5.0f64..5.0).exp();
        let b: f64 = a * (1.0 + rng.gen_range(1e-6f64..10.0));
        let g: f64 = (rng.gen_range(-3.0f64..3.0)).exp();
        if !power_bounds_hold(b, a, g) {
            report.violations_a_b += 1;
        }
    }
    report
}

/// `e(hi - lo) min(lo, hi)^(e-1) <= hi^e - lo^e <= e(hi - lo) max(lo, hi)^(e-1)`
/// with the roles of `lo, hi` swapped for `e < 1`; 4-ulp slack on each side.
pub fn power_bounds_hold(hi: f64, lo: f64, e: f64) -> bool {
    let mid = hi.powf(e) - lo.powf(e);
    let (a, b) = (e * (hi - lo) * lo.powf(e - 1.0), e * (hi - lo) * hi.powf(e - 1.0));
    let (lower, upper) = if e <= 1.0 { (b, a) } else { (a, b) };
    let slack = 4.0 * f64::EPSILON * (mid.abs() + hi.powf(e).abs() + lo.powf(e).abs());
    lower <= mid + slack && mid <= upper + slack
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lindelof_points() {
        let s = lindelof_zeros(0.75).unwrap();
        assert_eq!(s.genus, 0);
        let p = s.point(1).to_complex();
        assert!((p.re + 1.0).abs() < 1e-15 && p.im.abs() < 1e-15);
        let s = lindelof_zeros(2.0).unwrap();
        assert_eq!(s.genus, 2);
        assert!((s.point(9).to_complex().re + 3.0).abs() < 1e-14);
        let s = lindelof_zeros(1.0).unwrap();
        assert_eq!(s.genus, 1);
        assert!((s.point(4).to_complex().re + 4.0).abs() < 1e-14);
        assert!(lindelof_zeros(0.5).is_err());
    }

    #[test]
    fn bank_points() {
        let s = bank_zeros(BankCap::Default);
        assert_eq!(s.genus, 0);
        assert_eq!(s.exponent_of_convergence(), Some(0.0));
        assert!(s.pair_log_gap(1).unwrap() <= -std::f64::consts::E.powi(2));
        assert_eq!(s.point(1).to_complex().re, 2.0);
        assert_eq!(s.point(3).to_complex().re, 4.0);
        // eps_n < exp(-exp(2^n)); the halving is resolvable in the stored
        // logarithm while exp(2^n) is small.
        for n in 1..=9 {
            let g = s.pair_log_gap(n).unwrap();
            let bound = -(2f64.powi(n as i32)).exp();
            assert!(g <= bound);
            if n <= 4 {
                assert!(g < bound);
            }
        }
    }

    #[test]
    fn exa2_gap_value() {
        let s = paired_geometric_zeros(3.0, PairRule::Exa2).unwrap();
        let eps = s.pair_log_gap(2).unwrap().exp();
        let want = 4.0 * (-(2.0 * LN_2).powi(3)).exp();
        assert!((eps - want).abs() < 1e-14);
        // 4 exp(-2.66453...) = 0.278621
        assert!((eps - 0.278621).abs() < 1e-6);
        assert!((s.point(4).to_complex().re - 4.278621).abs() < 1e-6);
    }

    #[test]
    fn paired_interlacing_and_ratio() {
        for rule in [PairRule::Ex1, PairRule::Exa2] {
            for q in [0.5, 1.0, 3.0] {
                let s = paired_geometric_zeros(q, rule).unwrap();
                for n in 1..=50usize {
                    let z = s.point(2 * n - 1).log_mag;
                    let w = s.point(2 * n).log_mag;
                    let znext = s.point(2 * n + 1).log_mag;
                    // The gap may sit below the resolution of log|w|; the
                    // exact gap is still positive.
                    assert!(z <= w && w < znext);
                    assert!(s.pair_log_gap(n as u32).unwrap() > f64::NEG_INFINITY);
                    assert!(w <= z + (4.0f64 / 3.0).ln());
                }
            }
        }
    }

    #[test]
    fn ac_parameters_rho3() {
        let p = ac_parameters(3.0, 5).unwrap();
        assert_eq!(p.beta, 4.0);
        assert_eq!(p.gamma, 2.0);
        assert_eq!(p.log_b()[..4], [0.0, 1.0, 4.0, 324.0]);
        let m: Vec<u128> = p.mult().iter().map(|m| m.exact().unwrap()).collect();
        assert_eq!(m[..4], [1, 1, 16, 104976]);
        assert_eq!(p.circle(5).log_b_exact, Some(11_023_740_036));
        assert_eq!(m[4], 11_023_740_036u128 * 11_023_740_036u128);
        assert_eq!(m[2], 2f64.powf(p.beta).floor() as u128);
    }

    #[test]
    fn ac_parameters_growth_bounds() {
        for rho in [2.5, 3.0, 4.0] {
            let p = ac_parameters(rho, 7).unwrap();
            let ms = p.mult();
            for w in ms.windows(2) {
                assert!(w[1].ln() >= w[0].ln());
            }
            for n in 5..=p.n_max() {
                let l = ms[n - 1].ln();
                if !l.is_finite() {
                    continue;
                }
                assert!(
                    p.beta.powi(n as i32 - 3) * 4f64.ln() <= l * (1.0 + 1e-12),
                    "rho {rho} n {n}"
                );
                assert!(l <= (2.0 * p.beta).powi(n as i32 - 2) * LN_2, "rho {rho} n {n}");
            }
        }
    }

    #[test]
    fn ac_parameters_rho_two_and_half() {
        let p = ac_parameters(2.5, 4).unwrap();
        assert_eq!(p.log_b()[..3], [0.0, 1.0, 16.0]);
        assert_eq!(p.circle(3).mult.exact(), Some(64));
        assert_eq!(p.circle(4).log_b_exact, Some(66u128.pow(4)));
        assert_eq!(p.circle(4).mult.exact(), Some(66u128.pow(6)));
    }

    #[test]
    fn ac_parameters_domain() {
        assert!(ac_parameters(2.0, 4).is_err());
        assert!(ac_parameters(3.0, 1).is_err());
        let p = ac_parameters(7.3, 3).unwrap();
        assert_eq!(p.circle(2).log_b, 1.0);
        assert_eq!(p.circle(2).mult.exact(), Some(1));
    }

    #[test]
    fn ac_counting_matches_cumulative() {
        let p = ac_parameters(3.0, 4).unwrap();
        let s = anderson_clunie_zeros(p);
        let p = s.ac_params().unwrap();
        assert_eq!(p.addressable_points(), 104_994);
        let mut last = f64::NEG_INFINITY;
        let mut count_by_circle = [0usize; 4];
        for k in 1..=p.addressable_points() {
            let (i, _) = p.locate(k);
            count_by_circle[i - 1] += 1;
            let z = s.point(k);
            assert!(z.log_mag >= last);
            last = z.log_mag;
        }
        assert_eq!(count_by_circle, [1, 1, 16, 104976]);
    }

    #[test]
    fn ac_conjugate_symmetry() {
        for m in [1u128, 2, 3, 4, 16, 101] {
            for j in 1..=m {
                assert_eq!(
                    ac_phase(m, j),
                    -ac_phase(m, m + 1 - j) + if ac_phase(m, j) == PI { 2.0 * PI } else { 0.0 }
                );
            }
        }
    }

    #[test]
    fn angle_examples() {
        let a = ac_angles(4).unwrap();
        let want = [3.0 * PI / 4.0, 11.0 * PI / 12.0, 13.0 * PI / 12.0, 5.0 * PI / 4.0];
        for (x, y) in a.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(ac_angles(1).unwrap(), vec![PI]);
        let a = ac_angles(3).unwrap();
        assert_eq!(a[1], PI);
        assert!(ac_angles(0).is_err());
    }

    #[test]
    fn angle_gaps_equal() {
        let ulp = 4.0 * f64::EPSILON;
        for m in 2..=10_000usize {
            let a = ac_angles(m).unwrap();
            let gap = PI / (2.0 * (m as f64 - 1.0));
            for w in a.windows(2) {
                assert!(((w[1] - w[0]) - gap).abs() <= ulp, "m = {m}");
            }
        }
    }

    #[test]
    fn explicit_list_parsing() {
        let text = "# zeros\n1 0\n-2 0.5 # a comment\n\n0 3 2\n";
        let pts = parse_zero_list(text).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[2].multiplicity, 2);
        let s = explicit_zeros(pts, None).unwrap();
        assert_eq!(s.finite_len(), Some(3));
        assert!(s.point(1).log_mag <= s.point(2).log_mag);
        let dup = parse_zero_list("1 1\n1 1\n").unwrap();
        assert!(explicit_zeros(dup, None).is_err());
        assert!(parse_zero_list("1\n").is_err());
        assert!(parse_zero_list("1 x\n").is_err());
    }

    #[test]
    fn genus_heuristic() {
        // Zeros -k^(1/2): lambda = 2, report both 1 and 2.
        let pts: Vec<ExplicitZero> = (1..=4000)
            .map(|k| ExplicitZero {
                re: -(k as f64).sqrt(),
                im: 0.0,
                multiplicity: 1,
            })
            .collect();
        assert_eq!(genus_candidates(&pts), vec![1, 2]);
        let pts: Vec<ExplicitZero> = (1..=4000)
            .map(|k| ExplicitZero {
                re: -(k as f64).powf(1.0 / 1.5),
                im: 0.0,
                multiplicity: 1,
            })
            .collect();
        assert_eq!(genus_candidates(&pts), vec![1]);
    }

    #[test]
    fn power_inequality_examples() {
        assert!(power_bounds_hold(4.0, 1.0, 1.0));
        let mid = 9f64.sqrt() - 4f64.sqrt();
        assert_eq!(mid, 1.0);
        assert!(0.5 * 5.0 * 9f64.powf(-0.5) <= mid && mid <= 0.5 * 5.0 * 4f64.powf(-0.5));
        assert!(power_bounds_hold(9.0, 4.0, 0.5));
        let e = std::f64::consts::E;
        assert!(power_bounds_hold(e, 1.0, 2.0));
        assert!((2.0 * (e - 1.0) - 3.437).abs() < 1e-3);
        assert!((2.0 * (e - 1.0) * e - 9.342).abs() < 1e-3);
        assert_eq!(check_power_inequalities(10_000, 7).violations(), 0);
    }

    proptest! {
        #[test]
        fn power_bounds_random(n in 1u32..10_000, d in 1u32..10_000, a in 0.01f64..20.0) {
            prop_assert!(power_bounds_hold((n + d) as f64, n as f64, a));
        }

        #[test]
        fn ab_bounds_random(a in 0.001f64..1e3, f in 1e-9f64..1e3, g in 0.01f64..20.0) {
            prop_assert!(power_bounds_hold(a * (1.0 + f), a, g));
        }

        #[test]
        fn lindelof_moduli_nondecreasing(rho in 0.51f64..8.0, k in 1usize..100_000) {
            let s = lindelof_zeros(rho).unwrap();
            prop_assert!(s.point(k).log_mag < s.point(k + 1).log_mag);
        }
    }
}
