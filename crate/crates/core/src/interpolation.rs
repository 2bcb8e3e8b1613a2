//! Coefficient reconstruction for `f'' + A f' + B f = 0`: targets
//! `sigma_k = -f''(z_k)/f'(z_k)`, Mittag-Leffler residues and exponents,
//! the series `H`, `A = P H`, `B = -(f'' + A f')/f`, and ODE residuals.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cauchy::{cauchy_derivatives, CauchyOptions, Radius};
use crate::error::{domain, NevlabError, Result};
use crate::logdomain::{lc_add, log_abs_one_minus, LogComplex};
use crate::nevanlinna::{log_order_estimate, order_estimate, LogOrderEstimate, OrderEstimate, QuadOptions};
use crate::products::{derivative_at_zero, CanonicalProduct, Evaluator};
use crate::sequences::{ac_phase, SequenceKind, ZeroSequence, DIRECT_CAP};
use crate::special::{hurwitz_scaled, CompensatedSum};

/// Sum of log-polar terms: scale by the largest modulus, add in ordinary
/// arithmetic, scale back.
pub fn log_sum(terms: &[LogComplex]) -> LogComplex {
    let lmax = terms.iter().map(|t| t.log_mag).fold(f64::NEG_INFINITY, f64::max);
    if lmax == f64::NEG_INFINITY {
        return LogComplex::ZERO;
    }
    let (mut re, mut im) = (CompensatedSum::default(), CompensatedSum::default());
    for t in terms {
        let v = Complex64::from_polar((t.log_mag - lmax).exp(), t.phase);
        re.add(v.re);
        im.add(v.im);
    }
    LogComplex::from_complex(Complex64::new(re.value(), im.value())) * LogComplex::new(lmax, 0.0)
}

/// `sigma_k` for the Lindelof function, real:
/// `2p/k^a + 2 sum_{n != k} (k/n)^(a p) / (k^a - n^a)` with `a = 1/rho`.
pub fn sigma_lindelof(rho: f64, k: usize) -> f64 {
    let alpha = 1.0 / rho;
    let p = rho.floor();
    let kf = k as f64;
    let ka = kf.powf(alpha);
    let n_max = ((2f64.powf(rho) * kf).ceil() as usize).max(k + 1);
    let mut s = CompensatedSum::default();
    for n in 1..=n_max {
        if n == k {
            continue;
        }
        // lt = log (k/n)^a
        let lt = -alpha * ((n as f64 - kf) / kf).ln_1p();
        s.add((p * lt).exp() / (ka * -(-lt).exp_m1()));
    }
    // n > n_max: -k^-a sum_{j > p} (k/a0)^(a j) zeta-scaled(a j, a0)
    let a0 = (n_max + 1) as f64;
    let v = (kf / a0).powf(alpha);
    let mut pow = v.powi(p as i32 + 1);
    let mut j = p as usize + 1;
    loop {
        let t = pow * hurwitz_scaled(alpha * j as f64, a0) / ka;
        s.add(-t);
        if t <= 1e-18 * s.value().abs() || j > p as usize + 400 {
            break;
        }
        pow *= v;
        j += 1;
    }
    2.0 * p / ka + 2.0 * s.value()
}

/// `log` of one series term `2 m (z_k/z_n)^p / (z_n - z_k)`, given
/// `ln(1 - z_k/z_n)`.
fn sigma_term(zk: LogComplex, zn: LogComplex, p: f64, ln1m: (f64, f64), mult: f64) -> LogComplex {
    LogComplex::new(
        p * (zk.log_mag - zn.log_mag) + LN_2 + mult.ln() - zn.log_mag - ln1m.0,
        p * (zk.phase - zn.phase) - zn.phase - ln1m.1,
    )
}

/// `log` bound on `2 m |z_k|^p / |z_n|^(p+1) >= |2 m (z_k/z_n)^p / (z_n - z_k)|`
/// once `|z_n| >= 2 |z_k|`.
fn tail_term_bound(lzk: f64, lzn: f64, p: f64, mult_ln: f64) -> f64 {
    2.0 * LN_2 + mult_ln + p * lzk - (p + 1.0) * lzn
}

fn push_term(terms: &mut Vec<LogComplex>, lmax: &mut f64, t: LogComplex) {
    *lmax = lmax.max(t.log_mag);
    terms.push(t);
}

const SIGMA_MAX_TERMS: usize = 20_000_000;

fn sigma_generic(f: &CanonicalProduct, k: usize) -> Result<LogComplex> {
    let seq = &f.zeros;
    let p = f.genus as f64;
    let zk = seq.point(k);
    let mut terms = Vec::new();
    if f.genus > 0 {
        // -2p / z_k
        terms.push(LogComplex::new((2.0 * p).ln() - zk.log_mag, PI - zk.phase));
    }
    let mut lmax = f64::NEG_INFINITY;
    match &seq.kind {
        SequenceKind::ExplicitList(v) => {
            for n in 1..=v.len() {
                if n != k {
                    let t = sigma_term(
                        zk,
                        seq.point(n),
                        p,
                        seq.ln_one_minus_ratio(k, n),
                        v[n - 1].multiplicity as f64,
                    );
                    push_term(&mut terms, &mut lmax, t);
                }
            }
        }
        SequenceKind::AndersonClunie(params) => {
            let mut total = 0.0;
            let mut offset = 0usize;
            let mut i = 0usize;
            loop {
                i += 1;
                let (log_b, mult) = if i <= params.n_max() {
                    let c = params.circle(i);
                    (c.log_b, c.mult)
                } else {
                    let log_b = f64::powf(total, params.gamma);
                    (
                        log_b,
                        crate::sequences::Multiplicity::Real {
                            ln: log_b.powf(params.rho - 1.0).floor().ln(),
                        },
                    )
                };
                let m_ln = mult.ln();
                let bound = tail_term_bound(zk.log_mag, log_b, p, m_ln);
                if log_b >= zk.log_mag + LN_2 && bound < lmax - 45.0 {
                    // super-exponential radii: the next circle is far smaller still
                    break;
                }
                match mult.exact().filter(|&m| m <= DIRECT_CAP && i <= params.n_max()) {
                    Some(m) => {
                        for j in 1..=m as usize {
                            if offset + j == k {
                                continue;
                            }
                            let zn = LogComplex::new(log_b, ac_phase(m, j as u128));
                            let ln1m = crate::logdomain::ln_one_minus(zk / zn);
                            push_term(&mut terms, &mut lmax, sigma_term(zk, zn, p, ln1m, 1.0));
                        }
                        offset += m as usize;
                    }
                    None => {
                        if log_b < zk.log_mag + LN_2 {
                            return Err(NevlabError::Truncation {
                                partial: log_sum(&terms),
                                achieved: bound.exp(),
                                terms: terms.len(),
                            });
                        }
                        // bounded, not summed
                        if bound >= lmax - 45.0 {
                            return Err(NevlabError::Truncation {
                                partial: log_sum(&terms),
                                achieved: bound.exp(),
                                terms: terms.len(),
                            });
                        }
                    }
                }
                total += mult.as_f64();
                if i > params.n_max() + 8 {
                    break;
                }
            }
        }
        SequenceKind::Geometric { log_ratio, .. } => {
            let step = (p + 1.0) * log_ratio;
            enumerate_with_tail(seq, k, zk, p, step, 1.0, &mut terms, &mut lmax)?;
        }
        SequenceKind::Bank { .. } | SequenceKind::PairedGeometric { .. } => {
            // two points per power of two
            let step = (p + 1.0) * LN_2;
            enumerate_with_tail(seq, k, zk, p, step, 2.0, &mut terms, &mut lmax)?;
        }
        SequenceKind::Lindelof { .. } => unreachable!(),
    }
    Ok(log_sum(&terms))
}

/// Sums terms in index order until `|z_n| >= 2|z_k|` and the geometric tail
/// `bound * per_step / (1 - e^-step)` is negligible.
#[allow(clippy::too_many_arguments)]
fn enumerate_with_tail(
    seq: &ZeroSequence,
    k: usize,
    zk: LogComplex,
    p: f64,
    step: f64,
    per_step: f64,
    terms: &mut Vec<LogComplex>,
    lmax: &mut f64,
) -> Result<()> {
    let tail_factor = per_step.ln() - (-(-step).exp_m1()).ln();
    let mut n = 1usize;
    loop {
        if n != k {
            let t = sigma_term(zk, seq.point(n), p, seq.ln_one_minus_ratio(k, n), 1.0);
            *lmax = lmax.max(t.log_mag);
            terms.push(t);
        }
        let next = seq.point(n + 1).log_mag;
        if next >= zk.log_mag + LN_2 && n > k {
            let b = tail_term_bound(zk.log_mag, next, p, 0.0) + tail_factor;
            if b < *lmax - 45.0 {
                return Ok(());
            }
        }
        n += 1;
        if n > SIGMA_MAX_TERMS {
            return Err(NevlabError::Truncation {
                partial: log_sum(terms),
                achieved: f64::NAN,
                terms: n,
            });
        }
    }
}

/// `sigma_k = -f''(z_k)/f'(z_k)` from the series over the other zeros.
pub fn target_sigma(f: &CanonicalProduct, k: usize) -> Result<LogComplex> {
    let seq = &f.zeros;
    if k == 0 || k > seq.addressable() {
        return domain(format!("zero index {k} outside the addressable range"));
    }
    if seq.multiplicity(k) != 1 {
        return domain(format!("zero {k} is not simple"));
    }
    match seq.kind {
        SequenceKind::Lindelof { rho } => Ok(LogComplex::from_real(sigma_lindelof(rho, k))),
        _ => sigma_generic(f, k),
    }
}

/// Which form of the exponent rule to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// With the genus offsets `+p`.
    FiniteOrder,
    /// Without them.
    LogOrder,
}

/// Smallest integers `q_n >= max{a (log|c_n|/log|z_n| + p), log(|c_n|/n)/log|z_n| + p + 1}`
/// (`p` only in the finite-order variant), `q_n = 0` for `|z_n| <= e` or a
/// negative maximum. Inputs are `log|c_n|` and `log|z_n|`; `n` is 1-based.
pub fn ml_exponents(log_c: &[f64], log_z: &[f64], alpha: f64, variant: Variant, genus: u32) -> Result<Vec<u32>> {
    if !(alpha > 1.0) {
        return domain("alpha must exceed 1");
    }
    if log_c.len() != log_z.len() {
        return domain("residue and zero lists differ in length");
    }
    let p = match variant {
        Variant::FiniteOrder => genus as f64,
        Variant::LogOrder => 0.0,
    };
    Ok(log_c
        .iter()
        .zip(log_z)
        .enumerate()
        .map(|(i, (&lc, &lz))| {
            if lz <= 1.0 {
                return 0;
            }
            let n = (i + 1) as f64;
            let a = alpha * (lc / lz + p);
            let b = (lc - n.ln()) / lz + p + 1.0;
            let m = a.max(b);
            if m <= 0.0 {
                0
            } else {
                m.ceil() as u32
            }
        })
        .collect())
}

/// One Mittag-Leffler term `c_n (z/z_n)^q_n / (z - z_n)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct PoleTerm {
    pub index: usize,
    pub z: LogComplex,
    pub residue: LogComplex,
    pub exponent: u32,
}

impl PoleTerm {
    /// `c_n (z/z_n)^q_n`, the numerator at `z`.
    fn numerator(&self, z: LogComplex) -> LogComplex {
        if self.exponent == 0 {
            return self.residue;
        }
        let w = z / self.z;
        self.residue * LogComplex::raw(w.log_mag * self.exponent as f64, w.phase * self.exponent as f64).normalized()
    }

    fn at(&self, z: LogComplex) -> LogComplex {
        self.numerator(z) / lc_add(z, -self.z)
    }
}

/// `H(z) = sum_n c_n (z/z_n)^q_n / (z - z_n)` over the given terms.
pub fn eval_h(terms: &[PoleTerm], z: LogComplex) -> Result<LogComplex> {
    if let Some(t) = terms.iter().find(|t| t.z == z) {
        return Err(NevlabError::Domain(format!("H has a pole at z_{}", t.index)));
    }
    let v: Vec<LogComplex> = terms.iter().map(|t| t.at(z)).collect();
    Ok(log_sum(&v))
}

/// The reconstructed coefficients and their ingredients.
#[derive(Clone, Debug)]
pub struct InterpolationArtifacts {
    pub product: CanonicalProduct,
    pub k: usize,
    pub alpha: f64,
    pub variant: Variant,
    pub zeros: Vec<LogComplex>,
    pub sigma: Vec<LogComplex>,
    /// `P'(z_n)`.
    pub derivatives: Vec<LogComplex>,
    pub residues: Vec<LogComplex>,
    pub exponents: Vec<u32>,
    /// Indices with `sigma_n = 0`; left out of `H` so `A` vanishes there.
    pub dropped: Vec<usize>,
    /// `log` of half the distance from `z_n` to the nearest other zero.
    pub log_half_gaps: Vec<f64>,
    pub terms: Vec<PoleTerm>,
}

/// `log` distance from `z_n` to the nearest other zero among the first
/// `limit`.
fn log_gap_to_others(seq: &ZeroSequence, n: usize, limit: usize) -> f64 {
    let zn = seq.point(n);
    (1..=limit)
        .filter(|&m| m != n)
        .map(|m| {
            let zm = seq.point(m);
            zm.log_mag + log_abs_one_minus(zn / zm)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Builds `A = P H` from the first `k` zeros of `f` (with `P = f`).
pub fn build_coefficients(
    f: &CanonicalProduct,
    k: usize,
    alpha: f64,
    variant: Variant,
) -> Result<InterpolationArtifacts> {
    let seq = &f.zeros;
    if k == 0 || k > seq.addressable() {
        return domain(format!("K = {k} outside 1..={}", seq.addressable()));
    }
    if !(alpha > 1.0) {
        return domain("alpha must exceed 1");
    }
    let wrap = |index: usize| {
        move |e: NevlabError| NevlabError::Interpolation {
            index,
            msg: e.to_string(),
        }
    };
    let rows: Vec<Result<(LogComplex, LogComplex)>> = (1..=k)
        .into_par_iter()
        .map(|n| {
            let s = target_sigma(f, n).map_err(wrap(n))?;
            let d = derivative_at_zero(f, n).map_err(wrap(n))?;
            if !s.log_mag.is_finite() && !s.is_zero() || !d.is_finite() {
                return Err(NevlabError::Interpolation {
                    index: n,
                    msg: "non-finite target or derivative".into(),
                });
            }
            Ok((s, d))
        })
        .collect();
    let mut sigma = Vec::with_capacity(k);
    let mut derivatives = Vec::with_capacity(k);
    for r in rows {
        let (s, d) = r?;
        sigma.push(s);
        derivatives.push(d);
    }
    let zeros: Vec<LogComplex> = (1..=k).map(|n| seq.point(n)).collect();
    let residues: Vec<LogComplex> = sigma.iter().zip(&derivatives).map(|(s, d)| *s / *d).collect();
    let log_c: Vec<f64> = residues.iter().map(|c| c.log_mag).collect();
    let log_z: Vec<f64> = zeros.iter().map(|z| z.log_mag).collect();
    let exponents = ml_exponents(&log_c, &log_z, alpha, variant, f.genus)?;
    let limit = seq.addressable().min(k + 64);
    let log_half_gaps: Vec<f64> = (1..=k)
        .into_par_iter()
        .map(|n| log_gap_to_others(seq, n, limit) - LN_2)
        .collect();
    let mut dropped = Vec::new();
    let mut terms = Vec::new();
    for n in 0..k {
        if sigma[n].is_zero() {
            dropped.push(n + 1);
        } else {
            terms.push(PoleTerm {
                index: n + 1,
                z: zeros[n],
                residue: residues[n],
                exponent: exponents[n],
            });
        }
    }
    Ok(InterpolationArtifacts {
        product: f.clone(),
        k,
        alpha,
        variant,
        zeros,
        sigma,
        derivatives,
        residues,
        exponents,
        dropped,
        log_half_gaps,
        terms,
    })
}

impl InterpolationArtifacts {
    /// Position in `terms` of the pole whose half-gap disc holds `z`.
    fn near_pole(&self, z: LogComplex) -> Option<usize> {
        self.terms.iter().position(|t| {
            let d = lc_add(z, -t.z).log_mag;
            d < self.log_half_gaps[t.index - 1]
        })
    }

    pub fn h(&self, z: LogComplex) -> Result<LogComplex> {
        eval_h(&self.terms, z)
    }

    /// `A(z) = P(z) H(z)`; inside the half-gap disc of `z_n` the singular
    /// term is taken as `c_n (z/z_n)^q_n P(z)/(z - z_n)`, equal to
    /// `c_n P'(z_n)` at the pole itself.
    pub fn a(&self, z: LogComplex) -> LogComplex {
        let pz = self.product.eval(z);
        match self.near_pole(z) {
            None => pz * log_sum(&self.terms.iter().map(|t| t.at(z)).collect::<Vec<_>>()),
            Some(i) => {
                let t = &self.terms[i];
                let q = if z == t.z {
                    self.derivatives[t.index - 1]
                } else {
                    pz / lc_add(z, -t.z)
                };
                let rest: Vec<LogComplex> = self
                    .terms
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, t)| t.at(z))
                    .collect();
                lc_add(t.numerator(z) * q, pz * log_sum(&rest))
            }
        }
    }

    /// `B(z) = -(f''(z) + A(z) f'(z)) / f(z)`; at a materialized zero the
    /// removable value `-(f''' + A f'' + A' f') / f'`.
    pub fn b(&self, z: LogComplex, opts: &CauchyOptions) -> Result<LogComplex> {
        let f = &self.product;
        if let Some(n) = self.zeros.iter().position(|zn| *zn == z) {
            let fd = cauchy_derivatives(f, z, 3, opts)?.values;
            let ad = cauchy_derivatives(&AEval(self), z, 1, opts)?.values;
            let num = lc_add(lc_add(fd[3], ad[0] * fd[2]), ad[1] * self.derivatives[n]);
            return Ok(-(num / self.derivatives[n]));
        }
        let fd = cauchy_derivatives(f, z, 2, opts)?.values;
        let fz = f.eval(z);
        Ok(-(lc_add(fd[2], self.a(z) * fd[1]) / fz))
    }

    pub fn a_evaluator(&self) -> AEval<'_> {
        AEval(self)
    }

    pub fn b_evaluator(&self) -> BEval<'_> {
        BEval(self, CauchyOptions::default())
    }
}

/// `A` as an [`Evaluator`].
pub struct AEval<'a>(pub &'a InterpolationArtifacts);

impl Evaluator for AEval<'_> {
    fn eval(&self, z: LogComplex) -> LogComplex {
        self.0.a(z)
    }
}

/// `B` as an [`Evaluator`]; failures come back as `NaN`.
pub struct BEval<'a>(pub &'a InterpolationArtifacts, pub CauchyOptions);

impl Evaluator for BEval<'_> {
    fn eval(&self, z: LogComplex) -> LogComplex {
        self.0.b(z, &self.1).unwrap_or(LogComplex::raw(f64::NAN, 0.0))
    }

    fn log_gap(&self, z: LogComplex) -> f64 {
        self.0.product.log_gap(z)
    }
}

/// Per-zero checks of a build.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct InterpolationRow {
    pub index: usize,
    pub log_abs_z: f64,
    pub sigma_re: f64,
    pub sigma_im: f64,
    pub residue_log_abs: f64,
    pub exponent: u32,
    /// `|A(z_k) - sigma_k| / |sigma_k|`, with `A(z_k)` from the mean of `A`
    /// on a circle around `z_k`.
    pub interpolation_residual: f64,
    /// `|f''(z_k) + A(z_k) f'(z_k)| / |f''(z_k)|`.
    pub numerator_residual: f64,
    /// `log|c_n| / log|z_n|` and its running maximum, for `|z_n| >= e`.
    pub g: Option<f64>,
    pub g_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Nontriviality {
    /// Probe `zeta` with `A(zeta) != -f''(zeta)/f'(zeta)`.
    pub zeta: (f64, f64),
    pub a_log_abs: f64,
    pub target_log_abs: f64,
    /// `|A(zeta) + f''/f'(zeta)| / max(|A|, |f''/f'|)`.
    pub separation: f64,
    /// `log|B|` at five probes.
    pub b_log_abs: Vec<f64>,
    pub a_nontrivial: bool,
    pub b_nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct InterpolationReport {
    pub rows: Vec<InterpolationRow>,
    pub max_interpolation_residual: f64,
    pub max_numerator_residual: f64,
    pub nontriviality: Nontriviality,
}

/// Interpolation and numerator residuals at every materialized zero, with
/// `A(z_k)` and the derivatives of `f` from Cauchy circles (`tol` 1e-13,
/// 128 starting nodes), plus the non-triviality probes.
pub fn interpolation_report(art: &InterpolationArtifacts) -> Result<InterpolationReport> {
    let strict = CauchyOptions {
        n_min: 128,
        tol: 1e-13,
        ..CauchyOptions::default()
    };
    let a = AEval(art);
    let rows: Vec<Result<InterpolationRow>> = (0..art.k)
        .into_par_iter()
        .map(|i| {
            let z = art.zeros[i];
            let wrap = |e: NevlabError| NevlabError::Interpolation {
                index: i + 1,
                msg: e.to_string(),
            };
            let az = cauchy_derivatives(&a, z, 0, &strict).map_err(wrap)?.values[0];
            let fd = cauchy_derivatives(&art.product, z, 2, &strict).map_err(wrap)?.values;
            let s = art.sigma[i];
            let interp = if s.is_zero() {
                az.to_complex().norm()
            } else {
                (lc_add(az, -s) / s).to_complex().norm()
            };
            let num = (lc_add(fd[2], az * fd[1]) / fd[2]).to_complex().norm();
            let s = s.to_complex();
            Ok(InterpolationRow {
                index: i + 1,
                log_abs_z: z.log_mag,
                sigma_re: s.re,
                sigma_im: s.im,
                residue_log_abs: art.residues[i].log_mag,
                exponent: art.exponents[i],
                interpolation_residual: interp,
                numerator_residual: num,
                g: None,
                g_max: None,
            })
        })
        .collect();
    let mut out = Vec::with_capacity(art.k);
    let mut g_max = f64::NEG_INFINITY;
    for r in rows {
        let mut r = r?;
        if r.log_abs_z >= 1.0 {
            let g = r.residue_log_abs / r.log_abs_z;
            g_max = g_max.max(g);
            r.g = Some(g);
            r.g_max = Some(g_max);
        }
        out.push(r);
    }
    let max_i = out.iter().map(|r| r.interpolation_residual).fold(0.0, f64::max);
    let max_n = out.iter().map(|r| r.numerator_residual).fold(0.0, f64::max);
    Ok(InterpolationReport {
        rows: out,
        max_interpolation_residual: max_i,
        max_numerator_residual: max_n,
        nontriviality: nontriviality(art)?,
    })
}

fn nontriviality(art: &InterpolationArtifacts) -> Result<Nontriviality> {
    let opts = CauchyOptions::default();
    // probes on a circle inside the first zero, off the real axis
    let l = art.zeros[0].log_mag - LN_2;
    let zeta = LogComplex::new(l, 1.1);
    let fd = cauchy_derivatives(&art.product, zeta, 2, &opts)?.values;
    let target = -(fd[2] / fd[1]);
    let az = art.a(zeta);
    let diff = lc_add(az, -target).log_mag - az.log_mag.max(target.log_mag);
    let b_log_abs: Vec<f64> = (0..5)
        .map(|j| {
            let z = LogComplex::new(l, 0.3 + 2.0 * PI * j as f64 / 5.0);
            art.b(z, &opts).map(|v| v.log_mag)
        })
        .collect::<Result<_>>()?;
    let bmax = b_log_abs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let zc = zeta.to_complex();
    Ok(Nontriviality {
        zeta: (zc.re, zc.im),
        a_log_abs: az.log_mag,
        target_log_abs: target.log_mag,
        separation: diff.exp(),
        b_log_abs,
        a_nontrivial: diff > (1e-12f64).ln(),
        b_nontrivial: bmax > (1e-12f64).ln(),
    })
}

/// Residual of `f^(n) + sum_j coeffs[j] f^(j)` at each point.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct OdeResidual {
    pub max: f64,
    pub per_point: Vec<f64>,
    /// Points whose Cauchy quadrature did not settle.
    pub flagged: Vec<usize>,
}

/// `max |f^(n) + sum_j A_j f^(j)| / max(|f^(n)|, max_j |A_j f^(j)|)` over
/// `points`, with `n = coeffs.len()` and `coeffs[j]` multiplying `f^(j)`.
/// Derivatives come from circles of half the gap to the nearest zero.
pub fn ode_residual(coeffs: &[&dyn Evaluator], f: &dyn Evaluator, points: &[LogComplex]) -> Result<OdeResidual> {
    let order = coeffs.len();
    if order == 0 {
        return domain("an equation needs at least one coefficient");
    }
    let opts = CauchyOptions {
        radius: Radius::HalfGap,
        ..CauchyOptions::default()
    };
    let rows: Vec<Result<(f64, bool)>> = points
        .par_iter()
        .map(|&z| {
            let d = cauchy_derivatives(f, z, order, &opts)?;
            let mut parts = vec![d.values[order]];
            for (j, c) in coeffs.iter().enumerate() {
                parts.push(c.eval(z) * d.values[j]);
            }
            let scale = parts.iter().map(|p| p.log_mag).fold(f64::NEG_INFINITY, f64::max);
            let sum = log_sum(&parts);
            if sum.log_mag.is_nan() || scale.is_nan() {
                return Err(NevlabError::Quadrature(format!("non-finite residual at {z:?}")));
            }
            Ok(((sum.log_mag - scale).exp(), d.converged))
        })
        .collect();
    let mut per_point = Vec::with_capacity(points.len());
    let mut flagged = Vec::new();
    for (i, r) in rows.into_iter().enumerate() {
        let (v, ok) = r?;
        if !ok {
            flagged.push(i);
        }
        per_point.push(v);
    }
    let max = per_point.iter().cloned().fold(0.0, f64::max);
    Ok(OdeResidual {
        max,
        per_point,
        flagged,
    })
}

/// `count` points uniform in the disc `|z| <= radius`, from a fixed seed.
pub fn random_disc_points(count: usize, radius: f64, seed: u64) -> Vec<LogComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let t = 2.0 * PI * rng.gen::<f64>() - PI;
            LogComplex::new(r.ln(), t)
        })
        .collect()
}

/// Seeded points uniform in `|z| <= radius` at distance at least `min_gap`
/// from every zero of `f`.
pub fn random_regular_points(f: &dyn Evaluator, count: usize, radius: f64, min_gap: f64, seed: u64) -> Vec<LogComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = radius * rng.gen::<f64>().sqrt();
        let t = 2.0 * PI * rng.gen::<f64>() - PI;
        let z = LogComplex::new(r.ln(), t);
        if f.log_gap(z) >= min_gap.ln() {
            out.push(z);
        }
    }
    out
}

/// Moves every radius within `0.01` (in `log r`) of a zero modulus to the
/// log-midpoint of the gap around it, so no circle runs through a pole of
/// `B`. Assumes nondecreasing moduli.
pub fn off_zero_grid(seq: &ZeroSequence, log_r_grid: &[f64]) -> Vec<f64> {
    let n = seq.addressable();
    let modulus = |k: usize| seq.point(k).log_mag;
    log_r_grid
        .iter()
        .map(|&l| {
            if n == 0 {
                return l;
            }
            let lo = seq.first_above(l);
            let below = if lo > 1 { modulus(lo - 1) } else { f64::NEG_INFINITY };
            let above = if lo <= n { modulus(lo) } else { f64::INFINITY };
            let close = (l - below < 0.01 && above.is_finite()) || (above - l < 0.01 && below.is_finite());
            if close {
                0.5 * (below + above)
            } else {
                l
            }
        })
        .collect()
}

/// Growth-order comparison of `f`, `A` and `B` over a radius grid.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GrowthEvidence {
    /// The radii actually used, after [`off_zero_grid`].
    pub log_r: Vec<f64>,
    pub f: OrderEstimate,
    pub a: OrderEstimate,
    pub b: OrderEstimate,
    pub label: &'static str,
}

pub const EVIDENCE_LABEL: &str = "evidence, not proof";

/// Order estimates of `f`, `A` and `B` from `m(r, .)` on `log_r_grid`,
/// moved off the zero moduli.
pub fn growth_evidence(art: &InterpolationArtifacts, log_r_grid: &[f64], opts: &QuadOptions) -> Result<GrowthEvidence> {
    let grid = off_zero_grid(&art.product.zeros, log_r_grid);
    Ok(GrowthEvidence {
        f: order_estimate(&art.product, &grid, opts)?,
        a: order_estimate(&art.a_evaluator(), &grid, opts)?,
        b: order_estimate(&art.b_evaluator(), &grid, opts)?,
        log_r: grid,
        label: EVIDENCE_LABEL,
    })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LogGrowthEvidence {
    pub log_r: Vec<f64>,
    pub f: LogOrderEstimate,
    pub a: LogOrderEstimate,
    pub b: LogOrderEstimate,
    pub label: &'static str,
}

/// Logarithmic-order analogue of [`growth_evidence`].
pub fn log_growth_evidence(
    art: &InterpolationArtifacts,
    log_r_grid: &[f64],
    opts: &QuadOptions,
) -> Result<LogGrowthEvidence> {
    let grid = off_zero_grid(&art.product.zeros, log_r_grid);
    Ok(LogGrowthEvidence {
        f: log_order_estimate(&art.product, Some(&art.product.zeros), &grid, opts)?,
        a: log_order_estimate(&art.a_evaluator(), None, &grid, opts)?,
        b: log_order_estimate(&art.b_evaluator(), None, &grid, opts)?,
        log_r: grid,
        label: EVIDENCE_LABEL,
    })
}

/// Equations with known entire solutions, as `(coefficients, solution)`.
pub mod fixtures {
    use super::*;
    use crate::products::ComplexFn;

    pub type Coefficient = Box<dyn Evaluator>;

    /// An entire function with known zeros `k pi` (used for the gap).
    pub struct SinTimes<F>(pub F);

    impl<F: Fn(Complex64) -> Complex64 + Sync> Evaluator for SinTimes<F> {
        fn eval(&self, z: LogComplex) -> LogComplex {
            LogComplex::from_complex((self.0)(z.to_complex()))
        }

        fn log_gap(&self, z: LogComplex) -> f64 {
            let zc = z.to_complex();
            let k = (zc.re / PI).round();
            (zc - Complex64::new(k * PI, 0.0)).norm().ln()
        }
    }

    /// `f = e^z` solves `f'' + sin z f' - (1 + sin z) f = 0`.
    pub fn exp_with_sine() -> (Vec<Coefficient>, Coefficient) {
        (
            vec![
                Box::new(ComplexFn(|z: Complex64| -(1.0 + z.sin()))),
                Box::new(ComplexFn(|z: Complex64| z.sin())),
            ],
            Box::new(ComplexFn(|z: Complex64| z.exp())),
        )
    }

    /// `f = e^(z^2/2) sin z` solves `f'' - 2z f' + z^2 f = 0`.
    pub fn gaussian_sine() -> (Vec<Coefficient>, Coefficient) {
        (
            vec![
                Box::new(ComplexFn(|z: Complex64| z * z)),
                Box::new(ComplexFn(|z: Complex64| -2.0 * z)),
            ],
            Box::new(SinTimes(|z: Complex64| (z * z / 2.0).exp() * z.sin())),
        )
    }

    /// `g = e^(z^2) + e^z` solves
    /// `g'''' + (8z^3 - 13) g'' - (16z^4 + 16z^3 + 12z^2 + 4z + 2) g'
    /// + (16z^4 + 8z^3 + 12z^2 + 4z + 14) g = 0`.
    pub fn fourth_order() -> (Vec<Coefficient>, Coefficient) {
        let poly = |c: [f64; 5]| move |z: Complex64| (((c[4] * z + c[3]) * z + c[2]) * z + c[1]) * z + c[0];
        (
            vec![
                Box::new(ComplexFn(poly([14.0, 4.0, 12.0, 8.0, 16.0]))),
                Box::new(ComplexFn(poly([-2.0, -4.0, -12.0, -16.0, -16.0]))),
                Box::new(ComplexFn(poly([-13.0, 0.0, 0.0, 8.0, 0.0]))),
                Box::new(ComplexFn(|_| Complex64::new(0.0, 0.0))),
            ],
            Box::new(ComplexFn(|z: Complex64| (z * z).exp() + z.exp())),
        )
    }

    /// Residual of a fixture at `count` seeded points in `|z| <= radius`.
    pub fn fixture_residual(
        fixture: &(Vec<Coefficient>, Coefficient),
        count: usize,
        radius: f64,
        seed: u64,
    ) -> Result<OdeResidual> {
        let coeffs: Vec<&dyn Evaluator> = fixture.0.iter().map(|c| c.as_ref()).collect();
        ode_residual(&coeffs, fixture.1.as_ref(), &random_disc_points(count, radius, seed))
    }
}

#[cfg(test)]
mod tests;
