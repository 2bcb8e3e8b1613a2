//! Uniform `q`-separation scans: `log(|z_k| e^(C w(|z_k|)) |f'(z_k)|)` over
//! the first zeros of a sequence, witness constants and the Anderson-Clunie
//! cofactor split.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::products::{ac_cofactor_parts, derivative_at_zero, CanonicalProduct};
use crate::sequences::{ACParameters, SequenceKind, ZeroSequence};
use crate::special::fit_line;

/// Weight `w(x)` in the separation inequality.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Weight {
    /// `x^q`
    Power { q: f64 },
    /// `(log(1 + x))^q`
    LogPower { q: f64 },
    /// `x^rho log x^rho`
    Refined { rho: f64 },
}

impl Weight {
    fn check(self) -> Result<()> {
        let v = match self {
            Weight::Power { q } | Weight::LogPower { q } => q,
            Weight::Refined { rho } => rho,
        };
        if !(v >= 0.0) || !v.is_finite() {
            return domain("weight exponent must be finite and >= 0");
        }
        Ok(())
    }

    /// `w(x)` from `log x`.
    pub fn at_log(self, log_x: f64) -> f64 {
        match self {
            Weight::Power { q } => (q * log_x).exp(),
            Weight::LogPower { q } => {
                // log(1 + x) without forming x
                let l = if log_x > 36.0 {
                    log_x + (-log_x).exp()
                } else {
                    log_x.exp().ln_1p()
                };
                l.powf(q)
            }
            Weight::Refined { rho } => (rho * log_x).exp() * rho * log_x,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BoundedBelow,
    Decaying,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SeparationReport {
    pub weight: Weight,
    #[serde(rename = "C")]
    pub c: f64,
    /// First and last zero index scanned.
    pub k_start: usize,
    #[serde(rename = "K")]
    pub k_end: usize,
    /// One entry per scanned zero; `NaN` where the derivative failed.
    pub per_k: Vec<f64>,
    /// Indices whose derivative failed; excluded from everything below.
    pub flagged: Vec<usize>,
    pub inf_log: f64,
    pub argmin: usize,
    pub verdict: Verdict,
    /// Trend of `per_k` against `k` over the deepest half.
    pub slope: Option<f64>,
    pub slope_stderr: Option<f64>,
}

/// `log|z_k| + log|f'(z_k)|` for each `k`, `None` on failure.
fn base_entries(f: &CanonicalProduct, ks: &[usize]) -> Vec<Option<f64>> {
    ks.par_iter()
        .map(|&k| {
            let d = derivative_at_zero(f, k).ok()?;
            let v = f.zeros.point(k).log_mag + d.log_mag;
            v.is_finite().then_some(v)
        })
        .collect()
}

fn scan_range(seq: &ZeroSequence, k_start: usize, k_end: usize) -> Result<Vec<usize>> {
    if k_start == 0 || k_end < k_start {
        return domain("scan range must satisfy 1 <= start <= K");
    }
    if k_end > seq.addressable() {
        return domain(format!(
            "K = {k_end} exceeds the {} addressable zeros",
            seq.addressable()
        ));
    }
    if let SequenceKind::Bank { .. } = seq.kind {
        // log eps_n = -exp(2^n) stays finite up to n = 40 only
        if k_end > 80 {
            return domain("the Bank scan is capped at K = 80");
        }
    }
    Ok((k_start..=k_end).collect())
}

fn assemble(weight: Weight, c: f64, ks: &[usize], seq: &ZeroSequence, base: &[Option<f64>]) -> SeparationReport {
    let mut per_k = Vec::with_capacity(ks.len());
    let mut flagged = Vec::new();
    let (mut inf_log, mut argmin) = (f64::INFINITY, 0);
    for (&k, b) in ks.iter().zip(base) {
        match b {
            Some(b) => {
                let v = b + c * weight.at_log(seq.point(k).log_mag);
                if v < inf_log {
                    inf_log = v;
                    argmin = k;
                }
                per_k.push(v);
            }
            None => {
                flagged.push(k);
                per_k.push(f64::NAN);
            }
        }
    }
    let half = ks.len() / 2;
    let (x, y): (Vec<f64>, Vec<f64>) = ks[half..]
        .iter()
        .zip(&per_k[half..])
        .filter(|(_, v)| v.is_finite())
        .map(|(&k, &v)| (k as f64, v))
        .unzip();
    let fit = if x.len() >= 3 { fit_line(&x, &y) } else { None };
    let verdict = match fit {
        None => Verdict::Inconclusive,
        Some(f) if f.slope < 0.0 && -f.slope > 2.0 * f.slope_stderr => Verdict::Decaying,
        Some(f) if f.slope >= 0.0 => Verdict::BoundedBelow,
        Some(_) => Verdict::Inconclusive,
    };
    SeparationReport {
        weight,
        c,
        k_start: ks[0],
        k_end: *ks.last().unwrap(),
        per_k,
        flagged,
        inf_log,
        argmin,
        verdict,
        slope: fit.map(|f| f.slope),
        slope_stderr: fit.map(|f| f.slope_stderr),
    }
}

/// Scan of zeros `1..=k` with constant `c`.
pub fn separation_scan(f: &CanonicalProduct, weight: Weight, c: f64, k: usize) -> Result<SeparationReport> {
    if k < 10 {
        return domain("a separation scan needs K >= 10");
    }
    separation_scan_range(f, weight, c, 1, k)
}

/// Scan of zeros `k_start..=k_end`.
pub fn separation_scan_range(
    f: &CanonicalProduct,
    weight: Weight,
    c: f64,
    k_start: usize,
    k_end: usize,
) -> Result<SeparationReport> {
    weight.check()?;
    if !(c > 0.0) || !c.is_finite() {
        return domain("C must be positive");
    }
    let ks = scan_range(&f.zeros, k_start, k_end)?;
    let base = base_entries(f, &ks);
    Ok(assemble(weight, c, &ks, &f.zeros, &base))
}

/// Result of the sweep `C = 2^j`, `j = -10..=40`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Witness {
    /// Smallest swept `C` reaching the threshold, if any.
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub threshold: f64,
    /// The scan at the witness, or at the largest `C` on failure.
    pub report: SeparationReport,
}

pub const WITNESS_EXPONENTS: std::ops::RangeInclusive<i32> = -10..=40;

/// Smallest `C = 2^j` with `inf_log >= log(1/2)` over zeros `1..=k`.
pub fn witness_constant_search(f: &CanonicalProduct, weight: Weight, k: usize) -> Result<Witness> {
    witness_search_range(f, weight, 1, k, -std::f64::consts::LN_2)
}

/// [`witness_constant_search`] over `k_start..=k_end` with a chosen threshold
/// on `inf_log`.
pub fn witness_search_range(
    f: &CanonicalProduct,
    weight: Weight,
    k_start: usize,
    k_end: usize,
    threshold: f64,
) -> Result<Witness> {
    weight.check()?;
    let ks = scan_range(&f.zeros, k_start, k_end)?;
    let base = base_entries(f, &ks);
    let mut last = None;
    for j in WITNESS_EXPONENTS {
        let c = 2f64.powi(j);
        let r = assemble(weight, c, &ks, &f.zeros, &base);
        if r.flagged.len() < ks.len() && r.inf_log >= threshold {
            return Ok(Witness {
                c: Some(c),
                threshold,
                report: r,
            });
        }
        last = Some(r);
    }
    Ok(Witness {
        c: None,
        threshold,
        report: last.unwrap(),
    })
}

/// `(log P1, log P2, log P3)`: the cofactor `prod_{n != k} |1 - z_k/z_n|` of
/// the `j`-th zero on circle `i` split into inner circles, outer circles and
/// the same circle.
pub fn ac_separation_decomposition(params: &ACParameters, i: usize, j: usize) -> Result<(f64, f64, f64)> {
    let p = ac_cofactor_parts(params, i, j)?;
    Ok((p[0].re, p[1].re, p[2].re))
}

/// Smallest same-circle cofactor distance `log|z_j - z_l|` on circle `i`,
/// taken from the chord tables the cofactor is built from, and the chord
/// `log(2 b_i sin(pi / (4 (c_i - 1))))` it should equal.
pub fn ac_min_chord(params: &ACParameters, i: usize) -> Result<(f64, f64)> {
    if i == 0 || i > params.addressable_circles() {
        return domain(format!("circle {i} is not materialized with integer multiplicities"));
    }
    let c = params.circle(i);
    let m = c.mult.exact().unwrap() as usize;
    if m < 2 {
        return domain("a chord needs at least two points on the circle");
    }
    let prefix = &params.tables(i).chord_prefix;
    let min = prefix.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let chord = (2.0 * (PI / (4.0 * (m as f64 - 1.0))).sin()).ln();
    Ok((c.log_b + min, c.log_b + chord))
}

#[cfg(test)]
mod tests;
