pub mod acprod;
pub mod characteristic;
pub mod deficiency;
pub mod interpolate;
pub mod lindelof;
pub mod oracle;
pub mod residual;
pub mod separation;

use nevlab_core::{characteristic_sample, CanonicalProduct, CharacteristicSample, QuadOptions};

use crate::args::{stage, Failure};
use crate::output::{num, opt, Summary, Table};
use crate::Common;

pub type Output = Result<(Table, Summary), Failure>;

pub fn quad(c: &Common) -> QuadOptions {
    QuadOptions::with_n_theta(c.n_theta)
}

/// Jensen residual tolerance: absolute up to size 1e4, relative above.
pub const JENSEN_TOL: f64 = 1e-6;

/// Doubling tolerance for Jensen checks. The default `1e-6` relative stop
/// leaves errors near `1e-4` on values of size `1e3`.
pub const JENSEN_QUAD_TOL: f64 = 1e-10;

pub fn jensen_allowed(s: &CharacteristicSample) -> f64 {
    let size = s.m_inf.abs().max(s.m_zero.unwrap_or(0.0).abs()).max(s.n_zeros.abs());
    if size <= 1e4 {
        JENSEN_TOL
    } else {
        JENSEN_TOL * size
    }
}

pub fn jensen_holds(samples: &[CharacteristicSample]) -> bool {
    samples
        .iter()
        .all(|s| s.jensen_residual.is_some_and(|r| r.abs() <= jensen_allowed(s)))
}

/// `n, N, m(r, f), m(r, 1/f), T` and the Jensen residual at every radius.
pub fn characteristic_table(
    f: &CanonicalProduct,
    grid: &[f64],
    opts: &QuadOptions,
) -> Result<(Table, Vec<CharacteristicSample>), Failure> {
    let mut table = Table::new(&["log_r", "n", "N", "m_inf", "m_zero", "T", "jensen_residual", "n_theta"]).with_plot(
        "Nevanlinna characteristic",
        0,
        &[2, 5],
    );
    let mut samples = Vec::with_capacity(grid.len());
    let opts = opts.with_rel_tol(opts.rel_tol.min(JENSEN_QUAD_TOL));
    for &l in grid {
        let s = stage("characteristic", characteristic_sample(f, l, &opts, true))?;
        table.push(vec![
            num(s.log_r),
            num(s.n_count),
            num(s.n_zeros),
            num(s.m_inf),
            opt(s.m_zero),
            num(s.t),
            opt(s.jensen_residual),
            s.n_theta.to_string(),
        ]);
        samples.push(s);
    }
    Ok((table, samples))
}

pub fn jensen_max(samples: &[CharacteristicSample]) -> f64 {
    samples
        .iter()
        .map(|s| s.jensen_residual.map_or(f64::INFINITY, f64::abs))
        .fold(0.0, f64::max)
}
