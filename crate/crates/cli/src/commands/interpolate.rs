use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use nevlab_core::interpolation::{growth_evidence, log_growth_evidence, random_regular_points};
use nevlab_core::{build_coefficients, interpolation_report, ode_residual, Evaluator, Variant};

use super::{quad, Output};
use crate::args::{stage, FunctionArgs, GridArgs};
use crate::output::{num, opt, Summary, Table};
use crate::Common;

pub const INTERPOLATION_TOL: f64 = 1e-8;
pub const ODE_TOL: f64 = 1e-6;
pub const ORDER_TOL: f64 = 0.15;
pub const LOG_ORDER_TOL: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    FiniteOrder,
    LogOrder,
}

#[derive(clap::Args, Debug, Serialize)]
pub struct InterpolateArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Number of interpolated zeros.
    #[arg(long = "K", default_value_t = 40)]
    pub k: usize,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = VariantArg::FiniteOrder)]
    pub variant: VariantArg,
    /// Random points for the equation residual.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    /// Smallest distance from a residual point to a zero.
    #[arg(long, default_value_t = 0.25)]
    pub min_gap: f64,
    /// Also compare the growth of f, A and B (slow for finite order).
    #[arg(long)]
    pub growth: bool,
    /// Growth radii; defaults to 1e3..1e6 (finite order) or log r in
    /// 5..150 (log order).
    #[command(flatten)]
    pub grid: GridArgs,
}

pub fn run(a: &InterpolateArgs, c: &Common, config: Value) -> Output {
    let f = a.function.build()?;
    let variant = match a.variant {
        VariantArg::FiniteOrder => Variant::FiniteOrder,
        VariantArg::LogOrder => Variant::LogOrder,
    };
    let art = stage("build coefficients", build_coefficients(&f, a.k, a.alpha, variant))?;
    let rep = stage("interpolation report", interpolation_report(&art))?;
    let mut table = Table::new(&[
        "index",
        "log_abs_z",
        "sigma_re",
        "sigma_im",
        "residue_log_abs",
        "exponent",
        "interpolation_residual",
        "numerator_residual",
        "g",
        "g_max",
    ])
    .with_plot("log|c_n| / log|z_n|", 1, &[8, 9]);
    for r in &rep.rows {
        table.push(vec![
            r.index.to_string(),
            num(r.log_abs_z),
            num(r.sigma_re),
            num(r.sigma_im),
            num(r.residue_log_abs),
            r.exponent.to_string(),
            num(r.interpolation_residual),
            num(r.numerator_residual),
            opt(r.g),
            opt(r.g_max),
        ]);
    }
    let radius = 0.5 * art.zeros[a.k - 1].to_complex().norm();
    let pts = random_regular_points(&f, a.points, radius, a.min_gap, c.seed);
    let (ae, be) = (art.a_evaluator(), art.b_evaluator());
    let coeffs: [&dyn Evaluator; 2] = [&be, &ae];
    let ode = stage("equation residual", ode_residual(&coeffs, &f, &pts))?;

    let mut s = Summary::new("interpolate", config);
    s.metric("kind", f.zeros.kind_name());
    s.metric("dropped", &art.dropped);
    s.metric("max_interpolation_residual", rep.max_interpolation_residual);
    s.metric("max_numerator_residual", rep.max_numerator_residual);
    s.metric(
        "ode_residual",
        json!({"max": ode.max, "points": a.points, "radius": radius, "flagged": ode.flagged}),
    );
    s.metric("nontriviality", &rep.nontriviality);
    s.verdict(
        "interpolation_residual",
        rep.max_interpolation_residual <= INTERPOLATION_TOL,
    );
    s.verdict("numerator_residual", rep.max_numerator_residual <= INTERPOLATION_TOL);
    s.verdict("ode_residual", ode.max <= ODE_TOL && ode.flagged.is_empty());
    if a.growth {
        let opts = quad(c);
        match variant {
            Variant::FiniteOrder => {
                let ln10 = std::f64::consts::LN_10;
                let grid = a.grid.log_r((3.0 * ln10, 6.0 * ln10, 7))?;
                let ev = stage("growth evidence", growth_evidence(&art, &grid, &opts))?;
                let (ef, ea, eb) = (ev.f.estimate, ev.a.estimate, ev.b.estimate);
                s.metric(
                    "growth",
                    json!({"label": ev.label, "log_r": ev.log_r, "order_f": ef, "order_A": ea, "order_B": eb, "tolerance": ORDER_TOL}),
                );
                s.verdict(
                    "growth_evidence",
                    eb <= ea + ORDER_TOL && ea + ORDER_TOL <= ef + 2.0 * ORDER_TOL,
                );
            }
            Variant::LogOrder => {
                let grid = a.grid.log_r((5.0, 150.0, 8))?;
                let ev = stage("growth evidence", log_growth_evidence(&art, &grid, &opts))?;
                let (ef, ea, eb) = (
                    ev.f.from_characteristic.estimate,
                    ev.a.from_characteristic.estimate,
                    ev.b.from_characteristic.estimate,
                );
                s.metric(
                    "growth",
                    json!({
                        "label": ev.label,
                        "log_r": ev.log_r,
                        "log_order_f": ef,
                        "log_order_A": ea,
                        "log_order_B": eb,
                        "log_order_f_from_counting": ev.f.from_counting.map(|e| e.estimate),
                        "tolerance": LOG_ORDER_TOL,
                    }),
                );
                s.verdict(
                    "growth_evidence",
                    eb <= ea + LOG_ORDER_TOL && ea + LOG_ORDER_TOL <= ef + 2.0 * LOG_ORDER_TOL,
                );
            }
        }
    }
    Ok((table, s))
}
