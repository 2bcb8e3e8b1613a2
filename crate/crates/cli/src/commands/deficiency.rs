use serde::Serialize;
use serde_json::Value;

use nevlab_core::nevanlinna::Trend;
use nevlab_core::{deficiency_scan, delta_n_lindelof_closed_form, Target};

use super::{quad, Output};
use crate::args::{stage, usage, Failure, FunctionArgs, GridArgs, Kind};
use crate::output::{num, opt, Summary, Table};
use crate::Common;

/// Allowed distance between the tail estimate and the closed form.
pub const LINDELOF_TOL: f64 = 0.05;

#[derive(clap::Args, Debug, Serialize)]
pub struct DeficiencyArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Defaults to five radii from 1e4 to 1e12.
    #[command(flatten)]
    pub grid: GridArgs,
    /// `0`, `inf`, or a value `re,im`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub target: String,
    /// Number of trailing radii for the bounds (default: last third).
    #[arg(long)]
    pub tail: Option<usize>,
}

fn parse_target(s: &str) -> Result<Target, Failure> {
    match s.trim() {
        "0" => Ok(Target::Zero),
        "inf" | "infinity" => Ok(Target::Infinity),
        t => match crate::args::parse_complex(t) {
            Ok((re, im)) if re == 0.0 && im == 0.0 => Ok(Target::Zero),
            Ok((re, im)) => Ok(Target::Value { re, im }),
            Err(e) => usage(format!("target `{t}`: {e}")),
        },
    }
}

pub fn run(a: &DeficiencyArgs, c: &Common, config: Value) -> Output {
    let f = a.function.build()?;
    let target = parse_target(&a.target)?;
    let grid = a
        .grid
        .log_r((4.0 * std::f64::consts::LN_10, 12.0 * std::f64::consts::LN_10, 5))?;
    let scan = stage("deficiency scan", deficiency_scan(&f, target, &grid, a.tail, &quad(c)))?;
    let mut table = Table::new(&["log_r", "n", "N", "m_inf", "T", "ratio_N_over_T"]).with_plot("N/T", 0, &[5]);
    for p in &scan.points {
        table.push(vec![
            num(p.log_r),
            num(p.n_count),
            num(p.n_target),
            num(p.m_inf),
            num(p.t),
            opt(p.ratio),
        ]);
    }
    let mut s = Summary::new("deficiency", config);
    s.metric("target", target);
    s.metric("delta_n_lower", scan.delta_n_lower);
    s.metric("delta_v_lower", scan.delta_v_lower);
    s.metric("tail_estimate", scan.delta_n_lower);
    s.metric("tail", scan.tail);
    s.metric("trend", scan.trend);
    s.metric("tail_trend", scan.tail_trend);
    s.metric("monotone", scan.trend != Trend::Mixed);
    s.metric("excluded", &scan.excluded);
    s.metric("unconverged", scan.points.iter().filter(|p| !p.converged).count());
    if a.function.kind == Kind::Lindelof && target == Target::Zero {
        let closed = delta_n_lindelof_closed_form(a.function.rho());
        s.metric("closed_form", closed);
        s.metric("distance_to_closed_form", (scan.delta_n_lower - closed).abs());
        s.verdict(
            "lindelof_deficiency",
            (scan.delta_n_lower - closed).abs() <= LINDELOF_TOL,
        );
    }
    Ok((table, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets() {
        assert_eq!(parse_target("0").unwrap(), Target::Zero);
        assert_eq!(parse_target("inf").unwrap(), Target::Infinity);
        assert_eq!(parse_target("2,1").unwrap(), Target::Value { re: 2.0, im: 1.0 });
        assert!(parse_target("x").is_err());
    }
}
