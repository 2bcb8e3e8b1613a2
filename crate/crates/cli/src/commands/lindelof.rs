use serde::Serialize;
use serde_json::{json, Value};

use nevlab_core::nevanlinna::order_fit;
use nevlab_core::{delta_n_lindelof_closed_form, lindelof_zeros, CanonicalProduct, Evaluator, LogComplex};

use super::{characteristic_table, jensen_holds, jensen_max, quad, Output};
use crate::args::{parse_complex, stage, GridArgs};
use crate::output::Summary;
use crate::Common;

#[derive(clap::Args, Debug, Serialize)]
pub struct LindelofArgs {
    #[arg(long, default_value_t = 0.75)]
    pub rho: f64,
    /// Defaults to ten radii from 10 to 1e6.
    #[command(flatten)]
    pub grid: GridArgs,
    /// Points `re,im` at which to evaluate L_rho.
    #[arg(long = "at", value_parser = parse_complex, allow_hyphen_values = true)]
    pub at: Vec<(f64, f64)>,
}

pub fn run(a: &LindelofArgs, c: &Common, config: Value) -> Output {
    let f = stage("product", lindelof_zeros(a.rho).and_then(CanonicalProduct::new))?;
    let grid = a.grid.log_r((10f64.ln(), 1e6f64.ln(), 10))?;
    let (table, samples) = characteristic_table(&f, &grid, &quad(c))?;
    let mut s = Summary::new("lindelof", config);
    s.metric("rho", a.rho);
    s.metric("genus", f.genus);
    s.metric("closed_form_delta_n", delta_n_lindelof_closed_form(a.rho));
    let ratios: Vec<f64> = samples.iter().filter(|p| p.t > 0.0).map(|p| p.n_zeros / p.t).collect();
    if !ratios.is_empty() {
        let tail = &ratios[ratios.len() - ratios.len().div_ceil(3)..];
        s.metric(
            "delta_n_tail",
            1.0 - tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        );
    }
    let (lr, t): (Vec<f64>, Vec<f64>) = samples.iter().map(|p| (p.log_r, p.t)).unzip();
    if let Ok(e) = order_fit(&lr, &t) {
        s.metric("order_estimate", e.estimate);
    }
    let evals: Vec<Value> =
        a.at.iter()
            .map(|&(re, im)| {
                let v = f.eval(LogComplex::from_complex(num_complex::Complex64::new(re, im)));
                json!({"z": [re, im], "log_abs": v.log_mag, "arg": v.phase})
            })
            .collect();
    s.metric("evaluations", evals);
    let jm = jensen_max(&samples);
    s.metric("jensen_max", jm);
    s.verdict("jensen_identity", jensen_holds(&samples));
    Ok((table, s))
}
