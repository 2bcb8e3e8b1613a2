use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use nevlab_core::{check_power_inequalities, eval_poly_factor, LogComplex};

use super::Output;
use crate::args::stage;
use crate::output::{num, Summary, Table};
use crate::Common;

#[derive(clap::Args, Debug, Serialize)]
pub struct OracleArgs {
    /// Random draws per power-inequality family.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Random `(m, b, r)` triples for the sandwich bound.
    #[arg(long, default_value_t = 100)]
    pub sandwich: usize,
}

/// `log(1 + e^x)` without overflow.
fn log1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Violations of `(m/2) log(1 + r^2/b^2) <= log P_{m,b}(r) <= m log(1 + r/b)`
/// over random `m <= 50`, `b in [1, e^10]`, `r in [b/10, 10 b]`, with 4-ulp
/// slack.
pub fn sandwich_violations(count: usize, seed: u64) -> nevlab_core::Result<(usize, Vec<[f64; 5]>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let m: u128 = rng.gen_range(1..=50);
        let lb: f64 = rng.gen_range(0.0..10.0);
        let u: f64 = rng.gen_range(-std::f64::consts::LN_10..std::f64::consts::LN_10);
        let (v, _) = eval_poly_factor(m, lb, LogComplex::new(lb + u, 0.0))?;
        let lo = m as f64 / 2.0 * log1p_exp(2.0 * u);
        let hi = m as f64 * log1p_exp(u);
        let slack = 4.0 * f64::EPSILON * hi.abs().max(1.0);
        if !(lo <= v.log_mag + slack && v.log_mag <= hi + slack) {
            bad += 1;
        }
        rows.push([m as f64, lb, lb + u, lo, v.log_mag]);
    }
    Ok((bad, rows))
}

pub fn run(a: &OracleArgs, c: &Common, config: Value) -> Output {
    let powers = check_power_inequalities(a.samples, c.seed);
    let (sandwich, _) = stage("sandwich", sandwich_violations(a.sandwich, c.seed))?;
    let mut table = Table::new(&["check", "samples", "violations"]);
    table.push(vec![
        "power_k_n".into(),
        a.samples.to_string(),
        powers.violations_k_n.to_string(),
    ]);
    table.push(vec![
        "power_a_b".into(),
        a.samples.to_string(),
        powers.violations_a_b.to_string(),
    ]);
    table.push(vec!["sandwich".into(), a.sandwich.to_string(), sandwich.to_string()]);
    let mut s = Summary::new("oracle", config);
    s.metric("violations", powers.violations());
    s.metric("power_inequalities", powers);
    s.metric("sandwich_violations", sandwich);
    s.metric("slack_ulps", num(4.0));
    s.verdict("power_inequalities", powers.violations() == 0);
    s.verdict("sandwich_bound", sandwich == 0);
    Ok((table, s))
}
