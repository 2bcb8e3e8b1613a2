use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use nevlab_core::interpolation::fixtures::{exp_with_sine, fixture_residual, fourth_order, gaussian_sine};
use nevlab_core::interpolation::random_disc_points;

use super::Output;
use crate::args::stage;
use crate::output::{num, Summary, Table};
use crate::Common;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    All,
    ExpSine,
    GaussianSine,
    FourthOrder,
}

#[derive(clap::Args, Debug, Serialize)]
pub struct ResidualArgs {
    #[arg(long, value_enum, default_value_t = Fixture::All)]
    pub fixture: Fixture,
}

/// `(name, points, radius, tolerance)` of each fixture's point set.
const SETS: [(Fixture, &str, usize, f64, f64); 3] = [
    (Fixture::ExpSine, "exp-sine", 20, 5.0, 1e-10),
    (Fixture::GaussianSine, "gaussian-sine", 20, 5.0, 1e-10),
    (Fixture::FourthOrder, "fourth-order", 10, 3.0, 1e-8),
];

pub fn run(a: &ResidualArgs, c: &Common, config: Value) -> Output {
    let mut table = Table::new(&["fixture", "point", "re", "im", "residual"]);
    let mut s = Summary::new("residual", config);
    let mut all_ok = true;
    let mut per = serde_json::Map::new();
    for (i, &(which, name, count, radius, tol)) in SETS.iter().enumerate() {
        if a.fixture != Fixture::All && a.fixture != which {
            continue;
        }
        let fixture = match which {
            Fixture::ExpSine => exp_with_sine(),
            Fixture::GaussianSine => gaussian_sine(),
            _ => fourth_order(),
        };
        let seed = c.seed.wrapping_add(i as u64);
        let r = stage("fixture residual", fixture_residual(&fixture, count, radius, seed))?;
        for (j, (z, v)) in random_disc_points(count, radius, seed)
            .iter()
            .zip(&r.per_point)
            .enumerate()
        {
            let zc = z.to_complex();
            table.push(vec![name.into(), j.to_string(), num(zc.re), num(zc.im), num(*v)]);
        }
        let ok = r.max <= tol && r.flagged.is_empty();
        all_ok &= ok;
        per.insert(
            name.into(),
            json!({"max": r.max, "tolerance": tol, "points": count, "radius": radius, "flagged": r.flagged}),
        );
    }
    s.metric("fixtures", per);
    s.verdict("fixture_residuals", all_ok);
    Ok((table, s))
}
