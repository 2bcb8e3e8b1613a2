use serde::Serialize;
use serde_json::Value;

use super::{characteristic_table, jensen_holds, jensen_max, quad, Output};
use crate::args::{FunctionArgs, GridArgs};
use crate::output::Summary;
use crate::Common;

#[derive(clap::Args, Debug, Serialize)]
pub struct CharacteristicArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Defaults to ten radii from 2 to 1e6.
    #[command(flatten)]
    pub grid: GridArgs,
}

pub fn run(a: &CharacteristicArgs, c: &Common, config: Value) -> Output {
    let f = a.function.build()?;
    let grid = a.grid.log_r((2f64.ln(), 1e6f64.ln(), 10))?;
    let (table, samples) = characteristic_table(&f, &grid, &quad(c))?;
    let mut s = Summary::new("characteristic", config);
    let jm = jensen_max(&samples);
    s.metric("kind", f.zeros.kind_name());
    s.metric("genus", f.genus);
    s.metric("jensen_max", jm);
    s.metric("unconverged", samples.iter().filter(|p| !p.converged).count());
    s.verdict("jensen_identity", jensen_holds(&samples));
    Ok((table, s))
}
