//! `nevlab`: scans and verification runs over canonical products.

mod args;
mod commands;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use args::Failure;
use output::Format;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "nevlab",
    version,
    about = "Nevanlinna theory experiments on canonical products"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags every command accepts.
#[derive(clap::Args, Clone, Debug, Serialize)]
pub struct Common {
    /// Directory for `<command>.csv`, `.json` and `.svg`.
    #[arg(long, global = true, default_value = "nevlab-out")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Outputs to write.
    #[arg(long, global = true, value_enum, value_delimiter = ',', default_value = "csv,json")]
    pub format: Vec<Format>,
    /// Seed for randomized point sets and samples.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Starting node count of the circle quadrature (power of two, >= 64).
    #[arg(long, global = true, default_value_t = 64)]
    pub n_theta: usize,
    /// Record wall-clock time in the summary (breaks byte-identity).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub timing: bool,
    /// Do not print the summary on stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
enum Command {
    /// Characteristic table, evaluation and deficiency summary of L_rho.
    Lindelof(commands::lindelof::LindelofArgs),
    /// Anderson-Clunie parameters, construction and max-modulus checks.
    Acprod(commands::acprod::AcprodArgs),
    /// T, N and m over a radius grid for any sequence kind.
    Characteristic(commands::characteristic::CharacteristicArgs),
    /// N/T over a radius grid with tail bounds on the deficiencies.
    Deficiency(commands::deficiency::DeficiencyArgs),
    /// Uniform separation scan and witness constant search.
    Separation(commands::separation::SeparationArgs),
    /// Rebuild A and B from the zeros of f and check the equation.
    Interpolate(commands::interpolate::InterpolateArgs),
    /// Residuals of the fixture equations with known solutions.
    Residual(commands::residual::ResidualArgs),
    /// Random checks of the power inequalities and the sandwich bound.
    Oracle(commands::oracle::OracleArgs),
}

fn threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("NEVLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("NEVLAB_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<output::Summary, Failure> {
    threads()?;
    if cli.common.n_theta < 64 || !cli.common.n_theta.is_power_of_two() {
        return args::usage("--n-theta must be a power of two >= 64");
    }
    let config = serde_json::to_value(cli).expect("config serializes");
    let start = Instant::now();
    let c = &cli.common;
    let (table, mut summary) = match &cli.command {
        Command::Lindelof(a) => commands::lindelof::run(a, c, config),
        Command::Acprod(a) => commands::acprod::run(a, c, config),
        Command::Characteristic(a) => commands::characteristic::run(a, c, config),
        Command::Deficiency(a) => commands::deficiency::run(a, c, config),
        Command::Separation(a) => commands::separation::run(a, c, config),
        Command::Interpolate(a) => commands::interpolate::run(a, c, config),
        Command::Residual(a) => commands::residual::run(a, c, config),
        Command::Oracle(a) => commands::oracle::run(a, c, config),
    }?;
    if c.timing {
        summary.runtime_seconds = Some(start.elapsed().as_secs_f64());
    }
    output::write_all(&c.out, &table, &summary, &c.format)
        .map_err(|e| Failure::Usage(format!("writing to {}: {e}", c.out.display())))?;
    Ok(summary)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            if !cli.common.quiet {
                print!("{}", summary.to_json());
            }
            let failed = summary.failed();
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("nevlab: verification failed: {}", failed.join(", "));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("nevlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
