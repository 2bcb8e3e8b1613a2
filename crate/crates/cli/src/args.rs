//! Flag groups shared by several commands.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use nevlab_core::sequences::read_zero_list;
use nevlab_core::{
    ac_parameters, anderson_clunie_zeros, bank_zeros, explicit_zeros, geometric_zeros, lindelof_zeros,
    paired_geometric_zeros, BankCap, CanonicalProduct, NevlabError, PairRule,
};

/// Why a run stopped before producing verdicts.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical { stage: &'static str, msg: String },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical { .. } => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Numerical { stage, msg } => write!(f, "numerical failure in stage `{stage}`: {msg}"),
        }
    }
}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Tags a core error with the stage it came from. Bad parameters are
/// usage errors; everything else is numerical.
pub fn stage<T>(name: &'static str, r: nevlab_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        NevlabError::Domain(m) => Failure::Usage(format!("{name}: {m}")),
        e @ (NevlabError::Parse { .. } | NevlabError::Io(_)) => Failure::Usage(format!("{name}: {e}")),
        e => Failure::Numerical {
            stage: name,
            msg: e.to_string(),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Lindelof,
    Bank,
    Geometric,
    Paired,
    Ac,
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairRuleArg {
    Ex1,
    Exa2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BankCapArg {
    Default,
    ExpExp,
}

/// Which canonical product to build.
#[derive(Args, Clone, Debug, Serialize)]
pub struct FunctionArgs {
    #[arg(long, value_enum, default_value_t = Kind::Lindelof)]
    pub kind: Kind,
    /// Order of the Lindelof function (default 0.75) or the AC product
    /// (default 3).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Number of AC circles.
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    /// Geometric ratio.
    #[arg(long, default_value_t = 2.0)]
    pub ratio: f64,
    /// Argument of the geometric points.
    #[arg(long, default_value_t = 0.0)]
    pub phase: f64,
    /// Exponent of the paired sequences.
    #[arg(long, default_value_t = 3.0)]
    pub pair_q: f64,
    #[arg(long, value_enum, default_value_t = PairRuleArg::Exa2)]
    pub pair_rule: PairRuleArg,
    #[arg(long, value_enum, default_value_t = BankCapArg::Default)]
    pub bank_cap: BankCapArg,
    /// Zero list for `--kind explicit`: `re im [multiplicity]` per line.
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    /// Genus override for explicit lists.
    #[arg(long)]
    pub genus: Option<u32>,
}

impl FunctionArgs {
    pub fn rho(&self) -> f64 {
        self.rho.unwrap_or(match self.kind {
            Kind::Ac => 3.0,
            _ => 0.75,
        })
    }

    pub fn build(&self) -> Result<CanonicalProduct, Failure> {
        let seq = match self.kind {
            Kind::Lindelof => stage("sequence", lindelof_zeros(self.rho()))?,
            Kind::Bank => bank_zeros(match self.bank_cap {
                BankCapArg::Default => BankCap::Default,
                BankCapArg::ExpExp => BankCap::ExpExp,
            }),
            Kind::Geometric => stage("sequence", geometric_zeros(self.ratio, self.phase))?,
            Kind::Paired => stage(
                "sequence",
                paired_geometric_zeros(
                    self.pair_q,
                    match self.pair_rule {
                        PairRuleArg::Ex1 => PairRule::Ex1,
                        PairRuleArg::Exa2 => PairRule::Exa2,
                    },
                ),
            )?,
            Kind::Ac => anderson_clunie_zeros(stage("sequence", ac_parameters(self.rho(), self.n_max))?),
            Kind::Explicit => {
                let Some(path) = &self.zeros else {
                    return usage("--kind explicit needs --zeros FILE");
                };
                let pts = stage("zero list", read_zero_list(path))?;
                stage("sequence", explicit_zeros(pts, self.genus))?
            }
        };
        stage("product", CanonicalProduct::new(seq))
    }
}

/// Radius grid: `--grid r0:r1:count` in `r`, or `--log-grid` in `log r`.
#[derive(Args, Clone, Debug, Serialize)]
pub struct GridArgs {
    /// Log-spaced radii `start:stop:count`, given in r.
    #[arg(long, conflicts_with = "log_grid")]
    pub grid: Option<String>,
    /// Radii `start:stop:count` given in log r (for radii beyond f64).
    #[arg(long)]
    pub log_grid: Option<String>,
}

fn parse_triple(s: &str) -> Result<(f64, f64, usize), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return usage(format!("grid `{s}` is not start:stop:count"));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("bad grid start `{}`", parts[0])))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("bad grid stop `{}`", parts[1])))?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("bad grid count `{}`", parts[2])))?;
    if n == 0 {
        return usage("grid count must be at least 1");
    }
    Ok((a, b, n))
}

impl GridArgs {
    /// The grid in `log r`; `default` is `(log start, log stop, count)`.
    pub fn log_r(&self, default: (f64, f64, usize)) -> Result<Vec<f64>, Failure> {
        let (a, b, n) = match (&self.grid, &self.log_grid) {
            (Some(g), _) => {
                let (a, b, n) = parse_triple(g)?;
                if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
                    return usage("grid radii must be positive and finite");
                }
                (a.ln(), b.ln(), n)
            }
            (None, Some(g)) => parse_triple(g)?,
            (None, None) => default,
        };
        if !(a.is_finite() && b.is_finite()) || (n > 1 && b <= a) {
            return usage("grid needs finite start < stop");
        }
        Ok(nevlab_core::nevanlinna::log_grid(a, b, n))
    }
}

/// Parses `re,im` (or a bare real).
pub fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let mut it = s.split(',');
    let re = it
        .next()
        .unwrap_or("")
        .trim()
        .parse::<f64>()
        .map_err(|e| e.to_string())?;
    let im = match it.next() {
        Some(t) => t.trim().parse::<f64>().map_err(|e| e.to_string())?,
        None => 0.0,
    };
    if it.next().is_some() {
        return Err(format!("`{s}` is not re,im"));
    }
    Ok((re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = GridArgs {
            grid: Some("1e4:1e12:5".into()),
            log_grid: None,
        };
        let v = g.log_r((0.0, 1.0, 2)).unwrap();
        assert_eq!(v.len(), 5);
        assert!((v[0] - 1e4f64.ln()).abs() < 1e-12 && (v[4] - 1e12f64.ln()).abs() < 1e-12);
        let g = GridArgs {
            grid: None,
            log_grid: Some("1:324:2".into()),
        };
        assert_eq!(g.log_r((0.0, 1.0, 2)).unwrap(), vec![1.0, 324.0]);
        for bad in ["1:2", "0:5:3", "5:1:3", "1:2:0", "a:2:3"] {
            let g = GridArgs {
                grid: Some(bad.into()),
                log_grid: None,
            };
            assert!(matches!(g.log_r((0.0, 1.0, 2)), Err(Failure::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn complex_points() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), (1.5, -2.0));
        assert_eq!(parse_complex("3").unwrap(), (3.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
    }
}
