use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use nevlab_core::separation::WITNESS_EXPONENTS;
use nevlab_core::{
    ac_min_chord, ac_separation_decomposition, separation_scan_range, witness_search_range, SeparationReport, Verdict,
    Weight,
};

use super::Output;
use crate::args::{stage, usage, Failure, FunctionArgs, Kind};
use crate::output::{num, Summary, Table};
use crate::Common;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    /// `x^q`
    Power,
    /// `log(1 + x)^q`
    LogPower,
    /// `x^q log x^q`
    Refined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    /// Some swept `C` reaches the threshold, for every `q`.
    Witness,
    BoundedBelow,
    Decaying,
}

#[derive(clap::Args, Debug, Serialize)]
pub struct SeparationArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum, default_value_t = WeightKind::Power)]
    pub weight: WeightKind,
    /// Weight exponents, comma separated (refined weight: defaults to rho).
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    /// `auto` (witness search), `sweep` (every C = 2^j), or a number.
    #[arg(long = "C", default_value = "auto")]
    pub c: String,
    /// Last zero index scanned.
    #[arg(long = "K", default_value_t = 200)]
    pub k: usize,
    /// First zero index scanned.
    #[arg(long, default_value_t = 1)]
    pub k_start: usize,
    /// Threshold on the log infimum for `--C auto` (default log 1/2).
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,
    /// Expected outcome (default: witness for auto, else bounded-below).
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

enum CSpec {
    Auto,
    Sweep,
    Fixed(f64),
}

fn parse_c(s: &str) -> Result<CSpec, Failure> {
    match s {
        "auto" => Ok(CSpec::Auto),
        "sweep" => Ok(CSpec::Sweep),
        t => match t.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(CSpec::Fixed(v)),
            _ => usage(format!("--C must be auto, sweep or a positive number, got `{t}`")),
        },
    }
}

fn weight(kind: WeightKind, q: f64) -> Weight {
    match kind {
        WeightKind::Power => Weight::Power { q },
        WeightKind::LogPower => Weight::LogPower { q },
        WeightKind::Refined => Weight::Refined { rho: q },
    }
}

fn summarize(r: &SeparationReport, q: f64) -> Value {
    json!({
        "q": q,
        "C": r.c,
        "inf_log": r.inf_log,
        "argmin": r.argmin,
        "verdict": r.verdict,
        "slope": r.slope,
        "slope_stderr": r.slope_stderr,
        "flagged": r.flagged,
    })
}

pub fn run(a: &SeparationArgs, _c: &Common, config: Value) -> Output {
    let f = a.function.build()?;
    let cspec = parse_c(&a.c)?;
    let qs = if a.q.is_empty() {
        vec![if a.weight == WeightKind::Refined {
            a.function.rho()
        } else {
            1.0
        }]
    } else {
        a.q.clone()
    };
    let expect = a.expect.unwrap_or(match cspec {
        CSpec::Auto => Expect::Witness,
        _ => Expect::BoundedBelow,
    });
    let threshold = a.threshold.unwrap_or(-std::f64::consts::LN_2);
    let mut table = Table::new(&["q", "C", "k", "log_abs_z", "value"]);
    let mut scans = Vec::new();
    let mut witnesses = Vec::new();
    let mut ok = true;
    for &q in &qs {
        let w = weight(a.weight, q);
        let reports: Vec<SeparationReport> = match cspec {
            CSpec::Auto => {
                let wit = stage("witness search", witness_search_range(&f, w, a.k_start, a.k, threshold))?;
                witnesses.push(json!({"q": q, "C": wit.c, "threshold": threshold}));
                ok &= match expect {
                    Expect::Witness => wit.c.is_some(),
                    Expect::BoundedBelow => wit.report.verdict == Verdict::BoundedBelow,
                    Expect::Decaying => wit.report.verdict == Verdict::Decaying,
                };
                vec![wit.report]
            }
            CSpec::Sweep => WITNESS_EXPONENTS
                .map(|j| {
                    stage(
                        "separation scan",
                        separation_scan_range(&f, w, 2f64.powi(j), a.k_start, a.k),
                    )
                })
                .collect::<Result<_, _>>()?,
            CSpec::Fixed(cv) => vec![stage(
                "separation scan",
                separation_scan_range(&f, w, cv, a.k_start, a.k),
            )?],
        };
        for r in &reports {
            if !matches!(cspec, CSpec::Auto) {
                ok &= match expect {
                    Expect::Witness => r.inf_log >= threshold,
                    Expect::BoundedBelow => r.verdict == Verdict::BoundedBelow,
                    Expect::Decaying => r.verdict == Verdict::Decaying,
                };
            }
            for (i, v) in r.per_k.iter().enumerate() {
                let k = r.k_start + i;
                table.push(vec![
                    num(q),
                    num(r.c),
                    k.to_string(),
                    num(f.zeros.point(k).log_mag),
                    num(*v),
                ]);
            }
            scans.push(summarize(r, q));
        }
    }
    let mut s = Summary::new("separation", config);
    s.metric("kind", f.zeros.kind_name());
    s.metric("expect", expect);
    s.metric("scans", scans);
    if !witnesses.is_empty() {
        s.metric("witnesses", witnesses);
    }
    if a.function.kind == Kind::Ac {
        let p = f.zeros.ac_params().unwrap();
        let mut parts = Vec::new();
        for i in 2..=p.addressable_circles() {
            let (p1, p2, p3) = stage("decomposition", ac_separation_decomposition(p, i, 1))?;
            let chord = ac_min_chord(p, i).ok().map(|(m, c)| json!({"min": m, "chord": c}));
            parts.push(json!({"circle": i, "log_P1": p1, "log_P2": p2, "log_P3": p3, "chord": chord}));
        }
        s.metric("decomposition", parts);
    }
    s.verdict("separation", ok);
    Ok((table, s))
}
