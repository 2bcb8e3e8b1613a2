//! Tables, JSON summaries and the files they are written to.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::plot::{self, Series};

/// Formats a float so that it parses back to the same value. Moderate
/// magnitudes are printed positionally, the rest in exponent form.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Which columns of a [`Table`] to draw.
pub struct PlotSpec {
    pub title: String,
    pub x: usize,
    pub ys: Vec<usize>,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub plot: Option<PlotSpec>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
            plot: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn with_plot(mut self, title: &str, x: usize, ys: &[usize]) -> Self {
        self.plot = Some(PlotSpec {
            title: title.to_string(),
            x,
            ys: ys.to_vec(),
        });
        self
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).unwrap();
        for r in &self.rows {
            w.write_record(r).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn to_svg(&self) -> Option<String> {
        let ps = self.plot.as_ref()?;
        let series: Vec<Series> = ps
            .ys
            .iter()
            .map(|&y| Series {
                name: self.header[y].to_string(),
                points: self
                    .rows
                    .iter()
                    .filter_map(|r| Some((r[ps.x].parse().ok()?, r[y].parse().ok()?)))
                    .filter(|(a, b): &(f64, f64)| a.is_finite() && b.is_finite())
                    .collect(),
            })
            .collect();
        Some(plot::line_plot(&ps.title, self.header[ps.x], &series))
    }
}

/// The machine-readable record of one run.
pub struct Summary {
    pub command: &'static str,
    pub config: Value,
    pub metrics: Map<String, Value>,
    pub verdicts: BTreeMap<&'static str, bool>,
    pub runtime_seconds: Option<f64>,
}

impl Summary {
    pub fn new(command: &'static str, config: Value) -> Self {
        Summary {
            command,
            config,
            metrics: Map::new(),
            verdicts: BTreeMap::new(),
            runtime_seconds: None,
        }
    }

    pub fn metric(&mut self, key: &str, v: impl Serialize) {
        self.metrics.insert(key.to_string(), serde_json::to_value(v).unwrap());
    }

    pub fn verdict(&mut self, name: &'static str, pass: bool) {
        self.verdicts.insert(name, pass);
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.verdicts.iter().filter(|(_, &p)| !p).map(|(&n, _)| n).collect()
    }

    pub fn to_json(&self) -> String {
        let verdicts: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|(k, &v)| (k.to_string(), Value::from(if v { "pass" } else { "fail" })))
            .collect();
        let mut root = Map::new();
        root.insert("schema".into(), 1.into());
        root.insert("command".into(), self.command.into());
        root.insert("config_echo".into(), self.config.clone());
        root.insert("metrics".into(), Value::Object(self.metrics.clone()));
        root.insert("verdicts".into(), Value::Object(verdicts));
        root.insert(
            "runtime_seconds".into(),
            self.runtime_seconds.map_or(Value::Null, Value::from),
        );
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).unwrap();
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Plot,
}

/// Writes `<command>.csv`, `.json` and `.svg` as selected.
pub fn write_all(dir: &Path, table: &Table, summary: &Summary, formats: &[Format]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let stem = summary.command;
    if formats.contains(&Format::Csv) {
        fs::write(dir.join(format!("{stem}.csv")), table.to_csv())?;
    }
    if formats.contains(&Format::Json) {
        fs::write(dir.join(format!("{stem}.json")), summary.to_json())?;
    }
    if formats.contains(&Format::Plot) {
        if let Some(svg) = table.to_svg() {
            fs::write(dir.join(format!("{stem}.svg")), svg)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.5, -2.25e-9, 3.0e300, 0.292893, 1e15, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(324.0), "324");
        assert_eq!(num(1e-12), "1e-12");
    }

    #[test]
    fn summary_layout() {
        let mut s = Summary::new("oracle", serde_json::json!({"samples": 3}));
        s.metric("violations", 0);
        s.verdict("power_inequalities", true);
        s.verdict("sandwich_bound", false);
        let v: Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["verdicts"]["sandwich_bound"], "fail");
        assert_eq!(v["runtime_seconds"], Value::Null);
        assert_eq!(s.failed(), vec!["sandwich_bound"]);
    }
}
