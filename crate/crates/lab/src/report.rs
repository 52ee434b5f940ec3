//! Experiment reports: a table of rows (CSV) plus metadata, fitted summaries
//! and pass/fail checks (JSON).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use momentspace::{Error, Result};

use crate::config::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            // shortest round-trip decimal, exponent form for extremes
            Cell::Float(v) => write!(f, "{v:?}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// One verdict. Hard checks decide the exit status; soft ones are reported.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub hard: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub seed: u64,
    pub crate_version: String,
    pub config: ExperimentConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig, columns: &[&str]) -> Self {
        ExperimentReport {
            schema_version: config.schema_version,
            experiment: config.experiment.id().to_string(),
            seed: config.seed,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn summarize(&mut self, key: &str, value: f64) {
        self.summary.insert(key.to_string(), value);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), passed, hard: true, detail });
    }

    pub fn observe(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), passed, hard: false, detail });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Whether every hard check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| c.hard).all(|c| c.passed)
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Column `name` as floats; non-numeric cells are skipped.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.columns.iter().position(|c| c == name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| match &r[i] {
                Cell::Float(v) => Some(*v),
                Cell::Int(v) => Some(*v as f64),
                Cell::Text(_) => None,
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Experiment, ExperimentConfig};

    #[test]
    fn csv_and_verdicts() {
        let config = ExperimentConfig::new(Experiment::default_for("ldp").unwrap(), 1);
        let mut r = ExperimentReport::new(&config, &["n", "value", "label"]);
        r.push_row(vec![50u64.into(), 0.1.into(), "a".into()]);
        r.push_row(vec![100u64.into(), 1e-20.into(), "b,c".into()]);
        assert_eq!(r.to_csv().unwrap(), "n,value,label\n50,0.1,a\n100,1e-20,\"b,c\"\n");
        assert_eq!(r.column("value"), vec![0.1, 1e-20]);
        r.observe("soft", false, String::new());
        assert!(r.passed());
        r.check("hard", false, String::new());
        assert!(!r.passed());
        assert!(r.to_json().unwrap().contains("\"experiment\": \"ldp\""));
    }
}
