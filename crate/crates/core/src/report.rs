//! Output formatting shared by every writer: fixed 12-significant-digit
//! numbers, CSV tables, and the JSON run report.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub const SCHEMA: &str = "hooley-ff/report/v1";

/// `{:.11e}` with negative zero printed as zero, so reruns are byte-identical.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return fmt_num_raw(0.0);
    }
    fmt_num_raw(x)
}

fn fmt_num_raw(x: f64) -> String {
    format!("{x:.11e}")
}

/// A named CSV table with string cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))
    }

    /// Write to `<dir>/<stem>_<name>.csv`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        let path = dir.join(format!("{stem}_{}.csv", self.name));
        fs::write(&path, self.to_csv_bytes()?)?;
        Ok(path)
    }
}

/// One asserted comparison in a run.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Whether a failure is what the experiment is designed to show.
    pub expected_failure: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, expected_failure: false, detail: detail.into() }
    }

    pub fn expect_fail(mut self) -> Self {
        self.expected_failure = true;
        self
    }

    /// Counts against the run outcome: an unexpected failure, or an
    /// expected failure that did not happen.
    pub fn is_bad(&self) -> bool {
        self.passed == self.expected_failure
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub experiment: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub warnings: Vec<String>,
    pub checks: Vec<Check>,
    pub summary: serde_json::Value,
    pub tables: Vec<String>,
    pub all_passed: bool,
}

impl Report {
    pub fn new(experiment: impl Into<String>, seed: u64, config: serde_json::Value) -> Self {
        Report {
            schema: SCHEMA,
            experiment: experiment.into(),
            seed,
            config,
            warnings: Vec::new(),
            checks: Vec::new(),
            summary: serde_json::Value::Null,
            tables: Vec::new(),
            all_passed: true,
        }
    }

    pub fn finish(&mut self) {
        self.all_passed = !self.checks.iter().any(Check::is_bad);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable") + "\n"
    }
}
