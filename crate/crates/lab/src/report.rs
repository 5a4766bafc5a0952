//! Check records, suite reports and their on-disk form.
//!
//! Reports contain no timestamps so that repeated runs are byte-identical;
//! the wall-clock stamp of a run is written to its own file.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The check does not apply to the configured domain.
    Refused,
}

/// One check. `residual` is compared with `tolerance`; `measured` is the
/// natural quantity behind it (equal to `residual` for "at most" checks).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub inputs_digest: String,
    pub measured: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl CheckRecord {
    /// Passes when `residual ≤ tolerance`. NaN and infinite residuals fail.
    pub fn at_most(check: impl Into<String>, digest: String, residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            inputs_digest: digest,
            measured: finite(residual),
            residual: finite(residual),
            tolerance,
            verdict: if residual <= tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    /// Passes when `measured ≥ threshold`; the residual is the shortfall.
    pub fn at_least(check: impl Into<String>, digest: String, measured: f64, threshold: f64) -> Self {
        let shortfall = if measured.is_nan() {
            f64::NAN
        } else {
            (threshold - measured).max(0.0)
        };
        Self {
            check: check.into(),
            inputs_digest: digest,
            measured: finite(measured),
            residual: finite(shortfall),
            tolerance: 0.0,
            verdict: if measured >= threshold {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    pub fn holds(check: impl Into<String>, digest: String, ok: bool) -> Self {
        Self {
            check: check.into(),
            inputs_digest: digest,
            measured: None,
            residual: Some(if ok { 0.0 } else { 1.0 }),
            tolerance: 0.0,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    pub fn refused(check: impl Into<String>, digest: String) -> Self {
        Self {
            check: check.into(),
            inputs_digest: digest,
            measured: None,
            residual: None,
            tolerance: 0.0,
            verdict: Verdict::Refused,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// SHA-256 of a check name and the canonical form of its inputs.
pub fn digest(check: &str, inputs: &str) -> String {
    let mut h = Sha256::new();
    h.update(check.as_bytes());
    h.update([0]);
    h.update(inputs.as_bytes());
    hex::encode(h.finalize())
}

/// A numeric table exported as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub domain: String,
    pub seed: u64,
    pub environment: Environment,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckRecord>,
    /// Structured results beyond the pass/fail records.
    pub details: serde_json::Map<String, serde_json::Value>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl SuiteReport {
    pub fn new(suite: &str, domain: &str, seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            domain: domain.to_string(),
            seed,
            environment: Environment::current(),
            passed: 0,
            failed: 0,
            checks: Vec::new(),
            details: serde_json::Map::new(),
            tables: Vec::new(),
        }
    }

    pub fn check(&mut self, record: CheckRecord) {
        if record.passed() {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.checks.push(record);
    }

    pub fn detail<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).expect("details serialize");
        self.details.insert(key.to_string(), v);
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// Writes `<suite>.json` and one `<suite>_<table>.csv` per table.
    pub fn write(&self, dir: &Path) -> Result<(), LabError> {
        fs::create_dir_all(dir)?;
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        fs::write(dir.join(format!("{}.json", self.suite)), json)?;
        for t in &self.tables {
            let mut w = csv::Writer::from_path(dir.join(format!("{}_{}.csv", self.suite, t.name)))?;
            w.write_record(&t.header)?;
            for row in &t.rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(
            CheckRecord::at_most("a", String::new(), 1e-12, 1e-10).verdict,
            Verdict::Pass
        );
        assert_eq!(
            CheckRecord::at_most("a", String::new(), 1e-9, 1e-10).verdict,
            Verdict::Fail
        );
        assert_eq!(
            CheckRecord::at_most("a", String::new(), f64::NAN, 1.0).verdict,
            Verdict::Fail
        );
        let r = CheckRecord::at_least("g", String::new(), 1.5, 1.9);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!((r.residual.unwrap() - 0.4).abs() < 1e-15);
        assert!(CheckRecord::refused("c", String::new()).passed());
    }

    #[test]
    fn digests_depend_on_name_and_inputs() {
        let a = digest("cocycle", "{}");
        assert_eq!(a.len(), 64);
        assert_ne!(a, digest("cocycle", "{ }"));
        assert_ne!(a, digest("cocyclf", "{}"));
        assert_eq!(a, digest("cocycle", "{}"));
    }

    #[test]
    fn counts_follow_checks() {
        let mut r = SuiteReport::new("s", "circle", 1);
        r.check(CheckRecord::holds("x", String::new(), true));
        r.check(CheckRecord::holds("y", String::new(), false));
        assert_eq!((r.passed, r.failed), (1, 1));
        assert!(!r.all_passed());
    }
}
