//! Experiment configuration, seeded check suites and report output for
//! `gauge-energy-core`, plus the `gauge-lab` command line.

pub mod config;
pub mod error;
pub mod report;
pub mod sets;
pub mod suites;

use std::fs;
use std::path::Path;

use serde::Serialize;

pub use config::ExperimentConfig;
pub use error::LabError;
pub use report::{CheckRecord, SuiteReport, Verdict};
pub use suites::Suite;

#[derive(Serialize)]
struct SummaryLine<'a> {
    suite: &'a str,
    passed: usize,
    failed: usize,
}

/// Runs the suites in order and writes their reports into `out`. With more
/// than one suite a `summary.json` is written as well.
pub fn run_suites(suites: &[Suite], config: &ExperimentConfig, out: &Path) -> Result<Vec<SuiteReport>, LabError> {
    let mut reports = Vec::with_capacity(suites.len());
    for suite in suites {
        let report = suite.run(config)?;
        report.write(out)?;
        reports.push(report);
    }
    if suites.len() > 1 {
        let lines: Vec<SummaryLine> = reports
            .iter()
            .map(|r| SummaryLine {
                suite: &r.suite,
                passed: r.passed,
                failed: r.failed,
            })
            .collect();
        let mut json = serde_json::to_string_pretty(&lines)?;
        json.push('\n');
        fs::write(out.join("summary.json"), json)?;
    }
    Ok(reports)
}
