//! One module per subcommand. Each suite builds its inputs from the
//! configuration, runs its checks and returns a [`SuiteReport`].

mod conformal;
mod fock;
mod gauge;
mod ladders;
mod seminorms;
mod spectrum;

use gauge_energy_core::grid::build_grid;
use gauge_energy_core::GridManifold;

use crate::config::ExperimentConfig;
use crate::error::{Context, LabError};
use crate::report::SuiteReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Spectrum,
    Ladders,
    Seminorms,
    Gauge,
    Fock,
    Conformal,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Spectrum,
        Suite::Ladders,
        Suite::Seminorms,
        Suite::Gauge,
        Suite::Fock,
        Suite::Conformal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectrum => "spectrum",
            Suite::Ladders => "ladders",
            Suite::Seminorms => "seminorms",
            Suite::Gauge => "gauge",
            Suite::Fock => "fock",
            Suite::Conformal => "conformal",
        }
    }

    pub fn run(self, config: &ExperimentConfig) -> Result<SuiteReport, LabError> {
        match self {
            Suite::Spectrum => spectrum::run(config),
            Suite::Ladders => ladders::run(config),
            Suite::Seminorms => seminorms::run(config),
            Suite::Gauge => gauge::run(config),
            Suite::Fock => fock::run(config),
            Suite::Conformal => conformal::run(config),
        }
    }
}

fn grid(config: &ExperimentConfig, nodes: usize) -> Result<GridManifold, LabError> {
    build_grid(&config.domain.spec_with(nodes)).context("grid construction")
}

fn new_report(suite: Suite, config: &ExperimentConfig) -> SuiteReport {
    SuiteReport::new(suite.name(), config.domain.shape().name(), config.seed)
}
