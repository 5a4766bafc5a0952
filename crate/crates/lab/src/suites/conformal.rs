use gauge_energy_core::fock::{conformal_check, EnergyOperator};
use serde::Serialize;

use super::{grid, new_report, Suite};
use crate::config::ExperimentConfig;
use crate::error::{Context, LabError};
use crate::report::{digest, CheckRecord, SuiteReport};
use crate::sets;

#[derive(Serialize)]
struct Detail {
    dimension: usize,
    expected_factor: Option<f64>,
    invariance_change: f64,
    constant_change: f64,
}

pub(super) fn run(config: &ExperimentConfig) -> Result<SuiteReport, LabError> {
    let mut report = new_report(Suite::Conformal, config);
    let c = &config.conformal;
    let inputs = config.section_json(c);
    let tol = &config.tolerances;
    let g = grid(config, config.domain.nodes)?;
    let dim = g.dimension();
    let constant = vec![c.constant_sigma; g.node_count()];

    let mut rng = sets::stream(config.seed, "conformal.tuples");
    let (mut invariance, mut constant_change, mut exponent_gap, mut overlap_gap) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut expected = None;
    for _ in 0..c.tuples {
        let rho = sets::smooth_density(&g, &mut rng, config.weight.amplitude, config.weight.modes);
        let sigma = sets::smooth_density(&g, &mut rng, c.sigma_amplitude, config.weight.modes.max(1));
        let u = EnergyOperator::new(
            &g,
            &sets::random_gauge(&g, &mut rng, config.gauge.amplitude),
            Some(&rho),
        )
        .context("energy operator")?;
        let fs: Vec<_> = (0..c.parameters)
            .map(|_| sets::random_form(&g, &mut rng, config.fock.parameter_size, Some(&rho)))
            .collect();
        invariance = invariance.max(
            conformal_check(&g, &sigma, &u, &fs)
                .context("conformal check")?
                .max_relative_change,
        );
        let r = conformal_check(&g, &constant, &u, &fs).context("conformal check")?;
        constant_change = constant_change.max(r.max_relative_change);
        exponent_gap = exponent_gap.max(r.exponent_scaling_gap.unwrap_or(f64::INFINITY));
        overlap_gap = overlap_gap.max(r.overlap_scaling_gap.unwrap_or(f64::INFINITY));
        expected = r.expected_factor;
    }
    report.detail(
        "conformal",
        &Detail {
            dimension: dim,
            expected_factor: expected,
            invariance_change: invariance,
            constant_change,
        },
    );
    if dim == 2 {
        report.check(CheckRecord::at_most(
            "conformal_invariance",
            digest("conformal_invariance", &inputs),
            invariance,
            tol.conformal_invariance,
        ));
    }
    report.check(CheckRecord::at_most(
        "conformal_exponent_scaling",
        digest("conformal_exponent_scaling", &inputs),
        exponent_gap,
        tol.conformal_scaling,
    ));
    report.check(CheckRecord::at_most(
        "conformal_overlap_scaling",
        digest("conformal_overlap_scaling", &inputs),
        overlap_gap,
        tol.conformal_scaling,
    ));
    Ok(report)
}
