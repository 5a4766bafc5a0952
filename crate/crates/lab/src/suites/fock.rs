use gauge_energy_core::fock::{
    coherent_inner, frame_coefficients, homomorphism_check, orthonormal_frame, truncation_tail_bound, unitarity_defect,
    CoherentVector, EnergyOperator, TruncatedFockVector,
};

use super::{grid, new_report, Suite};
use crate::config::ExperimentConfig;
use crate::error::{Context, LabError};
use crate::report::{digest, CheckRecord, SuiteReport};
use crate::sets;

pub(super) fn run(config: &ExperimentConfig) -> Result<SuiteReport, LabError> {
    let mut report = new_report(Suite::Fock, config);
    let c = &config.fock;
    let inputs = config.section_json(c);
    let tol = &config.tolerances;
    let g = grid(config, config.domain.nodes)?;
    let amplitude = config.gauge.amplitude;

    let mut rng = sets::stream(config.seed, "fock.unitarity");
    let (mut kernel, mut isometry) = (0.0f64, 0.0f64);
    for _ in 0..c.tuples {
        let rho = sets::smooth_density(&g, &mut rng, config.weight.amplitude, config.weight.modes);
        let psi = sets::random_gauge(&g, &mut rng, amplitude);
        let u = EnergyOperator::new(&g, &psi, Some(&rho)).context("energy operator")?;
        let a = CoherentVector::new(sets::random_form(&g, &mut rng, c.parameter_size, Some(&rho)));
        let b = CoherentVector::new(sets::random_form(&g, &mut rng, c.parameter_size, Some(&rho)));
        kernel = kernel.max(unitarity_defect(&g, &u, &a, &b).context("unitarity")?);
        let before = a.norm(&g, Some(&rho)).context("norm")?;
        let after = u.apply(&a).context("apply")?.norm(&g, Some(&rho)).context("norm")?;
        isometry = isometry.max((after - before).abs() / before);
    }
    report.check(CheckRecord::at_most(
        "unitarity_kernel",
        digest("unitarity_kernel", &inputs),
        kernel,
        tol.unitarity,
    ));
    report.check(CheckRecord::at_most(
        "unitarity_norm",
        digest("unitarity_norm", &inputs),
        isometry,
        tol.unitarity,
    ));

    let mut rng = sets::stream(config.seed, "fock.homomorphism");
    let (mut coefficient, mut parameter) = (0.0f64, 0.0f64);
    for _ in 0..c.homomorphism_tuples {
        let rho = sets::smooth_density(&g, &mut rng, config.weight.amplitude, config.weight.modes);
        let psi = sets::random_gauge(&g, &mut rng, amplitude);
        let phi = sets::random_gauge(&g, &mut rng, amplitude);
        let f = sets::random_form(&g, &mut rng, c.parameter_size, Some(&rho));
        let h = homomorphism_check(&g, &psi, &phi, &[f], Some(&rho)).context("homomorphism")?;
        coefficient = coefficient.max(h.coefficient_deviation);
        parameter = parameter.max(h.parameter_residual);
    }
    report.check(CheckRecord::at_most(
        "homomorphism_coefficient",
        digest("homomorphism_coefficient", &inputs),
        coefficient,
        tol.homomorphism,
    ));
    report.check(CheckRecord::at_most(
        "homomorphism_parameter",
        digest("homomorphism_parameter", &inputs),
        parameter,
        tol.unitarity,
    ));

    // Truncated Fock vectors over a three-mode frame against the exact kernel.
    let mut rng = sets::stream(config.seed, "fock.truncation");
    let span: Vec<_> = (0..3).map(|_| sets::random_form(&g, &mut rng, 1.0, None)).collect();
    let frame = orthonormal_frame(&g, &span, None).context("frame")?;
    let a = frame_coefficients(&g, &frame, &span[0].scale((0.5 * c.parameter_size).into()), None).context("frame")?;
    let b = frame_coefficients(&g, &frame, &span[1].add(&span[2]).context("sum")?, None).context("frame")?;
    let exact = coherent_inner(
        &g,
        &CoherentVector::new(span[0].scale((0.5 * c.parameter_size).into())),
        &CoherentVector::new(span[1].add(&span[2]).context("sum")?),
        None,
    )
    .context("kernel")?;
    let norm = |v: &[gauge_energy_core::C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let bound = truncation_tail_bound(norm(&a), norm(&b), c.truncation);
    let truncated = TruncatedFockVector::coherent(&a, c.truncation)
        .inner(&TruncatedFockVector::coherent(&b, c.truncation))
        .context("truncated inner product")?;
    let gap = (truncated - exact).norm();
    report.detail("truncation_gap", &gap);
    report.detail("truncation_bound", &bound);
    report.check(CheckRecord::holds(
        "truncation_tail",
        digest("truncation_tail", &inputs),
        gap <= bound + 1e-12 * exact.norm(),
    ));
    Ok(report)
}
