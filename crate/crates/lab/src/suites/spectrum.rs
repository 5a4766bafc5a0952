use std::f64::consts::TAU;

use gauge_energy_core::spectral::{assemble_h, conjugated_operator, hilbert_schmidt_test, Verdict};
use gauge_energy_core::{DomainShape, Error, WeightField};
use serde::Serialize;

use super::{grid, new_report, Suite};
use crate::config::{ExperimentConfig, PotentialConfig};
use crate::error::{Context, LabError};
use crate::report::{digest, CheckRecord, SuiteReport, Table};
use crate::sets;

#[derive(Serialize)]
struct HsDetail {
    p: f64,
    partial_sums: Vec<f64>,
    fitted_exponent: f64,
    tail_estimate: Option<f64>,
    verdict: &'static str,
    expected: &'static str,
}

fn max_relative(got: &[f64], want: &[f64]) -> f64 {
    got.iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs() / w.abs())
        .fold(0.0, f64::max)
}

/// Eigenvalues of `-Δ + |x|² + 1` in `d` dimensions, sorted: `2|n| + d + 1`.
fn oscillator_levels(d: usize, count: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut degree = 0usize;
    while out.len() < count {
        let multiplicity = if d == 1 { 1 } else { degree + 1 };
        for _ in 0..multiplicity {
            out.push((2 * degree + d + 1) as f64);
        }
        degree += 1;
    }
    out.truncate(count);
    out
}

pub(super) fn run(config: &ExperimentConfig) -> Result<SuiteReport, LabError> {
    let mut report = new_report(Suite::Spectrum, config);
    let inputs = config.section_json(&config.spectrum);
    let tol = &config.tolerances;
    let g = grid(config, config.domain.nodes)?;
    let w = WeightField::unweighted(&g, sets::potential(&g, &config.potential)).context("potential")?;
    let op = assemble_h(&g, &w, 0).context("operator assembly")?;
    let spectrum = op.decompose().context("eigensolve")?;
    let values = spectrum.values();

    report.check(CheckRecord::at_most(
        "symmetry",
        digest("symmetry", &inputs),
        op.asymmetry(),
        tol.symmetry,
    ));
    report.check(CheckRecord::at_most(
        "eigenpair_residual",
        digest("eigenpair_residual", &inputs),
        spectrum.residual(&op),
        tol.eigen_residual,
    ));
    report.check(CheckRecord::at_most(
        "orthonormality",
        digest("orthonormality", &inputs),
        spectrum.gram_defect(),
        tol.orthonormality,
    ));
    report.check(CheckRecord::at_least(
        "lowest_eigenvalue_at_least_one",
        digest("lowest_eigenvalue_at_least_one", &inputs),
        values[0],
        1.0 - tol.eigen_residual,
    ));

    let mut table = Table::new("eigenvalues", &["index", "eigenvalue"]);
    for (i, v) in values.iter().enumerate() {
        table.push(vec![i as f64, *v]);
    }
    report.tables.push(table);

    match (config.domain.shape(), &config.potential) {
        (DomainShape::Circle { radius }, PotentialConfig::Constant { level }) => {
            let n = config.domain.nodes;
            let h = TAU / n as f64;
            let r2 = radius * radius;
            let mut symbol: Vec<f64> = (0..n)
                .map(|k| 2.0 / (h * h * r2) * (1.0 - (k as f64 * h).cos()) + level)
                .collect();
            symbol.sort_by(f64::total_cmp);
            let gap = values
                .iter()
                .zip(&symbol)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            report.check(CheckRecord::at_most(
                "fourier_symbol",
                digest("fourier_symbol", &inputs),
                gap,
                tol.fourier,
            ));

            let modes = (n / 8) as i64;
            let mut continuum: Vec<f64> = (-modes..=modes).map(|k| (k * k) as f64 / r2 + level).collect();
            continuum.sort_by(f64::total_cmp);
            let errors: Vec<f64> = values.iter().zip(&continuum).map(|(a, b)| (a - b).abs() / b).collect();
            let worst = errors.iter().copied().fold(0.0, f64::max);
            // Largest |k| up to which the agreement holds, for the record.
            let reach = (0..=modes)
                .take_while(|k| errors[..(2 * *k as usize + 1)].iter().all(|e| *e <= tol.continuum))
                .last();
            report.detail("continuum_modes_checked", &modes);
            report.detail("continuum_modes_within_tolerance", &reach);
            report.check(CheckRecord::at_most(
                "continuum_low_modes",
                digest("continuum_low_modes", &inputs),
                worst,
                tol.continuum,
            ));
        }
        (shape, PotentialConfig::Harmonic) if !config.domain.is_periodic() => {
            let count = config.spectrum.levels.min(values.len());
            let levels = oscillator_levels(shape.dimension(), count);
            report.check(CheckRecord::at_most(
                "oscillator_levels",
                digest("oscillator_levels", &inputs),
                max_relative(&values[..count], &levels),
                tol.oscillator,
            ));
        }
        _ => {}
    }

    // Weyl growth: λ_n ~ n^{2/d} on compact domains, n^{1/d} for the
    // oscillator on all of ℝ^d.
    let d = g.dimension() as f64;
    let weyl = match config.potential {
        PotentialConfig::Harmonic if !config.domain.is_periodic() => 1.0 / d,
        _ => 2.0 / d,
    };
    let [from, to] = config.spectrum.fit_window;
    let mut hs = Vec::new();
    for &p in &config.spectrum.hs_powers {
        let name = format!("hilbert_schmidt_p{p}");
        match hilbert_schmidt_test(&spectrum, p, (from, to.min(values.len()))) {
            Ok(r) => {
                let expected = if 2.0 * p * weyl > 1.0 {
                    Verdict::Converging
                } else {
                    Verdict::Diverging
                };
                report.check(CheckRecord::holds(&name, digest(&name, &inputs), r.verdict == expected));
                let label = |v: Verdict| match v {
                    Verdict::Converging => "converging",
                    Verdict::Diverging => "diverging",
                };
                hs.push(HsDetail {
                    p,
                    partial_sums: r.partial_sums,
                    fitted_exponent: r.fitted_exponent,
                    tail_estimate: r.tail_estimate,
                    verdict: label(r.verdict),
                    expected: label(expected),
                });
            }
            Err(Error::HypothesisViolated(_)) => report.check(CheckRecord::refused(&name, digest(&name, &inputs))),
            Err(e) => return Err(e).context("Hilbert-Schmidt test"),
        }
    }
    report.detail("hilbert_schmidt", &hs);

    let mut rng = sets::stream(config.seed, "spectrum.rho");
    let rho = sets::smooth_density(&g, &mut rng, config.weight.amplitude, config.weight.modes);
    let weighted = w.with_rho(rho).context("density")?;
    let conj = conjugated_operator(&g, &weighted, 0, &spectrum).context("conjugation")?;
    report.check(CheckRecord::at_most(
        "conjugated_adjoint",
        digest("conjugated_adjoint", &inputs),
        conj.adjoint_residual,
        tol.chain,
    ));
    report.check(CheckRecord::at_most(
        "conjugated_eigenpairs",
        digest("conjugated_eigenpairs", &inputs),
        conj.eigenpair_residual,
        tol.conjugation,
    ));
    report.check(CheckRecord::at_most(
        "conjugated_spectrum",
        digest("conjugated_spectrum", &inputs),
        conj.spectrum_gap,
        tol.conjugation,
    ));
    Ok(report)
}
