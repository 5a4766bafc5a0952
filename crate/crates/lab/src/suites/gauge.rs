use gauge_energy_core::calculus::norm;
use gauge_energy_core::gauge::{
    cocycle_residual, cutoff_approximation, log_derivative, punctured_plane_demo, regularity_check, v_action,
    AlgebraValuedField, CutoffFamily, SeminormContext,
};
use gauge_energy_core::grid::build_grid;
use gauge_energy_core::lie::AlgebraElement;
use gauge_energy_core::spectral::assemble_h_rho;
use gauge_energy_core::{DomainShape, DomainSpec, Error, Fiber, GridManifold, TensorField, WeightField, C64};
use serde::Serialize;

use super::{grid, new_report, Suite};
use crate::config::ExperimentConfig;
use crate::error::{Context, LabError};
use crate::report::{digest, CheckRecord, SuiteReport, Table};
use crate::sets;

#[derive(Serialize)]
struct RegularityDetail {
    c_hat: f64,
    slope: Option<f64>,
    t: Vec<f64>,
    error: Vec<f64>,
    bound_ratio: Vec<f64>,
}

/// A one-form whose every component is the first coefficient of a compact
/// `su(2)` profile, so its support is that of the profile.
fn compact_form(g: &GridManifold, field: &AlgebraValuedField) -> TensorField {
    let mut f = TensorField::zeros(g, 1, Fiber::Algebra);
    for (node, v) in field.values().iter().enumerate() {
        for a in 0..g.dimension() {
            for k in 0..3 {
                f.set(node, a, k, C64::new(v.0[k], 0.0));
            }
        }
    }
    f
}

pub(super) fn run(config: &ExperimentConfig) -> Result<SuiteReport, LabError> {
    let mut report = new_report(Suite::Gauge, config);
    let c = &config.gauge;
    let inputs = config.section_json(c);
    let tol = &config.tolerances;
    let g = grid(config, config.domain.nodes)?;
    let mut rng = sets::stream(config.seed, "gauge.rho");
    let rho = sets::smooth_density(&g, &mut rng, config.weight.amplitude, config.weight.modes);

    let mut rng = sets::stream(config.seed, "gauge.pairs");
    let (mut cocycle, mut group, mut imaginary, mut isometry, mut homomorphism) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..c.pairs {
        let psi = sets::random_gauge(&g, &mut rng, c.amplitude);
        let phi = sets::random_gauge(&g, &mut rng, c.amplitude);
        group = group.max(psi.group_defect()).max(phi.group_defect());
        cocycle = cocycle.max(cocycle_residual(&g, &psi, &phi).context("cocycle")?);
        imaginary = imaginary.max(log_derivative(&g, &psi).context("log derivative")?.max_imaginary());
        let f = sets::random_form(&g, &mut rng, 1.0, Some(&rho));
        let vf = v_action(&g, &psi, &f).context("adjoint action")?;
        isometry = isometry.max((norm(&g, &vf, Some(&rho)).context("norm")? - 1.0).abs());
        let lhs = v_action(&g, &psi.product(&phi).context("product")?, &f).context("adjoint action")?;
        let rhs = v_action(&g, &psi, &v_action(&g, &phi, &f).context("adjoint action")?).context("adjoint action")?;
        homomorphism = homomorphism.max(lhs.sub(&rhs).context("difference")?.max_abs());
    }
    report.check(CheckRecord::at_most(
        "group_valued",
        digest("group_valued", &inputs),
        group,
        tol.cocycle,
    ));
    report.check(CheckRecord::at_most(
        "cocycle",
        digest("cocycle", &inputs),
        cocycle,
        tol.cocycle,
    ));
    report.check(CheckRecord::at_most(
        "log_derivative_real",
        digest("log_derivative_real", &inputs),
        imaginary,
        tol.cocycle,
    ));
    report.check(CheckRecord::at_most(
        "v_isometry",
        digest("v_isometry", &inputs),
        isometry,
        tol.isometry,
    ));
    report.check(CheckRecord::at_most(
        "v_homomorphism",
        digest("v_homomorphism", &inputs),
        homomorphism,
        tol.isometry,
    ));

    let weights = WeightField::new(&g, sets::potential(&g, &config.potential), rho.clone()).context("weights")?;
    let spectrum = assemble_h_rho(&g, &weights, 1)
        .context("operator assembly")?
        .decompose()
        .context("eigensolve")?;
    let ctx = SeminormContext {
        grid: &g,
        weights: &weights,
        spectrum: &spectrum,
    };

    let r = &c.regularity;
    let mut rng = sets::stream(config.seed, "gauge.regularity");
    let psi = AlgebraValuedField::from_profile(&g, &sets::random_profile(&g, &mut rng, c.amplitude));
    let mut set = Vec::with_capacity(c.test_functions);
    for _ in 0..c.test_functions {
        let f = sets::random_form(&g, &mut rng, 1.0, Some(&rho));
        let size = ctx.p(&f, r.q).context("normalization")?;
        set.push(f.scale(C64::new(1.0 / size, 0.0)));
    }
    let reg = regularity_check(&ctx, &psi, &set, &r.t, r.p, r.m).context("regularity")?;
    let slope_gap = reg.slope.map_or(f64::INFINITY, |s| (s - 1.0).abs());
    report.check(CheckRecord::at_most(
        "regularity_slope",
        digest("regularity_slope", &inputs),
        slope_gap,
        tol.slope,
    ));
    let worst_bound = reg.rows.iter().map(|row| row.bound_ratio).fold(0.0, f64::max);
    report.check(CheckRecord::at_most(
        "regularity_bound",
        digest("regularity_bound", &inputs),
        worst_bound,
        1.0,
    ));
    report.detail(
        "regularity",
        &RegularityDetail {
            c_hat: reg.c_hat,
            slope: reg.slope,
            t: reg.rows.iter().map(|row| row.t).collect(),
            error: reg.rows.iter().map(|row| row.error).collect(),
            bound_ratio: reg.rows.iter().map(|row| row.bound_ratio).collect(),
        },
    );

    let k = &c.cutoff;
    let family = CutoffFamily {
        first_plateau: k.first_plateau,
        step: k.step,
        collar: k.collar,
    };
    let mut rng = sets::stream(config.seed, "gauge.cutoff");
    let constant = AlgebraValuedField::constant(&g, AlgebraElement([1.0, 0.5, 0.0]));
    let count = c.test_functions.min(10);
    let forms: Vec<TensorField> = (0..count)
        .map(|_| {
            compact_form(
                &g,
                &AlgebraValuedField::from_profile(&g, &sets::random_profile(&g, &mut rng, 1.0)),
            )
        })
        .collect();
    match cutoff_approximation(&ctx, &constant, &family, &k.indices, &forms, k.p) {
        Err(Error::CutoffConditionViolated) => {
            report.check(CheckRecord::refused(
                "cutoff_approximation",
                digest("cutoff_approximation", &inputs),
            ));
        }
        Err(e) => return Err(e).context("cutoff approximation"),
        Ok(rows) => {
            let mut table = Table::new("cutoff", &["n", "plateau", "test_function", "value"]);
            let (mut monotone, mut exact, mut decay) = (true, true, 0.0f64);
            for (j, f) in forms.iter().enumerate() {
                let support: Vec<bool> = (0..g.node_count())
                    .map(|node| {
                        let stride = f.node_stride();
                        f.data()[node * stride..(node + 1) * stride]
                            .iter()
                            .any(|z| z.norm() != 0.0)
                    })
                    .collect();
                let first = rows[0].values[j];
                let mut smallest = f64::INFINITY;
                for (i, row) in rows.iter().enumerate() {
                    let v = row.values[j];
                    table.push(vec![row.n as f64, row.plateau, j as f64, v]);
                    if i > 0 && v > rows[i - 1].values[j] {
                        monotone = false;
                    }
                    let (psi_n, _) = family.sample(&g, row.n);
                    let covered = support.iter().zip(&psi_n).all(|(s, p)| !s || *p == 1.0);
                    if covered {
                        exact &= v == 0.0;
                    } else if first > 0.0 {
                        smallest = smallest.min(v / first);
                    }
                }
                if smallest.is_finite() {
                    decay = decay.max(smallest);
                }
            }
            report.tables.push(table);
            report.check(CheckRecord::holds(
                "cutoff_monotone",
                digest("cutoff_monotone", &inputs),
                monotone,
            ));
            report.check(CheckRecord::holds(
                "cutoff_exact_zero",
                digest("cutoff_exact_zero", &inputs),
                exact,
            ));
            report.check(CheckRecord::at_most(
                "cutoff_decay",
                digest("cutoff_decay", &inputs),
                decay,
                tol.cutoff_ratio,
            ));
        }
    }

    let pc = &c.punctured;
    let plane = build_grid(&DomainSpec::new(
        DomainShape::PuncturedSquare {
            half_width: pc.half_width,
        },
        pc.nodes,
    ))
    .context("punctured grid")?;
    let rows = punctured_plane_demo(&plane, &pc.epsilons).context("punctured plane")?;
    let growth = rows
        .windows(2)
        .map(|w| w[1].sup_gradient / w[0].sup_gradient)
        .fold(f64::INFINITY, f64::min);
    let shape_ok = rows.iter().all(|r| r.inner_max == 0.0 && r.outer_defect == 0.0);
    let mut table = Table::new("punctured", &["epsilon", "sup_gradient", "analytic"]);
    for r in &rows {
        table.push(vec![r.epsilon, r.sup_gradient, r.analytic]);
    }
    report.tables.push(table);
    report.check(CheckRecord::holds(
        "punctured_cutoff_shape",
        digest("punctured_cutoff_shape", &inputs),
        shape_ok,
    ));
    report.check(CheckRecord::at_least(
        "punctured_gradient_growth",
        digest("punctured_gradient_growth", &inputs),
        growth,
        tol.growth,
    ));
    Ok(report)
}
