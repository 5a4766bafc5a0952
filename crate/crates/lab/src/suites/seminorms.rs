use gauge_energy_core::seminorm::{equivalence_probe, refinement_stability, weighted_chain, StableConstant};
use gauge_energy_core::spectral::assemble_h_rho;
use gauge_energy_core::WeightField;
use serde::Serialize;

use super::{grid, new_report, Suite};
use crate::config::ExperimentConfig;
use crate::error::{Context, LabError};
use crate::report::{digest, CheckRecord, SuiteReport, Table};
use crate::sets;

#[derive(Serialize)]
struct Chosen {
    direction: &'static str,
    m: usize,
    p: Option<f64>,
    constants: Vec<f64>,
    spread: Option<f64>,
}

fn chosen(direction: &'static str, m: usize, c: &Option<StableConstant>) -> Chosen {
    Chosen {
        direction,
        m,
        p: c.as_ref().map(|c| c.p),
        constants: c.as_ref().map(|c| c.constants.clone()).unwrap_or_default(),
        spread: c.as_ref().map(|c| c.spread),
    }
}

fn weights_at(
    config: &ExperimentConfig,
    nodes: usize,
) -> Result<(gauge_energy_core::GridManifold, WeightField), LabError> {
    let g = grid(config, nodes)?;
    // A fresh stream per grid: the density is the same function at every N.
    let mut rng = sets::stream(config.seed, "seminorms.rho");
    let rho = sets::smooth_density(&g, &mut rng, config.weight.amplitude, config.weight.modes);
    let w = WeightField::new(&g, sets::potential(&g, &config.potential), rho).context("weights")?;
    Ok((g, w))
}

pub(super) fn run(config: &ExperimentConfig) -> Result<SuiteReport, LabError> {
    let mut report = new_report(Suite::Seminorms, config);
    let c = &config.seminorms;
    let inputs = config.section_json(c);
    let tol = &config.tolerances;

    let mut probes = Vec::new();
    for &n in &c.refinements {
        let (g, w) = weights_at(config, n)?;
        let spectrum = assemble_h_rho(&g, &w, 0)
            .context("operator assembly")?
            .decompose()
            .context("eigensolve")?;
        let mut rng = sets::stream(config.seed, &format!("seminorms.set.{n}"));
        let set = sets::spectral_test_set(&g, &spectrum, &mut rng, c.test_functions);
        probes.push(equivalence_probe(&g, &w, &spectrum, &set, &c.orders, &c.powers).context("seminorm probe")?);
    }
    let mut table = Table::new("constants", &["nodes", "m", "p", "forward", "converse"]);
    for (n, probe) in c.refinements.iter().zip(&probes) {
        for (i, m) in c.orders.iter().enumerate() {
            for (j, p) in c.powers.iter().enumerate() {
                table.push(vec![
                    *n as f64,
                    *m as f64,
                    *p,
                    probe.forward[i][j],
                    probe.converse[i][j],
                ]);
            }
        }
    }
    report.tables.push(table);

    let summary = refinement_stability(&probes, tol.spread).context("refinement stability")?;
    let mut picked = Vec::new();
    for (i, &m) in c.orders.iter().enumerate() {
        for (direction, entry) in [("forward", &summary.forward[i]), ("converse", &summary.converse[i])] {
            let name = format!("equivalence_{direction}_m{m}");
            let spread = entry.as_ref().map_or(f64::INFINITY, |s| s.spread);
            report.check(CheckRecord::at_most(&name, digest(&name, &inputs), spread, tol.spread));
            picked.push(chosen(direction, m, entry));
        }
    }
    report.detail("stable_constants", &picked);

    // Weighted derivative chain against the conjugated one, on scalar test
    // functions and on a random algebra-valued one-form.
    let (g, w) = weights_at(config, config.domain.nodes)?;
    let spectrum = assemble_h_rho(&g, &w, 0)
        .context("operator assembly")?
        .decompose()
        .context("eigensolve")?;
    let mut rng = sets::stream(config.seed, "seminorms.chain");
    let mut fields = sets::spectral_test_set(&g, &spectrum, &mut rng, 8);
    fields.push(sets::random_form(&g, &mut rng, 1.0, None));
    let mut residual: f64 = 0.0;
    for f in &fields {
        residual = residual.max(
            weighted_chain(&g, f, c.chain_order, &w)
                .context("weighted chain")?
                .residual,
        );
    }
    report.check(CheckRecord::at_most(
        "weighted_chain",
        digest("weighted_chain", &inputs),
        residual,
        tol.chain,
    ));
    Ok(report)
}
