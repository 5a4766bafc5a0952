use gauge_energy_core::hermite::{build_ladders, Ladder};
use rand::Rng;
use serde::Serialize;

use super::{new_report, Suite};
use crate::config::ExperimentConfig;
use crate::error::{Context, LabError};
use crate::report::{digest, CheckRecord, SuiteReport, Table};
use crate::sets;

#[derive(Serialize)]
struct Worst {
    word: String,
    ratio: f64,
    constant: f64,
}

fn spell(word: &[Ladder]) -> String {
    word.iter()
        .map(|l| format!("A{}{}", l.index + 1, if l.raising { "*" } else { "" }))
        .collect::<Vec<_>>()
        .join(" ")
}

pub(super) fn run(config: &ExperimentConfig) -> Result<SuiteReport, LabError> {
    let mut report = new_report(Suite::Ladders, config);
    let c = &config.ladders;
    let inputs = serde_json::to_string(&(config.seed, c)).expect("serializes");
    let ladder = build_ladders(c.dimension, c.cutoff).context("ladder construction")?;
    let tol = config.tolerances.ccr;
    report.check(CheckRecord::at_most(
        "ccr",
        digest("ccr", &inputs),
        ladder.ccr_residual(),
        tol,
    ));
    report.check(CheckRecord::at_most(
        "oscillator_identity",
        digest("oscillator_identity", &inputs),
        ladder.oscillator_identity_residual(),
        tol.max(1e-12),
    ));

    let mut rng = sets::stream(config.seed, "ladders.states");
    let admissible: Vec<usize> = (0..ladder.len())
        .filter(|&i| ladder.degree(i) <= c.sample_degree)
        .collect();
    let mut worst = Worst {
        word: String::new(),
        ratio: 0.0,
        constant: 0.0,
    };
    let mut violations = 0usize;
    let mut table = Table::new("bound_ratios", &["sample", "word_length", "ratio", "constant"]);
    for sample in 0..c.samples {
        let length = rng.random_range(1..=c.max_word);
        let word: Vec<Ladder> = (0..length)
            .map(|_| {
                let index = rng.random_range(0..c.dimension);
                if rng.random_bool(0.5) {
                    Ladder::raise(index)
                } else {
                    Ladder::lower(index)
                }
            })
            .collect();
        let mut f = vec![0.0; ladder.len()];
        for &i in &admissible {
            f[i] = rng.random_range(-1.0..1.0);
        }
        let b = ladder.commutation_bound_check(&word, &f).context("commutation bound")?;
        if !b.holds() {
            violations += 1;
        }
        if b.ratio > worst.ratio {
            worst = Worst {
                word: spell(&word),
                ratio: b.ratio,
                constant: b.constant,
            };
        }
        table.push(vec![sample as f64, length as f64, b.ratio, b.constant]);
    }
    report.tables.push(table);
    report.detail("worst_word", &worst);
    report.detail("violations", &violations);
    report.check(CheckRecord::at_most(
        "commutation_bound",
        digest("commutation_bound", &inputs),
        worst.ratio,
        1.0,
    ));
    Ok(report)
}
