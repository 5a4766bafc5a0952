use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use gauge_energy_lab::{run_suites, ExperimentConfig, LabError, Suite};

/// Numerical checks for the gauge-group energy representation.
#[derive(Parser)]
#[command(name = "gauge-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operator spectra, closed forms, Hilbert-Schmidt test, weight conjugation
    Spectrum(Common),
    /// Hermite ladder algebra and the commutation bound
    Ladders(Common),
    /// Seminorm equivalence probe and the weighted derivative chain
    Seminorms(Common),
    /// Cocycle, adjoint action, regularity rate and cutoff approximation
    Gauge(Common),
    /// Coherent vectors: unitarity, homomorphism, truncation
    Fock(Common),
    /// Matrix elements under conformal rescaling
    Conformal(Common),
    /// Every suite in turn
    All(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; GAUGE_LAB_OUT takes precedence when set
    #[arg(long, default_value = "lab-out")]
    out: PathBuf,
    /// Overrides the seed of the configuration
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(cli: Cli) -> Result<bool, LabError> {
    let (suites, common): (Vec<Suite>, Common) = match cli.command {
        Command::Spectrum(c) => (vec![Suite::Spectrum], c),
        Command::Ladders(c) => (vec![Suite::Ladders], c),
        Command::Seminorms(c) => (vec![Suite::Seminorms], c),
        Command::Gauge(c) => (vec![Suite::Gauge], c),
        Command::Fock(c) => (vec![Suite::Fock], c),
        Command::Conformal(c) => (vec![Suite::Conformal], c),
        Command::All(c) => (Suite::ALL.to_vec(), c),
    };
    let mut config = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    let out = std::env::var_os("GAUGE_LAB_OUT")
        .map(PathBuf::from)
        .unwrap_or(common.out);
    std::fs::create_dir_all(&out)?;
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let reports = run_suites(&suites, &config, &out)?;
    std::fs::write(out.join("stamp.txt"), format!("unix_seconds = {started}\n"))?;
    for r in &reports {
        for c in &r.checks {
            println!("{:<10} {:<36} {:?}", r.suite, c.check, c.verdict);
        }
    }
    Ok(reports.iter().all(|r| r.all_passed()))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gauge-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
