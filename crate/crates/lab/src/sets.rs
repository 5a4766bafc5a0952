//! Seeded inputs: potentials, densities, gauge profiles and test sets.
//!
//! Every suite draws from its own stream, derived from the configured seed
//! and the stream name, so a suite produces the same numbers whether it runs
//! alone or as part of `all`.

use std::f64::consts::TAU;

use gauge_energy_core::calculus::norm;
use gauge_energy_core::gauge::{AlgebraProfile, GaugeField, ScalarProfile};
use gauge_energy_core::spectral::SpectralDecomposition;
use gauge_energy_core::{Fiber, GridManifold, TensorField, Topology, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::config::PotentialConfig;

pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    let h = Sha256::digest(name.as_bytes());
    let mut salt = [0u8; 8];
    salt.copy_from_slice(&h[..8]);
    ChaCha8Rng::seed_from_u64(seed ^ u64::from_le_bytes(salt))
}

/// Coordinate length of each axis: the period on periodic domains, the box
/// width on truncated ones.
pub fn axis_lengths(grid: &GridManifold) -> Vec<f64> {
    grid.axes().iter().map(|a| a.spacing * a.count as f64).collect()
}

pub fn potential(grid: &GridManifold, config: &PotentialConfig) -> Vec<f64> {
    match *config {
        PotentialConfig::Constant { level } => vec![level; grid.node_count()],
        PotentialConfig::Harmonic => grid.sample(|x| x[0] * x[0] + x[1] * x[1] + 1.0),
    }
}

/// A random trigonometric sum over `modes` harmonics per axis, rescaled to
/// sup norm `amplitude`.
pub fn smooth_density(grid: &GridManifold, rng: &mut ChaCha8Rng, amplitude: f64, modes: usize) -> Vec<f64> {
    let lengths = axis_lengths(grid);
    let mut terms = Vec::new();
    for (axis, len) in lengths.iter().enumerate() {
        for j in 1..=modes {
            let k = TAU * j as f64 / len;
            terms.push((axis, k, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        }
    }
    let raw = grid.sample(|x| {
        terms
            .iter()
            .map(|(a, k, c, s)| c * (k * x[*a]).cos() + s * (k * x[*a]).sin())
            .sum()
    });
    let peak = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 || amplitude == 0.0 {
        return vec![0.0; raw.len()];
    }
    raw.iter().map(|v| amplitude * v / peak).collect()
}

/// A random `su(2)`-valued profile: waves with integer wavenumbers on periodic
/// domains, bumps with compact support inside the box otherwise.
pub fn random_profile(grid: &GridManifold, rng: &mut ChaCha8Rng, amplitude: f64) -> AlgebraProfile {
    let lengths = axis_lengths(grid);
    let dim = grid.dimension();
    let periodic = grid.topology() == Topology::Periodic;
    AlgebraProfile(std::array::from_fn(|_| {
        if periodic && rng.random_bool(0.5) {
            let mut k = [0.0; 2];
            for (a, kk) in k.iter_mut().take(dim).enumerate() {
                *kk = rng.random_range(-2i32..=2) as f64 * TAU / lengths[a];
            }
            ScalarProfile::Wave {
                wavenumber: k,
                phase: rng.random_range(0.0..TAU),
                amplitude: rng.random_range(-amplitude..amplitude),
            }
        } else {
            let span = lengths[0];
            let radius = rng.random_range(0.25..0.4) * span;
            let mut center = [0.0; 2];
            for (a, c) in center.iter_mut().take(dim).enumerate() {
                let origin = grid.axes()[a].origin - 0.5 * grid.axes()[a].spacing;
                *c = if periodic {
                    rng.random_range(0.0..lengths[a])
                } else {
                    // Keep the support away from the boundary.
                    let slack = (0.5 * lengths[a] - radius).max(0.0) * 0.9;
                    origin + 0.5 * lengths[a] + rng.random_range(-slack..=slack)
                };
            }
            ScalarProfile::Bump {
                center,
                radius,
                amplitude: rng.random_range(-amplitude..amplitude),
            }
        }
    }))
}

pub fn random_gauge(grid: &GridManifold, rng: &mut ChaCha8Rng, amplitude: f64) -> GaugeField {
    GaugeField::from_profile(grid, &random_profile(grid, rng, amplitude))
        .expect("profiles are compact inside the domain")
}

/// An algebra-valued one-form with independent complex node values,
/// normalized to `‖f‖_{ρ,0} = size`.
pub fn random_form(grid: &GridManifold, rng: &mut ChaCha8Rng, size: f64, rho: Option<&[f64]>) -> TensorField {
    let mut f = TensorField::zeros(grid, 1, Fiber::Algebra);
    for z in f.data_mut() {
        *z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let n = norm(grid, &f, rho).expect("shapes agree");
    f.scale(C64::new(size / n, 0.0))
}

/// Scalar test functions built from the spectrum: the first `N/4`
/// eigenvectors, then random combinations of them up to `count` functions.
pub fn spectral_test_set(
    grid: &GridManifold,
    spectrum: &SpectralDecomposition,
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Vec<TensorField> {
    let low = (spectrum.len() / 4).max(1);
    let basis: Vec<Vec<f64>> = (0..low).map(|k| spectrum.eigenvector(k)).collect();
    let mut set: Vec<TensorField> = basis
        .iter()
        .take(count)
        .map(|e| TensorField::scalar(grid, e).expect("eigenvectors are nodal"))
        .collect();
    while set.len() < count {
        let mut v = vec![0.0; grid.node_count()];
        for e in &basis {
            let c: f64 = rng.random_range(-1.0..1.0);
            v.iter_mut().zip(e).for_each(|(x, y)| *x += c * y);
        }
        set.push(TensorField::scalar(grid, &v).expect("nodal"));
    }
    set
}
