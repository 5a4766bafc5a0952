//! Experiment configuration.
//!
//! Configurations are TOML documents written with dotted keys
//! (`domain.shape = "circle"`). Every key is required and unknown keys are
//! rejected, so a typo fails loudly before any computation starts.

use std::fs;
use std::path::Path;

use gauge_energy_core::{DomainShape, DomainSpec};
use serde::{Deserialize, Serialize};

use crate::error::LabError;

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub domain: DomainConfig,
    pub potential: PotentialConfig,
    pub weight: WeightConfig,
    pub spectrum: SpectrumConfig,
    pub ladders: LadderConfig,
    pub seminorms: SeminormConfig,
    pub gauge: GaugeConfig,
    pub fock: FockConfig,
    pub conformal: ConformalConfig,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeName {
    Circle,
    Interval,
    Torus,
    Square,
    PuncturedSquare,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub shape: ShapeName,
    /// Radius for the circle, half-width for boxes, period for the torus.
    pub extent: f64,
    pub nodes: usize,
}

impl DomainConfig {
    pub fn shape(&self) -> DomainShape {
        match self.shape {
            ShapeName::Circle => DomainShape::Circle { radius: self.extent },
            ShapeName::Interval => DomainShape::Interval {
                half_width: self.extent,
            },
            ShapeName::Torus => DomainShape::Torus { period: self.extent },
            ShapeName::Square => DomainShape::Square {
                half_width: self.extent,
            },
            ShapeName::PuncturedSquare => DomainShape::PuncturedSquare {
                half_width: self.extent,
            },
        }
    }

    pub fn spec(&self) -> DomainSpec {
        self.spec_with(self.nodes)
    }

    pub fn spec_with(&self, nodes: usize) -> DomainSpec {
        DomainSpec::new(self.shape(), nodes)
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.shape, ShapeName::Circle | ShapeName::Torus)
    }
}

/// The potential `W`.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    /// `W ≡ level`.
    Constant { level: f64 },
    /// `W = |x|² + 1` in the domain coordinates.
    Harmonic,
}

/// Random smooth log-densities `ρ`: Fourier sums over `modes` harmonics whose
/// sup norm is at most `amplitude`.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub amplitude: f64,
    pub modes: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Powers `p` of the Hilbert-Schmidt test.
    pub hs_powers: Vec<f64>,
    /// 1-based index window used for the tail fit.
    pub fit_window: [usize; 2],
    /// Number of low eigenvalues compared with closed forms.
    pub levels: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    pub dimension: usize,
    pub cutoff: usize,
    pub samples: usize,
    pub max_word: usize,
    /// Largest degree present in the sampled states.
    pub sample_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormConfig {
    pub refinements: Vec<usize>,
    pub orders: Vec<usize>,
    pub powers: Vec<f64>,
    pub test_functions: usize,
    pub chain_order: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeConfig {
    pub pairs: usize,
    pub amplitude: f64,
    pub test_functions: usize,
    pub regularity: RegularityConfig,
    pub cutoff: CutoffConfig,
    pub punctured: PuncturedConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RegularityConfig {
    pub t: Vec<f64>,
    pub p: f64,
    pub m: usize,
    /// Test fields are normalized in `|·|_{ρ,q}`.
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffConfig {
    pub first_plateau: f64,
    pub step: f64,
    pub collar: f64,
    pub indices: Vec<usize>,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PuncturedConfig {
    pub half_width: f64,
    pub nodes: usize,
    pub epsilons: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FockConfig {
    pub tuples: usize,
    pub homomorphism_tuples: usize,
    /// `‖f‖_{ρ,0}` of the sampled coherent parameters.
    pub parameter_size: f64,
    pub truncation: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConformalConfig {
    /// Value of the constant rescaling used for the scaling law.
    pub constant_sigma: f64,
    /// Sup norm of the random rescaling used for the invariance test.
    pub sigma_amplitude: f64,
    pub tuples: usize,
    pub parameters: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub symmetry: f64,
    pub eigen_residual: f64,
    pub orthonormality: f64,
    pub fourier: f64,
    pub continuum: f64,
    pub oscillator: f64,
    pub conjugation: f64,
    pub chain: f64,
    pub ccr: f64,
    pub cocycle: f64,
    pub isometry: f64,
    pub unitarity: f64,
    pub homomorphism: f64,
    pub conformal_invariance: f64,
    pub conformal_scaling: f64,
    pub slope: f64,
    pub spread: f64,
    pub cutoff_ratio: f64,
    pub growth: f64,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            LabError::Config(msg) => LabError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, LabError> {
        let config: Self = toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Range checks that serde cannot express.
    pub fn validate(&self) -> Result<(), LabError> {
        let fail = |msg: &str| Err(LabError::Config(msg.to_string()));
        if !(self.domain.extent.is_finite() && self.domain.extent > 0.0) {
            return fail("domain.extent must be positive");
        }
        if self.domain.nodes < 4 {
            return fail("domain.nodes must be at least 4");
        }
        if let PotentialConfig::Constant { level } = self.potential {
            if level.is_nan() || level < 1.0 {
                return fail("potential.level must be at least 1");
            }
        }
        if self.weight.amplitude.is_nan() || self.weight.amplitude < 0.0 {
            return fail("weight.amplitude must be non-negative");
        }
        let [lo, hi] = self.spectrum.fit_window;
        if lo == 0 || hi <= lo {
            return fail("spectrum.fit_window must be [from, to] with 1 <= from < to");
        }
        if !matches!(self.ladders.dimension, 1 | 2) {
            return fail("ladders.dimension must be 1 or 2");
        }
        if self.ladders.sample_degree + self.ladders.max_word > self.ladders.cutoff {
            return fail("ladders.sample_degree + ladders.max_word must not exceed ladders.cutoff");
        }
        if self.seminorms.refinements.is_empty() || self.seminorms.orders.is_empty() || self.seminorms.powers.is_empty()
        {
            return fail("seminorms.refinements, seminorms.orders and seminorms.powers must be non-empty");
        }
        if self.seminorms.refinements.iter().any(|n| *n < 8) {
            return fail("seminorms.refinements must all be at least 8");
        }
        if self.seminorms.test_functions == 0 || self.gauge.test_functions == 0 {
            return fail("test_functions must be positive");
        }
        if self
            .gauge
            .regularity
            .t
            .iter()
            .any(|t| t.is_nan() || *t <= 0.0 || *t > 1.0)
        {
            return fail("gauge.regularity.t entries must lie in (0, 1]");
        }
        if self.gauge.amplitude.is_nan() || self.gauge.amplitude <= 0.0 {
            return fail("gauge.amplitude must be positive");
        }
        if self.fock.parameter_size.is_nan() || self.fock.parameter_size <= 0.0 {
            return fail("fock.parameter_size must be positive");
        }
        if self.ladders.max_word == 0 {
            return fail("ladders.max_word must be at least 1");
        }
        if self.gauge.punctured.epsilons.iter().any(|e| e.is_nan() || *e <= 0.0) {
            return fail("gauge.punctured.epsilons must be positive");
        }
        Ok(())
    }

    /// Canonical JSON of one configuration section, used in input digests.
    pub fn section_json<T: Serialize>(&self, section: &T) -> String {
        serde_json::to_string(&(self.seed, &self.domain, &self.potential, &self.weight, section))
            .expect("configuration sections serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = include_str!("../../../configs/circle.toml");

    fn without(key: &str) -> String {
        CIRCLE
            .lines()
            .filter(|l| !l.starts_with(key))
            .collect::<Vec<_>>()
            .join("\n")
    }

    #[test]
    fn shipped_configs_parse() {
        for text in [
            CIRCLE,
            include_str!("../../../configs/interval.toml"),
            include_str!("../../../configs/torus.toml"),
        ] {
            ExperimentConfig::parse(text).unwrap();
        }
    }

    #[test]
    fn missing_key_is_named() {
        let err = ExperimentConfig::parse(&without("gauge.regularity.q"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("missing field `q`"), "{err}");
        let err = ExperimentConfig::parse(&without("seed")).unwrap_err().to_string();
        assert!(err.contains("`seed`"), "{err}");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = format!("{CIRCLE}\ndomain.colour = 3\n");
        let err = ExperimentConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
    }

    #[test]
    fn ranges_are_validated() {
        let text = CIRCLE.replace("potential.level = 2.0", "potential.level = 0.5");
        assert!(matches!(ExperimentConfig::parse(&text), Err(LabError::Config(m)) if m.contains("potential.level")));
        let text = CIRCLE.replace("spectrum.fit_window = [4, 16]", "spectrum.fit_window = [16, 4]");
        assert!(ExperimentConfig::parse(&text).is_err());
        let text = CIRCLE.replace("ladders.sample_degree = 20", "ladders.sample_degree = 22");
        assert!(ExperimentConfig::parse(&text).is_err());
    }

    #[test]
    fn harmonic_potential_takes_no_level() {
        let text = CIRCLE.replace(
            "potential.kind = \"constant\"\npotential.level = 2.0",
            "potential.kind = \"harmonic\"",
        );
        assert_eq!(
            ExperimentConfig::parse(&text).unwrap().potential,
            PotentialConfig::Harmonic
        );
    }
}
