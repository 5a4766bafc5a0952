//! Spectral seminorms `|f|_p = |H^p f|₀`, derivative seminorms
//! `|f|′_m = Σ_{n≤m} |W^m ∇^n f|₀`, their weighted versions, and an empirical
//! probe of the equivalence of the two families.

use alloc::vec;
use alloc::vec::Vec;

// Float math for no_std builds; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::calculus::{covariant_derivative, norm, weighted_derivative};
use crate::error::{Error, Result};
use crate::field::{TensorField, WeightField};
use crate::grid::GridManifold;
use crate::spectral::SpectralDecomposition;

/// `|f|_p`, or `|f|_{ρ,p}` when `spectrum` belongs to `H_ρ`.
pub fn seminorm_p(spectrum: &SpectralDecomposition, f: &TensorField, p: f64) -> Result<f64> {
    spectrum.field_power_norm(f, p)
}

fn rho_of(weights: &WeightField) -> Option<&[f64]> {
    (!weights.is_unweighted()).then(|| weights.rho())
}

/// The terms `|W^m ∇_ρ^n f|_{ρ,0}` for `n = 0..=m`.
pub fn derivative_terms(grid: &GridManifold, f: &TensorField, m: usize, weights: &WeightField) -> Result<Vec<f64>> {
    grid.check_nodal(weights.potential())?;
    let rho = rho_of(weights);
    let wm: Vec<f64> = weights.potential().iter().map(|w| w.powi(m as i32)).collect();
    let mut terms = Vec::with_capacity(m + 1);
    let mut cur = f.clone();
    for n in 0..=m {
        if n > 0 {
            cur = match rho {
                Some(r) => weighted_derivative(grid, &cur, r)?,
                None => covariant_derivative(grid, &cur)?,
            };
        }
        terms.push(norm(grid, &cur.multiply_nodal(&wm)?, rho)?);
    }
    Ok(terms)
}

/// `|f|′_m`, or `|f|′_{ρ,m}` when the weight carries a nonzero `ρ`.
pub fn seminorm_prime(grid: &GridManifold, f: &TensorField, m: usize, weights: &WeightField) -> Result<f64> {
    Ok(derivative_terms(grid, f, m, weights)?.iter().sum())
}

/// Both sides of `|W^m ∇_ρ^n f|_{ρ,0} = |W^m ∇^n (e^{ρ/2} f)|₀` for
/// `n = 0..=m`, and the largest relative gap between them.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedChain {
    pub weighted: Vec<f64>,
    pub conjugated: Vec<f64>,
    pub residual: f64,
}

pub fn weighted_chain(grid: &GridManifold, f: &TensorField, m: usize, weights: &WeightField) -> Result<WeightedChain> {
    let weighted = derivative_terms(grid, f, m, weights)?;
    let up: Vec<f64> = weights.rho().iter().map(|r| (0.5 * r).exp()).collect();
    let plain = WeightField::unweighted(grid, weights.potential().to_vec())?;
    let conjugated = derivative_terms(grid, &f.multiply_nodal(&up)?, m, &plain)?;
    let residual = weighted
        .iter()
        .zip(&conjugated)
        .map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(WeightedChain {
        weighted,
        conjugated,
        residual,
    })
}

/// Seminorm values of one test function.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormRow {
    /// `|f|_p` for each entry of the p-grid.
    pub spectral: Vec<f64>,
    /// `|f|′_m` for each entry of the m-grid.
    pub derivative: Vec<f64>,
}

/// Seminorm values over a test set on one grid, with the empirical constants
/// `forward[m][p] = max_f |f|′_m / |f|_p` and `converse[m][p] = max_f |f|_p / |f|′_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormReport {
    pub weighted: bool,
    pub p_grid: Vec<f64>,
    pub m_grid: Vec<usize>,
    pub rows: Vec<SeminormRow>,
    pub forward: Vec<Vec<f64>>,
    pub converse: Vec<Vec<f64>>,
}

/// Evaluates both seminorm families on every test function. `spectrum` must
/// be the decomposition of `H` (or of `H_ρ` when `weights` carries a `ρ`).
pub fn equivalence_probe(
    grid: &GridManifold,
    weights: &WeightField,
    spectrum: &SpectralDecomposition,
    test_set: &[TensorField],
    m_grid: &[usize],
    p_grid: &[f64],
) -> Result<SeminormReport> {
    if test_set.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut rows = Vec::with_capacity(test_set.len());
    let mut forward = vec![vec![0.0f64; p_grid.len()]; m_grid.len()];
    let mut converse = vec![vec![0.0f64; p_grid.len()]; m_grid.len()];
    for f in test_set {
        let spectral = p_grid
            .iter()
            .map(|p| seminorm_p(spectrum, f, *p))
            .collect::<Result<Vec<_>>>()?;
        let derivative = m_grid
            .iter()
            .map(|m| seminorm_prime(grid, f, *m, weights))
            .collect::<Result<Vec<_>>>()?;
        if spectral.iter().chain(&derivative).any(|v| *v <= 0.0) {
            return Err(Error::InvalidParameter("test functions must be nonzero"));
        }
        for (i, d) in derivative.iter().enumerate() {
            for (j, s) in spectral.iter().enumerate() {
                forward[i][j] = forward[i][j].max(d / s);
                converse[i][j] = converse[i][j].max(s / d);
            }
        }
        rows.push(SeminormRow { spectral, derivative });
    }
    Ok(SeminormReport {
        weighted: !weights.is_unweighted(),
        p_grid: p_grid.to_vec(),
        m_grid: m_grid.to_vec(),
        rows,
        forward,
        converse,
    })
}

/// Behaviour of one constant across grid refinements.
#[derive(Debug, Clone, PartialEq)]
pub struct StableConstant {
    pub m: usize,
    pub p: f64,
    /// One constant per refinement, in the order the reports were given.
    pub constants: Vec<f64>,
    /// `max / min` of `constants`.
    pub spread: f64,
}

/// Per `m`, the constants chosen across refinements:
/// `forward` uses the smallest `p` whose `|f|′_m ≤ C|f|_p` constants stay
/// within `tolerance`; `converse` uses the largest `p` whose
/// `|f|_p ≤ C|f|′_m` constants do. `None` when no `p` qualifies.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementSummary {
    pub forward: Vec<Option<StableConstant>>,
    pub converse: Vec<Option<StableConstant>>,
}

pub fn refinement_stability(reports: &[SeminormReport], tolerance: f64) -> Result<RefinementSummary> {
    let first = reports.first().ok_or(Error::EmptyTestSet)?;
    if reports
        .iter()
        .any(|r| r.m_grid != first.m_grid || r.p_grid != first.p_grid)
    {
        return Err(Error::InvalidParameter("reports must share the m and p grids"));
    }
    let collect = |table: fn(&SeminormReport) -> &Vec<Vec<f64>>, i: usize, j: usize| {
        let constants: Vec<f64> = reports.iter().map(|r| table(r)[i][j]).collect();
        let hi = constants.iter().copied().fold(f64::MIN, f64::max);
        let lo = constants.iter().copied().fold(f64::MAX, f64::min);
        StableConstant {
            m: first.m_grid[i],
            p: first.p_grid[j],
            constants,
            spread: hi / lo,
        }
    };
    let mut forward = Vec::new();
    let mut converse = Vec::new();
    for i in 0..first.m_grid.len() {
        forward.push(
            (0..first.p_grid.len())
                .map(|j| collect(|r| &r.forward, i, j))
                .find(|c| c.spread <= tolerance),
        );
        converse.push(
            (0..first.p_grid.len())
                .rev()
                .map(|j| collect(|r| &r.converse, i, j))
                .find(|c| c.spread <= tolerance),
        );
    }
    Ok(RefinementSummary { forward, converse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, DomainShape, DomainSpec};
    use crate::spectral::{assemble_h, assemble_h_rho};
    use crate::C64;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn circle(n: usize) -> GridManifold {
        build_grid(&DomainSpec::new(DomainShape::Circle { radius: 1.0 }, n)).unwrap()
    }

    fn wave(g: &GridManifold, phase: f64) -> TensorField {
        TensorField::scalar(g, &g.sample(|x| (x[0] + phase).sin() + 0.5 * (3.0 * x[0]).cos() + 0.2)).unwrap()
    }

    #[test]
    fn order_zero_is_base_norm() {
        let g = circle(32);
        let w = WeightField::unweighted(&g, vec![1.0; 32]).unwrap();
        let spec = assemble_h(&g, &w, 0).unwrap().decompose().unwrap();
        let f = wave(&g, 0.3);
        let base = norm(&g, &f, None).unwrap();
        assert_relative_eq!(seminorm_p(&spec, &f, 0.0).unwrap(), base, max_relative = 1e-12);
        assert_relative_eq!(seminorm_prime(&g, &f, 0, &w).unwrap(), base, max_relative = 1e-15);
    }

    #[test]
    fn eigenvector_seminorms() {
        let g = circle(32);
        let w = WeightField::unweighted(&g, vec![2.0; 32]).unwrap();
        let spec = assemble_h(&g, &w, 0).unwrap().decompose().unwrap();
        for n in [0, 3, 10] {
            let e = TensorField::scalar(&g, &spec.eigenvector(n)).unwrap();
            assert_relative_eq!(
                seminorm_p(&spec, &e, 1.5).unwrap(),
                spec.values()[n].powf(1.5),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn constant_field_prime() {
        let g = circle(16);
        let w = WeightField::unweighted(&g, vec![2.0; 16]).unwrap();
        let c = TensorField::scalar(&g, &[0.7; 16]).unwrap();
        let base = norm(&g, &c, None).unwrap();
        let terms = derivative_terms(&g, &c, 1, &w).unwrap();
        assert_relative_eq!(terms[0], 2.0 * base, max_relative = 1e-15);
        assert_eq!(terms[1], 0.0);
    }

    #[test]
    fn spectral_seminorms_are_monotone_in_p() {
        let g = circle(32);
        let w = WeightField::unweighted(&g, vec![2.0; 32]).unwrap();
        let spec = assemble_h(&g, &w, 0).unwrap().decompose().unwrap();
        let f = wave(&g, 1.1);
        let values: Vec<f64> = [0.0, 0.5, 1.0, 2.0]
            .iter()
            .map(|p| seminorm_p(&spec, &f, *p).unwrap())
            .collect();
        assert!(values.windows(2).all(|v| v[0] <= v[1]));
    }

    #[test]
    fn weighted_scale_intertwines_with_conjugation() {
        let g = circle(32);
        let rho = g.sample(|x| 0.6 * x[0].cos());
        let w = WeightField::new(&g, vec![2.0; 32], rho.clone()).unwrap();
        let plain = WeightField::unweighted(&g, vec![2.0; 32]).unwrap();
        let spec = assemble_h(&g, &plain, 0).unwrap().decompose().unwrap();
        let spec_rho = assemble_h_rho(&g, &w, 0).unwrap().decompose().unwrap();
        let f = wave(&g, 0.4);
        let up: Vec<f64> = rho.iter().map(|r| (0.5 * r).exp()).collect();
        let shifted = f.multiply_nodal(&up).unwrap();
        for p in [0.0, 0.5, 1.0, 2.0] {
            let a = seminorm_p(&spec_rho, &f, p).unwrap();
            let b = seminorm_p(&spec, &shifted, p).unwrap();
            assert!((a - b).abs() <= 1e-10 * b, "{p}: {a} vs {b}");
        }
    }

    #[test]
    fn weighted_chain_on_algebra_covectors() {
        let g = build_grid(&DomainSpec::new(DomainShape::Torus { period: 1.0 }, 12)).unwrap();
        let rho = g.sample(|x| 0.4 * (6.0 * x[0]).sin() * (6.0 * x[1]).cos());
        let w = WeightField::new(&g, g.sample(|x| 1.5 + (6.0 * x[1]).sin().powi(2)), rho).unwrap();
        let mut f = TensorField::zeros(&g, 1, crate::field::Fiber::Algebra);
        for (i, z) in f.data_mut().iter_mut().enumerate() {
            *z = C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos());
        }
        let chain = weighted_chain(&g, &f, 3, &w).unwrap();
        assert_eq!(chain.weighted.len(), 4);
        assert!(chain.residual <= 1e-12, "{}", chain.residual);
    }

    #[test]
    fn probe_rejects_empty_set() {
        let g = circle(16);
        let w = WeightField::unweighted(&g, vec![2.0; 16]).unwrap();
        let spec = assemble_h(&g, &w, 0).unwrap().decompose().unwrap();
        assert!(matches!(
            equivalence_probe(&g, &w, &spec, &[], &[0], &[0.0]),
            Err(Error::EmptyTestSet)
        ));
    }

    /// Eigenvectors up to `N/4` plus two fixed waves.
    fn circle_probe(n: usize) -> SeminormReport {
        let g = circle(n);
        let w = WeightField::unweighted(&g, vec![2.0; n]).unwrap();
        let spec = assemble_h(&g, &w, 0).unwrap().decompose().unwrap();
        let mut set: Vec<TensorField> = (0..n / 4)
            .map(|k| TensorField::scalar(&g, &spec.eigenvector(k)).unwrap())
            .collect();
        set.push(wave(&g, 0.0));
        set.push(wave(&g, 2.0));
        equivalence_probe(&g, &w, &spec, &set, &[0, 1, 2], &[0.0, 0.5, 1.0, 1.5, 2.0]).unwrap()
    }

    #[test]
    fn circle_constants_stabilize_under_refinement() {
        let reports: Vec<SeminormReport> = [16, 32, 64].into_iter().map(circle_probe).collect();
        let s = refinement_stability(&reports, 2.0).unwrap();
        for (i, m) in [0usize, 1, 2].iter().enumerate() {
            let f = s.forward[i].as_ref().unwrap();
            assert_eq!(f.p, *m as f64 / 2.0, "forward m={m}");
            let c = s.converse[i].as_ref().unwrap();
            assert!(c.p >= *m as f64 / 2.0, "converse m={m}: p={}", c.p);
        }
        // p = 0 cannot control a derivative: the constant grows with N.
        let grow: Vec<f64> = reports.iter().map(|r| r.forward[1][0]).collect();
        assert!(grow[2] > 2.5 * grow[0], "{grow:?}");
    }

    proptest! {
        #[test]
        fn seminorms_are_seminorms(a in -3.0f64..3.0, s1 in 0.0f64..6.0, s2 in 0.0f64..6.0, m in 0usize..3) {
            let g = circle(24);
            let w = WeightField::new(&g, g.sample(|x| 2.0 + x[0].cos()), g.sample(|x| 0.3 * x[0].sin())).unwrap();
            let spec = assemble_h_rho(&g, &w, 0).unwrap().decompose().unwrap();
            let f = wave(&g, s1);
            let h = wave(&g, s2).scale(C64::new(0.5, -0.2));
            let sum = f.add(&h).unwrap();
            let scaled = f.scale(C64::new(a, 0.0));
            for p in [0.0, 0.75, 1.5] {
                let (x, y, z) = (seminorm_p(&spec, &f, p).unwrap(), seminorm_p(&spec, &h, p).unwrap(), seminorm_p(&spec, &sum, p).unwrap());
                prop_assert!(z <= x + y + 1e-12 * (x + y));
                let k = seminorm_p(&spec, &scaled, p).unwrap();
                prop_assert!((k - a.abs() * x).abs() <= 1e-12 * x.max(1.0));
            }
            let (x, y, z) = (
                seminorm_prime(&g, &f, m, &w).unwrap(),
                seminorm_prime(&g, &h, m, &w).unwrap(),
                seminorm_prime(&g, &sum, m, &w).unwrap(),
            );
            prop_assert!(z <= x + y + 1e-12 * (x + y));
            let k = seminorm_prime(&g, &scaled, m, &w).unwrap();
            prop_assert!((k - a.abs() * x).abs() <= 1e-12 * x.max(1.0));
        }

        #[test]
        fn weighted_chain_holds(seed in 0u64..1000, m in 0usize..=3) {
            let g = circle(32);
            let phase = seed as f64 * 0.01;
            let rho = g.sample(|x| 0.5 * (x[0] + phase).sin() - 0.2 * (2.0 * x[0]).cos());
            let w = WeightField::new(&g, g.sample(|x| 2.0 + (x[0] - phase).cos()), rho).unwrap();
            let f = wave(&g, phase * 3.0);
            let chain = weighted_chain(&g, &f, m, &w).unwrap();
            prop_assert!(chain.residual <= 1e-12);
        }
    }
}
