//! Coherent vectors in the boson Fock space over `g_C`-valued one-forms, and
//! the energy representation
//! `U(ψ) exp(f) = exp(-½|β(ψ)|² - ⟨β(ψ), V(ψ)f⟩) exp(V(ψ)f + β(ψ))`.
//!
//! Inner products use the standard kernel `⟨exp f, exp g⟩ = e^{⟨f, g⟩}`.

use alloc::vec;
use alloc::vec::Vec;

// Float math for no_std builds; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::calculus::{inner_product, norm};
use crate::error::{Error, Result};
use crate::field::LieOneForm;
use crate::gauge::{log_derivative, v_action, GaugeField};
use crate::grid::GridManifold;
use crate::C64;

/// `c · exp(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentVector {
    pub coefficient: C64,
    pub parameter: LieOneForm,
}

impl CoherentVector {
    pub fn new(parameter: LieOneForm) -> Self {
        Self {
            coefficient: C64::new(1.0, 0.0),
            parameter,
        }
    }

    /// `|c| e^{|f|²/2}`.
    pub fn norm(&self, grid: &GridManifold, rho: Option<&[f64]>) -> Result<f64> {
        let f = norm(grid, &self.parameter, rho)?;
        Ok(self.coefficient.norm() * (0.5 * f * f).exp())
    }
}

/// `conj(c_a) c_b e^{⟨f_a, f_b⟩_{ρ,0}}`.
pub fn coherent_inner(grid: &GridManifold, a: &CoherentVector, b: &CoherentVector, rho: Option<&[f64]>) -> Result<C64> {
    Ok(a.coefficient.conj() * b.coefficient * inner_product(grid, &a.parameter, &b.parameter, rho)?.exp())
}

/// `U(ψ)` with `β(ψ)` and `|β(ψ)|²` computed once.
#[derive(Debug, Clone)]
pub struct EnergyOperator {
    grid: GridManifold,
    rho: Option<Vec<f64>>,
    psi: GaugeField,
    beta: LieOneForm,
    beta_sq: C64,
}

impl EnergyOperator {
    pub fn new(grid: &GridManifold, psi: &GaugeField, rho: Option<&[f64]>) -> Result<Self> {
        let beta = log_derivative(grid, psi)?;
        let beta_sq = inner_product(grid, &beta, &beta, rho)?;
        Ok(Self {
            grid: grid.clone(),
            rho: rho.map(<[f64]>::to_vec),
            psi: psi.clone(),
            beta,
            beta_sq,
        })
    }

    pub fn beta(&self) -> &LieOneForm {
        &self.beta
    }

    /// `|β(ψ)|²_{ρ,0}` as computed, imaginary part included.
    pub fn beta_norm_sq(&self) -> C64 {
        self.beta_sq
    }

    /// Exponent of the scalar in front of `exp(V(ψ)f + β(ψ))`, together with
    /// the new parameter.
    fn transform(&self, f: &LieOneForm) -> Result<(C64, LieOneForm)> {
        let vf = v_action(&self.grid, &self.psi, f)?;
        let exponent = -0.5 * self.beta_sq - inner_product(&self.grid, &self.beta, &vf, self.rho.as_deref())?;
        Ok((exponent, vf.add(&self.beta)?))
    }

    pub fn apply(&self, v: &CoherentVector) -> Result<CoherentVector> {
        let (exponent, parameter) = self.transform(&v.parameter)?;
        Ok(CoherentVector {
            coefficient: v.coefficient * exponent.exp(),
            parameter,
        })
    }

    /// `E` with `⟨exp f, U(ψ) exp g⟩ = e^E`, evaluated in the inner product of
    /// `grid` (which may carry a conformal factor the operator was not built
    /// with).
    pub fn matrix_element_exponent(&self, grid: &GridManifold, f: &LieOneForm, g: &LieOneForm) -> Result<C64> {
        let rho = self.rho.as_deref();
        let vg = v_action(&self.grid, &self.psi, g)?;
        let beta_sq = inner_product(grid, &self.beta, &self.beta, rho)?;
        let coupling = inner_product(grid, &self.beta, &vg, rho)?;
        let overlap = inner_product(grid, f, &vg.add(&self.beta)?, rho)?;
        Ok(-0.5 * beta_sq - coupling + overlap)
    }
}

/// `|⟨U a, U b⟩ - ⟨a, b⟩| / |⟨a, b⟩|`.
pub fn unitarity_defect(
    grid: &GridManifold,
    u: &EnergyOperator,
    a: &CoherentVector,
    b: &CoherentVector,
) -> Result<f64> {
    let rho = u.rho.as_deref();
    let before = coherent_inner(grid, a, b, rho)?;
    let after = coherent_inner(grid, &u.apply(a)?, &u.apply(b)?, rho)?;
    Ok((after - before).norm() / before.norm())
}

/// Comparison of `U(ψφ) exp f` with `U(ψ) U(φ) exp f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomomorphismReport {
    /// `max |c_{ψφ} / c_{ψ,φ} - 1|`; zero means the multiplier is exactly 1
    /// rather than a phase.
    pub coefficient_deviation: f64,
    /// `max ‖f_{ψφ} - f_{ψ,φ}‖_{ρ,0}`.
    pub parameter_residual: f64,
}

impl HomomorphismReport {
    pub fn residual(&self) -> f64 {
        self.coefficient_deviation.max(self.parameter_residual)
    }
}

pub fn homomorphism_check(
    grid: &GridManifold,
    psi: &GaugeField,
    phi: &GaugeField,
    f_set: &[LieOneForm],
    rho: Option<&[f64]>,
) -> Result<HomomorphismReport> {
    if f_set.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let joint = EnergyOperator::new(grid, &psi.product(phi)?, rho)?;
    let (u_psi, u_phi) = (
        EnergyOperator::new(grid, psi, rho)?,
        EnergyOperator::new(grid, phi, rho)?,
    );
    let mut report = HomomorphismReport {
        coefficient_deviation: 0.0,
        parameter_residual: 0.0,
    };
    for f in f_set {
        let v = CoherentVector::new(f.clone());
        let one = joint.apply(&v)?;
        let two = u_psi.apply(&u_phi.apply(&v)?)?;
        let dev = (one.coefficient / two.coefficient - 1.0).norm();
        let res = norm(grid, &one.parameter.sub(&two.parameter)?, rho)?;
        report.coefficient_deviation = report.coefficient_deviation.max(dev);
        report.parameter_residual = report.parameter_residual.max(res);
    }
    Ok(report)
}

/// Matrix elements `⟨exp f_i, U(ψ) exp f_j⟩` before and after `g → e^σ g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalReport {
    pub dimension: usize,
    /// `max |M′ - M| / |M|` over all pairs.
    pub max_relative_change: f64,
    /// `max |E′/E - e^{(d/2 - 1)σ}|` over pairs with `E ≠ 0`, where `M = e^E`;
    /// only reported for constant `σ`.
    pub exponent_scaling_gap: Option<f64>,
    /// `max |⟨f, g⟩′/⟨f, g⟩ - e^{(d/2 - 1)σ}|` over nonzero one-particle
    /// overlaps; only reported for constant `σ`.
    pub overlap_scaling_gap: Option<f64>,
    /// `e^{(d/2 - 1)σ}` for constant `σ`.
    pub expected_factor: Option<f64>,
}

pub fn conformal_check(
    grid: &GridManifold,
    sigma: &[f64],
    u: &EnergyOperator,
    f_set: &[LieOneForm],
) -> Result<ConformalReport> {
    if f_set.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let rescaled = grid.conformal_rescale(sigma)?;
    let constant = sigma.windows(2).all(|w| w[0] == w[1]);
    let d = grid.dimension() as f64;
    let expected_factor = constant.then(|| ((0.5 * d - 1.0) * sigma.first().copied().unwrap_or(0.0)).exp());
    let rho = u.rho.as_deref();
    let mut max_relative_change: f64 = 0.0;
    let mut exponent_gap: f64 = 0.0;
    let mut overlap_gap: f64 = 0.0;
    for f in f_set {
        for g in f_set {
            let e0 = u.matrix_element_exponent(grid, f, g)?;
            let e1 = u.matrix_element_exponent(&rescaled.grid, f, g)?;
            let (m0, m1) = (e0.exp(), e1.exp());
            max_relative_change = max_relative_change.max((m1 - m0).norm() / m0.norm());
            if let Some(k) = expected_factor {
                if e0.norm() > 0.0 {
                    exponent_gap = exponent_gap.max((e1 / e0 - k).norm());
                }
                let o0 = inner_product(grid, f, g, rho)?;
                if o0.norm() > 0.0 {
                    let o1 = inner_product(&rescaled.grid, f, g, rho)?;
                    overlap_gap = overlap_gap.max((o1 / o0 - k).norm());
                }
            }
        }
    }
    Ok(ConformalReport {
        dimension: grid.dimension(),
        max_relative_change,
        exponent_scaling_gap: expected_factor.map(|_| exponent_gap),
        overlap_scaling_gap: expected_factor.map(|_| overlap_gap),
        expected_factor,
    })
}

/// Orthonormal frame (Gram-Schmidt in `⟨·,·⟩_{ρ,0}`) of the span of `fields`;
/// numerically dependent fields are skipped.
pub fn orthonormal_frame(grid: &GridManifold, fields: &[LieOneForm], rho: Option<&[f64]>) -> Result<Vec<LieOneForm>> {
    let mut frame: Vec<LieOneForm> = Vec::new();
    for f in fields {
        let mut v = f.clone();
        for e in &frame {
            let c = inner_product(grid, e, &v, rho)?;
            v = v.sub(&e.scale(c))?;
        }
        let n = norm(grid, &v, rho)?;
        let scale = norm(grid, f, rho)?;
        if n > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            frame.push(v.scale(C64::new(1.0 / n, 0.0)));
        }
    }
    Ok(frame)
}

/// Coefficients `⟨e_i, f⟩` of `f` on an orthonormal frame.
pub fn frame_coefficients(
    grid: &GridManifold,
    frame: &[LieOneForm],
    f: &LieOneForm,
    rho: Option<&[f64]>,
) -> Result<Vec<C64>> {
    frame.iter().map(|e| inner_product(grid, e, f, rho)).collect()
}

/// A Fock vector over an `r`-dimensional one-particle space, truncated at
/// total degree `N`. The degree-`k` block holds coefficients on the
/// normalized occupation states `|n_1, …, n_r⟩` with `Σ n_i = k`, which span
/// the `k`-fold symmetric tensor power.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedFockVector {
    cutoff: usize,
    modes: usize,
    /// `blocks[k]` lists `(occupation, coefficient)` pairs of degree `k`.
    blocks: Vec<Vec<(Vec<usize>, C64)>>,
}

fn occupations(modes: usize, degree: usize) -> Vec<Vec<usize>> {
    if modes == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in occupations(modes - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl TruncatedFockVector {
    /// Truncation of `exp(Σ a_i e_i) = Σ_n Π_i a_i^{n_i}/√(n_i!) |n⟩`.
    pub fn coherent(coefficients: &[C64], cutoff: usize) -> Self {
        let modes = coefficients.len();
        let blocks = (0..=cutoff)
            .map(|k| {
                occupations(modes, k)
                    .into_iter()
                    .map(|n| {
                        let c = n.iter().zip(coefficients).fold(C64::new(1.0, 0.0), |acc, (&ni, a)| {
                            let fact: f64 = (1..=ni).map(|j| j as f64).product();
                            acc * a.powu(ni as u32) / fact.sqrt()
                        });
                        (n, c)
                    })
                    .collect()
            })
            .collect();
        Self { cutoff, modes, blocks }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn block(&self, degree: usize) -> &[(Vec<usize>, C64)] {
        &self.blocks[degree]
    }

    /// `Σ_k Σ_{|n| = k} conj(a_n) b_n`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.modes != other.modes || self.cutoff != other.cutoff {
            return Err(Error::InvalidParameter(
                "truncated Fock vectors must share modes and cutoff",
            ));
        }
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b).map(|((_, x), (_, y))| x.conj() * y))
            .sum())
    }
}

/// `e^{ab} (ab)^{N+1} / (N+1)!`: bound on the tail of the exponential series
/// beyond degree `N` for parameters of norms `a` and `b`.
pub fn truncation_tail_bound(a: f64, b: f64, cutoff: usize) -> f64 {
    let z = a * b;
    let fact: f64 = (1..=cutoff + 1).map(|j| j as f64).product();
    z.exp() * z.powi(cutoff as i32 + 1) / fact
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fiber, TensorField};
    use crate::gauge::{AlgebraProfile, ScalarProfile};
    use crate::grid::{build_grid, DomainShape, DomainSpec};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn circle(n: usize) -> GridManifold {
        build_grid(&DomainSpec::new(DomainShape::Circle { radius: 1.0 }, n)).unwrap()
    }

    fn torus(n: usize) -> GridManifold {
        build_grid(&DomainSpec::new(DomainShape::Torus { period: 1.0 }, n)).unwrap()
    }

    fn random_form(grid: &GridManifold, rng: &mut ChaCha8Rng, size: f64) -> TensorField {
        let mut f = TensorField::zeros(grid, 1, Fiber::Algebra);
        for z in f.data_mut() {
            *z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let n = norm(grid, &f, None).unwrap();
        f.scale(C64::new(size / n, 0.0))
    }

    fn random_gauge(grid: &GridManifold, rng: &mut ChaCha8Rng) -> GaugeField {
        let period = grid.axes()[0].spacing * grid.axes()[0].count as f64;
        let profile = AlgebraProfile(core::array::from_fn(|_| {
            let mut k = [0.0; 2];
            for kk in k.iter_mut().take(grid.dimension()) {
                *kk = rng.random_range(-2i32..=2) as f64 * 2.0 * core::f64::consts::PI / period;
            }
            ScalarProfile::Wave {
                wavenumber: k,
                phase: rng.random_range(0.0..6.0),
                amplitude: rng.random_range(-0.3..0.3),
            }
        }));
        GaugeField::from_profile(grid, &profile).unwrap()
    }

    #[test]
    fn vacuum_and_diagonal_kernel() {
        let g = circle(16);
        let zero = CoherentVector::new(TensorField::zeros(&g, 1, Fiber::Algebra));
        assert_eq!(coherent_inner(&g, &zero, &zero, None).unwrap(), C64::new(1.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = CoherentVector::new(random_form(&g, &mut rng, 0.9));
        let k = coherent_inner(&g, &f, &f, None).unwrap();
        let n = norm(&g, &f.parameter, None).unwrap();
        assert!((k.re - (n * n).exp()).abs() < 1e-14 && k.im.abs() < 1e-15);
    }

    #[test]
    fn identity_acts_trivially() {
        let g = circle(16);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = CoherentVector::new(random_form(&g, &mut rng, 1.0));
        let u = EnergyOperator::new(&g, &GaugeField::identity(&g), None).unwrap();
        assert_eq!(u.apply(&v).unwrap(), v);
    }

    #[test]
    fn vacuum_image_is_normalized() {
        let g = circle(32);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = random_gauge(&g, &mut rng);
        let u = EnergyOperator::new(&g, &psi, None).unwrap();
        assert_eq!(u.beta_norm_sq().im, 0.0);
        let out = u
            .apply(&CoherentVector::new(TensorField::zeros(&g, 1, Fiber::Algebra)))
            .unwrap();
        assert!((out.norm(&g, None).unwrap() - 1.0).abs() < 1e-12);
        assert!(out.parameter.sub(u.beta()).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn unitarity_homomorphism_and_inverse() {
        let g = circle(32);
        let rho = g.sample(|x| 0.3 * x[0].cos());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let psi = random_gauge(&g, &mut rng);
            let phi = random_gauge(&g, &mut rng);
            let u = EnergyOperator::new(&g, &psi, Some(&rho)).unwrap();
            let a = CoherentVector::new(random_form(&g, &mut rng, 0.8));
            let b = CoherentVector::new(random_form(&g, &mut rng, 1.1));
            assert!(unitarity_defect(&g, &u, &a, &b).unwrap() <= 1e-10);
            let na = a.norm(&g, Some(&rho)).unwrap();
            assert!((u.apply(&a).unwrap().norm(&g, Some(&rho)).unwrap() - na).abs() <= 1e-10 * na);

            let fs = [a.parameter.clone(), b.parameter.clone()];
            let h = homomorphism_check(&g, &psi, &phi, &fs, Some(&rho)).unwrap();
            assert!(
                h.coefficient_deviation <= 1e-9 && h.parameter_residual <= 1e-10,
                "{h:?}"
            );
            let trivial = homomorphism_check(&g, &psi, &GaugeField::identity(&g), &fs, Some(&rho)).unwrap();
            assert!(trivial.residual() <= 1e-14);

            let back = EnergyOperator::new(&g, &phi.inverse(), Some(&rho)).unwrap();
            let there = EnergyOperator::new(&g, &phi, Some(&rho)).unwrap();
            let round = back.apply(&there.apply(&a).unwrap()).unwrap();
            assert!((round.coefficient - 1.0).norm() <= 1e-10);
            assert!(norm(&g, &round.parameter.sub(&a.parameter).unwrap(), None).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn conformal_invariance_in_two_dimensions() {
        let g = torus(10);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sigma: Vec<f64> = (0..g.node_count()).map(|_| rng.random_range(-0.5..0.5)).collect();
        let u = EnergyOperator::new(&g, &random_gauge(&g, &mut rng), None).unwrap();
        let fs: Vec<TensorField> = (0..3).map(|_| random_form(&g, &mut rng, 0.7)).collect();
        let r = conformal_check(&g, &sigma, &u, &fs).unwrap();
        assert!(r.max_relative_change <= 1e-10, "{r:?}");
        assert!(r.expected_factor.is_none());
    }

    #[test]
    fn conformal_scaling_in_one_dimension() {
        let g = circle(32);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = EnergyOperator::new(&g, &random_gauge(&g, &mut rng), None).unwrap();
        let fs: Vec<TensorField> = (0..3).map(|_| random_form(&g, &mut rng, 0.7)).collect();
        let r = conformal_check(&g, &vec![1.0; 32], &u, &fs).unwrap();
        assert!((r.expected_factor.unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!(r.exponent_scaling_gap.unwrap() <= 1e-8);
        assert!(r.overlap_scaling_gap.unwrap() <= 1e-12);
        assert!(r.max_relative_change > 1e-3);
        let flat = conformal_check(&g, &vec![0.0; 32], &u, &fs).unwrap();
        assert_eq!(flat.max_relative_change, 0.0);
    }

    #[test]
    fn occupation_counts() {
        assert_eq!(occupations(2, 3).len(), 4);
        assert_eq!(occupations(3, 2).len(), 6);
        assert_eq!(occupations(1, 5), vec![vec![5]]);
    }

    #[test]
    fn truncated_expansion_matches_kernel() {
        let g = circle(24);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let (na, nb) = (rng.random_range(0.1..1.0), rng.random_range(0.1..1.0));
            let f = random_form(&g, &mut rng, na);
            let h = random_form(&g, &mut rng, nb);
            let frame = orthonormal_frame(&g, &[f.clone(), h.clone()], None).unwrap();
            assert_eq!(frame.len(), 2);
            let tf = TruncatedFockVector::coherent(&frame_coefficients(&g, &frame, &f, None).unwrap(), 12);
            let th = TruncatedFockVector::coherent(&frame_coefficients(&g, &frame, &h, None).unwrap(), 12);
            let exact = coherent_inner(&g, &CoherentVector::new(f), &CoherentVector::new(h), None).unwrap();
            let gap = (tf.inner(&th).unwrap() - exact).norm();
            assert!(gap <= truncation_tail_bound(na, nb, 12) + 1e-14, "{gap}");
        }
    }

    proptest! {
        #[test]
        fn truncation_converges_factorially(a in 0.2f64..1.5, cutoff in 2usize..14) {
            // One mode: partial sums of e^{|a|²}.
            let v = TruncatedFockVector::coherent(&[C64::new(a, 0.0)], cutoff);
            let gap = ((a * a).exp() - v.inner(&v).unwrap().re).abs();
            prop_assert!(gap <= truncation_tail_bound(a, a, cutoff) * (1.0 + 1e-12) + 1e-15);
        }
    }
}
