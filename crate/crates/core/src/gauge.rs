//! Gauge fields `ψ: M → SU(2)`, the Maurer-Cartan cocycle `β(ψ) = dψ ψ⁻¹`,
//! the actions `V` and `V′`, and the cutoff machinery behind the regularity
//! and approximation statements.
//!
//! Gauge fields carry exact first derivatives at every node, so `β` is never
//! obtained by differencing and the cocycle identity holds to rounding.

use alloc::vec::Vec;

use nalgebra::Matrix3;
// Float math for no_std builds; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::calculus::norm;
use crate::error::{Error, Result};
use crate::field::{Fiber, LieOneForm, TensorField, WeightField};
use crate::grid::{DomainShape, GridManifold, Topology};
use crate::lie::{ad_matrix, apply_real, dexp_path, exp_map, project, AlgebraElement, GroupElement, Mat2};
use crate::seminorm::{seminorm_p, seminorm_prime};
use crate::spectral::SpectralDecomposition;
use crate::stats::linear_fit;
use crate::C64;

/// A scalar function of the coordinates with an exact gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarProfile {
    Constant(f64),
    /// `a·exp(1 - 1/(1 - r²/R²))` inside radius `R`, zero outside.
    Bump {
        center: [f64; 2],
        radius: f64,
        amplitude: f64,
    },
    /// `a·sin(k·x + φ)`.
    Wave {
        wavenumber: [f64; 2],
        phase: f64,
        amplitude: f64,
    },
}

impl ScalarProfile {
    pub fn value_and_gradient(&self, grid: &GridManifold, node: usize) -> (f64, [f64; 2]) {
        match *self {
            ScalarProfile::Constant(c) => (c, [0.0; 2]),
            ScalarProfile::Bump {
                center,
                radius,
                amplitude,
            } => {
                let dx = grid.displacement(node, center);
                let s = (dx[0] * dx[0] + dx[1] * dx[1]) / (radius * radius);
                if s >= 1.0 {
                    return (0.0, [0.0; 2]);
                }
                let v = amplitude * (1.0 - 1.0 / (1.0 - s)).exp();
                let ds = -v / ((1.0 - s) * (1.0 - s));
                (v, dx.map(|d| ds * 2.0 * d / (radius * radius)))
            }
            ScalarProfile::Wave {
                wavenumber,
                phase,
                amplitude,
            } => {
                let x = grid.coordinates(node);
                let arg = wavenumber[0] * x[0] + wavenumber[1] * x[1] + phase;
                let c = amplitude * arg.cos();
                (amplitude * arg.sin(), wavenumber.map(|k| c * k))
            }
        }
    }

    /// Whether the profile vanishes outside a compact set inside the domain.
    /// Everything is compactly supported on periodic domains.
    pub fn compact_in(&self, grid: &GridManifold) -> bool {
        if grid.topology() == Topology::Periodic {
            return true;
        }
        match *self {
            ScalarProfile::Constant(c) => c == 0.0,
            ScalarProfile::Wave { amplitude, .. } => amplitude == 0.0,
            ScalarProfile::Bump { center, radius, .. } => {
                let half = box_half_width(grid.shape());
                (0..grid.dimension()).all(|a| center[a].abs() + radius <= half)
            }
        }
    }
}

fn box_half_width(shape: DomainShape) -> f64 {
    match shape {
        DomainShape::Interval { half_width }
        | DomainShape::Square { half_width }
        | DomainShape::PuncturedSquare { half_width } => half_width,
        _ => f64::INFINITY,
    }
}

/// Three scalar profiles, one per basis coefficient of `su(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraProfile(pub [ScalarProfile; 3]);

/// Node values and exact coordinate derivatives of a map `M → su(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraValuedField {
    dim: usize,
    values: Vec<AlgebraElement>,
    gradients: Vec<[AlgebraElement; 2]>,
    compact: bool,
}

impl AlgebraValuedField {
    pub fn from_profile(grid: &GridManifold, profile: &AlgebraProfile) -> Self {
        let mut values = Vec::with_capacity(grid.node_count());
        let mut gradients = Vec::with_capacity(grid.node_count());
        for node in 0..grid.node_count() {
            let mut v = [0.0; 3];
            let mut g = [[0.0; 3]; 2];
            for (k, p) in profile.0.iter().enumerate() {
                let (pv, pg) = p.value_and_gradient(grid, node);
                v[k] = pv;
                g[0][k] = pg[0];
                g[1][k] = pg[1];
            }
            values.push(AlgebraElement(v));
            gradients.push(g.map(AlgebraElement));
        }
        Self {
            dim: grid.dimension(),
            values,
            gradients,
            compact: profile.0.iter().all(|p| p.compact_in(grid)),
        }
    }

    pub fn constant(grid: &GridManifold, x: AlgebraElement) -> Self {
        Self {
            dim: grid.dimension(),
            values: alloc::vec![x; grid.node_count()],
            gradients: alloc::vec![[AlgebraElement::ZERO; 2]; grid.node_count()],
            compact: grid.topology() == Topology::Periodic || x == AlgebraElement::ZERO,
        }
    }

    pub fn zero(grid: &GridManifold) -> Self {
        Self::constant(grid, AlgebraElement::ZERO)
    }

    pub fn values(&self) -> &[AlgebraElement] {
        &self.values
    }

    pub fn gradient(&self, node: usize, axis: usize) -> AlgebraElement {
        self.gradients[node][axis]
    }

    /// Compactly supported (`C_c^∞`) rather than merely bounded (`C_b^∞`).
    pub fn is_compact(&self) -> bool {
        self.compact
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v.scale(t)).collect(),
            gradients: self.gradients.iter().map(|g| g.map(|x| x.scale(t))).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(&b.scale(-1.0)))
                .collect(),
            gradients: self
                .gradients
                .iter()
                .zip(&other.gradients)
                .map(|(a, b)| core::array::from_fn(|i| a[i].add(&b[i].scale(-1.0))))
                .collect(),
            compact: self.compact && other.compact,
        }
    }

    /// `χ·Ψ` for a scalar `χ` given with its gradient, by the product rule.
    pub fn multiply_scalar(&self, values: &[f64], gradients: &[[f64; 2]], compact: bool) -> Self {
        Self {
            dim: self.dim,
            values: self.values.iter().zip(values).map(|(x, c)| x.scale(*c)).collect(),
            gradients: (0..self.values.len())
                .map(|n| {
                    core::array::from_fn(|i| {
                        self.gradients[n][i]
                            .scale(values[n])
                            .add(&self.values[n].scale(gradients[n][i]))
                    })
                })
                .collect(),
            compact: self.compact || compact,
        }
    }

    /// The rank-0 `g_C`-valued field with these values.
    pub fn to_field(&self, grid: &GridManifold) -> TensorField {
        let mut f = TensorField::zeros(grid, 0, Fiber::Algebra);
        for (node, v) in self.values.iter().enumerate() {
            for k in 0..3 {
                f.set(node, 0, k, C64::new(v.0[k], 0.0));
            }
        }
        f
    }
}

/// A gauge field with its value and exact coordinate derivatives `∂_i ψ` at
/// every node.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeField {
    dim: usize,
    values: Vec<GroupElement>,
    derivatives: Vec<[Mat2; 2]>,
}

impl GaugeField {
    pub fn identity(grid: &GridManifold) -> Self {
        Self {
            dim: grid.dimension(),
            values: alloc::vec![GroupElement::identity(); grid.node_count()],
            derivatives: alloc::vec![[Mat2::zeros(); 2]; grid.node_count()],
        }
    }

    /// `ψ = exp(Ψ)` pointwise, with `∂_i ψ = dexp_Ψ(∂_i Ψ)`. Refuses fields that
    /// are not compactly supported inside a truncated domain.
    pub fn exp_of(grid: &GridManifold, field: &AlgebraValuedField) -> Result<Self> {
        if !field.is_compact() {
            return Err(Error::InvalidParameter("gauge fields must be compactly supported"));
        }
        if field.values.len() != grid.node_count() {
            return Err(Error::GridMismatch {
                expected: grid.node_count(),
                found: field.values.len(),
            });
        }
        let dim = grid.dimension();
        let values = field.values.iter().map(exp_map).collect();
        let derivatives = (0..grid.node_count())
            .map(|n| {
                core::array::from_fn(|i| {
                    if i < dim {
                        dexp_path(&field.values[n], &field.gradients[n][i])
                    } else {
                        Mat2::zeros()
                    }
                })
            })
            .collect();
        Ok(Self {
            dim,
            values,
            derivatives,
        })
    }

    pub fn from_profile(grid: &GridManifold, profile: &AlgebraProfile) -> Result<Self> {
        Self::exp_of(grid, &AlgebraValuedField::from_profile(grid, profile))
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    pub fn derivative(&self, node: usize, axis: usize) -> &Mat2 {
        &self.derivatives[node][axis]
    }

    /// `ψφ`, with `∂(ψφ) = ∂ψ·φ + ψ·∂φ`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.values.len() != other.values.len() {
            return Err(Error::GridMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect();
        let derivatives = (0..self.values.len())
            .map(|n| {
                let (a, b) = (self.values[n].matrix(), other.values[n].matrix());
                core::array::from_fn(|i| self.derivatives[n][i] * b + a * other.derivatives[n][i])
            })
            .collect();
        Ok(Self {
            dim: self.dim,
            values,
            derivatives,
        })
    }

    /// `ψ⁻¹`, with `∂(ψ⁻¹) = -ψ⁻¹ ∂ψ ψ⁻¹`.
    pub fn inverse(&self) -> Self {
        let values: Vec<GroupElement> = self.values.iter().map(|v| v.inverse()).collect();
        let derivatives = values
            .iter()
            .zip(&self.derivatives)
            .map(|(inv, d)| d.map(|m| -(inv.matrix() * m * inv.matrix())))
            .collect();
        Self {
            dim: self.dim,
            values,
            derivatives,
        }
    }

    /// Nodes where `ψ` differs from the identity or has a nonzero derivative.
    pub fn support_mask(&self) -> Vec<bool> {
        self.values
            .iter()
            .zip(&self.derivatives)
            .map(|(v, d)| (v.matrix() - Mat2::identity()).norm() > 0.0 || d.iter().any(|m| m.norm() > 0.0))
            .collect()
    }

    /// Largest unitarity or determinant defect over the nodes.
    pub fn group_defect(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.unitarity_defect().max(v.determinant_defect()))
            .fold(0.0, f64::max)
    }
}

/// Tolerance on the part of `∂_i ψ ψ⁻¹` falling outside `su(2)`.
const ALGEBRA_TOLERANCE: f64 = 1e-10;

/// `β(ψ) = dψ ψ⁻¹` as a `g_C`-valued one-form. The coefficients are those of
/// the complexified projection, so any imaginary part is kept visible.
pub fn log_derivative(grid: &GridManifold, psi: &GaugeField) -> Result<LieOneForm> {
    if psi.values.len() != grid.node_count() {
        return Err(Error::GridMismatch {
            expected: grid.node_count(),
            found: psi.values.len(),
        });
    }
    let mut beta = TensorField::zeros(grid, 1, Fiber::Algebra);
    for node in 0..grid.node_count() {
        let inv = psi.values[node].inverse();
        for axis in 0..grid.dimension() {
            let m = psi.derivatives[node][axis] * inv.matrix();
            let (coeffs, outside) = project(&m);
            let imaginary = coeffs.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
            let defect = outside + imaginary;
            if defect > ALGEBRA_TOLERANCE * m.norm().max(1.0) {
                return Err(Error::NotInAlgebra(defect));
            }
            for (k, z) in coeffs.iter().enumerate() {
                beta.set(node, axis, k, *z);
            }
        }
    }
    Ok(beta)
}

fn pointwise_algebra_map(
    grid: &GridManifold,
    f: &TensorField,
    mats: impl Fn(usize) -> Matrix3<f64>,
) -> Result<TensorField> {
    f.check_grid(grid)?;
    if f.fiber() != Fiber::Algebra {
        return Err(Error::FiberMismatch);
    }
    let mut out = f.clone();
    for node in 0..grid.node_count() {
        let m = mats(node);
        for t in 0..f.tensor_len() {
            let v: [C64; 3] = core::array::from_fn(|k| f.get(node, t, k));
            for (k, z) in apply_real(&m, &v).into_iter().enumerate() {
                out.set(node, t, k, z);
            }
        }
    }
    Ok(out)
}

/// `V(ψ)f = (id ⊗ Ad ψ) f`.
pub fn v_action(grid: &GridManifold, psi: &GaugeField, f: &TensorField) -> Result<TensorField> {
    let ads: Vec<Matrix3<f64>> = psi.values.iter().map(|v| v.adjoint_matrix()).collect();
    pointwise_algebra_map(grid, f, |n| ads[n])
}

/// `V′(Ψ)f = (id ⊗ ad Ψ) f`.
pub fn v_prime(grid: &GridManifold, psi: &AlgebraValuedField, f: &TensorField) -> Result<TensorField> {
    pointwise_algebra_map(grid, f, |n| ad_matrix(&psi.values[n]))
}

/// `Σ_{k<terms} (t V′(Ψ))^k f / k!`.
pub fn v_series(
    grid: &GridManifold,
    psi: &AlgebraValuedField,
    f: &TensorField,
    t: f64,
    terms: usize,
) -> Result<TensorField> {
    let mut term = f.clone();
    let mut sum = f.clone();
    for k in 1..terms {
        term = v_prime(grid, psi, &term)?.scale(C64::new(t / k as f64, 0.0));
        sum = sum.add(&term)?;
    }
    Ok(sum)
}

/// `‖β(ψφ) - V(ψ)β(φ) - β(ψ)‖₀`.
pub fn cocycle_residual(grid: &GridManifold, psi: &GaugeField, phi: &GaugeField) -> Result<f64> {
    let lhs = log_derivative(grid, &psi.product(phi)?)?;
    let rhs = v_action(grid, psi, &log_derivative(grid, phi)?)?.add(&log_derivative(grid, psi)?)?;
    norm(grid, &lhs.sub(&rhs)?, None)
}

/// Everything needed to evaluate both seminorm families on one-forms.
#[derive(Debug, Clone, Copy)]
pub struct SeminormContext<'a> {
    pub grid: &'a GridManifold,
    pub weights: &'a WeightField,
    /// Decomposition of `H` (or `H_ρ`) on rank-1 fields.
    pub spectrum: &'a SpectralDecomposition,
}

impl SeminormContext<'_> {
    pub fn p(&self, f: &TensorField, p: f64) -> Result<f64> {
        seminorm_p(self.spectrum, f, p)
    }

    pub fn prime(&self, f: &TensorField, m: usize) -> Result<f64> {
        seminorm_prime(self.grid, f, m, self.weights)
    }
}

/// `max |V′(Ψ)g|′_m / |g|′_m` over the test set and the iterates
/// `V′(Ψ)^k f`, `k ≤ depth`, of every test function.
pub fn v_prime_bound(
    ctx: &SeminormContext,
    psi: &AlgebraValuedField,
    test_set: &[TensorField],
    m: usize,
    depth: usize,
) -> Result<f64> {
    if test_set.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut worst: f64 = 0.0;
    for f in test_set {
        let mut g = f.clone();
        let mut g_norm = ctx.prime(&g, m)?;
        for _ in 0..=depth {
            if g_norm == 0.0 {
                break;
            }
            let next = v_prime(ctx.grid, psi, &g)?;
            let next_norm = ctx.prime(&next, m)?;
            worst = worst.max(next_norm / g_norm);
            g = next;
            g_norm = next_norm;
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityRow {
    pub t: f64,
    /// `max_f |(V(ψ_t)f - f)/t - V′(Ψ)f|_{ρ,p}`.
    pub error: f64,
    /// `max_f` of the same difference in `|·|′_m` divided by `t·e^Ĉ·|f|′_m`.
    pub bound_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub p: f64,
    pub m: usize,
    /// Measured constant in `|V′(Ψ)f|′_m ≤ Ĉ|f|′_m`.
    pub c_hat: f64,
    pub rows: Vec<RegularityRow>,
    /// Log-log slope of `error` against `t`; absent when every error is zero.
    pub slope: Option<f64>,
}

impl RegularityReport {
    pub fn bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.bound_ratio <= 1.0)
    }
}

/// Compares `(V(ψ_t)f - f)/t` with `V′(Ψ)f` for `ψ_t = exp(tΨ)`, over a
/// fixed test set standing in for the unit ball of `|·|_{ρ,q}`.
pub fn regularity_check(
    ctx: &SeminormContext,
    psi: &AlgebraValuedField,
    test_set: &[TensorField],
    t_list: &[f64],
    p: f64,
    m: usize,
) -> Result<RegularityReport> {
    if t_list.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
        return Err(Error::InvalidParameter("t must lie in (0, 1]"));
    }
    let c_hat = v_prime_bound(ctx, psi, test_set, m, 4)?;
    let derived: Vec<TensorField> = test_set
        .iter()
        .map(|f| v_prime(ctx.grid, psi, f))
        .collect::<Result<_>>()?;
    let primes: Vec<f64> = test_set.iter().map(|f| ctx.prime(f, m)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let psi_t = GaugeField::exp_of(ctx.grid, &psi.scale(t))?;
        let mut error: f64 = 0.0;
        let mut bound_ratio: f64 = 0.0;
        for ((f, vf), f_prime) in test_set.iter().zip(&derived).zip(&primes) {
            let moved = v_action(ctx.grid, &psi_t, f)?;
            let diff = moved.sub(f)?.scale(C64::new(1.0 / t, 0.0)).sub(vf)?;
            error = error.max(ctx.p(&diff, p)?);
            let bound = t * c_hat.exp() * f_prime;
            let gap = ctx.prime(&diff, m)?;
            if gap > 0.0 {
                bound_ratio = bound_ratio.max(gap / bound);
            }
        }
        rows.push(RegularityRow { t, error, bound_ratio });
    }
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error > 0.0)
        .map(|r| (r.t.ln(), r.error.ln()))
        .collect();
    let slope = (fit.len() >= 2).then(|| linear_fit(fit).0);
    Ok(RegularityReport {
        p,
        m,
        c_hat,
        rows,
        slope,
    })
}

/// `φ(u) = e^{-1/u}` for `u > 0`, zero otherwise, with its derivative.
fn flat_ramp(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        (0.0, 0.0)
    } else {
        let v = (-1.0 / u).exp();
        (v, v / (u * u))
    }
}

/// Smooth step `s(u) = φ(u)/(φ(u) + φ(1 - u))`: zero for `u ≤ 0`, one for
/// `u ≥ 1`. Returns `(s, s′)`; `s′(1/2) = 2` is its maximum.
pub fn smooth_step(u: f64) -> (f64, f64) {
    let (a, da) = flat_ramp(u);
    let (b, db) = flat_ramp(1.0 - u);
    let den = a + b;
    (a / den, (da * b + a * db) / (den * den))
}

/// Plateau cutoffs `ψ_n(x) = Π_i s((L_n + w - |x_i|)/w)` with
/// `L_n = L_1 + (n - 1)·step` and a fixed collar width `w`. They equal 1 on
/// `[-L_n, L_n]^d`, vanish outside `[-L_n - w, L_n + w]^d`, and their
/// derivatives are bounded independently of `n`. On periodic domains every
/// `ψ_n` is identically 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffFamily {
    pub first_plateau: f64,
    pub step: f64,
    pub collar: f64,
}

impl CutoffFamily {
    pub fn plateau(&self, n: usize) -> f64 {
        self.first_plateau + (n.max(1) - 1) as f64 * self.step
    }

    /// Values and gradients of `ψ_n` at every node.
    pub fn sample(&self, grid: &GridManifold, n: usize) -> (Vec<f64>, Vec<[f64; 2]>) {
        if grid.topology() == Topology::Periodic {
            return (
                alloc::vec![1.0; grid.node_count()],
                alloc::vec![[0.0; 2]; grid.node_count()],
            );
        }
        let l = self.plateau(n);
        let w = self.collar;
        let mut values = Vec::with_capacity(grid.node_count());
        let mut gradients = Vec::with_capacity(grid.node_count());
        for node in 0..grid.node_count() {
            let x = grid.coordinates(node);
            let d = grid.dimension();
            let factors: Vec<(f64, f64)> = (0..d).map(|i| smooth_step((l + w - x[i].abs()) / w)).collect();
            let value: f64 = factors.iter().map(|f| f.0).product();
            let grad = core::array::from_fn(|i| {
                if i >= d {
                    return 0.0;
                }
                let others: f64 = (0..d).filter(|&j| j != i).map(|j| factors[j].0).product();
                -x[i].signum() * factors[i].1 / w * others
            });
            values.push(value);
            gradients.push(grad);
        }
        (values, gradients)
    }

    /// `Ψ_n = ψ_n Ψ`.
    pub fn truncate(&self, grid: &GridManifold, psi: &AlgebraValuedField, n: usize) -> AlgebraValuedField {
        let (v, g) = self.sample(grid, n);
        psi.multiply_scalar(&v, &g, true)
    }

    /// Largest pointwise norm of the grid derivative `∇^m ψ_n`.
    pub fn derivative_sup(&self, grid: &GridManifold, n: usize, order: usize) -> Result<f64> {
        let (v, _) = self.sample(grid, n);
        let d = crate::calculus::iterated_derivative(grid, &TensorField::scalar(grid, &v)?, order)?;
        let tl = d.tensor_len();
        Ok((0..grid.node_count())
            .map(|node| (0..tl).map(|t| d.get(node, t, 0).norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffRow {
    pub n: usize,
    pub plateau: f64,
    /// `|V′(Ψ - Ψ_n)f|_{ρ,p}` per test function.
    pub values: Vec<f64>,
}

/// `|V′(Ψ - Ψ_n)f|_{ρ,p}` along the cutoff family. Refuses domains on which
/// no cutoff sequence with bounded derivatives exists.
pub fn cutoff_approximation(
    ctx: &SeminormContext,
    psi: &AlgebraValuedField,
    family: &CutoffFamily,
    n_list: &[usize],
    test_set: &[TensorField],
    p: f64,
) -> Result<Vec<CutoffRow>> {
    if !ctx.grid.admits_cutoff_sequence() {
        return Err(Error::CutoffConditionViolated);
    }
    if test_set.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    n_list
        .iter()
        .map(|&n| {
            let rest = psi.sub(&family.truncate(ctx.grid, psi, n));
            let values = test_set
                .iter()
                .map(|f| ctx.p(&v_prime(ctx.grid, &rest, f)?, p))
                .collect::<Result<_>>()?;
            Ok(CutoffRow {
                n,
                plateau: family.plateau(n),
                values,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PuncturedRow {
    pub epsilon: f64,
    /// `sup |∇ψ_ε|` from dense radial sampling of the profile.
    pub sup_gradient: f64,
    /// `max s′ / ε`.
    pub analytic: f64,
    /// Largest `|ψ_ε|` at nodes with `|x| ≤ ε`.
    pub inner_max: f64,
    /// Largest `|1 - ψ_ε|` at nodes with `|x| ≥ 2ε`.
    pub outer_defect: f64,
}

/// Radial cutoffs `ψ_ε(x) = s((|x| - ε)/ε)` on the punctured plane: zero on
/// the `ε`-disk, one outside `2ε`. Their gradients blow up like `2/ε`, so no
/// sequence tending to 1 keeps bounded derivatives.
pub fn punctured_plane_demo(grid: &GridManifold, eps_list: &[f64]) -> Result<Vec<PuncturedRow>> {
    if grid.dimension() != 2 {
        return Err(Error::UnsupportedDomain("the punctured plane is two-dimensional"));
    }
    const SAMPLES: usize = 2001;
    eps_list
        .iter()
        .map(|&eps| {
            if eps.is_nan() || eps <= 0.0 {
                return Err(Error::InvalidParameter("epsilon must be positive"));
            }
            let sup_gradient = (0..SAMPLES)
                .map(|k| smooth_step(k as f64 / (SAMPLES - 1) as f64).1 / eps)
                .fold(0.0, f64::max);
            let mut inner_max: f64 = 0.0;
            let mut outer_defect: f64 = 0.0;
            for node in 0..grid.node_count() {
                let x = grid.coordinates(node);
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let v = smooth_step((r - eps) / eps).0;
                if r <= eps {
                    inner_max = inner_max.max(v.abs());
                } else if r >= 2.0 * eps {
                    outer_defect = outer_defect.max((1.0 - v).abs());
                }
            }
            Ok(PuncturedRow {
                epsilon: eps,
                sup_gradient,
                analytic: 2.0 / eps,
                inner_max,
                outer_defect,
            })
        })
        .collect()
}
