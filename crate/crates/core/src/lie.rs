//! The compact group `SU(2)` and its Lie algebra `su(2)`.
//!
//! The algebra is identified with `ℝ³` through the anti-Hermitian basis
//! `X_k = -i σ_k / 2`, for which `[X_1, X_2] = X_3` (cyclically). The Killing
//! form in this basis is `B = -2·I`, so the invariant inner product
//! `⟨X, Y⟩ = -B(X, Y)` weights every coefficient by 2.

use nalgebra::{Matrix2, Matrix3, Matrix4};

// Float math for no_std builds; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::expm::expm;
use crate::C64;

/// `-B(X_k, X_k)` for the basis elements.
pub const ALGEBRA_NORM_WEIGHT: f64 = 2.0;

pub type Mat2 = Matrix2<C64>;

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrix `σ_k`, `k ∈ {0, 1, 2}`.
pub fn pauli(k: usize) -> Mat2 {
    match k {
        0 => Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        1 => Mat2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        2 => Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
        _ => panic!("su(2) has three basis elements"),
    }
}

/// Basis element `X_k = -i σ_k / 2`.
pub fn basis_matrix(k: usize) -> Mat2 {
    pauli(k).map(|z| z * c(0.0, -0.5))
}

/// Complex basis coefficients of a 2×2 matrix, together with the Frobenius
/// norm of what falls outside `su(2)_C` (its trace part).
pub fn project(m: &Mat2) -> ([C64; 3], f64) {
    // tr(σ_j X_k) = -i δ_jk, so the X_k-coefficient is i·tr(σ_k m).
    let coeffs: [C64; 3] = core::array::from_fn(|k| c(0.0, 1.0) * (pauli(k) * m).trace());
    let rebuilt = coeffs
        .iter()
        .enumerate()
        .fold(Mat2::zeros(), |acc, (k, z)| acc + basis_matrix(k).map(|e| e * z));
    (coeffs, (m - rebuilt).norm())
}

/// An element of the real Lie algebra `su(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraElement(pub [f64; 3]);

impl AlgebraElement {
    pub const ZERO: Self = Self([0.0; 3]);

    pub fn basis(k: usize) -> Self {
        let mut v = [0.0; 3];
        v[k] = 1.0;
        Self(v)
    }

    pub fn to_matrix(&self) -> Mat2 {
        (0..3).fold(Mat2::zeros(), |acc, k| acc + basis_matrix(k).map(|e| e * self.0[k]))
    }

    /// Coefficients of an anti-Hermitian traceless matrix, and the size of its
    /// component outside `su(2)`.
    pub fn from_matrix(m: &Mat2) -> (Self, f64) {
        let (coeffs, trace_part) = project(m);
        let imag: f64 = coeffs.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        (Self(coeffs.map(|z| z.re)), trace_part + imag)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(core::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    /// `[self, other]`.
    pub fn bracket(&self, o: &Self) -> Self {
        let (a, b) = (self.0, o.0);
        Self([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// Norm induced by `-B`.
    pub fn norm(&self) -> f64 {
        (ALGEBRA_NORM_WEIGHT * self.0.iter().map(|x| x * x).sum::<f64>()).sqrt()
    }
}

/// `ad(X)Y = [X, Y]`.
pub fn ad(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    x.bracket(y)
}

/// `ad(X)` as a 3×3 matrix on basis coefficients.
pub fn ad_matrix(x: &AlgebraElement) -> Matrix3<f64> {
    let [a, b, cc] = x.0;
    Matrix3::new(0.0, -cc, b, cc, 0.0, -a, -b, a, 0.0)
}

/// Applies a real 3×3 matrix to complexified algebra coefficients.
pub fn apply_real(m: &Matrix3<f64>, v: &[C64; 3]) -> [C64; 3] {
    core::array::from_fn(|j| (0..3).fold(c(0.0, 0.0), |acc, k| acc + v[k] * m[(j, k)]))
}

/// `B(X, Y) = tr(ad X ∘ ad Y)`.
pub fn killing_form(x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    (ad_matrix(x) * ad_matrix(y)).trace()
}

/// Gram matrix of the Killing form on the basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingMetric {
    pub matrix: Matrix3<f64>,
}

impl KillingMetric {
    pub fn new() -> Self {
        let matrix = Matrix3::from_fn(|j, k| killing_form(&AlgebraElement::basis(j), &AlgebraElement::basis(k)));
        Self { matrix }
    }
}

impl Default for KillingMetric {
    fn default() -> Self {
        Self::new()
    }
}

/// A unitary 2×2 matrix of unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement(Mat2);

impl GroupElement {
    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    /// Wraps a matrix without checking the group invariants.
    pub fn from_matrix_unchecked(m: Mat2) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self(self.0 * o.0)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `‖u†u - I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.0.adjoint() * self.0 - Mat2::identity()).norm()
    }

    pub fn determinant_defect(&self) -> f64 {
        (self.0.determinant() - c(1.0, 0.0)).norm()
    }

    /// `Ad(u)` as a 3×3 matrix: column `k` holds the coefficients of
    /// `u X_k u⁻¹`.
    pub fn adjoint_matrix(&self) -> Matrix3<f64> {
        let inv = self.0.adjoint();
        let mut m = Matrix3::zeros();
        for k in 0..3 {
            let (coeffs, _) = project(&(self.0 * basis_matrix(k) * inv));
            for j in 0..3 {
                m[(j, k)] = coeffs[j].re;
            }
        }
        m
    }

    /// `Ad(u)X = u X u⁻¹`.
    pub fn adjoint_action(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_matrix(&(self.0 * x.to_matrix() * self.0.adjoint())).0
    }
}

/// Closed-form exponential: with `θ = |a|`,
/// `exp(Σ a_k X_k) = cos(θ/2) I - i sin(θ/2) (a/θ)·σ`.
pub fn exp_map(x: &AlgebraElement) -> GroupElement {
    let theta = x.0.iter().map(|a| a * a).sum::<f64>().sqrt();
    let half = 0.5 * theta;
    // sin(θ/2)/θ, with its series near zero.
    let sinc = if theta < 1e-4 {
        0.5 - theta * theta / 48.0
    } else {
        half.sin() / theta
    };
    let [a, b, z] = x.0;
    let s = |v: f64| v * sinc;
    GroupElement(Mat2::new(
        c(half.cos(), -s(z)),
        c(-s(b), -s(a)),
        c(s(b), -s(a)),
        c(half.cos(), s(z)),
    ))
}

/// Derivative of `s ↦ exp(A + s Ȧ)` at `s = 0`, read off the upper-right block
/// of `exp([[A, Ȧ], [0, A]])`.
pub fn dexp_path(a: &AlgebraElement, a_dot: &AlgebraElement) -> Mat2 {
    let am = a.to_matrix();
    let em = a_dot.to_matrix();
    let mut block = Matrix4::<C64>::zeros();
    block.fixed_view_mut::<2, 2>(0, 0).copy_from(&am);
    block.fixed_view_mut::<2, 2>(2, 2).copy_from(&am);
    block.fixed_view_mut::<2, 2>(0, 2).copy_from(&em);
    expm(&block).fixed_view::<2, 2>(0, 2).into_owned()
}
