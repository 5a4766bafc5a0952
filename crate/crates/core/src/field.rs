//! Per-node tensor fields with scalar or `su(2)_C` fibers.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::GridManifold;
use crate::lie::ALGEBRA_NORM_WEIGHT;
use crate::C64;

/// What a field takes values in at each tensor component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fiber {
    /// Complex scalars.
    Scalar,
    /// Complexified `su(2)`, stored as coefficients on the fixed basis.
    Algebra,
}

impl Fiber {
    pub fn components(self) -> usize {
        match self {
            Fiber::Scalar => 1,
            Fiber::Algebra => 3,
        }
    }

    /// Weight of one fiber coefficient in the pointwise inner product
    /// (`-B` on the algebra).
    pub fn weight(self) -> f64 {
        match self {
            Fiber::Scalar => 1.0,
            Fiber::Algebra => ALGEBRA_NORM_WEIGHT,
        }
    }
}

/// A rank-`k` covariant tensor field.
///
/// Values are laid out as `[node][tensor index][fiber coefficient]`, where the
/// tensor index is the base-`d` number formed by the `k` coordinate indices,
/// most recently differentiated index first.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    rank: usize,
    dim: usize,
    fiber: Fiber,
    data: Vec<C64>,
}

/// The one-particle state space: `g_C`-valued covector fields.
pub type LieOneForm = TensorField;

impl TensorField {
    pub fn zeros(grid: &GridManifold, rank: usize, fiber: Fiber) -> Self {
        let dim = grid.dimension();
        let len = grid.node_count() * dim.pow(rank as u32) * fiber.components();
        Self {
            rank,
            dim,
            fiber,
            data: alloc::vec![C64::new(0.0, 0.0); len],
        }
    }

    pub fn from_data(grid: &GridManifold, rank: usize, fiber: Fiber, data: Vec<C64>) -> Result<Self> {
        let expected = grid.node_count() * grid.dimension().pow(rank as u32) * fiber.components();
        if data.len() != expected {
            return Err(Error::GridMismatch {
                expected,
                found: data.len(),
            });
        }
        Ok(Self {
            rank,
            dim: grid.dimension(),
            fiber,
            data,
        })
    }

    /// Real scalar function as a rank-0 field.
    pub fn scalar(grid: &GridManifold, values: &[f64]) -> Result<Self> {
        grid.check_nodal(values)?;
        let data = values.iter().map(|&v| C64::new(v, 0.0)).collect();
        Self::from_data(grid, 0, Fiber::Scalar, data)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiber(&self) -> Fiber {
        self.fiber
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Tensor components per node, `d^k`.
    pub fn tensor_len(&self) -> usize {
        self.dim.pow(self.rank as u32)
    }

    /// Values stored per node.
    pub fn node_stride(&self) -> usize {
        self.tensor_len() * self.fiber.components()
    }

    pub fn node_count(&self) -> usize {
        self.data.len() / self.node_stride()
    }

    pub fn index(&self, node: usize, tensor: usize, coeff: usize) -> usize {
        (node * self.tensor_len() + tensor) * self.fiber.components() + coeff
    }

    pub fn get(&self, node: usize, tensor: usize, coeff: usize) -> C64 {
        self.data[self.index(node, tensor, coeff)]
    }

    pub fn set(&mut self, node: usize, tensor: usize, coeff: usize, value: C64) {
        let i = self.index(node, tensor, coeff);
        self.data[i] = value;
    }

    pub fn check_grid(&self, grid: &GridManifold) -> Result<()> {
        if self.dim != grid.dimension() || self.node_count() != grid.node_count() {
            return Err(Error::GridMismatch {
                expected: grid.node_count() * grid.dimension().pow(self.rank as u32) * self.fiber.components(),
                found: self.data.len(),
            });
        }
        Ok(())
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        if self.fiber != other.fiber {
            return Err(Error::FiberMismatch);
        }
        if self.data.len() != other.data.len() {
            return Err(Error::GridMismatch {
                expected: self.data.len(),
                found: other.data.len(),
            });
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        self.check_compatible(other)?;
        let data = self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect();
        Ok(Self { data, ..*self })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            data: self.data.iter().map(|x| s * x).collect(),
            ..*self
        }
    }

    /// Pointwise multiplication by a real function of the node.
    pub fn multiply_nodal(&self, values: &[f64]) -> Result<Self> {
        let stride = self.node_stride();
        if values.len() * stride != self.data.len() {
            return Err(Error::GridMismatch {
                expected: self.data.len() / stride,
                found: values.len(),
            });
        }
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(i, x)| x * values[i / stride])
            .collect();
        Ok(Self { data, ..*self })
    }

    /// Real or imaginary part of one fiber coefficient, as a vector over the
    /// unknowns `(node, tensor index)`.
    pub fn component(&self, coeff: usize, imaginary: bool) -> Vec<f64> {
        let f = self.fiber.components();
        self.data
            .iter()
            .skip(coeff)
            .step_by(f)
            .map(|z| if imaginary { z.im } else { z.re })
            .collect()
    }

    /// Inverse of [`TensorField::component`]: overwrites one real part.
    pub fn set_component(&mut self, coeff: usize, imaginary: bool, values: &[f64]) {
        let f = self.fiber.components();
        for (z, &v) in self.data.iter_mut().skip(coeff).step_by(f).zip(values) {
            if imaginary {
                z.im = v;
            } else {
                z.re = v;
            }
        }
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imaginary(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// The potential `W` together with the weight exponent `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    potential: Vec<f64>,
    rho: Vec<f64>,
}

impl WeightField {
    /// Rejects `W < 1` anywhere.
    pub fn new(grid: &GridManifold, potential: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        grid.check_nodal(&potential)?;
        grid.check_nodal(&rho)?;
        if let Some((node, &value)) = potential.iter().enumerate().find(|(_, w)| w.is_nan() || **w < 1.0) {
            return Err(Error::PotentialBelowOne { node, value });
        }
        if rho.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidParameter("weight exponent must be finite"));
        }
        Ok(Self { potential, rho })
    }

    /// `ρ = 0`.
    pub fn unweighted(grid: &GridManifold, potential: Vec<f64>) -> Result<Self> {
        Self::new(grid, potential, grid.zeros())
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn is_unweighted(&self) -> bool {
        self.rho.iter().all(|r| *r == 0.0)
    }

    pub fn with_rho(&self, rho: Vec<f64>) -> Result<Self> {
        if rho.len() != self.rho.len() {
            return Err(Error::GridMismatch {
                expected: self.rho.len(),
                found: rho.len(),
            });
        }
        Ok(Self {
            potential: self.potential.clone(),
            rho,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, DomainShape, DomainSpec};

    fn circle() -> GridManifold {
        build_grid(&DomainSpec::new(DomainShape::Circle { radius: 1.0 }, 8)).unwrap()
    }

    #[test]
    fn layout_counts() {
        let t = build_grid(&DomainSpec::new(DomainShape::Torus { period: 1.0 }, 4)).unwrap();
        let f = TensorField::zeros(&t, 2, Fiber::Algebra);
        assert_eq!(f.data().len(), 16 * 4 * 3);
        assert_eq!(f.node_count(), 16);
        assert_eq!(f.index(1, 0, 0), 12);
    }

    #[test]
    fn component_round_trip() {
        let g = circle();
        let mut f = TensorField::zeros(&g, 1, Fiber::Algebra);
        let v: Vec<f64> = (0..8).map(|i| i as f64).collect();
        f.set_component(2, true, &v);
        assert_eq!(f.component(2, true), v);
        assert_eq!(f.get(3, 0, 2), C64::new(0.0, 3.0));
    }

    #[test]
    fn weight_field_rejects_small_potential() {
        let g = circle();
        let mut w = alloc::vec![2.0; 8];
        w[5] = 0.5;
        assert_eq!(
            WeightField::unweighted(&g, w),
            Err(Error::PotentialBelowOne { node: 5, value: 0.5 })
        );
    }

    #[test]
    fn mismatched_ranks_are_rejected() {
        let g = circle();
        let a = TensorField::zeros(&g, 0, Fiber::Scalar);
        let b = TensorField::zeros(&g, 1, Fiber::Scalar);
        assert_eq!(a.add(&b), Err(Error::RankMismatch { left: 0, right: 1 }));
    }
}
