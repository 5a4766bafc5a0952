//! Flat grids standing in for the Riemannian manifold `(M, g)`.
//!
//! Every supported domain is flat in its coordinates, so the Levi-Civita
//! connection has no Christoffel symbols and `∇` reduces to coordinate
//! differences. A conformal factor `g → e^σ g` may be attached afterwards; such
//! a grid still carries measures and pointwise inner products, but refuses
//! differentiation.

use alloc::vec::Vec;
use core::f64::consts::PI;

// Float math for no_std builds; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// The domains that can be discretized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainShape {
    /// Round circle of the given radius, parametrized by angle.
    Circle { radius: f64 },
    /// Interval `[-L, L]` with zero extension outside.
    Interval { half_width: f64 },
    /// Flat torus `[0, P)²`.
    Torus { period: f64 },
    /// Square `[-L, L]²` with zero extension outside.
    Square { half_width: f64 },
    /// The square with the origin removed. Discretized exactly like
    /// [`DomainShape::Square`], but flagged as admitting no cutoff sequence
    /// with uniformly bounded derivatives.
    PuncturedSquare { half_width: f64 },
}

impl DomainShape {
    pub fn dimension(&self) -> usize {
        match self {
            DomainShape::Circle { .. } | DomainShape::Interval { .. } => 1,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DomainShape::Circle { .. } => "circle",
            DomainShape::Interval { .. } => "interval",
            DomainShape::Torus { .. } => "torus",
            DomainShape::Square { .. } => "square",
            DomainShape::PuncturedSquare { .. } => "punctured_square",
        }
    }

    fn extent(&self) -> f64 {
        match *self {
            DomainShape::Circle { radius } => radius,
            DomainShape::Interval { half_width }
            | DomainShape::Square { half_width }
            | DomainShape::PuncturedSquare { half_width } => half_width,
            DomainShape::Torus { period } => period,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub shape: DomainShape,
    pub nodes_per_axis: usize,
}

impl DomainSpec {
    pub fn new(shape: DomainShape, nodes_per_axis: usize) -> Self {
        Self { shape, nodes_per_axis }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Every axis wraps around.
    Periodic,
    /// Fields vanish outside the box.
    Truncated,
}

/// One coordinate axis: nodes at `origin + k * spacing`, metric `g_ii = scale²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub count: usize,
    pub spacing: f64,
    pub origin: f64,
    pub scale: f64,
}

impl Axis {
    pub fn coordinate(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.spacing
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridManifold {
    shape: DomainShape,
    topology: Topology,
    axes: Vec<Axis>,
    /// Log of the conformal factor `σ`, with metric `e^σ g`.
    conformal: Option<Vec<f64>>,
}

/// Builds the grid for a domain.
///
/// Periodic domains place node `k` at `k·P/N`; truncated ones are
/// cell-centered, `x_k = -L + (k + 1/2)·2L/N`.
pub fn build_grid(spec: &DomainSpec) -> Result<GridManifold> {
    let n = spec.nodes_per_axis;
    if n < 4 {
        return Err(Error::TooFewNodes(n));
    }
    let extent = spec.shape.extent();
    if !extent.is_finite() || extent <= 0.0 {
        return Err(Error::NonPositiveExtent(extent));
    }
    let periodic = |period: f64, scale: f64| Axis {
        count: n,
        spacing: period / n as f64,
        origin: 0.0,
        scale,
    };
    let boxed = |half: f64| {
        let h = 2.0 * half / n as f64;
        Axis {
            count: n,
            spacing: h,
            origin: -half + 0.5 * h,
            scale: 1.0,
        }
    };
    let (topology, axes) = match spec.shape {
        DomainShape::Circle { radius } => (Topology::Periodic, alloc::vec![periodic(2.0 * PI, radius)]),
        DomainShape::Torus { period } => (
            Topology::Periodic,
            alloc::vec![periodic(period, 1.0), periodic(period, 1.0)],
        ),
        DomainShape::Interval { half_width } => (Topology::Truncated, alloc::vec![boxed(half_width)]),
        DomainShape::Square { half_width } | DomainShape::PuncturedSquare { half_width } => {
            (Topology::Truncated, alloc::vec![boxed(half_width), boxed(half_width)])
        }
    };
    Ok(GridManifold {
        shape: spec.shape,
        topology,
        axes,
        conformal: None,
    })
}

impl GridManifold {
    pub fn shape(&self) -> DomainShape {
        self.shape
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    /// Flat grids have a coordinate-trivial connection; conformally rescaled
    /// ones do not.
    pub fn is_flat(&self) -> bool {
        self.conformal.is_none()
    }

    /// False on domains where every cutoff sequence tending to 1 must have
    /// unbounded derivatives.
    pub fn admits_cutoff_sequence(&self) -> bool {
        !matches!(self.shape, DomainShape::PuncturedSquare { .. })
    }

    pub fn conformal_exponent(&self) -> Option<&[f64]> {
        self.conformal.as_deref()
    }

    fn stride(&self, axis: usize) -> usize {
        self.axes[axis + 1..].iter().map(|a| a.count).product()
    }

    pub fn axis_index(&self, node: usize, axis: usize) -> usize {
        (node / self.stride(axis)) % self.axes[axis].count
    }

    /// Coordinates of a node; unused trailing entries are zero.
    pub fn coordinates(&self, node: usize) -> [f64; 2] {
        let mut x = [0.0; 2];
        for (a, axis) in self.axes.iter().enumerate() {
            x[a] = axis.coordinate(self.axis_index(node, a));
        }
        x
    }

    /// Neighbor `step` nodes along `axis`, or `None` past a truncated boundary.
    pub fn neighbor(&self, node: usize, axis: usize, step: isize) -> Option<usize> {
        let count = self.axes[axis].count as isize;
        let k = self.axis_index(node, axis) as isize;
        let target = k + step;
        let wrapped = match self.topology {
            Topology::Periodic => target.rem_euclid(count),
            Topology::Truncated if (0..count).contains(&target) => target,
            Topology::Truncated => return None,
        };
        let stride = self.stride(axis) as isize;
        Some((node as isize + (wrapped - k) * stride) as usize)
    }

    /// Quadrature weight `√|g| h^d` of a node.
    pub fn measure(&self, node: usize) -> f64 {
        let flat: f64 = self.axes.iter().map(|a| a.scale * a.spacing).product();
        match &self.conformal {
            None => flat,
            Some(sigma) => flat * (0.5 * self.dimension() as f64 * sigma[node]).exp(),
        }
    }

    /// Inverse metric entry `g^{ii}` at a node.
    pub fn inverse_metric(&self, node: usize, axis: usize) -> f64 {
        let s = self.axes[axis].scale;
        let flat = 1.0 / (s * s);
        match &self.conformal {
            None => flat,
            Some(sigma) => flat * (-sigma[node]).exp(),
        }
    }

    /// Samples a function of the coordinates at every node.
    pub fn sample<F: FnMut([f64; 2]) -> f64>(&self, mut f: F) -> Vec<f64> {
        (0..self.node_count()).map(|n| f(self.coordinates(n))).collect()
    }

    pub fn zeros(&self) -> Vec<f64> {
        alloc::vec![0.0; self.node_count()]
    }

    pub fn check_nodal(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.node_count() {
            return Err(Error::GridMismatch {
                expected: self.node_count(),
                found: values.len(),
            });
        }
        Ok(())
    }

    /// Displacement `x - center` along each axis, wrapped into half a period
    /// on periodic axes.
    pub fn displacement(&self, node: usize, center: [f64; 2]) -> [f64; 2] {
        let x = self.coordinates(node);
        let mut dx = [0.0; 2];
        for (a, axis) in self.axes.iter().enumerate() {
            let mut v = x[a] - center[a];
            if self.topology == Topology::Periodic {
                let period = axis.spacing * axis.count as f64;
                v -= period * (v / period).round();
            }
            dx[a] = v;
        }
        dx
    }

    /// Applies the metric rescaling `g → e^σ g`.
    ///
    /// Under it `dv → e^{dσ/2} dv` and the covector inner product picks up
    /// `e^{-σ}`, so covector inner products change by `e^{(d/2 - 1)σ}`.
    pub fn conformal_rescale(&self, sigma: &[f64]) -> Result<ConformalRescaling> {
        self.check_nodal(sigma)?;
        let d = self.dimension() as f64;
        let total: Vec<f64> = match &self.conformal {
            None => sigma.to_vec(),
            Some(old) => old.iter().zip(sigma).map(|(a, b)| a + b).collect(),
        };
        let measure_ratio = sigma.iter().map(|s| (0.5 * d * s).exp()).collect();
        let covector_ratio = sigma.iter().map(|s| (-s).exp()).collect();
        let grid = GridManifold {
            conformal: Some(total),
            ..self.clone()
        };
        Ok(ConformalRescaling {
            grid,
            measure_ratio,
            covector_ratio,
        })
    }
}

/// Result of [`GridManifold::conformal_rescale`].
#[derive(Debug, Clone)]
pub struct ConformalRescaling {
    pub grid: GridManifold,
    /// `e^{dσ/2}` per node.
    pub measure_ratio: Vec<f64>,
    /// `e^{-σ}` per node.
    pub covector_ratio: Vec<f64>,
}

impl ConformalRescaling {
    /// `e^{(d/2 - 1)σ}`: the pointwise factor on covector inner products.
    pub fn combined_factor(&self) -> Vec<f64> {
        self.measure_ratio
            .iter()
            .zip(&self.covector_ratio)
            .map(|(m, c)| m * c)
            .collect()
    }
}
