//! Quadrature inner products, the discrete covariant derivative and its
//! adjoint.
//!
//! `∇` is the two-point difference `(f(x + h e_i) - f(x)) / h`, i.e. the
//! centered difference on the staggered grid: the `i`-th component of `∇f`
//! approximates `∂_i f` at `x + h e_i / 2` to second order. It is stored at the
//! base node `x`. `∇*` is never discretized on its own; it is the exact adjoint
//! of `∇` under the quadrature inner product, so `∇*∇` is symmetric by
//! construction.

use alloc::vec::Vec;

// Float math for no_std builds; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::grid::GridManifold;
use crate::C64;

/// Quadrature weight of every unknown `(node, tensor index)` of a rank-`k`
/// field: `√|g| h^d · e^ρ · Π g^{i i}` over the tensor's indices. Fiber
/// weights are not included.
pub fn unknown_weights(grid: &GridManifold, rank: usize, rho: Option<&[f64]>) -> Vec<f64> {
    let d = grid.dimension();
    let tensor_len = d.pow(rank as u32);
    let mut out = Vec::with_capacity(grid.node_count() * tensor_len);
    for node in 0..grid.node_count() {
        let base = grid.measure(node) * rho.map_or(1.0, |r| r[node].exp());
        let inv: [f64; 2] = core::array::from_fn(|a| if a < d { grid.inverse_metric(node, a) } else { 0.0 });
        for t in 0..tensor_len {
            let mut w = base;
            let mut rest = t;
            for _ in 0..rank {
                w *= inv[rest % d];
                rest /= d;
            }
            out.push(w);
        }
    }
    out
}

fn check_rho(grid: &GridManifold, rho: Option<&[f64]>) -> Result<()> {
    match rho {
        Some(r) => grid.check_nodal(r),
        None => Ok(()),
    }
}

/// `⟨f, g⟩_{ρ,0}`, conjugate-linear in `f`.
pub fn inner_product(grid: &GridManifold, f: &TensorField, g: &TensorField, rho: Option<&[f64]>) -> Result<C64> {
    f.check_compatible(g)?;
    f.check_grid(grid)?;
    check_rho(grid, rho)?;
    let weights = unknown_weights(grid, f.rank(), rho);
    let fl = f.fiber().components();
    let fw = f.fiber().weight();
    let mut acc = C64::new(0.0, 0.0);
    for (u, w) in weights.iter().enumerate() {
        let mut local = C64::new(0.0, 0.0);
        for a in 0..fl {
            let i = u * fl + a;
            local += f.data()[i].conj() * g.data()[i];
        }
        acc += local * (w * fw);
    }
    Ok(acc)
}

/// `|f|_{ρ,0}`.
pub fn norm(grid: &GridManifold, f: &TensorField, rho: Option<&[f64]>) -> Result<f64> {
    Ok(inner_product(grid, f, f, rho)?.re.max(0.0).sqrt())
}

/// Applies `post ⊙ ∇ (pre ⊙ f)`, with `pre`/`post` nodal multipliers.
fn difference(grid: &GridManifold, f: &TensorField, pre: Option<&[f64]>, post: Option<&[f64]>) -> Result<TensorField> {
    if !grid.is_flat() {
        return Err(Error::NonFlatMetric);
    }
    f.check_grid(grid)?;
    let d = grid.dimension();
    let fl = f.fiber().components();
    let tl = f.tensor_len();
    let mut out = TensorField::zeros(grid, f.rank() + 1, f.fiber());
    let at = |node: usize, t: usize, a: usize| f.get(node, t, a) * pre.map_or(1.0, |p| p[node]);
    for node in 0..grid.node_count() {
        let scale = post.map_or(1.0, |p| p[node]);
        for i in 0..d {
            let h = grid.axes()[i].spacing;
            let next = grid.neighbor(node, i, 1);
            for t in 0..tl {
                for a in 0..fl {
                    let ahead = next.map_or(C64::new(0.0, 0.0), |n| at(n, t, a));
                    let v = (ahead - at(node, t, a)) * (scale / h);
                    out.set(node, i * tl + t, a, v);
                }
            }
        }
    }
    Ok(out)
}

/// Exact adjoint of `g ↦ post ⊙ ∇(pre ⊙ g)` under `⟨·,·⟩_{ρ,0}`:
/// `pre ⊙ w_k^{-1} ⊙ Dᵀ(post ⊙ w_{k+1} ⊙ g)`.
fn difference_adjoint(
    grid: &GridManifold,
    g: &TensorField,
    rho: Option<&[f64]>,
    pre: Option<&[f64]>,
    post: Option<&[f64]>,
) -> Result<TensorField> {
    if !grid.is_flat() {
        return Err(Error::NonFlatMetric);
    }
    if g.rank() == 0 {
        return Err(Error::RankMismatch { left: 0, right: 1 });
    }
    g.check_grid(grid)?;
    check_rho(grid, rho)?;
    let d = grid.dimension();
    let rank = g.rank() - 1;
    let fl = g.fiber().components();
    let tl = d.pow(rank as u32);
    let w_hi = unknown_weights(grid, rank + 1, rho);
    let w_lo = unknown_weights(grid, rank, rho);
    let scaled = |node: usize, t: usize, a: usize| {
        let u = node * tl * d + t;
        g.get(node, t, a) * (w_hi[u] * post.map_or(1.0, |p| p[node]))
    };
    let mut out = TensorField::zeros(grid, rank, g.fiber());
    for node in 0..grid.node_count() {
        let outer = pre.map_or(1.0, |p| p[node]);
        for t in 0..tl {
            let w = w_lo[node * tl + t];
            for a in 0..fl {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..d {
                    let h = grid.axes()[i].spacing;
                    let behind = grid
                        .neighbor(node, i, -1)
                        .map_or(C64::new(0.0, 0.0), |p| scaled(p, i * tl + t, a));
                    acc += (behind - scaled(node, i * tl + t, a)) / h;
                }
                out.set(node, t, a, acc * (outer / w));
            }
        }
    }
    Ok(out)
}

/// `∇f`: rank `k` to rank `k + 1`. Fails on non-flat grids.
pub fn covariant_derivative(grid: &GridManifold, f: &TensorField) -> Result<TensorField> {
    difference(grid, f, None, None)
}

/// `∇*g`, the adjoint of `∇` under `⟨·,·⟩_{ρ,0}`.
pub fn codifferential(grid: &GridManifold, g: &TensorField, rho: Option<&[f64]>) -> Result<TensorField> {
    difference_adjoint(grid, g, rho, None, None)
}

fn half_exponentials(rho: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let up = rho.iter().map(|r| (0.5 * r).exp()).collect();
    let down = rho.iter().map(|r| (-0.5 * r).exp()).collect();
    (up, down)
}

/// `∇_ρ f = e^{-ρ/2} ∇(e^{ρ/2} f)`.
pub fn weighted_derivative(grid: &GridManifold, f: &TensorField, rho: &[f64]) -> Result<TensorField> {
    grid.check_nodal(rho)?;
    let (up, down) = half_exponentials(rho);
    difference(grid, f, Some(&up), Some(&down))
}

/// `∇_ρ*`, built directly as the adjoint of [`weighted_derivative`] under
/// `⟨·,·⟩_{ρ,0}`.
pub fn weighted_codifferential(grid: &GridManifold, g: &TensorField, rho: &[f64]) -> Result<TensorField> {
    grid.check_nodal(rho)?;
    let (up, down) = half_exponentials(rho);
    difference_adjoint(grid, g, Some(rho), Some(&up), Some(&down))
}

/// `e^{-ρ/2} ∇*(e^{ρ/2} g)` with the unweighted `∇*`: the conjugation formula
/// for `∇_ρ*`.
pub fn conjugated_codifferential(grid: &GridManifold, g: &TensorField, rho: &[f64]) -> Result<TensorField> {
    grid.check_nodal(rho)?;
    let (up, down) = half_exponentials(rho);
    let inner = codifferential(grid, &g.multiply_nodal(&up)?, None)?;
    inner.multiply_nodal(&down)
}

/// `∇^n f`.
pub fn iterated_derivative(grid: &GridManifold, f: &TensorField, n: usize) -> Result<TensorField> {
    let mut cur = f.clone();
    for _ in 0..n {
        cur = covariant_derivative(grid, &cur)?;
    }
    Ok(cur)
}
