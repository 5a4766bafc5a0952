//! Numerical core for checking the energy representation of the gauge group
//! `C_c^∞(M; SU(2))` on discretized Riemannian manifolds.
//!
//! The crate is `no_std` (with `alloc`) and purely computational. It provides
//!
//! * [`grid`]: flat grids on the circle, torus, interval and square, with
//!   quadrature weights and conformal rescaling of the metric;
//! * [`field`] and [`calculus`]: tensor fields, weighted inner products, the
//!   discrete covariant derivative `∇` and its exact adjoint `∇*`;
//! * [`lie`] and [`expm`]: SU(2), its Killing form, adjoint actions and exact
//!   derivatives of `exp` along paths;
//! * [`spectral`]: the Schrödinger operator `H = ∇*∇ + W`, its spectrum, the
//!   Hilbert-Schmidt test and the weighted conjugation `H_ρ`;
//! * [`hermite`]: ladder operators on a truncated Hermite basis and the
//!   normal-ordering bound for ladder words;
//! * [`seminorm`]: the spectral seminorms `|·|_p`, the weighted-derivative
//!   seminorms `|·|′_m`, and the empirical equivalence probe;
//! * [`gauge`]: gauge fields, the Maurer-Cartan cocycle, the actions `V` and
//!   `V′`, regularity of one-parameter subgroups and cutoff approximation;
//! * [`fock`]: coherent vectors and the energy representation `U`.
//!
//! File formats, configuration and the command line live in the companion
//! `gauge-energy-lab` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod error;
pub mod expm;
pub mod field;
pub mod fock;
pub mod gauge;
pub mod grid;
pub mod hermite;
pub mod lie;
pub mod seminorm;
pub mod spectral;
mod stats;

pub use error::{Error, Result};
pub use field::{Fiber, TensorField, WeightField};
pub use grid::{DomainShape, DomainSpec, GridManifold, Topology};

/// Complex scalars used throughout.
pub type C64 = num_complex::Complex64;
