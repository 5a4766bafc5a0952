//! Matrix exponential for small complex matrices.
//!
//! Scaling and squaring with a truncated Taylor series: the argument is halved
//! until its 1-norm is at most 1/4, where 18 Taylor terms leave a remainder far
//! below double precision.

use nalgebra::SMatrix;

use crate::C64;

const TAYLOR_TERMS: usize = 18;

fn one_norm<const N: usize>(a: &SMatrix<C64, N, N>) -> f64 {
    (0..N)
        .map(|j| (0..N).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn expm<const N: usize>(a: &SMatrix<C64, N, N>) -> SMatrix<C64, N, N> {
    let norm = one_norm(a);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a.map(|z| z * scale);
    let id = SMatrix::<C64, N, N>::identity();
    let mut term = id;
    let mut sum = id;
    for k in 1..=TAYLOR_TERMS {
        term = (term * x).map(|z| z / k as f64);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}
