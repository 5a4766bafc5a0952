//! Euclidean ladder operators on tensor-Hermite coefficients.
//!
//! States are coefficient vectors over the multi-indices `n ∈ ℕ^d` with total
//! degree `|n| ≤ N_cut`, ordered by total degree and then lexicographically.
//! `A_j` lowers `n_j` with factor `√n_j`, `A_j*` raises it with `√(n_j + 1)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
// Float math for no_std builds; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// One letter `A_j^♯` of a ladder word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub index: usize,
    pub raising: bool,
}

impl Ladder {
    pub const fn lower(index: usize) -> Self {
        Self { index, raising: false }
    }

    pub const fn raise(index: usize) -> Self {
        Self { index, raising: true }
    }
}

#[derive(Debug, Clone)]
pub struct HermiteLadder {
    dim: usize,
    cutoff: usize,
    basis: Vec<[usize; 2]>,
    lookup: BTreeMap<[usize; 2], usize>,
    lowering: Vec<DMatrix<f64>>,
    raising: Vec<DMatrix<f64>>,
    number: Vec<DMatrix<f64>>,
    total_number: DMatrix<f64>,
}

/// Builds `A_j`, `A_j*`, `N_j = A_j*A_j` and `N` for `d ∈ {1, 2}` on degrees
/// up to `cutoff`.
pub fn build_ladders(dim: usize, cutoff: usize) -> Result<HermiteLadder> {
    if !(1..=2).contains(&dim) {
        return Err(Error::InvalidParameter("ladder dimension must be 1 or 2"));
    }
    if cutoff < 4 {
        return Err(Error::InvalidParameter("degree cutoff must be at least 4"));
    }
    let mut basis = Vec::new();
    for degree in 0..=cutoff {
        if dim == 1 {
            basis.push([degree, 0]);
        } else {
            for n0 in (0..=degree).rev() {
                basis.push([n0, degree - n0]);
            }
        }
    }
    let lookup: BTreeMap<_, _> = basis.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let size = basis.len();
    let mut lowering = Vec::new();
    let mut raising = Vec::new();
    for j in 0..dim {
        let mut a = DMatrix::zeros(size, size);
        for (col, n) in basis.iter().enumerate() {
            if n[j] > 0 {
                let mut m = *n;
                m[j] -= 1;
                a[(lookup[&m], col)] = (n[j] as f64).sqrt();
            }
        }
        raising.push(a.transpose());
        lowering.push(a);
    }
    let number: Vec<DMatrix<f64>> = (0..dim).map(|j| &raising[j] * &lowering[j]).collect();
    let total_number = number.iter().fold(DMatrix::zeros(size, size), |acc, n| acc + n);
    Ok(HermiteLadder {
        dim,
        cutoff,
        basis,
        lookup,
        lowering,
        raising,
        number,
        total_number,
    })
}

impl HermiteLadder {
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Multi-index of basis state `i` (unused trailing entries are zero).
    pub fn multi_index(&self, i: usize) -> [usize; 2] {
        self.basis[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i][0] + self.basis[i][1]
    }

    pub fn index_of(&self, n: [usize; 2]) -> Option<usize> {
        self.lookup.get(&n).copied()
    }

    pub fn lowering(&self, j: usize) -> &DMatrix<f64> {
        &self.lowering[j]
    }

    pub fn raising(&self, j: usize) -> &DMatrix<f64> {
        &self.raising[j]
    }

    pub fn number(&self, j: usize) -> &DMatrix<f64> {
        &self.number[j]
    }

    pub fn total_number(&self) -> &DMatrix<f64> {
        &self.total_number
    }

    pub fn vacuum(&self) -> Vec<f64> {
        self.state([0, 0])
    }

    /// The normalized basis state `|n⟩`, or zero when `n` is not retained.
    pub fn state(&self, n: [usize; 2]) -> Vec<f64> {
        let mut v = vec![0.0; self.len()];
        if let Some(i) = self.index_of(n) {
            v[i] = 1.0;
        }
        v
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn support_degree(&self, f: &[f64]) -> Option<usize> {
        f.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, _)| self.degree(i))
            .max()
    }

    /// `max |[A_j, A_k*] - δ_jk|` over columns of total degree `≤ N_cut - 2`.
    pub fn ccr_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dim {
            for k in 0..self.dim {
                let c = &self.lowering[j] * &self.raising[k] - &self.raising[k] * &self.lowering[j];
                for col in (0..self.len()).filter(|&i| self.degree(i) + 2 <= self.cutoff) {
                    for row in 0..self.len() {
                        let delta = if j == k && row == col { 1.0 } else { 0.0 };
                        worst = worst.max((c[(row, col)] - delta).abs());
                    }
                }
            }
        }
        worst
    }

    /// `max |(-Δ + |x|² + 1) - (2N + d + 1)|` over columns of total degree
    /// `≤ N_cut - 2`, with `x_j = (A_j + A_j*)/√2` and `∂_j = (A_j - A_j*)/√2`.
    pub fn oscillator_identity_residual(&self) -> f64 {
        let size = self.len();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let mut lhs = DMatrix::identity(size, size);
        for j in 0..self.dim {
            let x = (&self.lowering[j] + &self.raising[j]) * s;
            let p = (&self.lowering[j] - &self.raising[j]) * s;
            lhs += &x * &x - &p * &p;
        }
        let rhs = &self.total_number * 2.0 + DMatrix::identity(size, size) * (self.dim as f64 + 1.0);
        let mut worst: f64 = 0.0;
        for col in (0..size).filter(|&i| self.degree(i) + 2 <= self.cutoff) {
            for row in 0..size {
                worst = worst.max((lhs[(row, col)] - rhs[(row, col)]).abs());
            }
        }
        worst
    }

    fn apply_letter(&self, letter: Ladder, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for (i, c) in f.iter().enumerate().filter(|(_, c)| **c != 0.0) {
            let mut n = self.basis[i];
            let factor = if letter.raising {
                n[letter.index] += 1;
                n[letter.index] as f64
            } else if n[letter.index] == 0 {
                continue;
            } else {
                n[letter.index] -= 1;
                (n[letter.index] + 1) as f64
            };
            out[self.lookup[&n]] += factor.sqrt() * c;
        }
        out
    }

    /// `A_{j₁}^♯ ⋯ A_{j_m}^♯ f`; the rightmost letter acts first.
    ///
    /// Refuses `f` whose support comes within `m` degrees of the cutoff, where
    /// truncation would corrupt the commutator algebra.
    pub fn apply_word(&self, word: &[Ladder], f: &[f64]) -> Result<Vec<f64>> {
        self.check_word(word, f)?;
        Ok(word.iter().rev().fold(f.to_vec(), |v, l| self.apply_letter(*l, &v)))
    }

    fn check_word(&self, word: &[Ladder], f: &[f64]) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::GridMismatch {
                expected: self.len(),
                found: f.len(),
            });
        }
        if word.iter().any(|l| l.index >= self.dim) {
            return Err(Error::InvalidParameter("ladder index exceeds dimension"));
        }
        let limit = self.cutoff.saturating_sub(word.len());
        match self.support_degree(f) {
            Some(degree) if degree > limit => Err(Error::TruncationGuard { degree, limit }),
            _ => Ok(()),
        }
    }

    /// `|(2N + d + 1)^s f|₀`.
    pub fn energy_power_norm(&self, f: &[f64], s: f64) -> f64 {
        f.iter()
            .enumerate()
            .map(|(i, c)| ((2.0 * self.degree(i) as f64 + self.dim as f64 + 1.0).powf(s) * c).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Compares both sides of `|w f|₀ ≤ C(m) |(2N + d + 1)^{m/2} f|₀` with the
    /// constant derived from the normal-ordered form of `w*w`.
    pub fn commutation_bound_check(&self, word: &[Ladder], f: &[f64]) -> Result<BoundCheck> {
        let lhs = norm(&self.apply_word(word, f)?);
        let constant = word_constant(word, self.dim);
        let rhs = constant * self.energy_power_norm(f, word.len() as f64 / 2.0);
        Ok(BoundCheck {
            lhs,
            rhs,
            ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
            constant,
        })
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub constant: f64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// Integer polynomial in the commuting number operators `N_1, N_2`, keyed by
/// exponent pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NumberPolynomial {
    terms: BTreeMap<[u32; 2], i64>,
}

impl NumberPolynomial {
    pub fn constant(c: i64) -> Self {
        let mut p = Self::default();
        p.add_term([0, 0], c);
        p
    }

    /// `N_j + c`.
    pub fn linear(j: usize, c: i64) -> Self {
        let mut e = [0, 0];
        e[j] = 1;
        let mut p = Self::constant(c);
        p.add_term(e, 1);
        p
    }

    fn add_term(&mut self, exponent: [u32; 2], c: i64) {
        let slot = self.terms.entry(exponent).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&exponent);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u32; 2], i64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn coefficient(&self, exponent: [u32; 2]) -> i64 {
        self.terms.get(&exponent).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term([a[0] + b[0], a[1] + b[1]], x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, n: [usize; 2]) -> f64 {
        self.terms()
            .map(|(e, c)| c as f64 * (n[0] as f64).powi(e[0] as i32) * (n[1] as f64).powi(e[1] as i32))
            .sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms().map(|(e, _)| e[0] + e[1]).max().unwrap_or(0)
    }

    /// Every coefficient of `self` is at most the matching one of `other` in
    /// absolute value, and `other` has no negative coefficients.
    pub fn abs_dominated_by(&self, other: &Self) -> bool {
        other.terms().all(|(_, c)| c >= 0) && self.terms().all(|(e, c)| c.abs() <= other.coefficient(e))
    }
}

/// Normal-ordered form of `w*w`, which is diagonal in the number basis:
/// `w*w = P(N_1, …, N_d)` with `P(n) = |c_w(n)|²`.
pub fn normal_ordered_square(word: &[Ladder]) -> NumberPolynomial {
    let mut shift = [0i64; 2];
    let mut p = NumberPolynomial::constant(1);
    for l in word.iter().rev() {
        let j = l.index;
        if l.raising {
            p = p.mul(&NumberPolynomial::linear(j, shift[j] + 1));
            shift[j] += 1;
        } else {
            p = p.mul(&NumberPolynomial::linear(j, shift[j]));
            shift[j] -= 1;
        }
    }
    p
}

/// `(2N + d + 1)^m` as a polynomial in `N_1, …, N_d`.
pub fn energy_polynomial(dim: usize, m: u32) -> NumberPolynomial {
    let base = (0..dim).fold(NumberPolynomial::constant(dim as i64 + 1), |acc, j| {
        acc.add(&NumberPolynomial::linear(j, 0).mul(&NumberPolynomial::constant(2)))
    });
    base.pow(m)
}

/// A constant `C(m)` for which `|w f|₀ ≤ C |(2N + d + 1)^{m/2} f|₀` holds.
///
/// Writing `w*w = Σ p_α N^α`, every `N^α` is nonnegative, so `w*w ≤ Σ |p_α| N^α`.
/// When those absolute coefficients are dominated termwise by the expansion
/// of `(2N + d + 1)^m` the constant is 1. Otherwise `N_j ≤ (2N + d + 1)/2`
/// gives `C² = Σ |p_α| 2^{-|α|}`. The smaller candidate is returned.
pub fn word_constant(word: &[Ladder], dim: usize) -> f64 {
    let p = normal_ordered_square(word);
    let m = word.len() as u32;
    let generic: f64 = p
        .terms()
        .map(|(e, c)| c.unsigned_abs() as f64 * 0.5f64.powi((e[0] + e[1]) as i32))
        .sum::<f64>()
        .sqrt();
    if p.abs_dominated_by(&energy_polynomial(dim, m)) {
        generic.min(1.0)
    } else {
        generic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const L1: Ladder = Ladder::lower(0);
    const R1: Ladder = Ladder::raise(0);
    const L2: Ladder = Ladder::lower(1);

    fn random_state(h: &HermiteLadder, max_degree: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..h.len())
            .map(|i| {
                if h.degree(i) <= max_degree {
                    rng.random_range(-1.0..1.0)
                } else {
                    0.0
                }
            })
            .collect()
    }

    #[test]
    fn basis_counts() {
        assert_eq!(build_ladders(1, 10).unwrap().len(), 11);
        assert_eq!(build_ladders(2, 10).unwrap().len(), 66);
        assert!(build_ladders(3, 10).is_err());
        assert!(build_ladders(2, 3).is_err());
    }

    #[test]
    fn canonical_commutation() {
        for d in [1, 2] {
            let h = build_ladders(d, 24).unwrap();
            assert!(h.ccr_residual() <= 1e-14, "{}", h.ccr_residual());
        }
    }

    #[test]
    fn oscillator_identity_and_number_diagonal() {
        for d in [1, 2] {
            let h = build_ladders(d, 16).unwrap();
            assert!(h.oscillator_identity_residual() <= 1e-12);
            for i in 0..h.len() {
                let n = h.multi_index(i);
                let s = h.state(n);
                let e = 2.0 * h.degree(i) as f64 + d as f64 + 1.0;
                assert_eq!(h.energy_power_norm(&s, 1.0), e);
                assert!((h.total_number()[(i, i)] - h.degree(i) as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lowering_kills_vacuum() {
        let h = build_ladders(2, 8).unwrap();
        for j in 0..2 {
            let v = h.apply_word(&[Ladder::lower(j)], &h.vacuum()).unwrap();
            assert!(v.iter().all(|x| *x == 0.0));
        }
    }

    #[test]
    fn single_raise_on_vacuum() {
        let h = build_ladders(2, 8).unwrap();
        let c = h.commutation_bound_check(&[R1], &h.vacuum()).unwrap();
        assert_eq!(c.lhs, 1.0);
        assert!((c.rhs / c.constant - 3f64.sqrt()).abs() < 1e-15);
        assert!(c.holds());
    }

    #[test]
    fn worked_word_polynomial() {
        // (N1 + 1)² (N2² - N2), expanded by hand.
        let p = normal_ordered_square(&[L1, R1, L2, L2]);
        let expected = [
            ([2, 2], 1),
            ([2, 1], -1),
            ([1, 2], 2),
            ([1, 1], -2),
            ([0, 2], 1),
            ([0, 1], -1),
        ];
        assert_eq!(p.terms().count(), expected.len());
        for (e, c) in expected {
            assert_eq!(p.coefficient(e), c);
        }
        assert_eq!(word_constant(&[L1, R1, L2, L2], 2), 1.0);
    }

    #[test]
    fn guard_rejects_boundary_states() {
        let h = build_ladders(2, 8).unwrap();
        let f = h.state([3, 3]);
        assert!(matches!(
            h.apply_word(&[L1, R1, L2], &f),
            Err(Error::TruncationGuard { degree: 6, limit: 5 })
        ));
        assert!(h.apply_word(&[L1, R1], &f).is_ok());
    }

    #[test]
    fn worked_word_bound_on_seeded_states() {
        let h = build_ladders(2, 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let f = random_state(&h, 16, &mut rng);
            let c = h.commutation_bound_check(&[L1, R1, L2, L2], &f).unwrap();
            assert_eq!(c.constant, 1.0);
            assert!(c.holds(), "{c:?}");
        }
    }

    fn all_words(dim: usize, m: usize) -> Vec<Vec<Ladder>> {
        let letters: Vec<Ladder> = (0..dim).flat_map(|j| [Ladder::lower(j), Ladder::raise(j)]).collect();
        (0..m).fold(vec![Vec::new()], |words, _| {
            words
                .iter()
                .flat_map(|w| letters.iter().map(move |l| [w.as_slice(), &[*l]].concat()))
                .collect()
        })
    }

    #[test]
    fn normal_ordering_matches_matrix_products() {
        let h = build_ladders(2, 12).unwrap();
        for m in 1..=4 {
            for word in all_words(2, m) {
                let w = word.iter().fold(DMatrix::identity(h.len(), h.len()), |acc, l| {
                    let op = if l.raising {
                        h.raising(l.index)
                    } else {
                        h.lowering(l.index)
                    };
                    acc * op
                });
                let ww = w.transpose() * &w;
                let p = normal_ordered_square(&word);
                for col in (0..h.len()).filter(|&i| h.degree(i) + m <= h.cutoff()) {
                    for row in 0..h.len() {
                        let want = if row == col { p.eval(h.multi_index(col)) } else { 0.0 };
                        assert!((ww[(row, col)] - want).abs() < 1e-9, "{word:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn derived_constant_bounds_every_word() {
        let h = build_ladders(2, 40).unwrap();
        for m in 1..=4 {
            for word in all_words(2, m) {
                let p = normal_ordered_square(&word);
                let c = word_constant(&word, 2);
                for i in (0..h.len()).filter(|&i| h.degree(i) + m <= h.cutoff()) {
                    let bound = c * c * (2.0 * h.degree(i) as f64 + 3.0).powi(m as i32);
                    assert!(p.eval(h.multi_index(i)) <= bound * (1.0 + 1e-12), "{word:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn adjoint_pairs(d in 1usize..=2, cutoff in 4usize..12) {
            let h = build_ladders(d, cutoff).unwrap();
            for j in 0..d {
                prop_assert_eq!(h.raising(j), &h.lowering(j).transpose());
                let n = h.raising(j) * h.lowering(j);
                prop_assert!((n - h.number(j)).abs().max() == 0.0);
            }
        }

        #[test]
        fn bound_holds_for_random_words(seed in any::<u64>(), m in 1usize..=4) {
            let h = build_ladders(2, 14).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let word: Vec<Ladder> = (0..m)
                .map(|_| Ladder { index: rng.random_range(0..2), raising: rng.random() })
                .collect();
            let f = random_state(&h, 14 - m, &mut rng);
            let c = h.commutation_bound_check(&word, &f).unwrap();
            prop_assert!(c.lhs <= c.rhs * (1.0 + 1e-12));
            let direct = norm(&h.apply_word(&word, &f).unwrap());
            prop_assert_eq!(direct, c.lhs);
        }
    }
}
