use std::f64::consts::TAU;

use gauge_energy_core::grid::build_grid;
use gauge_energy_core::spectral::{assemble_h, hilbert_schmidt_test, Verdict};
use gauge_energy_core::{DomainShape, DomainSpec, WeightField};

/// Separation of variables: the torus symbol is the sum of two circle symbols.
fn torus_oracle(n: usize, period: f64, level: f64) -> Vec<f64> {
    let h = period / n as f64;
    let one: Vec<f64> = (0..n)
        .map(|k| 2.0 / (h * h) * (1.0 - (TAU * k as f64 / n as f64).cos()))
        .collect();
    let mut all: Vec<f64> = one
        .iter()
        .flat_map(|a| one.iter().map(move |b| a + b + level))
        .collect();
    all.sort_by(f64::total_cmp);
    all
}

#[test]
fn torus_matches_product_symbol() {
    let n = 12;
    let g = build_grid(&DomainSpec::new(DomainShape::Torus { period: 2.0 }, n)).unwrap();
    let w = WeightField::unweighted(&g, vec![2.0; n * n]).unwrap();
    let spec = assemble_h(&g, &w, 0).unwrap().decompose().unwrap();
    for (got, want) in spec.values().iter().zip(torus_oracle(n, 2.0, 2.0)) {
        assert!((got - want).abs() <= 1e-9 * want, "{got} vs {want}");
    }
}

#[test]
fn planar_oscillator_levels() {
    // -Δ + |x|² + 1 on ℝ²: 2(n₁ + n₂) + 3 with multiplicity n₁ + n₂ + 1.
    let g = build_grid(&DomainSpec::new(DomainShape::Square { half_width: 5.0 }, 32)).unwrap();
    let w = WeightField::unweighted(&g, g.sample(|x| x[0] * x[0] + x[1] * x[1] + 1.0)).unwrap();
    let spec = assemble_h(&g, &w, 0).unwrap().decompose().unwrap();
    let want = [3.0, 5.0, 5.0, 7.0, 7.0, 7.0];
    for (got, want) in spec.values().iter().zip(want) {
        assert!((got - want).abs() <= 0.02 * want, "{got} vs {want}");
    }
}

#[test]
fn torus_inverse_is_hilbert_schmidt_only_above_half() {
    let n = 16;
    let g = build_grid(&DomainSpec::new(DomainShape::Torus { period: 1.0 }, n)).unwrap();
    let w = WeightField::unweighted(&g, vec![2.0; n * n]).unwrap();
    let spec = assemble_h(&g, &w, 0).unwrap().decompose().unwrap();
    let diverging = hilbert_schmidt_test(&spec, 0.25, (10, 60)).unwrap();
    let converging = hilbert_schmidt_test(&spec, 1.0, (10, 60)).unwrap();
    assert_eq!(diverging.verdict, Verdict::Diverging);
    assert_eq!(converging.verdict, Verdict::Converging);
    assert!(converging.partial_sums.windows(2).all(|s| s[1] >= s[0]));
}
