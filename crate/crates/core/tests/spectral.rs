mod common;

use common::{dense_spectral_radius, rng};
use maxmin_core::perron::{collatz_wielandt, spectral_radius};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn random_eight_by_eight_matches_dense_eigensolver() {
    let mut r = rng(42);
    let m = DMatrix::from_fn(8, 8, |_, _| r.random_range(0.0..1.0));
    let expected = dense_spectral_radius(&m);
    let est = spectral_radius(&m, 1e-12, 1000).unwrap();
    assert!(est.certified);
    assert!((est.rho - expected).abs() <= 1e-10 * expected, "{} vs {}", est.rho, expected);
    // Eigenvector check: M v = rho v.
    let residual = (&m * &est.eigvec - &est.eigvec * est.rho).amax();
    assert!(residual < 1e-9);
    assert_eq!(est.eigvec.max(), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // rho(M) <= max_k (Mx)_k / x_k for any x > 0.
    #[test]
    fn upper_quotient_bounds_spectral_radius(seed in any::<u64>(), k in 1usize..12, density in 0.1f64..1.0) {
        let mut r = rng(seed);
        let m = DMatrix::from_fn(k, k, |_, _| if r.random_bool(density) { r.random_range(0.0..2.0) } else { 0.0 });
        let x = DVector::from_fn(k, |_, _| r.random_range(0.01..1.0));
        let lambda = collatz_wielandt(&m, &x).hi;
        let rho = dense_spectral_radius(&m);
        prop_assert!(rho <= lambda * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn enclosure_brackets_dense_radius(seed in any::<u64>(), k in 1usize..12, density in 0.2f64..1.0) {
        let mut r = rng(seed);
        let m = DMatrix::from_fn(k, k, |_, _| if r.random_bool(density) { r.random_range(0.0..2.0) } else { 0.0 });
        let est = spectral_radius(&m, 1e-10, 2000).unwrap();
        // Nilpotent draws: rho = 0 exactly, while the dense eigensolver only
        // resolves a defective zero eigenvalue to about eps^(1/k).
        if m.pow(k as u32).iter().all(|&v| v == 0.0) {
            prop_assert!(est.enclosure.contains(0.0));
            if est.certified {
                prop_assert!(est.enclosure.hi <= 1e-10);
            }
            return Ok(());
        }
        let rho = dense_spectral_radius(&m);
        let slack = 1e-12 * rho.max(1.0);
        prop_assert!(est.enclosure.lo <= rho + slack && rho <= est.enclosure.hi + slack,
            "rho {} outside [{}, {}]", rho, est.enclosure.lo, est.enclosure.hi);
        if est.certified && rho > 1e-3 {
            prop_assert!((est.rho - rho).abs() <= 1e-9 * rho.max(1.0));
        }
    }
}
