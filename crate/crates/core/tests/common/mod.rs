#![allow(dead_code)]

use maxmin_core::random::{random_instance, Coupling};
use maxmin_core::ProblemInstance;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(seed: u64, k: usize, n: usize) -> ProblemInstance {
    random_instance(&mut rng(seed), k, n, Coupling::Sparse)
}

pub fn irreducible_instance(seed: u64, k: usize, n: usize) -> ProblemInstance {
    random_instance(&mut rng(seed), k, n, Coupling::Irreducible)
}

/// Spectral radius from a full dense eigendecomposition (Schur form).
pub fn dense_spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
