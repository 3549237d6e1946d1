//! Random valid problem instances for testing and experiments.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::problem::ProblemInstance;

/// Shape of the interference matrix `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// About 60 % of the entries of `C` (diagonal included) are nonzero.
    Sparse,
    /// Every off-diagonal entry of `C` is positive, so `M` is irreducible.
    Irreducible,
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Draws a valid `K × N` instance.
///
/// `A` is sparse nonnegative with at least one positive entry per row, gains
/// lie in `[0.5, 2]`, noise powers are log-uniform in `[0.01, 1]` and the
/// budget log-uniform in `[0.1, 10]`.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    users: usize,
    constraints: usize,
    coupling: Coupling,
) -> ProblemInstance {
    assert!(users >= 1 && constraints >= 1);
    let mut a = DMatrix::from_fn(users, constraints, |_, _| {
        if rng.random_bool(0.5) {
            rng.random_range(0.1..2.0)
        } else {
            0.0
        }
    });
    for k in 0..users {
        if a.row(k).iter().all(|&v| v == 0.0) {
            let n = rng.random_range(0..constraints);
            a[(k, n)] = rng.random_range(0.1..2.0);
        }
    }
    let b = DVector::from_fn(users, |_, _| rng.random_range(0.5..2.0));
    let c = DMatrix::from_fn(users, users, |row, col| match coupling {
        Coupling::Irreducible if row != col => rng.random_range(0.05..0.5),
        Coupling::Irreducible => rng.random_range(0.0..0.1),
        Coupling::Sparse => {
            if rng.random_bool(0.6) {
                rng.random_range(0.0..0.5)
            } else {
                0.0
            }
        }
    });
    let sigma = DVector::from_fn(users, |_, _| log_uniform(rng, 0.01, 1.0));
    let p_max = log_uniform(rng, 0.1, 10.0);
    ProblemInstance::new(a, b, c, sigma, p_max).expect("generator produces valid instances")
}
