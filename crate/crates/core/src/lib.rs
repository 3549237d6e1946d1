//! Globally optimal max-min weighted SINR power allocation for affine
//! interference models under polyhedral power constraints.
//!
//! The problem solved here is
//!
//! ```text
//! maximize   min_k  b_k p_k / (c_kᵀ p + σ_k)
//! subject to a_nᵀ p ≤ p_max  (n = 1..N),   p ≥ 0
//! ```
//!
//! Its optimum is available in closed form: with `M = diag(b)⁻¹ Cᵀ`,
//! `u = diag(b)⁻¹ σ` and the candidate matrices `M_n = M + u a_nᵀ / p_max`,
//! the optimal utility is `t* = 1 / max_n ρ(M_n)` and the optimal powers solve
//! the single linear system `(I − t* M) p = t* u`.
//!
//! Modules:
//! - [`problem`]: problem instances, validation, the induced monotone norm.
//! - [`perron`]: certified Perron root computation for nonnegative matrices.
//! - [`solver`]: the closed-form solver.
//! - [`oracles`]: independent bisection and fixed-point reference solvers.
//! - [`bounds`]: utility upper bound, transition point and regime labels.
//! - [`document`]: the human-readable instance / solution file format.
//! - [`random`]: random valid instances for tests and experiments.
//!
//! ```
//! use maxmin_core::{ProblemInstance, SolverOptions};
//! use nalgebra::{DMatrix, DVector};
//!
//! let inst = ProblemInstance::new(
//!     DMatrix::identity(2, 2),
//!     DVector::from_element(2, 1.0),
//!     DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
//!     DVector::from_element(2, 1.0),
//!     1.0,
//! )
//! .unwrap();
//! let sol = maxmin_core::solve(&inst, &SolverOptions::default()).unwrap();
//! assert!((sol.t_star - 0.5).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod document;
mod error;
mod linalg;
pub mod oracles;
pub mod perron;
pub mod problem;
pub mod random;
pub mod solver;

pub use bounds::{compute_bound, Regime, UtilityBound};
pub use error::{Error, Result};
pub use oracles::{bisection_solve, fixed_point_solve, OracleMethod, OracleReport};
pub use perron::{spectral_radius, Enclosure, PerronEstimate};
pub use problem::{norm_star, ProblemInstance, ScaledProblem, Violation};
pub use solver::{candidate_matrix, solve, solve_closed_form, Solution, SolverOptions};
