//! Problem instances and the monotone norm induced by the power constraints.
//!
//! All quantities are linear-scale (no dB). User and constraint indices in
//! human-facing messages are 1-based; the Rust API is 0-based.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// The tuple `(A, b, C, σ, p_max)`.
///
/// `A` is `K × N` with constraint vectors `a_n` as columns, `C` is `K × K`
/// with interference vectors `c_k` as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub p_max: f64,
}

/// One violated instance invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty,
    Shape {
        field: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    NonFinite {
        field: &'static str,
        row: usize,
        col: usize,
    },
    Negative {
        field: &'static str,
        row: usize,
        col: usize,
    },
    NotPositive {
        field: &'static str,
        index: usize,
    },
    Budget,
    Unconstrained {
        user: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "instance has no users or no constraints"),
            Violation::Shape {
                field,
                expected,
                found,
            } => write!(
                f,
                "{field} has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Violation::NonFinite { field, row, col } => {
                write!(f, "{field}[{},{}] not finite", row + 1, col + 1)
            }
            Violation::Negative { field, row, col } => {
                write!(f, "{field}[{},{}] negative", row + 1, col + 1)
            }
            Violation::NotPositive { field, index } => {
                write!(f, "{field}[{}] not strictly positive", index + 1)
            }
            Violation::Budget => write!(f, "p_max not strictly positive"),
            Violation::Unconstrained { user } => {
                write!(f, "user {} unconstrained: feasible set unbounded", user + 1)
            }
        }
    }
}

impl ProblemInstance {
    /// Builds an instance and rejects it if any invariant is violated.
    pub fn new(
        a: DMatrix<f64>,
        b: DVector<f64>,
        c: DMatrix<f64>,
        sigma: DVector<f64>,
        p_max: f64,
    ) -> Result<Self> {
        let inst = ProblemInstance {
            a,
            b,
            c,
            sigma,
            p_max,
        };
        let violations = inst.validate();
        if violations.is_empty() {
            Ok(inst)
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Number of users `K`.
    pub fn users(&self) -> usize {
        self.b.len()
    }

    /// Number of linear constraints `N`.
    pub fn constraints(&self) -> usize {
        self.a.ncols()
    }

    /// Returns every violated invariant; an empty list means the instance is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let k = self.b.len();
        let n = self.a.ncols();
        if k == 0 || n == 0 {
            out.push(Violation::Empty);
            return out;
        }
        if self.a.nrows() != k {
            out.push(Violation::Shape {
                field: "A",
                expected: (k, n),
                found: self.a.shape(),
            });
        }
        if self.c.shape() != (k, k) {
            out.push(Violation::Shape {
                field: "C",
                expected: (k, k),
                found: self.c.shape(),
            });
        }
        if self.sigma.len() != k {
            out.push(Violation::Shape {
                field: "sigma",
                expected: (k, 1),
                found: (self.sigma.len(), 1),
            });
        }
        if !out.is_empty() {
            return out;
        }

        for (field, mat) in [("A", &self.a), ("C", &self.c)] {
            for col in 0..mat.ncols() {
                for row in 0..mat.nrows() {
                    let v = mat[(row, col)];
                    if !v.is_finite() {
                        out.push(Violation::NonFinite { field, row, col });
                    } else if v < 0.0 {
                        out.push(Violation::Negative { field, row, col });
                    }
                }
            }
        }
        for (field, vec) in [("b", &self.b), ("sigma", &self.sigma)] {
            for (index, &v) in vec.iter().enumerate() {
                if !v.is_finite() {
                    out.push(Violation::NonFinite {
                        field,
                        row: index,
                        col: 0,
                    });
                } else if v <= 0.0 {
                    out.push(Violation::NotPositive { field, index });
                }
            }
        }
        if !(self.p_max.is_finite() && self.p_max > 0.0) {
            out.push(Violation::Budget);
        }
        for user in 0..k {
            if !self.a.row(user).iter().any(|&v| v > 0.0) {
                out.push(Violation::Unconstrained { user });
            }
        }
        out
    }

    /// Same instance with a different power budget.
    pub fn with_p_max(&self, p_max: f64) -> Self {
        ProblemInstance {
            p_max,
            ..self.clone()
        }
    }

    /// Derives `M = diag(b)⁻¹ Cᵀ` and `u = diag(b)⁻¹ σ`.
    pub fn scale(&self) -> Result<ScaledProblem> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let k = self.users();
        let m = DMatrix::from_fn(k, k, |row, col| self.c[(col, row)] / self.b[row]);
        let u = self.sigma.component_div(&self.b);
        Ok(ScaledProblem {
            m,
            u,
            a: self.a.clone(),
            p_max: self.p_max,
        })
    }

    /// Per-user ratios `b_k p_k / (c_kᵀ p + σ_k)`.
    pub fn sinr_ratios(&self, p: &DVector<f64>) -> DVector<f64> {
        let interference = self.c.tr_mul(p);
        DVector::from_fn(self.users(), |k, _| {
            self.b[k] * p[k] / (interference[k] + self.sigma[k])
        })
    }

    /// The max-min objective `min_k b_k p_k / (c_kᵀ p + σ_k)`.
    pub fn evaluate_utility(&self, p: &DVector<f64>) -> f64 {
        if p.iter().any(|&v| v == 0.0) {
            return 0.0;
        }
        self.sinr_ratios(p).min()
    }

    /// `true` iff `p ≥ −tol` elementwise and `‖p‖⋆ ≤ 1 + tol`.
    pub fn is_feasible(&self, p: &DVector<f64>, tol: f64) -> bool {
        p.len() == self.users()
            && p.iter().all(|&v| v >= -tol)
            && norm_star(p, &self.a, self.p_max) <= 1.0 + tol
    }
}

/// `‖p‖⋆ = (1/p_max) max_n a_nᵀ|p|`.
pub fn norm_star(p: &DVector<f64>, a: &DMatrix<f64>, p_max: f64) -> f64 {
    constraint_norm(p, a) / p_max
}

/// `max_n a_nᵀ|p|`, the constraint norm without the budget factor.
pub(crate) fn constraint_norm(p: &DVector<f64>, a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().zip(p.iter()).map(|(x, y)| x * y.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Problem in the scaled form `p = t (M p + u)`, `‖p‖⋆ ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledProblem {
    m: DMatrix<f64>,
    u: DVector<f64>,
    a: DMatrix<f64>,
    p_max: f64,
}

impl ScaledProblem {
    pub fn m(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn u(&self) -> &DVector<f64> {
        &self.u
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn users(&self) -> usize {
        self.u.len()
    }

    pub fn constraints(&self) -> usize {
        self.a.ncols()
    }

    pub fn with_p_max(&self, p_max: f64) -> Self {
        ScaledProblem {
            p_max,
            ..self.clone()
        }
    }

    /// Same `M` and `p_max` with `u` multiplied by `gamma`.
    pub fn with_scaled_noise(&self, gamma: f64) -> Self {
        ScaledProblem {
            u: &self.u * gamma,
            ..self.clone()
        }
    }

    /// Keeps only constraint `n`.
    pub fn restricted_to(&self, n: usize) -> Result<Self> {
        if n >= self.constraints() {
            return Err(Error::IndexOutOfRange {
                index: n,
                count: self.constraints(),
            });
        }
        Ok(ScaledProblem {
            a: self.a.columns(n, 1).into_owned(),
            ..self.clone()
        })
    }

    /// The affine interference mapping `T(p) = M p + u`.
    pub fn mapping(&self, p: &DVector<f64>) -> DVector<f64> {
        &self.m * p + &self.u
    }

    pub fn norm_star(&self, p: &DVector<f64>) -> f64 {
        norm_star(p, &self.a, self.p_max)
    }

    /// Utility of `p` in scaled form, `min_k p_k / T(p)_k`.
    pub fn utility(&self, p: &DVector<f64>) -> f64 {
        let t = self.mapping(p);
        p.iter()
            .zip(t.iter())
            .map(|(x, y)| x / y)
            .fold(f64::INFINITY, f64::min)
    }
}
