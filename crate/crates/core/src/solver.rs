//! Closed-form max-min solver.
//!
//! For each constraint `n` the candidate matrix `M_n = M + u a_nᵀ / p_max` is
//! formed and its Perron root computed with a certificate. The optimal utility
//! is the reciprocal of the largest root and the optimal powers come from one
//! dense linear solve, never from the eigenvector iterate.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::solve_affine_fixed_point;
use crate::oracles::fixed_point_solve;
use crate::perron::{collatz_wielandt, spectral_radius_from, Enclosure};
use crate::problem::{ProblemInstance, ScaledProblem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative width of the Perron root enclosure.
    pub rho_tol: f64,
    /// Relative residual above which the linear solve is reported.
    pub residual_tol: f64,
    pub max_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rho_tol: 1e-10,
            residual_tol: 1e-12,
            max_iters: 10_000,
        }
    }
}

/// Per-candidate spectral radius certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateCertificate {
    pub enclosure: Enclosure,
    pub certified: bool,
    pub iterations: usize,
    /// Set when the normalized fixed-point iteration had to refine the root.
    pub used_fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveWarning {
    UncertifiedRadius { n: usize, width: f64 },
    LargeResidual { residual: f64 },
    TieMismatch { n: usize, deviation: f64 },
}

impl fmt::Display for SolveWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveWarning::UncertifiedRadius { n, width } => write!(
                f,
                "spectral radius of candidate {} not certified (enclosure width {width:e})",
                n + 1
            ),
            SolveWarning::LargeResidual { residual } => {
                write!(f, "linear solve residual {residual:e} above tolerance")
            }
            SolveWarning::TieMismatch { n, deviation } => write!(
                f,
                "candidate {} ties the active radius but its constraint is off by {deviation:e}",
                n + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub t_star: f64,
    pub p_star: DVector<f64>,
    /// 0-based index of the constraint attaining the largest radius.
    pub active_n: usize,
    pub rho_all: Vec<f64>,
    pub certificates: Vec<CandidateCertificate>,
    /// Relative residual of `(I − t* M) p* = t* u`.
    pub residual: f64,
    /// Constraints whose radius ties the active one.
    pub tied: Vec<usize>,
    pub warnings: Vec<SolveWarning>,
}

impl Solution {
    pub fn is_certified(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// `M_n = M + (1/p_max) u a_nᵀ`.
pub fn candidate_matrix(sp: &ScaledProblem, n: usize) -> Result<DMatrix<f64>> {
    if n >= sp.constraints() {
        return Err(Error::IndexOutOfRange {
            index: n,
            count: sp.constraints(),
        });
    }
    let a_n = sp.a().column(n);
    Ok(sp.m() + sp.u() * a_n.transpose() / sp.p_max())
}

/// Validates, scales and solves an instance.
pub fn solve(inst: &ProblemInstance, opts: &SolverOptions) -> Result<Solution> {
    solve_closed_form(&inst.scale()?, opts)
}

pub fn solve_closed_form(sp: &ScaledProblem, opts: &SolverOptions) -> Result<Solution> {
    let n_cons = sp.constraints();
    let mut rho_all = Vec::with_capacity(n_cons);
    let mut certificates = Vec::with_capacity(n_cons);
    let mut warnings = Vec::new();

    for n in 0..n_cons {
        let (rho, cert) = candidate_radius(sp, n, opts)?;
        if !cert.certified {
            warnings.push(SolveWarning::UncertifiedRadius {
                n,
                width: cert.enclosure.width(),
            });
        }
        rho_all.push(rho);
        certificates.push(cert);
    }

    // First index attaining the maximum.
    let (active_n, rho_max) = rho_all
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (n, r)| {
            if r > best.1 {
                (n, r)
            } else {
                best
            }
        });
    if !(rho_max > 0.0 && rho_max.is_finite()) {
        return Err(Error::Numerical(format!(
            "largest candidate spectral radius is {rho_max}"
        )));
    }

    let t_star = 1.0 / rho_max;
    let (p_star, residual) = solve_affine_fixed_point(sp.m(), sp.u(), t_star).map_err(|e| {
        Error::Numerical(format!("(I - t*M) p = t*u at t* = {t_star:e}: {e}"))
    })?;
    if p_star.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Numerical(format!(
            "optimal power vector not strictly positive (residual {residual:e})"
        )));
    }
    if residual > opts.residual_tol {
        warnings.push(SolveWarning::LargeResidual { residual });
    }

    let tie_tol = 10.0 * opts.rho_tol;
    let mut tied = Vec::new();
    for (n, &rho) in rho_all.iter().enumerate() {
        if n != active_n && rho >= rho_max * (1.0 - tie_tol) {
            tied.push(n);
            // Tied candidates must share the eigenvector, i.e. the tied
            // constraint is tight at p* as well.
            let load: f64 = sp.a().column(n).dot(&p_star) / sp.p_max();
            let deviation = (load - 1.0).abs();
            if deviation > tie_tol.sqrt() {
                warnings.push(SolveWarning::TieMismatch { n, deviation });
            }
        }
    }

    Ok(Solution {
        t_star,
        p_star,
        active_n,
        rho_all,
        certificates,
        residual,
        tied,
        warnings,
    })
}

fn candidate_radius(
    sp: &ScaledProblem,
    n: usize,
    opts: &SolverOptions,
) -> Result<(f64, CandidateCertificate)> {
    let mn = candidate_matrix(sp, n)?;
    let start = sp.u() / sp.u().max();
    let est = spectral_radius_from(&mn, &start, opts.rho_tol, opts.max_iters)?;
    let mut cert = CandidateCertificate {
        enclosure: est.enclosure,
        certified: est.certified,
        iterations: est.iterations,
        used_fallback: false,
    };
    if est.certified || sp.a().column(n).iter().all(|&v| v == 0.0) {
        return Ok((est.rho, cert));
    }

    // Single-constraint conditional eigenvalue problem: its eigenvalue is ρ(M_n).
    let restricted = sp.restricted_to(n)?;
    let Ok(report) = fixed_point_solve(&restricted, opts.rho_tol * 1e-2, opts.max_iters * 10)
    else {
        return Ok((est.rho, cert));
    };
    if report.p_star.iter().all(|&v| v > 0.0 && v.is_finite()) {
        let enc = collatz_wielandt(&mn, &report.p_star);
        let merged = Enclosure {
            lo: enc.lo.max(est.enclosure.lo),
            hi: enc.hi.min(est.enclosure.hi),
        };
        if !(merged.lo.is_finite() && merged.hi.is_finite() && merged.lo <= merged.hi) {
            return Ok((est.rho, cert));
        }
        cert.used_fallback = true;
        cert.iterations += report.iterations;
        cert.enclosure = merged;
        cert.certified = merged.is_tight(opts.rho_tol);
        return Ok((merged.midpoint(), cert));
    }
    Ok((est.rho, cert))
}
