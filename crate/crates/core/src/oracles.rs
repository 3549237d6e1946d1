//! Reference solvers used to cross-check the closed form.
//!
//! Neither oracle touches the candidate matrices `M_n`: the fixed-point
//! iteration works with the nonlinear normalized mapping `p ↦ T(p)/‖T(p)‖⋆`,
//! and bisection only needs `ρ(M)` to decide when `(I − t M)` has a
//! nonnegative inverse.

use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_affine_fixed_point;
use crate::perron::spectral_radius;
use crate::problem::{constraint_norm, ScaledProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    FixedPoint,
    Bisection,
}

impl fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleMethod::FixedPoint => f.write_str("fixed_point"),
            OracleMethod::Bisection => f.write_str("bisection"),
        }
    }
}

/// One recorded oracle iteration.
///
/// Fixed point: `utility` is `min_k p_k / T(p)_k` of the iterate, `norm` is
/// `‖T(p)‖⋆` and `spread` the step length. Bisection: `utility` is the probed
/// `t`, `norm` is `‖q(t)‖⋆` (infinite when `t` is rejected outright) and
/// `spread` the bracket width after the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleStep {
    pub utility: f64,
    pub norm: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub method: OracleMethod,
    pub t_star: f64,
    pub p_star: DVector<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub history: Vec<OracleStep>,
}

/// Normalized fixed-point iteration `p ← T(p) / ‖T(p)‖⋆` from `u / ‖u‖⋆`.
///
/// Stops when successive iterates differ by at most `tol` relative to the
/// iterate's sup-norm.
pub fn fixed_point_solve(sp: &ScaledProblem, tol: f64, max_iters: usize) -> Result<OracleReport> {
    let mut p = sp.u() / sp.norm_star(sp.u());
    let mut history = Vec::new();
    let mut converged = false;
    let mut lambda = f64::NAN;
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        let tp = sp.mapping(&p);
        lambda = sp.norm_star(&tp);
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Numerical(format!(
                "fixed-point iteration produced norm {lambda}"
            )));
        }
        let next = tp / lambda;
        let step = (&next - &p).amax();
        history.push(OracleStep {
            utility: sp.utility(&p),
            norm: lambda,
            spread: step,
        });
        p = next;
        if step <= tol * p.amax() {
            converged = true;
            break;
        }
    }

    // Refresh λ at the returned iterate so that p* = t* T(p*) holds to the
    // accuracy of the iterate itself.
    if converged {
        lambda = sp.norm_star(&sp.mapping(&p));
    }

    Ok(OracleReport {
        method: OracleMethod::FixedPoint,
        t_star: 1.0 / lambda,
        p_star: p,
        iterations,
        converged,
        history,
    })
}

/// Certified bracket `[0, 2 · min(1/ρ(M), p_max / ‖u‖)]` for bisection.
pub fn default_bracket(sp: &ScaledProblem) -> Result<(f64, f64)> {
    let est = spectral_radius(sp.m(), 1e-12, 10_000)?;
    let noise_limited = sp.p_max() / constraint_norm(sp.u(), sp.a());
    let upper = if est.enclosure.lo > 0.0 {
        noise_limited.min(1.0 / est.enclosure.lo)
    } else {
        noise_limited
    };
    Ok((0.0, 2.0 * upper))
}

/// Linear-system feasibility test for a target utility `t`.
///
/// `t` is achievable iff `t ρ(M) < 1` and `q = t (I − t M)⁻¹ u` is strictly
/// positive with `‖q‖⋆ ≤ 1`.
pub struct FeasibilityTest<'a> {
    sp: &'a ScaledProblem,
    rho_upper: f64,
}

impl<'a> FeasibilityTest<'a> {
    pub fn new(sp: &'a ScaledProblem) -> Result<Self> {
        let rho_m = spectral_radius(sp.m(), 1e-12, 10_000)?;
        // The upper quotient bounds ρ(M) whether or not the iteration converged.
        Ok(FeasibilityTest {
            sp,
            rho_upper: rho_m.enclosure.hi,
        })
    }

    /// The power vector achieving `t` on every user and its norm, if the
    /// Neumann series for `(I − t M)⁻¹` converges and the solve is positive.
    pub fn probe(&self, t: f64) -> Option<(DVector<f64>, f64)> {
        if t * self.rho_upper >= 1.0 {
            return None;
        }
        let (q, _) = solve_affine_fixed_point(self.sp.m(), self.sp.u(), t).ok()?;
        if q.iter().all(|&v| v > 0.0 && v.is_finite()) {
            let norm = self.sp.norm_star(&q);
            Some((q, norm))
        } else {
            None
        }
    }

    pub fn is_feasible(&self, t: f64) -> bool {
        self.probe(t).map(|(_, norm)| norm <= 1.0).unwrap_or(false)
    }
}

/// Bisection on `t` with a linear-system feasibility test.
///
/// A candidate `t` is feasible iff `t ρ(M) < 1` and `q = t (I − t M)⁻¹ u`
/// is strictly positive with `‖q‖⋆ ≤ 1`. The bracket is halved until its
/// width is at most `tol · t_hi`.
pub fn bisection_solve(sp: &ScaledProblem, t_lo: f64, t_hi: f64, tol: f64) -> Result<OracleReport> {
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo >= 0.0 && t_lo < t_hi) {
        return Err(Error::InvalidBracket {
            lo: t_lo,
            hi: t_hi,
            reason: "need 0 <= t_lo < t_hi, both finite".into(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidBracket {
            lo: t_lo,
            hi: t_hi,
            reason: format!("tolerance must be positive, got {tol}"),
        });
    }
    let test = FeasibilityTest::new(sp)?;
    let probe = |t: f64| test.probe(t);
    let feasible = |t: f64| test.is_feasible(t);

    if feasible(t_hi) {
        return Err(Error::InvalidBracket {
            lo: t_lo,
            hi: t_hi,
            reason: "upper end is feasible".into(),
        });
    }
    if t_lo > 0.0 && !feasible(t_lo) {
        return Err(Error::InvalidBracket {
            lo: t_lo,
            hi: t_hi,
            reason: "lower end is infeasible".into(),
        });
    }

    let width_tol = tol * t_hi;
    let (mut lo, mut hi) = (t_lo, t_hi);
    let mut history = Vec::new();
    let mut iterations = 0;
    while hi - lo > width_tol {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let probed = probe(mid);
        let norm = probed.as_ref().map(|(_, n)| *n).unwrap_or(f64::INFINITY);
        if norm <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        history.push(OracleStep {
            utility: mid,
            norm,
            spread: hi - lo,
        });
        if mid == lo && mid == hi {
            break;
        }
    }

    let t_star = 0.5 * (lo + hi);
    let p_star = match probe(t_star).or_else(|| probe(lo)) {
        Some((q, _)) => q,
        None => {
            return Err(Error::Numerical(format!(
                "bisection could not recover a positive power vector near t = {t_star:e}"
            )))
        }
    };
    Ok(OracleReport {
        method: OracleMethod::Bisection,
        t_star,
        p_star,
        iterations,
        converged: true,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ProblemInstance;
    use nalgebra::DMatrix;

    fn scalar() -> ScaledProblem {
        ProblemInstance::new(
            DMatrix::from_element(1, 1, 1.0),
            DVector::from_element(1, 1.0),
            DMatrix::zeros(1, 1),
            DVector::from_element(1, 1.0),
            2.0,
        )
        .unwrap()
        .scale()
        .unwrap()
    }

    fn symmetric() -> ScaledProblem {
        ProblemInstance::new(
            DMatrix::identity(2, 2),
            DVector::from_element(2, 1.0),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            DVector::from_element(2, 1.0),
            1.0,
        )
        .unwrap()
        .scale()
        .unwrap()
    }

    #[test]
    fn fixed_point_scalar_one_step() {
        let r = fixed_point_solve(&scalar(), 1e-12, 100).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.history[0].norm, 0.5);
        assert!((r.t_star - 2.0).abs() < 1e-15);
        assert!((r.p_star[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_symmetric() {
        let r = fixed_point_solve(&symmetric(), 1e-14, 1000).unwrap();
        assert!(r.converged);
        assert!((r.t_star - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bisection_scalar_and_symmetric() {
        let tol = 1e-10;
        let sp = scalar();
        let (lo, hi) = default_bracket(&sp).unwrap();
        assert_eq!((lo, hi), (0.0, 4.0));
        let r = bisection_solve(&sp, lo, hi, tol).unwrap();
        assert!((r.t_star - 2.0).abs() <= tol * hi);

        let sp = symmetric();
        let (lo, hi) = default_bracket(&sp).unwrap();
        let r = bisection_solve(&sp, lo, hi, tol).unwrap();
        assert!((r.t_star - 0.5).abs() <= tol * hi);
        let widths: Vec<f64> = r.history.iter().map(|s| s.spread).collect();
        assert!(widths.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn bisection_rejects_bad_brackets() {
        let sp = scalar();
        assert!(matches!(
            bisection_solve(&sp, 1.0, 0.5, 1e-10),
            Err(Error::InvalidBracket { .. })
        ));
        assert!(matches!(
            bisection_solve(&sp, 0.0, 1.0, 1e-10),
            Err(Error::InvalidBracket { .. })
        ));
        assert!(bisection_solve(&sp, 0.0, f64::INFINITY, 1e-10).is_err());
    }
}
