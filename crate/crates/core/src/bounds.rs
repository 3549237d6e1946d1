//! Upper bound on the optimal utility as a function of the power budget.
//!
//! With `ρ = ρ(M)` and `‖u‖ = max_n a_nᵀ u`,
//!
//! ```text
//! t*(p_max) ≤ 1/ρ            if p_max ≥ p_T
//!             p_max / ‖u‖    otherwise,         p_T = ‖u‖ / ρ
//! ```
//!
//! The bound is tight as `p_max → 0` and as `p_max → ∞`, and `p_T` marks the
//! passage from noise-limited to interference-limited operation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::perron::spectral_radius;
use crate::problem::{constraint_norm, ScaledProblem};
use crate::solver::{solve_closed_form, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityBound {
    /// `ρ(M)`; zero when there is no coupling between users.
    pub rho_m: f64,
    /// `max_n a_nᵀ u`, without the `1/p_max` factor.
    pub u_norm: f64,
    /// Transition point `u_norm / rho_m`, infinite when `rho_m = 0`.
    pub p_t: f64,
    pub rho_certified: bool,
}

impl UtilityBound {
    pub fn at(&self, p_max: f64) -> f64 {
        if self.rho_m > 0.0 && p_max >= self.p_t {
            1.0 / self.rho_m
        } else {
            p_max / self.u_norm
        }
    }

    /// `true` when `ρ(M) = 0` and only the noise-limited branch exists.
    pub fn is_noise_limited_only(&self) -> bool {
        self.rho_m == 0.0
    }

    pub fn regime(&self, p_max: f64) -> Regime {
        if p_max < self.p_t / 10.0 {
            Regime::NoiseLimited
        } else if p_max > 10.0 * self.p_t {
            Regime::InterferenceLimited
        } else {
            Regime::Transition
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NoiseLimited,
    Transition,
    InterferenceLimited,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::NoiseLimited => "noise_limited",
            Regime::Transition => "transition",
            Regime::InterferenceLimited => "interference_limited",
        })
    }
}

pub fn compute_bound(sp: &ScaledProblem) -> Result<UtilityBound> {
    let est = spectral_radius(sp.m(), 1e-12, 10_000)?;
    let u_norm = constraint_norm(sp.u(), sp.a());
    let rho_m = est.rho;
    let p_t = if rho_m > 0.0 {
        u_norm / rho_m
    } else {
        f64::INFINITY
    };
    Ok(UtilityBound {
        rho_m,
        u_norm,
        p_t,
        rho_certified: est.certified,
    })
}

/// Noise-limited below `p_T/10`, interference-limited above `10 p_T`.
pub fn regime(sp: &ScaledProblem, p_max: f64) -> Result<Regime> {
    Ok(compute_bound(sp)?.regime(p_max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub p_max: f64,
    pub t_star: f64,
    pub bound: f64,
    pub regime: Regime,
}

/// Solves the problem at every budget in `p_max_values`.
///
/// Only `p_max` changes along the sweep; `M`, `u` and `A` stay fixed, so a
/// single bound serves every point.
pub fn sweep_p_max(
    sp: &ScaledProblem,
    p_max_values: &[f64],
    opts: &SolverOptions,
) -> Result<(UtilityBound, Vec<SweepPoint>)> {
    let bound = compute_bound(sp)?;
    let mut points = Vec::with_capacity(p_max_values.len());
    for &p_max in p_max_values {
        let sol = solve_closed_form(&sp.with_p_max(p_max), opts)?;
        points.push(SweepPoint {
            p_max,
            t_star: sol.t_star,
            bound: bound.at(p_max),
            regime: bound.regime(p_max),
        });
    }
    Ok((bound, points))
}
