//! Effective channel to max-min problem instance.

use nalgebra::{DMatrix, DVector};
use maxmin_core::ProblemInstance;

use crate::effective::EffectiveChannel;
use crate::error::{Result, SimError};

fn common(eff: &EffectiveChannel, omega: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let k = eff.d.len();
    if omega.len() != k || omega.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(SimError::Parameter(format!("weights must be {k} positive numbers")));
    }
    if let Some(user) = (0..k).find(|&i| !(eff.d[i] > 0.0)) {
        return Err(SimError::Unserved { user });
    }
    let b = eff.d.component_div(omega);
    // G − D; the diagonal is a sample variance, nonnegative up to rounding.
    let mut c = eff.g.clone();
    for i in 0..k {
        c[(i, i)] = (c[(i, i)] - eff.d[i]).max(0.0);
    }
    Ok((b, c))
}

/// Uplink with per-UE budget: `A = I`, `b = d/ω`, `C = G − D`, `σ = σ 1`.
pub fn build_ul_problem(eff: &EffectiveChannel, omega: &DVector<f64>, sigma_noise: f64, p_max: f64) -> Result<ProblemInstance> {
    let (b, c) = common(eff, omega)?;
    let k = b.len();
    Ok(ProblemInstance::new(
        DMatrix::identity(k, k),
        b,
        c,
        DVector::from_element(k, sigma_noise),
        p_max,
    )?)
}

/// Downlink with a sum budget: `A = 1`, `b = d/ω`, `C = Gᵀ − D`, `σ = σ 1`.
pub fn build_dl_problem(eff: &EffectiveChannel, omega: &DVector<f64>, sigma_noise: f64, p_max: f64) -> Result<ProblemInstance> {
    let (b, c) = common(eff, omega)?;
    let k = b.len();
    Ok(ProblemInstance::new(
        DMatrix::from_element(k, 1, 1.0),
        b,
        c.transpose(),
        DVector::from_element(k, sigma_noise),
        p_max,
    )?)
}

/// Cellular downlink with a budget `p_max` per AP: one constraint column per
/// AP indicating the UEs it serves (`serving_ap[k]`).
pub fn build_cellular_dl_problem(
    eff: &EffectiveChannel,
    omega: &DVector<f64>,
    sigma_noise: f64,
    p_max: f64,
    serving_ap: &[usize],
    aps: usize,
) -> Result<ProblemInstance> {
    let (b, c) = common(eff, omega)?;
    let k = b.len();
    if serving_ap.len() != k {
        return Err(SimError::Parameter(format!(
            "assignment has {} entries, expected {k}",
            serving_ap.len()
        )));
    }
    if let Some(&l) = serving_ap.iter().find(|&&l| l >= aps) {
        return Err(SimError::Parameter(format!("AP index {l} out of range for {aps} APs")));
    }
    let a = DMatrix::from_fn(k, aps, |i, l| if serving_ap[i] == l { 1.0 } else { 0.0 });
    Ok(ProblemInstance::new(
        a,
        b,
        c.transpose(),
        DVector::from_element(k, sigma_noise),
        p_max,
    )?)
}

/// Per-UE uplink SINR divided by the weight, evaluated directly.
pub fn weighted_ul_sinr(eff: &EffectiveChannel, omega: &DVector<f64>, sigma_noise: f64, p: &DVector<f64>) -> DVector<f64> {
    let k = p.len();
    DVector::from_fn(k, |i, _| {
        let var = eff.g[(i, i)] - eff.d[i];
        let interference: f64 = (0..k).filter(|&j| j != i).map(|j| p[j] * eff.g[(j, i)]).sum();
        p[i] * eff.d[i] / (p[i] * var + interference + sigma_noise) / omega[i]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combiners::Cooperation;
    use maxmin_core::{solve, SolverOptions};

    fn toy() -> EffectiveChannel {
        EffectiveChannel {
            g: DMatrix::from_row_slice(2, 2, &[3.0, 0.4, 0.2, 2.5]),
            d: DVector::from_vec(vec![2.0, 2.0]),
            g_stderr: DMatrix::zeros(2, 2),
            scale: DVector::from_element(2, 1.0),
            n_samples: 10,
            cooperation: Cooperation::Cellular,
        }
    }

    #[test]
    fn ul_mapping() {
        let eff = toy();
        let inst = build_ul_problem(&eff, &DVector::from_element(2, 1.0), 0.1, 1.0).unwrap();
        assert_eq!(inst.a, DMatrix::identity(2, 2));
        assert_eq!(inst.c, DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.2, 0.5]));
        assert_eq!(inst.b, eff.d);
        let heavier = build_ul_problem(&eff, &DVector::from_vec(vec![2.0, 1.0]), 0.1, 1.0).unwrap();
        assert_eq!(heavier.b[0], 1.0);
    }

    #[test]
    fn ul_utility_is_min_weighted_sinr() {
        let eff = toy();
        let omega = DVector::from_vec(vec![1.0, 1.5]);
        let inst = build_ul_problem(&eff, &omega, 0.1, 1.0).unwrap();
        let sol = solve(&inst, &SolverOptions::default()).unwrap();
        let sinr = weighted_ul_sinr(&eff, &omega, 0.1, &sol.p_star);
        assert!((sinr.min() - sol.t_star).abs() < 1e-12);
        assert!((sinr.max() - sol.t_star).abs() < 1e-10);
    }

    #[test]
    fn dl_matches_ul_for_symmetric_g() {
        let mut eff = toy();
        eff.g = DMatrix::from_row_slice(2, 2, &[3.0, 0.3, 0.3, 3.0]);
        let ones = DVector::from_element(2, 1.0);
        let dl = build_dl_problem(&eff, &ones, 0.1, 2.0).unwrap();
        assert_eq!(dl.constraints(), 1);
        let ul = build_ul_problem(&eff, &ones, 0.1, 1.0).unwrap();
        let t_dl = solve(&dl, &SolverOptions::default()).unwrap();
        let t_ul = solve(&ul, &SolverOptions::default()).unwrap();
        assert_eq!(t_dl.rho_all.len(), 1);
        // Symmetric: both optima sit at equal powers, 1 per user.
        assert!((t_dl.t_star - t_ul.t_star).abs() < 1e-12);
    }

    #[test]
    fn cellular_dl_indicator_columns() {
        let eff = toy();
        let inst = build_cellular_dl_problem(&eff, &DVector::from_element(2, 1.0), 0.1, 1.0, &[1, 0], 2).unwrap();
        assert_eq!(inst.a, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert!(build_cellular_dl_problem(&eff, &DVector::from_element(2, 1.0), 0.1, 1.0, &[2, 0], 2).is_err());
    }

    #[test]
    fn zero_signal_rejected_with_index() {
        let mut eff = toy();
        eff.d[1] = 0.0;
        assert!(matches!(
            build_ul_problem(&eff, &DVector::from_element(2, 1.0), 0.1, 1.0),
            Err(SimError::Unserved { user: 1 })
        ));
    }
}
