//! Receive combiners for the three AP cooperation regimes.
//!
//! All combiners are built for a fixed design budget `p_max` and returned
//! unnormalized; `effective` applies the `E‖v_k‖² = 1` scaling.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::accumulate::chunked_sum;
use crate::channel::ChannelStatistics;
use crate::error::{Result, SimError};
use crate::sampling::{ap_block, channel_draw, csi_view};
use crate::seeding::Stream;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cooperation {
    /// Strongest AP only, local MMSE.
    Cellular,
    /// `Q` strongest APs, local team MMSE, no CSI sharing.
    Distributed,
    /// `Q` strongest APs with shared CSI, cluster-wide MMSE.
    Centralized,
}

impl Cooperation {
    pub const ALL: [Cooperation; 3] = [Cooperation::Cellular, Cooperation::Distributed, Cooperation::Centralized];

    /// Cluster size used by this regime given the configured `Q`.
    pub fn cluster_size(self, q: usize) -> usize {
        match self {
            Cooperation::Cellular => 1,
            _ => q,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Cooperation::Cellular => "cellular",
            Cooperation::Distributed => "distributed",
            Cooperation::Centralized => "centralized",
        }
    }
}

impl fmt::Display for Cooperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Cooperation {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        Cooperation::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| {
                SimError::Parameter(format!(
                    "unknown regime `{s}` (expected cellular, distributed or centralized)"
                ))
            })
    }
}

/// Columns `cols` of `(S Sᴴ + diag(err) + reg I)⁻¹ S`.
///
/// Both the local and the cluster-wide MMSE filters go through here, so a
/// cluster of one AP reproduces the local filter bit for bit.
fn mmse_columns(s: &DMatrix<C>, err: &[f64], reg: f64, cols: &[usize]) -> Result<Vec<DVector<C>>> {
    let n = s.nrows();
    let mut r = s * s.adjoint();
    for i in 0..n {
        r[(i, i)] += C::new(err[i] + reg, 0.0);
    }
    let lu = r.lu();
    cols.iter()
        .map(|&k| {
            lu.solve(&s.column(k).into_owned()).ok_or_else(|| SimError::Singular {
                context: "MMSE filter".into(),
                residual: f64::INFINITY,
            })
        })
        .collect()
}

/// Per-AP local MMSE matrices `V_l` (`M × K` each).
pub fn lmmse_combiners(
    csi: &DMatrix<C>,
    stats: &ChannelStatistics,
    antennas: usize,
    p_max: f64,
) -> Result<Vec<DMatrix<C>>> {
    let reg = stats.sigma_noise / p_max;
    let all: Vec<usize> = (0..stats.users()).collect();
    (0..stats.aps())
        .map(|l| {
            let block = ap_block(csi, l, antennas);
            let err = vec![stats.csi_error(l); antennas];
            let cols = mmse_columns(&block, &err, reg, &all)?;
            Ok(DMatrix::from_columns(&cols))
        })
        .collect()
}

/// Stacks per-AP `M × K` blocks into the `(L·M) × K` joint combiner.
pub fn stack(blocks: &[DMatrix<C>]) -> DMatrix<C> {
    let m = blocks[0].nrows();
    let k = blocks[0].ncols();
    let mut v = DMatrix::zeros(m * blocks.len(), k);
    for (l, b) in blocks.iter().enumerate() {
        v.rows_mut(l * m, m).copy_from(b);
    }
    v
}

/// Monte-Carlo estimate of `Π_l = E[Ĥ_lᴴ V_l]` for every AP from
/// `n_stat_samples` draws of the statistics stream of `seed`.
pub fn estimate_pi(
    stats: &ChannelStatistics,
    antennas: usize,
    p_max: f64,
    n_stat_samples: usize,
    seed: u64,
) -> Result<Vec<DMatrix<C>>> {
    if n_stat_samples == 0 {
        return Err(SimError::Parameter("need at least one statistics sample".into()));
    }
    let draw = |i: usize| -> Result<Vec<DMatrix<C>>> {
        let h = channel_draw(&stats.gamma, antennas, seed, Stream::Statistics, i as u64);
        let csi = csi_view(&h, &stats.clusters, antennas);
        let v = lmmse_combiners(&csi, stats, antennas, p_max)?;
        Ok((0..stats.aps())
            .map(|l| ap_block(&csi, l, antennas).adjoint() * &v[l])
            .collect())
    };
    let add = |mut a: Vec<DMatrix<C>>, b: Vec<DMatrix<C>>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    let sum = chunked_sum(n_stat_samples, draw, add)?.expect("n_stat_samples > 0");
    let scale = C::new(1.0 / n_stat_samples as f64, 0.0);
    Ok(sum.into_iter().map(|p| p * scale).collect())
}

/// Team weights `W_l` (`K × K`) solving, for every UE `k` and `l ∈ L_k`,
/// `w_{l,k} + Σ_{j ∈ L_k, j ≠ l} Π_j w_{j,k} = e_k`, with `w_{l,k} = 0`
/// for `l ∉ L_k`.
pub fn team_weights(pis: &[DMatrix<C>], clusters: &[Vec<usize>]) -> Result<Vec<DMatrix<C>>> {
    let aps = pis.len();
    let k_all = pis[0].nrows();
    let mut w = vec![DMatrix::<C>::zeros(k_all, k_all); aps];
    for (k, cluster) in clusters.iter().enumerate() {
        let q = cluster.len();
        let dim = q * k_all;
        let mut sys = DMatrix::<C>::zeros(dim, dim);
        let mut rhs = DVector::<C>::zeros(dim);
        for (a, _) in cluster.iter().enumerate() {
            for (b, &j) in cluster.iter().enumerate() {
                let mut block = sys.view_mut((a * k_all, b * k_all), (k_all, k_all));
                if a == b {
                    block.fill_with_identity();
                } else {
                    block.copy_from(&pis[j]);
                }
            }
            rhs[a * k_all + k] = C::new(1.0, 0.0);
        }
        let x = sys.clone().lu().solve(&rhs);
        let residual = x
            .as_ref()
            .map(|x| (&sys * x - &rhs).norm() / rhs.norm())
            .unwrap_or(f64::INFINITY);
        let x = match x {
            Some(x) if residual <= 1e-8 => x,
            _ => {
                return Err(SimError::Singular {
                    context: format!("team weights of user {}", k + 1),
                    residual,
                })
            }
        };
        for (a, &l) in cluster.iter().enumerate() {
            w[l].set_column(k, &x.rows(a * k_all, k_all));
        }
    }
    Ok(w)
}

/// Per-AP local team MMSE matrices `V_l W_l`.
pub fn ltmmse_combiners(
    csi: &DMatrix<C>,
    stats: &ChannelStatistics,
    antennas: usize,
    p_max: f64,
    weights: &[DMatrix<C>],
) -> Result<Vec<DMatrix<C>>> {
    let v = lmmse_combiners(csi, stats, antennas, p_max)?;
    Ok(v.iter().zip(weights).map(|(v, w)| v * w).collect())
}

/// Joint `(L·M) × K` combiner whose column `k` is the cluster-wide MMSE
/// filter of UE `k` on its serving APs and zero elsewhere.
pub fn centralized_combiners(
    csi: &DMatrix<C>,
    stats: &ChannelStatistics,
    antennas: usize,
    p_max: f64,
) -> Result<DMatrix<C>> {
    let reg = stats.sigma_noise / p_max;
    let mut v = DMatrix::zeros(csi.nrows(), csi.ncols());
    for (k, cluster) in stats.clusters.iter().enumerate() {
        let mut serving = cluster.clone();
        serving.sort_unstable();
        let blocks: Vec<DMatrix<C>> = serving.iter().map(|&l| ap_block(csi, l, antennas)).collect();
        let stacked = stack(&blocks);
        let err: Vec<f64> = serving
            .iter()
            .flat_map(|&l| std::iter::repeat_n(stats.csi_error(l), antennas))
            .collect();
        let col = mmse_columns(&stacked, &err, reg, &[k])?.remove(0);
        for (a, &l) in serving.iter().enumerate() {
            v.view_mut((l * antennas, k), (antennas, 1))
                .copy_from(&col.rows(a * antennas, antennas));
        }
    }
    Ok(v)
}

/// Everything needed to turn a CSI matrix into a joint combiner.
#[derive(Debug, Clone)]
pub struct CombinerDesign {
    pub cooperation: Cooperation,
    pub antennas: usize,
    /// Design budget in the units of the noise power.
    pub p_max: f64,
    /// Team weights, present for the distributed regime.
    pub weights: Option<Vec<DMatrix<C>>>,
}

impl CombinerDesign {
    /// Estimates the statistical quantities the regime needs (the team
    /// weights for `Distributed`) from the statistics stream of `seed`.
    pub fn new(
        cooperation: Cooperation,
        stats: &ChannelStatistics,
        antennas: usize,
        p_max: f64,
        n_stat_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        if !(p_max > 0.0 && p_max.is_finite()) {
            return Err(SimError::Parameter(format!("design budget must be positive, got {p_max}")));
        }
        let weights = match cooperation {
            Cooperation::Distributed => {
                let pis = estimate_pi(stats, antennas, p_max, n_stat_samples, seed)?;
                Some(team_weights(&pis, &stats.clusters)?)
            }
            _ => None,
        };
        Ok(CombinerDesign { cooperation, antennas, p_max, weights })
    }

    /// Joint `(L·M) × K` combiner for one draw, from its CSI.
    pub fn combine(&self, stats: &ChannelStatistics, csi: &DMatrix<C>) -> Result<DMatrix<C>> {
        match (self.cooperation, &self.weights) {
            (Cooperation::Centralized, _) => centralized_combiners(csi, stats, self.antennas, self.p_max),
            (Cooperation::Distributed, Some(w)) => {
                Ok(stack(&ltmmse_combiners(csi, stats, self.antennas, self.p_max, w)?))
            }
            _ => Ok(stack(&lmmse_combiners(csi, stats, self.antennas, self.p_max)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::draw_channel;
    use crate::seeding::rng;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn scalar_lmmse() {
        let stats = ChannelStatistics::new(DMatrix::from_element(1, 1, 2.0), 0.5, 1).unwrap();
        let h = DMatrix::from_element(1, 1, c(0.6, -0.8));
        let v = lmmse_combiners(&h, &stats, 1, 2.0).unwrap();
        let expected = c(0.6, -0.8) / (1.0 + 0.25);
        assert!((v[0][(0, 0)] - expected).norm() < 1e-15);
    }

    #[test]
    fn two_user_lmmse_against_hand_inverse() {
        // One AP, two antennas, both users served (no CSI error).
        let stats = ChannelStatistics::new(DMatrix::from_element(1, 2, 1.0), 0.1, 1).unwrap();
        let h = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.5), c(1.0, 0.0)]);
        let v = lmmse_combiners(&h, &stats, 2, 1.0).unwrap().remove(0);
        // R = H Hᴴ + 0.1 I, explicit 2 × 2 inverse.
        let r = &h * h.adjoint() + DMatrix::<C>::identity(2, 2) * c(0.1, 0.0);
        let det = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
        let inv = DMatrix::from_row_slice(2, 2, &[r[(1, 1)], -r[(0, 1)], -r[(1, 0)], r[(0, 0)]]) / det;
        let expected = inv * &h;
        assert!((v - expected).norm() < 1e-12);
    }

    #[test]
    fn csi_error_enters_regularizer() {
        let two = ChannelStatistics::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 2.0, 3.0]), 0.2, 1).unwrap();
        assert_eq!(two.clusters, vec![vec![1], vec![1]]);
        assert_eq!(two.csi_error(0), 1.5);
        let h = DMatrix::from_row_slice(2, 2, &[c(0.3, 0.1), c(0.2, 0.0), c(0.7, -0.2), c(1.0, 0.4)]);
        let csi = csi_view(&h, &two.clusters, 1);
        let v = lmmse_combiners(&csi, &two, 1, 1.0).unwrap();
        assert_eq!(v[0], DMatrix::zeros(1, 2));
        let hl = ap_block(&csi, 1, 1);
        let denom = (hl.row(0).norm_squared() + 0.2).recip();
        assert!((v[1][(0, 0)] - hl[(0, 0)] * denom).norm() < 1e-15);
    }

    #[test]
    fn ltmmse_is_lmmse_for_single_ap() {
        let stats = ChannelStatistics::new(DMatrix::from_row_slice(1, 3, &[1.0, 0.4, 2.0]), 0.1, 1).unwrap();
        let design = CombinerDesign::new(Cooperation::Distributed, &stats, 2, 1.0, 50, 5).unwrap();
        let w = design.weights.as_ref().unwrap();
        assert_eq!(w[0], DMatrix::identity(3, 3));
        let h = draw_channel(&stats.gamma, 2, &mut rng(1));
        let team = design.combine(&stats, &h).unwrap();
        let local = stack(&lmmse_combiners(&h, &stats, 2, 1.0).unwrap());
        assert!((team - local).norm() < 1e-12);
    }

    #[test]
    fn zero_pi_gives_identity_weights() {
        let pis = vec![DMatrix::<C>::zeros(2, 2); 3];
        let w = team_weights(&pis, &[vec![0, 2], vec![1, 2]]).unwrap();
        assert_eq!(w[0].column(0), DMatrix::<C>::identity(2, 2).column(0));
        assert!(w[0].column(1).iter().all(|z| *z == c(0.0, 0.0)));
        assert_eq!(w[2], DMatrix::identity(2, 2));
    }

    #[test]
    fn team_weights_against_stacked_dense_solve() {
        // L = 2, K = 2, both APs serve both UEs.
        let p0 = DMatrix::from_row_slice(2, 2, &[c(0.4, 0.0), c(0.05, 0.02), c(0.05, -0.02), c(0.3, 0.0)]);
        let p1 = DMatrix::from_row_slice(2, 2, &[c(0.2, 0.0), c(-0.01, 0.03), c(-0.01, -0.03), c(0.6, 0.0)]);
        let w = team_weights(&[p0.clone(), p1.clone()], &[vec![0, 1], vec![1, 0]]).unwrap();
        let mut big = DMatrix::<C>::identity(4, 4);
        big.view_mut((0, 2), (2, 2)).copy_from(&p1);
        big.view_mut((2, 0), (2, 2)).copy_from(&p0);
        for k in 0..2 {
            let mut rhs = DVector::<C>::zeros(4);
            rhs[k] = c(1.0, 0.0);
            rhs[2 + k] = c(1.0, 0.0);
            let x = big.clone().lu().solve(&rhs).unwrap();
            assert!((w[0].column(k) - x.rows(0, 2)).norm() < 1e-10);
            assert!((w[1].column(k) - x.rows(2, 2)).norm() < 1e-10);
        }
    }

    #[test]
    fn centralized_single_ap_cluster_equals_cellular_exactly() {
        let gamma = DMatrix::from_row_slice(3, 4, &[1.0, 0.2, 0.3, 0.9, 0.4, 1.1, 0.2, 0.8, 0.3, 0.5, 1.3, 0.1]);
        let stats = ChannelStatistics::new(gamma, 0.05, 1).unwrap();
        for seed in 0..5 {
            let h = draw_channel(&stats.gamma, 2, &mut rng(seed));
            let csi = csi_view(&h, &stats.clusters, 2);
            let central = centralized_combiners(&csi, &stats, 2, 1.0).unwrap();
            let local = stack(&lmmse_combiners(&csi, &stats, 2, 1.0).unwrap());
            assert_eq!(central, local);
        }
    }

    #[test]
    fn centralized_two_ap_against_hand_stacked_inverse() {
        let gamma = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.8, 1.2]);
        let stats = ChannelStatistics::new(gamma, 0.3, 2).unwrap();
        let h = draw_channel(&stats.gamma, 1, &mut rng(8));
        let v = centralized_combiners(&h, &stats, 1, 2.0).unwrap();
        let r = &h * h.adjoint() + DMatrix::<C>::identity(2, 2) * c(0.15, 0.0);
        let det = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
        let inv = DMatrix::from_row_slice(2, 2, &[r[(1, 1)], -r[(0, 1)], -r[(1, 0)], r[(0, 0)]]) / det;
        assert!((v - inv * &h).norm() < 1e-12);
    }

    #[test]
    fn parses_regimes() {
        assert_eq!("distributed".parse::<Cooperation>().unwrap(), Cooperation::Distributed);
        assert!("mesh".parse::<Cooperation>().is_err());
        assert_eq!(Cooperation::Cellular.cluster_size(4), 1);
        assert_eq!(Cooperation::Centralized.cluster_size(4), 4);
    }
}
