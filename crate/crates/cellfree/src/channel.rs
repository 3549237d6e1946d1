//! Large-scale fading, noise power and AP cluster selection.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SimError};
use crate::geometry::NetworkGeometry;
use crate::seeding::rng;

/// Shadow-fading standard deviation in dB.
pub const SHADOW_SD_DB: f64 = 4.0;
/// UE-distance scale of the shadowing correlation `2^(−δ/9 m)`.
pub const DECORRELATION_M: f64 = 9.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Median pathloss in dB at a 3-D distance in meters (2 GHz carrier).
pub fn pathloss_db(distance_m: f64) -> f64 {
    -21.9 * distance_m.log10() - 30.5
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisePower {
    pub dbm: f64,
    /// Linear power in milliwatts.
    pub mw: f64,
}

/// Thermal noise `−174 + 10 log10(B) + F` dBm.
pub fn noise_power(bandwidth_hz: f64, noise_figure_db: f64) -> Result<NoisePower> {
    if !(bandwidth_hz > 0.0 && bandwidth_hz.is_finite()) {
        return Err(SimError::Parameter(format!("bandwidth must be positive, got {bandwidth_hz}")));
    }
    let dbm = -174.0 + 10.0 * bandwidth_hz.log10() + noise_figure_db;
    Ok(NoisePower { dbm, mw: db_to_linear(dbm) })
}

/// Factor `F` with `F Fᵀ = [2^(−δ_ki / scale)]`, negative eigenvalues clipped.
pub fn shadowing_factor(geo: &NetworkGeometry, decorrelation_m: f64) -> DMatrix<f64> {
    let k = geo.users;
    let kernel = DMatrix::from_fn(k, k, |a, b| 2f64.powf(-geo.ue_distance(a, b) / decorrelation_m));
    let eig = SymmetricEigen::new(kernel);
    let roots = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    eig.eigenvectors * DMatrix::from_diagonal(&roots)
}

/// Shadowing terms `Z` in dB, `L × K`: one correlated Gaussian `K`-vector per
/// AP, independent across APs.
pub fn draw_shadowing(
    geo: &NetworkGeometry,
    shadow_sd_db: f64,
    decorrelation_m: f64,
    seed: u64,
) -> DMatrix<f64> {
    let (l, k) = (geo.aps, geo.users);
    if shadow_sd_db == 0.0 {
        return DMatrix::zeros(l, k);
    }
    let factor = shadowing_factor(geo, decorrelation_m);
    let mut rng = rng(seed);
    let mut z = DMatrix::zeros(l, k);
    for ap in 0..l {
        let xi = DVector::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
        let row = &factor * xi * shadow_sd_db;
        z.row_mut(ap).copy_from(&row.transpose());
    }
    z
}

/// Linear channel gains `γ_{l,k}` (`L × K`) with correlated shadowing.
pub fn pathloss_gains(geo: &NetworkGeometry, shadow_sd_db: f64, decorrelation_m: f64, seed: u64) -> DMatrix<f64> {
    let z = draw_shadowing(geo, shadow_sd_db, decorrelation_m, seed);
    DMatrix::from_fn(geo.aps, geo.users, |l, k| {
        db_to_linear(pathloss_db(geo.distance(l, k)) + z[(l, k)])
    })
}

/// The `q` strongest APs of every UE in decreasing gain; equal gains keep
/// the lower AP index first.
pub fn select_clusters(gamma: &DMatrix<f64>, q: usize) -> Vec<Vec<usize>> {
    (0..gamma.ncols())
        .map(|k| {
            let mut order: Vec<usize> = (0..gamma.nrows()).collect();
            order.sort_by(|&a, &b| gamma[(b, k)].total_cmp(&gamma[(a, k)]));
            order.truncate(q);
            order
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelStatistics {
    /// Linear gains, `L × K`.
    pub gamma: DMatrix<f64>,
    /// Noise power in milliwatts.
    pub sigma_noise: f64,
    pub clusters: Vec<Vec<usize>>,
    pub q: usize,
    serving: DMatrix<bool>,
}

impl ChannelStatistics {
    pub fn new(gamma: DMatrix<f64>, sigma_noise: f64, q: usize) -> Result<Self> {
        if q == 0 || q > gamma.nrows() {
            return Err(SimError::Parameter(format!(
                "cluster size must be in 1..={}, got {q}",
                gamma.nrows()
            )));
        }
        if let Some(v) = gamma.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(SimError::Parameter(format!("channel gains must be positive, found {v}")));
        }
        if !(sigma_noise > 0.0) {
            return Err(SimError::Parameter(format!("noise power must be positive, got {sigma_noise}")));
        }
        let clusters = select_clusters(&gamma, q);
        let mut serving = DMatrix::from_element(gamma.nrows(), gamma.ncols(), false);
        for (k, cluster) in clusters.iter().enumerate() {
            for &l in cluster {
                serving[(l, k)] = true;
            }
        }
        Ok(ChannelStatistics { gamma, sigma_noise, clusters, q, serving })
    }

    pub fn aps(&self) -> usize {
        self.gamma.nrows()
    }

    pub fn users(&self) -> usize {
        self.gamma.ncols()
    }

    pub fn serves(&self, l: usize, k: usize) -> bool {
        self.serving[(l, k)]
    }

    /// `Σ_l / I`: total gain of the UEs whose channel AP `l` does not know.
    pub fn csi_error(&self, l: usize) -> f64 {
        (0..self.users()).filter(|&i| !self.serves(l, i)).map(|i| self.gamma[(l, i)]).sum()
    }
}
