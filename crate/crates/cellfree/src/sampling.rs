//! Small-scale fading draws and the per-AP CSI model.
//!
//! A channel draw is stored as one `(L·M) × K` complex matrix `H` whose
//! column `k` stacks `h_{1,k}, …, h_{L,k}`; rows `l·M .. (l+1)·M` belong to
//! AP `l`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::ChannelStatistics;
use crate::seeding::{stream_rng, Stream};

/// One draw with `h_{l,k} ~ CN(0, γ_{l,k} I_M)`.
pub fn draw_channel<R: Rng + ?Sized>(gamma: &DMatrix<f64>, antennas: usize, rng: &mut R) -> DMatrix<Complex64> {
    let (l, k) = gamma.shape();
    let mut h = DMatrix::zeros(l * antennas, k);
    for user in 0..k {
        for ap in 0..l {
            let scale = (0.5 * gamma[(ap, user)]).sqrt();
            for m in 0..antennas {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                h[(ap * antennas + m, user)] = Complex64::new(scale * re, scale * im);
            }
        }
    }
    h
}

/// Draw `index` of the channel stream of `seed`.
pub fn channel_draw(gamma: &DMatrix<f64>, antennas: usize, seed: u64, stream: Stream, index: u64) -> DMatrix<Complex64> {
    draw_channel(gamma, antennas, &mut stream_rng(seed, stream, index))
}

/// `n_samples` independent draws; draw `i` depends only on `(seed, i)`.
pub fn sample_channels(
    stats: &ChannelStatistics,
    antennas: usize,
    n_samples: usize,
    seed: u64,
) -> Vec<DMatrix<Complex64>> {
    (0..n_samples as u64)
        .into_par_iter()
        .map(|i| channel_draw(&stats.gamma, antennas, seed, Stream::Channel, i))
        .collect()
}

/// `Ĥ`: serving-AP channels as drawn, all others replaced by their mean (zero).
pub fn csi_view(h: &DMatrix<Complex64>, clusters: &[Vec<usize>], antennas: usize) -> DMatrix<Complex64> {
    let mut hat = DMatrix::zeros(h.nrows(), h.ncols());
    for (k, cluster) in clusters.iter().enumerate() {
        for &l in cluster {
            let rows = l * antennas..(l + 1) * antennas;
            for r in rows {
                hat[(r, k)] = h[(r, k)];
            }
        }
    }
    hat
}

/// Rows of AP `l`, an `M × K` block.
pub fn ap_block(h: &DMatrix<Complex64>, l: usize, antennas: usize) -> DMatrix<Complex64> {
    h.rows(l * antennas, antennas).into_owned()
}
