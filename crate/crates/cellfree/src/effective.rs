//! Monte-Carlo estimation of the effective channel `(G, d)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::accumulate::chunked_sum;
use crate::combiners::{CombinerDesign, Cooperation};
use crate::channel::ChannelStatistics;
use crate::error::{Result, SimError};
use crate::sampling::{channel_draw, csi_view};
use crate::seeding::Stream;

type C = Complex64;

/// Second-order statistics of the filtered channels, with every combiner
/// scaled so that `E‖v_k‖² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannel {
    /// `G[j,k] = E|h_jᴴ v_k|²`.
    pub g: DMatrix<f64>,
    /// `d_k = |E h_kᴴ v_k|²`.
    pub d: DVector<f64>,
    /// Standard error of every entry of `G`.
    pub g_stderr: DMatrix<f64>,
    /// Applied combiner scaling `1/√(mean ‖v_k‖²)`.
    pub scale: DVector<f64>,
    pub n_samples: usize,
    pub cooperation: Cooperation,
}

impl EffectiveChannel {
    /// `G[k,k] − d_k`, the variance of the useful signal term.
    pub fn self_interference(&self) -> DVector<f64> {
        DVector::from_fn(self.d.len(), |k, _| self.g[(k, k)] - self.d[k])
    }
}

/// Raw sums over draws.
#[derive(Debug, Clone)]
struct Moments {
    abs2: DMatrix<f64>,
    abs4: DMatrix<f64>,
    diag: DVector<C>,
    vnorm: DVector<f64>,
}

impl Moments {
    fn from_draw(h: &DMatrix<C>, v: &DMatrix<C>) -> Self {
        let z = h.adjoint() * v;
        let abs2 = z.map(|x| x.norm_sqr());
        let k = z.ncols();
        Moments {
            abs4: abs2.map(|x| x * x),
            abs2,
            diag: DVector::from_fn(k, |i, _| z[(i, i)]),
            vnorm: DVector::from_fn(k, |i, _| v.column(i).norm_squared()),
        }
    }

    fn add(mut self, other: Moments) -> Moments {
        self.abs2 += other.abs2;
        self.abs4 += other.abs4;
        self.diag += other.diag;
        self.vnorm += other.vnorm;
        self
    }

    fn finish(self, n: usize, cooperation: Cooperation) -> Result<EffectiveChannel> {
        if n < 2 {
            return Err(SimError::Parameter(format!("need at least 2 samples, got {n}")));
        }
        let nf = n as f64;
        let k = self.vnorm.len();
        if let Some(user) = (0..k).find(|&i| !(self.vnorm[i] > 0.0)) {
            return Err(SimError::ZeroCombiner { user });
        }
        let c2 = self.vnorm.map(|s| nf / s);
        let g = DMatrix::from_fn(k, k, |j, i| self.abs2[(j, i)] / nf * c2[i]);
        let g_stderr = DMatrix::from_fn(k, k, |j, i| {
            let m2 = self.abs2[(j, i)] / nf;
            let var = ((self.abs4[(j, i)] / nf - m2 * m2) * nf / (nf - 1.0)).max(0.0);
            (var / nf).sqrt() * c2[i]
        });
        let d = DVector::from_fn(k, |i, _| (self.diag[i] / nf).norm_sqr() * c2[i]);
        Ok(EffectiveChannel {
            g,
            d,
            g_stderr,
            scale: c2.map(f64::sqrt),
            n_samples: n,
            cooperation,
        })
    }
}

/// Estimates `(G, d)` from paired channel draws and unnormalized joint
/// combiners (`(L·M) × K` each).
pub fn estimate_effective_channel(
    draws: &[(DMatrix<C>, DMatrix<C>)],
    cooperation: Cooperation,
) -> Result<EffectiveChannel> {
    if draws.len() < 2 {
        return Err(SimError::Parameter(format!("need at least 2 samples, got {}", draws.len())));
    }
    let sum = chunked_sum(
        draws.len(),
        |i| Ok::<_, SimError>(Moments::from_draw(&draws[i].0, &draws[i].1)),
        Moments::add,
    )?
    .expect("non-empty");
    sum.finish(draws.len(), cooperation)
}

/// Draws `n_samples` channels from the channel stream of `seed`, builds the
/// combiner of every draw from its CSI and estimates `(G, d)` without
/// holding the draws in memory.
pub fn simulate_effective_channel(
    stats: &ChannelStatistics,
    design: &CombinerDesign,
    n_samples: usize,
    seed: u64,
) -> Result<EffectiveChannel> {
    if n_samples < 2 {
        return Err(SimError::Parameter(format!("need at least 2 samples, got {n_samples}")));
    }
    let draw = |i: usize| -> Result<Moments> {
        let h = channel_draw(&stats.gamma, design.antennas, seed, Stream::Channel, i as u64);
        let csi = csi_view(&h, &stats.clusters, design.antennas);
        let v = design.combine(stats, &csi)?;
        Ok(Moments::from_draw(&h, &v))
    };
    let sum = chunked_sum(n_samples, draw, Moments::add)?.expect("n_samples > 0");
    sum.finish(n_samples, design.cooperation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::draw_channel;
    use crate::seeding::rng;

    #[test]
    fn scalar_fixed_combiner_closed_form() {
        // v = 2 for every draw: after scaling v = 1, so G = mean |h|² and
        // d = |mean h|², computed directly.
        let mut r = rng(3);
        let gamma = DMatrix::from_element(1, 1, 0.7);
        let draws: Vec<_> = (0..64)
            .map(|_| (draw_channel(&gamma, 1, &mut r), DMatrix::from_element(1, 1, C::new(2.0, 0.0))))
            .collect();
        let eff = estimate_effective_channel(&draws, Cooperation::Cellular).unwrap();
        let mean_abs2 = draws.iter().map(|(h, _)| h[(0, 0)].norm_sqr()).sum::<f64>() / 64.0;
        let mean = draws.iter().map(|(h, _)| h[(0, 0)]).sum::<C>() / 64.0;
        assert!((eff.g[(0, 0)] - mean_abs2).abs() < 1e-12);
        assert!((eff.d[0] - mean.norm_sqr()).abs() < 1e-12);
        assert_eq!(eff.scale[0], 0.5);
        assert_eq!(eff.n_samples, 64);
    }

    #[test]
    fn matched_filter_variance_is_nonnegative_and_normalized() {
        let mut r = rng(9);
        let gamma = DMatrix::from_row_slice(2, 3, &[1.0, 0.2, 0.5, 0.3, 0.9, 0.4]);
        let draws: Vec<_> = (0..200)
            .map(|_| {
                let h = draw_channel(&gamma, 2, &mut r);
                (h.clone(), h)
            })
            .collect();
        let eff = estimate_effective_channel(&draws, Cooperation::Centralized).unwrap();
        assert!(eff.self_interference().iter().all(|&v| v >= 0.0));
        assert!(eff.g.iter().all(|&v| v >= 0.0));
        for k in 0..3 {
            let mean_norm = draws.iter().map(|(_, v)| v.column(k).norm_squared()).sum::<f64>() / 200.0;
            assert!((mean_norm * eff.scale[k].powi(2) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_combiner_rejected() {
        let draws = vec![(DMatrix::from_element(1, 1, C::new(1.0, 0.0)), DMatrix::zeros(1, 1)); 3];
        assert!(matches!(
            estimate_effective_channel(&draws, Cooperation::Cellular),
            Err(SimError::ZeroCombiner { user: 0 })
        ));
        assert!(estimate_effective_channel(&draws[..1], Cooperation::Cellular).is_err());
    }
}
