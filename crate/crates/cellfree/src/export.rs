//! Effective-channel export in the instance document format.

use maxmin_core::document::{self, InstanceDocument};
use maxmin_core::ProblemInstance;
use serde::{Deserialize, Serialize};

use crate::combiners::Cooperation;
use crate::effective::EffectiveChannel;
use crate::error::{Result, SimError};

/// The uplink instance built from an effective channel, followed by the
/// channel statistics it came from. Loads directly as an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveChannelDocument {
    #[serde(flatten)]
    pub instance: InstanceDocument,
    pub regime: Cooperation,
    pub n_samples: usize,
    /// `K × K`, row-major, `G[j,k] = E|h_jᴴ v_k|²`.
    #[serde(rename = "G")]
    pub g: Vec<f64>,
    pub d: Vec<f64>,
    pub sigma_noise_mw: f64,
    pub setup_seed: u64,
}

impl EffectiveChannelDocument {
    pub fn new(inst: &ProblemInstance, eff: &EffectiveChannel, sigma_noise_mw: f64, setup_seed: u64) -> Self {
        EffectiveChannelDocument {
            instance: InstanceDocument::from_instance(inst),
            regime: eff.cooperation,
            n_samples: eff.n_samples,
            g: eff.g.row_iter().flat_map(|r| r.iter().copied().collect::<Vec<_>>()).collect(),
            d: eff.d.iter().copied().collect(),
            sigma_noise_mw,
            setup_seed,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        document::to_toml(self).map_err(SimError::from)
    }
}
