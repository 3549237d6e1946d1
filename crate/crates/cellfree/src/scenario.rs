//! Scenario configuration and the per-setup experiment pipeline.
//!
//! A scenario file is TOML; every section and key is optional and overrides
//! the chosen profile:
//!
//! ```toml
//! [geometry]
//! aps = 4              # L, a perfect square
//! antennas = 2         # M per AP
//! users = 8            # K
//! area_side_m = 1000.0
//! height_diff_m = 10.0
//!
//! [channel]
//! shadow_sd_db = 4.0
//! decorrelation_m = 9.0
//! bandwidth_hz = 20e6
//! noise_figure_db = 7.0
//!
//! [cooperation]
//! cluster_size = 2     # Q for the distributed and centralized regimes
//!
//! [power]
//! design_p_max_dbm = 20.0
//!
//! [monte_carlo]
//! n_samples = 500      # draws for G and d
//! n_stat_samples = 500 # draws for the team-MMSE statistics
//!
//! [run]
//! n_setups = 20
//! seed = 1
//! ```

use std::fmt;
use std::str::FromStr;

use maxmin_core::{ProblemInstance, SolverOptions};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::channel::{noise_power, pathloss_gains, ChannelStatistics, NoisePower};
use crate::combiners::{CombinerDesign, Cooperation};
use crate::effective::{simulate_effective_channel, EffectiveChannel};
use crate::error::{Result, SimError};
use crate::geometry::{make_geometry, NetworkGeometry};
use crate::mapping::build_ul_problem;
use crate::seeding::{derive, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub aps: usize,
    pub antennas: usize,
    pub users: usize,
    pub area_side_m: f64,
    pub height_diff_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub shadow_sd_db: f64,
    pub decorrelation_m: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CooperationConfig {
    pub cluster_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerConfig {
    pub design_p_max_dbm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloConfig {
    pub n_samples: usize,
    pub n_stat_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_setups: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub geometry: GeometryConfig,
    pub channel: ChannelConfig,
    pub cooperation: CooperationConfig,
    pub power: PowerConfig,
    pub monte_carlo: MonteCarloConfig,
    pub run: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    /// L = 4, M = 2, K = 8, Q = 2, 500 draws, 20 setups.
    #[default]
    Desk,
    /// L = 16, M = 8, K = 64, Q = 4, 1000 draws, 100 setups.
    Paper,
}

impl FromStr for Profile {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "paper" => Ok(Profile::Paper),
            _ => Err(SimError::Config(format!("unknown profile `{s}` (expected desk or paper)"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Desk => "desk",
            Profile::Paper => "paper",
        })
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (key, value) in over {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

impl ScenarioConfig {
    pub fn profile(profile: Profile) -> Self {
        let (aps, antennas, users, q, samples, setups) = match profile {
            Profile::Desk => (4, 2, 8, 2, 500, 20),
            Profile::Paper => (16, 8, 64, 4, 1000, 100),
        };
        ScenarioConfig {
            geometry: GeometryConfig {
                aps,
                antennas,
                users,
                area_side_m: 1000.0,
                height_diff_m: crate::geometry::HEIGHT_DIFF_M,
            },
            channel: ChannelConfig {
                shadow_sd_db: crate::channel::SHADOW_SD_DB,
                decorrelation_m: crate::channel::DECORRELATION_M,
                bandwidth_hz: 20e6,
                noise_figure_db: 7.0,
            },
            cooperation: CooperationConfig { cluster_size: q },
            power: PowerConfig { design_p_max_dbm: 20.0 },
            monte_carlo: MonteCarloConfig {
                n_samples: samples,
                n_stat_samples: samples,
            },
            run: RunConfig { n_setups: setups, seed: 1 },
        }
    }

    /// Parses a scenario file on top of `profile`; keys absent from the file
    /// keep the profile value.
    pub fn from_toml(text: &str, profile: Profile) -> Result<Self> {
        let over: toml::Table = text.parse().map_err(|e: toml::de::Error| SimError::Config(e.to_string()))?;
        let mut base = toml::Table::try_from(ScenarioConfig::profile(profile))
            .map_err(|e| SimError::Config(e.to_string()))?;
        merge(&mut base, over);
        let cfg: ScenarioConfig = base.try_into().map_err(|e: toml::de::Error| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| SimError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        let bad = |msg: String| Err(SimError::Config(msg));
        let side = (g.aps as f64).sqrt().round() as usize;
        if g.aps == 0 || side * side != g.aps {
            return bad(format!("geometry.aps = {} is not a positive perfect square", g.aps));
        }
        if g.antennas == 0 || g.users == 0 {
            return bad("geometry.antennas and geometry.users must be positive".into());
        }
        if !(g.area_side_m > 0.0) || !(g.height_diff_m >= 0.0) {
            return bad("geometry.area_side_m must be positive and height_diff_m nonnegative".into());
        }
        let q = self.cooperation.cluster_size;
        if q == 0 || q > g.aps {
            return bad(format!("cooperation.cluster_size = {q} must be in 1..={}", g.aps));
        }
        if !(self.channel.bandwidth_hz > 0.0) || !(self.channel.shadow_sd_db >= 0.0) || !(self.channel.decorrelation_m > 0.0) {
            return bad("channel.bandwidth_hz and decorrelation_m must be positive, shadow_sd_db nonnegative".into());
        }
        if !self.power.design_p_max_dbm.is_finite() {
            return bad("power.design_p_max_dbm must be finite".into());
        }
        if self.monte_carlo.n_samples < 2 || self.monte_carlo.n_stat_samples < 1 {
            return bad("monte_carlo.n_samples must be >= 2 and n_stat_samples >= 1".into());
        }
        if self.run.n_setups == 0 {
            return bad("run.n_setups must be >= 1".into());
        }
        Ok(())
    }

    pub fn noise(&self) -> Result<NoisePower> {
        noise_power(self.channel.bandwidth_hz, self.channel.noise_figure_db)
    }

    /// Design budget in milliwatts.
    pub fn design_p_max_mw(&self) -> f64 {
        dbm_to_mw(self.power.design_p_max_dbm)
    }
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Spectral efficiency `log2(1 + SINR)` in bit/s/Hz.
pub fn min_rate(t: f64) -> f64 {
    (1.0 + t).log2()
}

/// One realization of the UE positions and large-scale fading.
#[derive(Debug, Clone)]
pub struct Setup {
    pub index: usize,
    pub seed: u64,
    pub geometry: NetworkGeometry,
    /// Linear gains `L × K`.
    pub gamma: DMatrix<f64>,
    pub noise: NoisePower,
}

pub fn make_setup(cfg: &ScenarioConfig, index: usize) -> Result<Setup> {
    cfg.validate()?;
    let seed = derive(cfg.run.seed, Stream::Setup, index as u64);
    let g = &cfg.geometry;
    let mut geometry = make_geometry(g.aps, g.antennas, g.users, g.area_side_m, derive(seed, Stream::Geometry, 0))?;
    geometry.height_diff = g.height_diff_m;
    let gamma = pathloss_gains(
        &geometry,
        cfg.channel.shadow_sd_db,
        cfg.channel.decorrelation_m,
        derive(seed, Stream::Shadowing, 0),
    );
    Ok(Setup {
        index,
        seed,
        geometry,
        gamma,
        noise: cfg.noise()?,
    })
}

impl Setup {
    pub fn statistics(&self, cfg: &ScenarioConfig, cooperation: Cooperation) -> Result<ChannelStatistics> {
        ChannelStatistics::new(
            self.gamma.clone(),
            self.noise.mw,
            cooperation.cluster_size(cfg.cooperation.cluster_size),
        )
    }

    /// `(G, d)` for the regime's combiners at the design budget. Every regime
    /// sees the same channel draws.
    pub fn effective_channel(&self, cfg: &ScenarioConfig, cooperation: Cooperation) -> Result<EffectiveChannel> {
        let stats = self.statistics(cfg, cooperation)?;
        let design = CombinerDesign::new(
            cooperation,
            &stats,
            cfg.geometry.antennas,
            cfg.design_p_max_mw(),
            cfg.monte_carlo.n_stat_samples,
            self.seed,
        )?;
        simulate_effective_channel(&stats, &design, cfg.monte_carlo.n_samples, self.seed)
    }

    /// Max-min fair (`ω = 1`) uplink instance at the design budget, powers in mW.
    pub fn ul_problem(&self, cfg: &ScenarioConfig, eff: &EffectiveChannel) -> Result<ProblemInstance> {
        let k = eff.d.len();
        build_ul_problem(eff, &DVector::from_element(k, 1.0), self.noise.mw, cfg.design_p_max_mw())
    }
}

/// Optimal versus full-power max-min SINR of one (setup, regime) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupOutcome {
    pub setup: usize,
    pub seed: u64,
    pub cooperation: Cooperation,
    pub t_optimal: f64,
    pub t_full_power: f64,
    /// Transition point in mW.
    pub p_t: f64,
    pub certified: bool,
}

impl SetupOutcome {
    pub fn rate_optimal(&self) -> f64 {
        min_rate(self.t_optimal)
    }

    pub fn rate_full_power(&self) -> f64 {
        min_rate(self.t_full_power)
    }
}

pub fn evaluate_setup(cfg: &ScenarioConfig, setup: &Setup, cooperation: Cooperation) -> Result<SetupOutcome> {
    let eff = setup.effective_channel(cfg, cooperation)?;
    let inst = setup.ul_problem(cfg, &eff)?;
    let sol = maxmin_core::solve(&inst, &SolverOptions::default())?;
    let full = DVector::from_element(inst.users(), inst.p_max);
    let bound = maxmin_core::compute_bound(&inst.scale()?)?;
    Ok(SetupOutcome {
        setup: setup.index,
        seed: setup.seed,
        cooperation,
        t_optimal: sol.t_star,
        t_full_power: inst.evaluate_utility(&full),
        p_t: bound.p_t,
        certified: sol.is_certified(),
    })
}
