//! Cell-free massive MIMO scenarios for max-min uplink power control.
//!
//! The pipeline for one setup:
//!
//! 1. [`geometry`]: APs on a regular grid, UEs dropped uniformly.
//! 2. [`channel`]: 3GPP-style pathloss with correlated shadowing, noise
//!    power and the `Q` strongest-AP clusters.
//! 3. [`sampling`]: Rayleigh draws `h_{l,k} ~ CN(0, γ_{l,k} I_M)` and the
//!    per-AP CSI model.
//! 4. [`combiners`]: local MMSE (cellular), local team MMSE (distributed)
//!    or cluster-wide MMSE (centralized) combiners.
//! 5. [`effective`]: Monte-Carlo `(G, d)` for the normalized combiners.
//! 6. [`mapping`]: the uplink / downlink max-min instances.
//!
//! All randomness flows from one master seed through [`seeding`], so results
//! are bit-identical for any thread count.

pub mod accumulate;
pub mod channel;
pub mod combiners;
pub mod effective;
mod error;
pub mod export;
pub mod geometry;
pub mod mapping;
pub mod sampling;
pub mod scenario;
pub mod seeding;

pub use channel::{noise_power, pathloss_db, pathloss_gains, ChannelStatistics, NoisePower};
pub use combiners::{CombinerDesign, Cooperation};
pub use effective::{estimate_effective_channel, simulate_effective_channel, EffectiveChannel};
pub use error::{Result, SimError};
pub use geometry::{make_geometry, NetworkGeometry};
pub use mapping::{build_cellular_dl_problem, build_dl_problem, build_ul_problem};
pub use scenario::{evaluate_setup, make_setup, Profile, ScenarioConfig, Setup, SetupOutcome};
