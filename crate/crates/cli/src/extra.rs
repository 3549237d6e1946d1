//! `channel` and `generate`.

use std::path::PathBuf;

use cellfree_sim::export::EffectiveChannelDocument;
use cellfree_sim::seeding::rng;
use cellfree_sim::{make_setup, Cooperation, Profile};
use clap::Args;
use maxmin_core::document::{to_toml, InstanceDocument};
use maxmin_core::random::{random_instance, Coupling};

use crate::failure::{Failure, Outcome};
use crate::output::emit;
use crate::simulate::load_config;

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// Scenario file; the profile defaults apply when omitted.
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "cellular")]
    pub regime: Cooperation,
    #[arg(long, default_value_t = 0)]
    pub setup: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn channel(args: &ChannelArgs, profile: Profile) -> Outcome<()> {
    let cfg = load_config(args.config.as_deref(), profile)?;
    let setup = make_setup(&cfg, args.setup)?;
    let eff = setup.effective_channel(&cfg, args.regime)?;
    let inst = setup.ul_problem(&cfg, &eff)?;
    let doc = EffectiveChannelDocument::new(&inst, &eff, setup.noise.mw, setup.seed);
    emit(args.output.as_deref(), doc.to_toml()?.as_bytes())
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub users: usize,
    #[arg(long, default_value_t = 1)]
    pub constraints: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Make every off-diagonal interference coefficient positive.
    #[arg(long)]
    pub irreducible: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn generate(args: &GenerateArgs) -> Outcome<()> {
    if args.users == 0 || args.constraints == 0 {
        return Err(Failure::usage("--users and --constraints must be positive"));
    }
    let coupling = if args.irreducible { Coupling::Irreducible } else { Coupling::Sparse };
    let inst = random_instance(&mut rng(args.seed), args.users, args.constraints, coupling);
    emit(args.output.as_deref(), to_toml(&InstanceDocument::from_instance(&inst))?.as_bytes())
}
