use std::path::PathBuf;

use cellfree_sim::scenario::mw_to_dbm;
use cellfree_sim::{evaluate_setup, make_setup, Cooperation, Profile, ScenarioConfig, SetupOutcome};
use clap::Args;
use rayon::prelude::*;

use crate::failure::{Failure, Outcome};
use crate::output::{csv_bytes, csv_writer, db, emit, num, read};

pub const HEADER: [&str; 10] = [
    "setup",
    "setup_seed",
    "regime",
    "status",
    "t_optimal",
    "t_full_power",
    "min_rate_optimal_bps_hz",
    "min_rate_full_power_bps_hz",
    "gain_bps_hz",
    "p_T_dBm",
];

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file; the profile defaults apply when omitted.
    pub config: Option<PathBuf>,
    /// Comma-separated cooperation regimes.
    #[arg(long, value_delimiter = ',', default_value = "cellular,distributed,centralized")]
    pub regimes: Vec<Cooperation>,
    /// Number of setups (overrides the scenario).
    #[arg(long)]
    pub setups: Option<usize>,
    /// Master seed (overrides the scenario).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn load_config(path: Option<&std::path::Path>, profile: Profile) -> Outcome<ScenarioConfig> {
    match path {
        Some(p) => {
            let text = read(p)?;
            ScenarioConfig::from_toml(&text, profile).map_err(|e| Failure::from(e).context(&p.display().to_string()))
        }
        None => Ok(ScenarioConfig::profile(profile)),
    }
}

struct Row {
    setup: usize,
    seed: u64,
    regime: Cooperation,
    result: Result<SetupOutcome, String>,
}

pub fn run(args: &SimulateArgs, profile: Profile) -> Outcome<()> {
    let mut cfg = load_config(args.config.as_deref(), profile)?;
    if let Some(n) = args.setups {
        cfg.run.n_setups = n;
    }
    if let Some(s) = args.seed {
        cfg.run.seed = s;
    }
    cfg.validate()?;
    let mut regimes = args.regimes.clone();
    regimes.sort();
    regimes.dedup();
    if regimes.is_empty() {
        return Err(Failure::usage("--regimes is empty"));
    }

    let mut rows: Vec<Row> = (0..cfg.run.n_setups)
        .into_par_iter()
        .flat_map_iter(|i| {
            let setup = make_setup(&cfg, i);
            regimes
                .iter()
                .map(|&regime| match &setup {
                    Ok(s) => Row {
                        setup: i,
                        seed: s.seed,
                        regime,
                        result: evaluate_setup(&cfg, s, regime).map_err(|e| e.to_string()),
                    },
                    Err(e) => Row {
                        setup: i,
                        seed: 0,
                        regime,
                        result: Err(e.to_string()),
                    },
                })
                .collect::<Vec<_>>()
        })
        .collect();
    rows.sort_by_key(|r| (r.setup, r.regime));

    let mut w = csv_writer();
    w.write_record(HEADER).expect("in-memory write");
    let mut failed = 0;
    for row in &rows {
        let (status, fields) = match &row.result {
            Ok(o) => (
                if o.certified { "ok".to_string() } else { "uncertified".to_string() },
                [
                    num(o.t_optimal),
                    num(o.t_full_power),
                    num(o.rate_optimal()),
                    num(o.rate_full_power()),
                    num(o.rate_optimal() - o.rate_full_power()),
                    db(mw_to_dbm(o.p_t)),
                ],
            ),
            Err(msg) => {
                failed += 1;
                (format!("failed: {msg}"), Default::default())
            }
        };
        let mut record = vec![row.setup.to_string(), row.seed.to_string(), row.regime.to_string(), status];
        record.extend(fields);
        w.write_record(&record).expect("in-memory write");
    }
    emit(args.output.as_deref(), &csv_bytes(w))?;

    for &regime in &regimes {
        let ok: Vec<&SetupOutcome> = rows
            .iter()
            .filter(|r| r.regime == regime)
            .filter_map(|r| r.result.as_ref().ok())
            .collect();
        if ok.is_empty() {
            continue;
        }
        let n = ok.len() as f64;
        let opt = ok.iter().map(|o| o.rate_optimal()).sum::<f64>() / n;
        let full = ok.iter().map(|o| o.rate_full_power()).sum::<f64>() / n;
        eprintln!("{regime:>12}: mean min-rate optimal {opt:.4} bit/s/Hz, full power {full:.4} bit/s/Hz over {} setups", ok.len());
    }
    if failed == rows.len() {
        return Err(Failure::numerical("every setup failed"));
    }
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", rows.len());
    }
    Ok(())
}
