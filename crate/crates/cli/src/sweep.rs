use std::path::PathBuf;

use cellfree_sim::scenario::{dbm_to_mw, min_rate, mw_to_dbm};
use cellfree_sim::{make_setup, Cooperation, Profile, ScenarioConfig};
use clap::Args;
use maxmin_core::document::parse_instance;
use maxmin_core::{compute_bound, solve_closed_form, ProblemInstance, SolverOptions};

use crate::failure::{Failure, Outcome};
use crate::output::{csv_bytes, csv_writer, db, emit, num, read};

pub const HEADER: [&str; 5] = ["p_max_dBm", "t_star", "bound", "regime", "min_rate_bps_hz"];

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Instance document or scenario file.
    pub config: PathBuf,
    /// Budget grid `LO:HI:STEP` in dBm, endpoints included.
    #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true, required_unless_present = "decades", conflicts_with = "decades")]
    pub pmax_dbm: Option<String>,
    /// Instead of a fixed grid, sweep this many decades on each side of the
    /// transition point p_T.
    #[arg(long)]
    pub decades: Option<u32>,
    #[arg(long, default_value_t = 10, requires = "decades")]
    pub points_per_decade: u32,
    /// Cooperation regime when CONFIG is a scenario.
    #[arg(long, default_value = "cellular")]
    pub regime: Cooperation,
    /// Setup index when CONFIG is a scenario.
    #[arg(long, default_value_t = 0)]
    pub setup: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Parses `LO:HI:STEP` into a strictly increasing inclusive grid.
pub fn parse_grid(spec: &str) -> Outcome<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::usage(format!("--pmax-dbm expects LO:HI:STEP, got `{spec}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let (lo, hi, step) = (v[0], v[1], v[2]);
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && step.is_finite() && hi >= lo) {
        return Err(Failure::usage(format!("--pmax-dbm needs LO <= HI and STEP > 0, got `{spec}`")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(Failure::usage("--pmax-dbm grid has more than a million points"));
    }
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn load(args: &SweepArgs, profile: Profile) -> Outcome<ProblemInstance> {
    let text = read(&args.config)?;
    let name = args.config.display().to_string();
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Failure::validation(format!("{name}: {e}")))?;
    if table.contains_key("K") {
        return parse_instance(&text).map_err(|e| Failure::from(e).context(&name));
    }
    let cfg = ScenarioConfig::from_toml(&text, profile).map_err(|e| Failure::from(e).context(&name))?;
    if args.setup >= cfg.run.n_setups {
        return Err(Failure::usage(format!(
            "--setup {} out of range for {} setups",
            args.setup, cfg.run.n_setups
        )));
    }
    let setup = make_setup(&cfg, args.setup)?;
    let eff = setup.effective_channel(&cfg, args.regime)?;
    Ok(setup.ul_problem(&cfg, &eff)?)
}

pub fn run(args: &SweepArgs, profile: Profile) -> Outcome<()> {
    let inst = load(args, profile)?;
    let sp = inst.scale()?;
    let bound = compute_bound(&sp)?;
    let grid_mw: Vec<f64> = match (&args.pmax_dbm, args.decades) {
        (Some(spec), _) => parse_grid(spec)?.into_iter().map(dbm_to_mw).collect(),
        (None, Some(decades)) => {
            if !bound.p_t.is_finite() {
                return Err(Failure::validation("rho(M) = 0: no transition point to sweep around"));
            }
            let ppd = args.points_per_decade.max(1) as i64;
            let span = decades as i64 * ppd;
            (-span..=span).map(|i| bound.p_t * 10f64.powf(i as f64 / ppd as f64)).collect()
        }
        (None, None) => return Err(Failure::usage("give --pmax-dbm or --decades")),
    };
    eprintln!(
        "rho(M) = {:.6e}, p_T = {} dBm{}",
        bound.rho_m,
        db(mw_to_dbm(bound.p_t)),
        if bound.rho_certified { "" } else { " (rho(M) not certified)" }
    );

    let mut w = csv_writer();
    w.write_record(HEADER).expect("in-memory write");
    let opts = SolverOptions::default();
    let mut failure = None;
    for &p in &grid_mw {
        match solve_closed_form(&sp.with_p_max(p), &opts) {
            Ok(sol) => {
                w.write_record([
                    db(mw_to_dbm(p)),
                    num(sol.t_star),
                    num(bound.at(p)),
                    bound.regime(p).to_string(),
                    num(min_rate(sol.t_star)),
                ])
                .expect("in-memory write");
            }
            Err(e) => {
                failure = Some((p, Failure::from(e)));
                break;
            }
        }
    }
    let mut bytes = csv_bytes(w);
    if let Some((p, f)) = &failure {
        bytes.extend_from_slice(format!("# aborted at p_max_dBm={}: {}\n", db(mw_to_dbm(*p)), f.message).as_bytes());
    }
    emit(args.output.as_deref(), &bytes)?;
    match failure {
        Some((_, f)) => Err(f.context("sweep aborted")),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:20:10").unwrap(), vec![0.0, 10.0, 20.0]);
        assert_eq!(parse_grid("-10:-10:1").unwrap(), vec![-10.0]);
        assert_eq!(parse_grid("0:1:0.25").unwrap().len(), 5);
        assert_eq!(parse_grid("0:0.95:0.1").unwrap().len(), 10);
        for bad in ["0:10", "a:b:c", "10:0:1", "0:10:0", "0:10:-1"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
