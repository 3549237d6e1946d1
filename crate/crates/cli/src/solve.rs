use std::path::PathBuf;

use clap::Args;
use maxmin_core::document::{parse_instance, to_toml, SolutionDocument};
use maxmin_core::oracles::default_bracket;
use maxmin_core::{bisection_solve, fixed_point_solve, solve, SolverOptions};

use crate::failure::{Failure, Outcome};
use crate::output::{emit, read};

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance document (TOML).
    pub instance: PathBuf,
    /// Also run the bisection and fixed-point oracles and report the largest
    /// relative discrepancy in t*.
    #[arg(long)]
    pub oracle: bool,
    /// Relative tolerance for the spectral radii.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write the solution document here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: &SolveArgs) -> Outcome<()> {
    if !(args.tol > 0.0 && args.tol < 1.0) {
        return Err(Failure::usage(format!("--tol must be in (0, 1), got {}", args.tol)));
    }
    let text = read(&args.instance)?;
    let inst = parse_instance(&text).map_err(|e| Failure::from(e).context(&args.instance.display().to_string()))?;
    let opts = SolverOptions {
        rho_tol: args.tol,
        ..SolverOptions::default()
    };
    let sol = solve(&inst, &opts)?;
    let mut doc = SolutionDocument::new(&inst, &sol);

    if args.oracle {
        let sp = inst.scale()?;
        let (lo, hi) = default_bracket(&sp)?;
        let bis = bisection_solve(&sp, lo, hi, 1e-12)?;
        let fp = fixed_point_solve(&sp, 1e-13, 1_000_000)?;
        let rel = |t: f64| (t - sol.t_star).abs() / sol.t_star;
        let worst = rel(bis.t_star).max(rel(fp.t_star));
        eprintln!(
            "oracles: closed form {:.15e}, bisection {:.15e} ({} steps), fixed point {:.15e} ({} steps{})",
            sol.t_star,
            bis.t_star,
            bis.iterations,
            fp.t_star,
            fp.iterations,
            if fp.converged { "" } else { ", not converged" }
        );
        doc.oracle_max_rel_discrepancy = Some(worst);
    }

    let body = to_toml(&doc)?;
    emit(args.output.as_deref(), body.as_bytes())?;
    if doc.certified {
        Ok(())
    } else {
        Err(Failure::numerical(format!("solution not certified: {}", doc.warnings.join("; "))))
    }
}
