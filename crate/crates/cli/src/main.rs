//! `maxmin`: closed-form max-min power control from the command line.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid input, 3 numerical failure.

mod extra;
mod failure;
mod output;
mod simulate;
mod solve;
mod sweep;

use std::process::ExitCode;

use cellfree_sim::Profile;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use failure::{Code, Failure, Outcome};

#[derive(Debug, Parser)]
#[command(name = "maxmin", version, about = "Globally optimal max-min SINR power control")]
struct Cli {
    /// Scenario defaults: desk (L=4, M=2, K=8) or paper (L=16, M=8, K=64).
    #[arg(long, global = true, default_value = "desk")]
    profile: Profile,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance document and print the solution document.
    Solve(solve::SolveArgs),
    /// Sweep the power budget; CSV on stdout.
    Sweep(sweep::SweepArgs),
    /// Optimal versus full-power uplink over random setups; CSV on stdout.
    Simulate(simulate::SimulateArgs),
    /// Export the effective channel of one setup as an instance document.
    Channel(extra::ChannelArgs),
    /// Write a random valid instance document.
    Generate(extra::GenerateArgs),
}

fn dispatch(cli: &Cli) -> Outcome<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Sweep(a) => sweep::run(a, cli.profile),
        Command::Simulate(a) => simulate::run(a, cli.profile),
        Command::Channel(a) => extra::channel(a, cli.profile),
        Command::Generate(a) => extra::generate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Code::Usage as u8),
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
