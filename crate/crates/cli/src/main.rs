//! `dodoor`: runs scheduler simulations from a TOML experiment config.
//!
//! Exit codes: 0 success, 1 validation, 2 runtime, 3 IO.

mod commands;
mod compare;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_compare, cmd_gen_trace, cmd_run, cmd_validate, GenParams, Overrides};
use crate::config::Generator;

#[derive(Parser)]
#[command(name = "dodoor", version, about = "Scheduler simulation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every (policy, qps, seed) cell and write per-cell logs.
    Run(ExperimentArgs),
    /// Simulate all policies on shared traces and write relative deltas.
    Compare(ExperimentArgs),
    /// Generate a workload trace CSV.
    GenTrace(GenTraceArgs),
    /// Check a config or a trace without simulating.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory, replacing `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Single seed, replacing `seeds`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Args)]
struct GenTraceArgs {
    #[arg(long, value_enum)]
    generator: Generator,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Poisson arrival rate; without it every task arrives at zero.
    #[arg(long)]
    qps: Option<f64>,
    /// Trace file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Topology a standalone trace is checked against.
    #[arg(long, default_value = "table2-100")]
    topology: String,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(
            &a.config,
            &Overrides {
                out: a.out,
                seed: a.seed,
                parallel: a.parallel,
            },
        ),
        Command::Compare(a) => cmd_compare(
            &a.config,
            &Overrides {
                out: a.out,
                seed: a.seed,
                parallel: a.parallel,
            },
        ),
        Command::GenTrace(a) => cmd_gen_trace(&GenParams {
            generator: a.generator,
            count: a.count,
            seed: a.seed,
            qps: a.qps,
            out: a.out,
        }),
        Command::Validate(a) => {
            cmd_validate(a.config.as_deref(), a.trace.as_deref(), &a.topology, a.seed)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
