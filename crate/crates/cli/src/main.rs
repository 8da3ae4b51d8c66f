//! `trading-prophet`: run simulations, exact ratio computations, hardness
//! sweeps and the property suite from a JSON experiment config.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Context;
use crate::config::{ExperimentConfig, Mode};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "trading-prophet", version, about = "Trading prophets over matroids")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (JSON). Optional for `certify`.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for CSV output. Without it only the summary is printed.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Master seed; overrides the config.
    #[arg(long, global = true, env = "TRADING_PROPHET_SEED")]
    seed: Option<u64>,

    /// Monte Carlo or property trials; overrides the config.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Suppress the summary table.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Monte Carlo traces and statistics for the online and offline policies.
    Simulate,
    /// Exact per-step values and competitive ratio of an i.i.d. instance.
    Exact,
    /// Exact ratio of a hardness family along a decreasing epsilon schedule.
    HardnessSweep,
    /// Exact and simulated values for a random-order instance.
    RandomOrder,
    /// Print the exact density of the matroid.
    Density,
    /// Run the property suite on a generated corpus.
    Certify,
}

impl Command {
    fn mode(self) -> Mode {
        match self {
            Command::Simulate => Mode::Simulate,
            Command::Exact => Mode::Exact,
            Command::HardnessSweep => Mode::HardnessSweep,
            Command::RandomOrder => Mode::RandomOrder,
            Command::Density => Mode::Density,
            Command::Certify => Mode::Certify,
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mode = cli.command.mode();
    let (config, config_stem) = match &cli.config {
        Some(path) => (ExperimentConfig::load(path)?, commands::stem(path)),
        None if mode == Mode::Certify => (ExperimentConfig::default(), "certify".into()),
        None => return Err(CliError::config(format!("--config is required for `{}`", mode.name()))),
    };
    config.check_mode(mode)?;
    let ctx = Context {
        seed: cli.seed.or(config.seed).unwrap_or(0),
        config,
        config_stem,
        out: cli.out,
        trials: cli.trials,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Simulate => commands::simulate(&ctx),
        Command::Exact => commands::exact(&ctx),
        Command::HardnessSweep => commands::hardness(&ctx),
        Command::RandomOrder => commands::random_order(&ctx),
        Command::Density => commands::density(&ctx),
        Command::Certify => commands::run_certify(&ctx),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
