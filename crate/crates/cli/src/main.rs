//! `smm` — batch driver for stable multi-matching experiments on 1-D
//! Poisson samples.
//!
//! Usage: `smm <command> --config <path> [--seed N] [--out <path>]`.
//! `--seed` and `--out` override the config keys of the same name.
//!
//! Exit codes: 0 success, 1 config error, 2 invariant violation,
//! 3 truncation or Monte Carlo abort.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use smm_core::{Error, Result};

#[derive(Parser)]
#[command(name = "smm", version, about = "Stable multi-matching experiments on 1-D point processes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample windows, run the matching engine, report component structure
    Simulate(Common),
    /// Cross-check the optimized engine against the two reference engines
    OracleCheck(Common),
    /// Monte Carlo estimate of one stage event against its closed form
    Event(Common),
    /// Multi-stage strong-connection chain trials
    Chain(Common),
    /// Cartesian (law, length, seed) sweep with resumable CSV output
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config file of `key = value` lines
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's `seed` key
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's `out` key
    #[arg(long)]
    out: Option<PathBuf>,
}

fn dispatch(cmd: &Cmd) -> Result<i32> {
    let (common, run): (&Common, fn(config::Config) -> Result<i32>) = match cmd {
        Cmd::Simulate(c) => (c, commands::simulate),
        Cmd::OracleCheck(c) => (c, commands::oracle_check),
        Cmd::Event(c) => (c, commands::event),
        Cmd::Chain(c) => (c, commands::chain),
        Cmd::Sweep(c) => (c, commands::sweep),
    };
    let text = std::fs::read_to_string(&common.config).map_err(|e| {
        Error::invalid(format!("cannot read config {}: {e}", common.config.display()))
    })?;
    let mut cfg = config::Config::parse(&text)?;
    if let Some(seed) = common.seed {
        cfg.set_override("seed", seed.to_string());
    }
    if let Some(out) = &common.out {
        cfg.set_override("out", out.display().to_string());
    }
    run(cfg)
}

fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Invariant(_) => 2,
        Error::Conditioning { .. } => 3,
        Error::Invalid(_) | Error::Parse { .. } | Error::Io(_) => 1,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let code = match dispatch(&cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            error_exit_code(&err)
        }
    };
    std::process::exit(code);
}
