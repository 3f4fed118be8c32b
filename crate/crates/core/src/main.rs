// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ebs::cli::{self, CliError, Mode, Overrides};

/// Spin-cavity beam splitter simulator.
#[derive(Parser)]
#[command(name = "ebs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the |t|, |r|, arg t, arg r spectra as CSV.
    Spectra(RunArgs),
    /// Write F^t and F^r along a sweep axis as CSV.
    Fidelity(RunArgs),
    /// Run a protocol and write its branch report.
    Protocol(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; overrides `output.path`. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for sampled trajectories; overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Use the lossless splitter; overrides `protocol.ideal`.
    #[arg(long)]
    ideal: bool,
}

fn run(mode: Mode, args: RunArgs) -> Result<(), CliError> {
    let overrides = Overrides {
        output: args.out,
        seed: args.seed,
        ideal: args.ideal,
    };
    let cfg = cli::load_config(args.config.as_deref(), mode, &overrides)?;
    cli::execute(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Spectra(a) => (Mode::Spectra, a),
        Command::Fidelity(a) => (Mode::FidelitySweep, a),
        Command::Protocol(a) => (Mode::Protocol, a),
    };
    match run(mode, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ebs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
