//! `chromabound`: graph parameters, moment-hierarchy bounds, strategy
//! verification and SDP export from the command line.

mod commands;
mod error;
mod output;
mod source;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{exit, CliError, CliResult};
use crate::output::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "chromabound", version, about = "Lower bounds for the commuting quantum chromatic number")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of theta'+, xi_SDP, chi_f, chi and optional hierarchy bounds.
    Params(commands::params::ParamsArgs),
    /// One level of the moment hierarchy for a fixed number of colors.
    QcLevel(commands::qc::QcArgs),
    /// Check a finite-dimensional realization against a graph.
    Verify(commands::verify::VerifyArgs),
    /// Write an SDP in SDPA sparse format for an external solver.
    ExportSdpa(commands::export::ExportArgs),
    /// Compare xi_SDP with chi_f over a list of graphs.
    Sweep(commands::sweep::SweepArgs),
}

fn dispatch(cli: &Cli) -> CliResult<i32> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Params(a) => commands::params::run(a, cfg),
        Command::QcLevel(a) => commands::qc::run(a, cfg),
        Command::Verify(a) => commands::verify::run(a, cfg),
        Command::ExportSdpa(a) => commands::export::run(a, cfg),
        Command::Sweep(a) => commands::sweep::run(a, cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(t) = cli.config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.into()).build_global() {
            log::warn!("thread pool: {e}");
        }
    }
    let code = match dispatch(&cli) {
        Ok(code) => code,
        // a closed pipe (`| head`) is not an error of ours
        Err(CliError::Output(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
