use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use crate::error::CliResult;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', value_name = "FILE", global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for parallel work (defaults to all cores).
    #[arg(long, value_name = "N", global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Interior-point stopping tolerance.
    #[arg(long, value_name = "TOL", global = true, default_value_t = 1e-8)]
    pub solver_tol: f64,
    /// Interior-point iteration cap.
    #[arg(long, value_name = "N", global = true, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_iters: u32,
    /// Cap on enumerated cliques and independent sets.
    #[arg(long, value_name = "N", global = true, default_value_t = chromabound::graph::DEFAULT_CLIQUE_CAP, value_parser = positive)]
    pub clique_cap: usize,
    /// Use every clique in xi_SDP instead of maximal cliques only.
    #[arg(long, global = true)]
    pub all_cliques: bool,
    /// Cap on the moment-matrix index words.
    #[arg(long, value_name = "N", global = true, default_value_t = chromabound::npa::DEFAULT_WORD_CAP, value_parser = positive)]
    pub word_cap: usize,
    /// Cap on moment variables handed to the interior-point solver.
    #[arg(long, value_name = "N", global = true, default_value_t = chromabound::npa::DEFAULT_MAX_SOLVER_VARS, value_parser = positive)]
    pub max_solver_vars: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

impl RunConfig {
    pub fn solver(&self) -> chromabound::solver::SolveOptions {
        chromabound::solver::SolveOptions {
            tol: self.solver_tol,
            max_iters: self.max_iters as usize,
        }
    }

    pub fn params(&self) -> chromabound::params::ParamOptions {
        chromabound::params::ParamOptions {
            solver: self.solver(),
            clique_cap: self.clique_cap,
        }
    }

    pub fn family(&self) -> chromabound::params::CliqueFamily {
        if self.all_cliques {
            chromabound::params::CliqueFamily::AllCliques
        } else {
            chromabound::params::CliqueFamily::MaximalOnly
        }
    }

    pub fn moment(&self) -> chromabound::npa::MomentOptions {
        chromabound::npa::MomentOptions {
            word_cap: self.word_cap,
            max_solver_vars: self.max_solver_vars,
            solver: self.solver(),
            ..Default::default()
        }
    }

    pub fn sink(&self) -> CliResult<Box<dyn Write>> {
        Ok(match &self.output {
            Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}

pub fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::other)?;
    writeln!(out)?;
    Ok(())
}
