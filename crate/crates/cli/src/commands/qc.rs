use std::io::Write;

use chromabound::npa::{qc_level_bound, Verdict};
use chromabound::Error;
use clap::Args;
use serde_json::json;

use crate::error::{exit, CliError, CliResult};
use crate::output::{write_json, Format, RunConfig};
use crate::source::GraphSource;

/// The level-N feasible set contains every commuting-projection correlation
/// but may contain more, so only a positive bound is conclusive.
pub const CAVEAT: &str = "the level-N relaxation is a superset of the commuting-quantum correlations: \
a positive bound certifies chi_qc > c, a zero value does not show that a coloring exists";

#[derive(Args, Debug)]
pub struct QcArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Number of colors.
    #[arg(long, short = 'c', value_name = "C", value_parser = clap::value_parser!(u32).range(1..))]
    pub colors: u32,
    /// Hierarchy level (word length).
    #[arg(long, short = 'N', value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub level: u32,
}

pub fn run(args: &QcArgs, cfg: &RunConfig) -> CliResult<i32> {
    let g = args.source.load()?;
    let (c, level) = (args.colors as usize, args.level as usize);
    let r = match qc_level_bound(&g, c, level, &cfg.moment()) {
        Ok(r) => r,
        Err(e @ (Error::CapExceeded { .. } | Error::Solver { .. } | Error::Numerical(_))) => {
            return report_failure(args, cfg, &g, e)
        }
        Err(e) => return Err(e.into()),
    };
    let code = match r.verdict {
        Verdict::ConsistentWithColouring => exit::OK,
        Verdict::CertifiedNoColouring => exit::CERTIFIED,
    };
    let mut out = cfg.sink()?;
    match cfg.format {
        Format::Json => write_json(
            &mut out,
            &json!({
                "command": "qc-level",
                "graph": g.label(),
                "graph6": chromabound::graph::encode_graph6(&g),
                "n": g.n(),
                "c": c,
                "level": level,
                "min_value": r.min_value,
                "lower_bound": r.lower_bound,
                "verdict": r.verdict,
                "method": r.method,
                "status": r.status,
                "gap": r.gap,
                "variables": r.variables,
                "matrix_order": r.matrix_order,
                "reduced_order": r.reduced_order,
                "seconds": r.seconds,
                "caveat": CAVEAT,
            }),
        )?,
        Format::Csv => {
            writeln!(out, "graph,c,level,min_value,lower_bound,verdict,method,status,seconds")?;
            writeln!(
                out,
                "{},{c},{level},{},{},{:?},{:?},{:?},{:.6}",
                g.label(),
                r.min_value,
                r.lower_bound,
                r.verdict,
                r.method,
                r.status,
                r.seconds
            )?;
        }
        Format::Text => {
            writeln!(out, "{} c = {c} level = {level}", g.label())?;
            writeln!(out, "  min L_G,c     {:.9}", r.min_value)?;
            writeln!(out, "  lower bound   {:.9}", r.lower_bound)?;
            writeln!(out, "  verdict       {:?} ({:?})", r.verdict, r.method)?;
            writeln!(
                out,
                "  size          {} variables, moment matrix {} (reduced {})",
                r.variables, r.matrix_order, r.reduced_order
            )?;
            writeln!(out, "  time          {:.3}s", r.seconds)?;
            writeln!(out, "  note: {CAVEAT}")?;
        }
    }
    out.flush()?;
    Ok(code)
}

fn report_failure(args: &QcArgs, cfg: &RunConfig, g: &chromabound::Graph, e: Error) -> CliResult<i32> {
    let mut out = cfg.sink()?;
    match cfg.format {
        Format::Json => write_json(
            &mut out,
            &json!({
                "command": "qc-level",
                "graph": g.label(),
                "graph6": chromabound::graph::encode_graph6(g),
                "n": g.n(),
                "c": args.colors,
                "level": args.level,
                "error": e.to_string(),
                "caveat": CAVEAT,
            }),
        )?,
        _ => return Err(CliError::Core(e)),
    }
    out.flush()?;
    Ok(exit::SOLVER_FAILURE)
}
