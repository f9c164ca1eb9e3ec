use std::io::Write;
use std::path::PathBuf;

use chromabound::graph::{connected_graphs_upto, encode_graph6, Graph};
use chromabound::sweep::{checkpoint_path, parse_graph6_list, run_sweep, SweepOptions, CACHE_ENV};
use clap::Args;

use crate::error::{exit, CliError, CliResult};
use crate::output::{write_json, Format, RunConfig};
use crate::source::read_input;

/// Exhaustive generation is only offered up to this order.
const MAX_GENERATED_VERTICES: usize = 7;

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// graph6 list, one graph per line. Without it, every connected graph
    /// on at most `--max-vertices` vertices is generated.
    #[arg(long, value_name = "FILE")]
    pub source: Option<PathBuf>,
    #[arg(long, value_name = "K")]
    pub max_vertices: Option<usize>,
    /// Skip disconnected graphs.
    #[arg(long)]
    pub connected: bool,
    /// Compute at most this many new graphs, then stop; rerun to resume.
    #[arg(long, value_name = "N")]
    pub limit: Option<usize>,
    /// Largest tolerated |xi_SDP - chi_f|, also the sandwich slack.
    #[arg(long, default_value_t = 1e-5)]
    pub tolerance: f64,
    /// Checkpoint file (default: a keyed file under $CHROMABOUND_CACHE).
    #[arg(long, value_name = "FILE", conflicts_with = "no_checkpoint")]
    pub checkpoint: Option<PathBuf>,
    #[arg(long)]
    pub no_checkpoint: bool,
}

fn load_graphs(args: &SweepArgs) -> CliResult<(Vec<Graph>, Vec<usize>)> {
    match (&args.source, args.max_vertices) {
        (Some(path), _) => {
            // unparsable lines are logged by the parser and counted in the report
            Ok(parse_graph6_list(&read_input(path)?))
        }
        (None, Some(k)) if k <= MAX_GENERATED_VERTICES => Ok((connected_graphs_upto(k)?, Vec::new())),
        (None, Some(k)) => Err(CliError::Usage(format!(
            "generating all graphs on {k} vertices is not supported (limit {MAX_GENERATED_VERTICES}); pass --source"
        ))),
        (None, None) => Err(CliError::Usage("sweep needs --source or --max-vertices".into())),
    }
}

pub fn run(args: &SweepArgs, cfg: &RunConfig) -> CliResult<i32> {
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(CliError::Usage("--tolerance must be positive".into()));
    }
    let (graphs, skipped) = load_graphs(args)?;
    let mut opts = SweepOptions {
        params: cfg.params(),
        family: cfg.family(),
        tolerance: args.tolerance,
        max_vertices: args.max_vertices,
        connected_only: args.connected,
        limit: args.limit,
        checkpoint: None,
    };
    if !args.no_checkpoint {
        opts.checkpoint = match (&args.checkpoint, std::env::var_os(CACHE_ENV)) {
            (Some(path), _) => Some(path.clone()),
            (None, Some(dir)) if !dir.is_empty() => {
                let mut keys: Vec<String> = graphs.iter().map(encode_graph6).collect();
                keys.sort();
                keys.dedup();
                Some(checkpoint_path(&PathBuf::from(dir), &keys, &opts))
            }
            _ => None,
        };
    }
    let (report, run) = run_sweep(&graphs, skipped, &opts)?;
    log::info!(
        "sweep: {} resumed, {} computed, {} corrupt checkpoint lines",
        run.resumed,
        run.computed,
        run.corrupt_checkpoint_lines
    );
    if let Some(path) = &run.checkpoint {
        log::info!("checkpoint {}", path.display());
    }
    if !run.complete {
        eprintln!(
            "sweep incomplete: {} of {} graphs done; rerun to resume",
            report.rows_complete, report.graphs
        );
    }

    let mut out = cfg.sink()?;
    match cfg.format {
        Format::Json => {
            let mut v = serde_json::json!({ "command": "sweep" });
            let body = serde_json::to_value(&report).map_err(chromabound::Error::from)?;
            v.as_object_mut().unwrap().extend(body.as_object().unwrap().clone());
            write_json(&mut out, &v)?;
        }
        Format::Csv => report.write_csv(&mut out)?,
        Format::Text => {
            writeln!(out, "graphs            {}", report.graphs)?;
            writeln!(out, "rows complete     {}", report.rows_complete)?;
            writeln!(out, "skipped lines     {}", report.skipped_lines.len())?;
            match &report.max_diff_graph {
                Some(g) => writeln!(out, "max |xi - chi_f|  {:.3e} at {g}", report.max_diff)?,
                None => writeln!(out, "max |xi - chi_f|  {:.3e}", report.max_diff)?,
            }
            writeln!(out, "tolerance         {:e}", report.tolerance)?;
            for g in &report.exceeding {
                writeln!(out, "  exceeds tolerance: {g}")?;
            }
            for s in &report.sandwich_violations {
                writeln!(out, "  sandwich violation: {s}")?;
            }
            for f in &report.failures {
                writeln!(out, "  failure: {f}")?;
            }
        }
    }
    out.flush()?;
    Ok(if !report.failures.is_empty() {
        exit::SOLVER_FAILURE
    } else if !report.exceeding.is_empty() || !report.sandwich_violations.is_empty() {
        exit::ORDERING_VIOLATION
    } else {
        exit::OK
    })
}
