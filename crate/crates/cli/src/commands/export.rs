use std::io::Write;

use chromabound::npa::build_moment_sdp;
use chromabound::params::{theta_plus_bar_problem, xi_sdp_problem};
use chromabound::solver::export_sdpa_sparse;
use clap::{Args, ValueEnum};
use serde_json::json;

use crate::error::{exit, CliError, CliResult};
use crate::output::{write_json, Format, RunConfig};
use crate::source::GraphSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    XiSdp,
    ThetaPlus,
    QcLevel,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_enum)]
    pub target: Target,
    /// Colors for `--target qc-level`.
    #[arg(long, short = 'c', value_name = "C", value_parser = clap::value_parser!(u32).range(1..))]
    pub colors: Option<u32>,
    /// Level for `--target qc-level`.
    #[arg(long, short = 'N', value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub level: Option<u32>,
    /// Also solve with the embedded solver and report its value.
    #[arg(long)]
    pub solve: bool,
}

/// The SDPA primal optimum plus `offset` equals the target value.
struct Exported {
    text: String,
    offset: f64,
    blocks: usize,
    constraints: usize,
    embedded: Option<f64>,
}

fn build(args: &ExportArgs, cfg: &RunConfig, g: &chromabound::Graph) -> CliResult<Exported> {
    let (lmi, offset) = match args.target {
        Target::XiSdp => (xi_sdp_problem(g, cfg.family(), cfg.clique_cap)?, 0.0),
        Target::ThetaPlus => (theta_plus_bar_problem(g)?, 0.0),
        Target::QcLevel => {
            let (Some(c), Some(n)) = (args.colors, args.level) else {
                return Err(CliError::Usage("--target qc-level needs --colors and --level".into()));
            };
            let m = build_moment_sdp(g, c as usize, n as usize, &cfg.moment())?;
            (m.lmi, m.objective_constant)
        }
    };
    let sdp = lmi.to_sdp()?;
    let embedded = if args.solve {
        let sol = lmi.solve(&cfg.solver())?;
        if sol.status != chromabound::solver::SolveStatus::Optimal {
            return Err(chromabound::Error::Solver { status: sol.status }.into());
        }
        Some(offset + sol.value)
    } else {
        None
    };
    let mut text = String::new();
    if offset != 0.0 {
        text.push_str(&format!("* objective offset {offset:.16e}\n"));
    }
    text.push_str(&export_sdpa_sparse(&sdp));
    Ok(Exported {
        text,
        offset,
        blocks: sdp.blocks.len(),
        constraints: sdp.constraints.len(),
        embedded,
    })
}

pub fn run(args: &ExportArgs, cfg: &RunConfig) -> CliResult<i32> {
    if args.target != Target::QcLevel && (args.colors.is_some() || args.level.is_some()) {
        return Err(CliError::Usage("--colors and --level only apply to --target qc-level".into()));
    }
    let g = args.source.load()?;
    let e = build(args, cfg, &g)?;
    let target = args.target.to_possible_value().expect("visible").get_name().to_string();
    if cfg.format != Format::Json {
        let mut out = cfg.sink()?;
        out.write_all(e.text.as_bytes())?;
        out.flush()?;
        if let (Some(v), Some(_)) = (e.embedded, &cfg.output) {
            println!("{target} {}: embedded solver value {v:.9}", g.label());
        }
        return Ok(exit::OK);
    }
    let mut report = json!({
        "command": "export-sdpa",
        "graph": g.label(),
        "graph6": chromabound::graph::encode_graph6(&g),
        "n": g.n(),
        "target": target,
        "blocks": e.blocks,
        "constraints": e.constraints,
        "objective_offset": e.offset,
        "embedded_value": e.embedded,
    });
    let obj = report.as_object_mut().expect("object");
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, &e.text)?;
            obj.insert("path".into(), json!(path.display().to_string()));
        }
        None => {
            obj.insert("sdpa".into(), json!(e.text));
        }
    }
    let mut out = std::io::stdout().lock();
    write_json(&mut out, &report)?;
    Ok(exit::OK)
}
