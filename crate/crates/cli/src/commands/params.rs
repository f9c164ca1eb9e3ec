use std::io::Write;

use chromabound::params::{parameter_table, TableOptions};
use clap::Args;
use serde_json::json;

use crate::error::{exit, CliResult};
use crate::output::{write_json, Format, RunConfig};
use crate::source::GraphSource;

#[derive(Args, Debug)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Also run this level of the moment hierarchy.
    #[arg(long, short = 'N', value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub level: Option<u32>,
    /// Colors tried at `--level` (default 2..=chi).
    #[arg(long, short = 'c', value_name = "C", value_delimiter = ',', requires = "level")]
    pub colors: Vec<usize>,
}

pub fn run(args: &ParamsArgs, cfg: &RunConfig) -> CliResult<i32> {
    let g = args.source.load()?;
    let opts = TableOptions {
        params: cfg.params(),
        clique_family: cfg.family(),
        qc_level: args.level.map(|n| n as usize),
        qc_colors: args.colors.clone(),
        moment: cfg.moment(),
        ..Default::default()
    };
    let report = parameter_table(&g, &opts);
    let mut out = cfg.sink()?;
    match cfg.format {
        Format::Json => {
            let mut v = json!({ "command": "params" });
            v.as_object_mut().unwrap().extend(report.to_json().as_object().unwrap().clone());
            write_json(&mut out, &v)?;
        }
        Format::Csv => report.write_csv(&mut out, true)?,
        Format::Text => {
            writeln!(out, "{} (n = {}, graph6 {})", report.graph, report.n, report.graph6)?;
            for (name, e) in &report.params {
                let value = match (&e.exact, e.value) {
                    (Some(x), Some(v)) if x.contains('/') => format!("{v:.9} = {x}"),
                    (_, Some(v)) => format!("{v:.9}"),
                    (_, None) => "-".into(),
                };
                let extra = match (&e.verdict, &e.error) {
                    (_, Some(err)) => format!("  error: {err}"),
                    (Some(v), _) => format!("  {v:?}"),
                    _ => String::new(),
                };
                writeln!(out, "  {name:<18} {value:<24} {:<10} {:>8.3}s{extra}", e.status, e.seconds)?;
            }
            if args.level.is_some() {
                writeln!(out, "  level bounds certify chi_qc > c only when positive; a zero value proves nothing")?;
            }
            for v in &report.violations {
                writeln!(out, "  ordering violation: {v}")?;
            }
        }
    }
    out.flush()?;
    Ok(if report.has_errors() {
        exit::SOLVER_FAILURE
    } else if !report.violations.is_empty() {
        exit::ORDERING_VIOLATION
    } else {
        exit::OK
    })
}
