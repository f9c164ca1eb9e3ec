use std::io::Write;
use std::path::PathBuf;

use chromabound::strategy::{
    check_synchronous, check_tracial_and_reversal, check_zero_products, correlation_of, minimize, verify_realization,
    Realization, RealizationJson, DEFAULT_TOL, RANK_TOL,
};
use clap::Args;
use serde_json::json;

use crate::error::{exit, CliError, CliResult};
use crate::output::{write_json, Format, RunConfig};
use crate::source::{read_input, GraphSource};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Realization JSON: `{dim, eta, E, F}` with complex entries as `[re, im]`.
    #[arg(value_name = "FILE")]
    pub realization: PathBuf,
    #[command(flatten)]
    pub graph: GraphSource,
    /// Expected number of outcomes.
    #[arg(long, short = 'c', value_name = "C")]
    pub colors: Option<usize>,
    /// Operator-norm tolerance of every check.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Restrict to the cyclic subspace of the state before checking.
    #[arg(long)]
    pub minimize: bool,
    /// Treat the realization as minimal, so nonzero edge products fail.
    #[arg(long)]
    pub minimal: bool,
    /// Seed of the sampled tracial and reversal checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 4)]
    pub max_word_len: usize,
}

pub fn run(args: &VerifyArgs, cfg: &RunConfig) -> CliResult<i32> {
    let text = read_input(&args.realization)?;
    let parsed: RealizationJson = serde_json::from_str(&text).map_err(chromabound::Error::from)?;
    let mut r = Realization::from_json(&parsed).map_err(|e| CliError::Usage(format!("{}: {e}", args.realization.display())))?;
    let g = args.graph.load()?;
    if r.n() != g.n() {
        return Err(CliError::Usage(format!("realization has {} inputs, graph has {} vertices", r.n(), g.n())));
    }
    if let Some(c) = args.colors {
        if c != r.c() {
            return Err(CliError::Usage(format!("realization has {} outcomes, --colors is {c}", r.c())));
        }
    }
    let original_dim = r.dim;
    let operators = verify_realization(&r, args.tol);
    // compressing a realization that is not a PVM family is meaningless
    if args.minimize && operators.ok {
        r = minimize(&r, RANK_TOL)?;
    }
    let p = correlation_of(&r)?;
    let sync = check_synchronous(&p, args.tol);
    let functional = p.graph_functional(&g)?;
    let tracial = check_tracial_and_reversal(&r, args.max_word_len, args.samples, args.seed, args.tol)?;
    let zero = check_zero_products(&r, &g, args.tol, args.minimal || args.minimize)?;
    let swap = p.swap_asymmetry();

    let mut failed = Vec::new();
    if !operators.ok {
        for (name, res) in [
            ("idempotence", &operators.idempotence),
            ("self_adjointness", &operators.self_adjointness),
            ("completeness", &operators.completeness),
            ("commutation", &operators.commutation),
        ] {
            if !res.within(args.tol) {
                failed.push(format!("{name} at {}", res.at.as_deref().unwrap_or("?")));
            }
        }
        if operators.state_norm > args.tol {
            failed.push("state_norm".to_string());
        }
    }
    if !sync.ok {
        failed.push("synchronous".into());
    }
    if functional.abs() > args.tol {
        failed.push("graph_functional".into());
    }
    if tracial.checked && !tracial.ok {
        failed.push("tracial_reversal".into());
    }
    if zero.failed {
        failed.push("zero_products".into());
    }
    let ok = failed.is_empty();

    let mut out = cfg.sink()?;
    match cfg.format {
        Format::Json => write_json(
            &mut out,
            &json!({
                "command": "verify",
                "file": args.realization.display().to_string(),
                "graph": g.label(),
                "n": g.n(),
                "c": r.c(),
                "dim": original_dim,
                "minimized_dim": if args.minimize && operators.ok { Some(r.dim) } else { None },
                "tol": args.tol,
                "ok": ok,
                "failed_checks": failed,
                "operators": operators,
                "synchronous": sync,
                "graph_functional": functional,
                "swap_asymmetry": swap,
                "tracial": tracial,
                "zero_products": zero,
            }),
        )?,
        Format::Csv => {
            writeln!(out, "check,ok,value,at")?;
            let row = |out: &mut dyn Write, name: &str, value: f64, at: Option<&str>| {
                writeln!(out, "{name},{},{value:e},{}", value <= args.tol, at.unwrap_or(""))
            };
            row(&mut out, "idempotence", operators.idempotence.value, operators.idempotence.at.as_deref())?;
            row(&mut out, "self_adjointness", operators.self_adjointness.value, operators.self_adjointness.at.as_deref())?;
            row(&mut out, "completeness", operators.completeness.value, operators.completeness.at.as_deref())?;
            row(&mut out, "commutation", operators.commutation.value, operators.commutation.at.as_deref())?;
            row(&mut out, "state_norm", operators.state_norm, None)?;
            row(&mut out, "synchronous", sync.residual.value, sync.residual.at.as_deref())?;
            row(&mut out, "graph_functional", functional.abs(), None)?;
            row(&mut out, "swap_symmetry", swap.value, swap.at.as_deref())?;
            if tracial.checked {
                row(&mut out, "tracial", tracial.trace.value, tracial.trace.at.as_deref())?;
                row(&mut out, "reversal", tracial.reversal.value, tracial.reversal.at.as_deref())?;
            }
            row(&mut out, "zero_products", zero.worst, None)?;
        }
        Format::Text => {
            let mark = |good: bool| if good { "ok  " } else { "FAIL" };
            writeln!(out, "{} against {} (dim {original_dim}, {} outcomes)", args.realization.display(), g.label(), r.c())?;
            if args.minimize && operators.ok {
                writeln!(out, "  minimized to dim {}", r.dim)?;
            }
            for (name, res) in [
                ("idempotence", &operators.idempotence),
                ("self-adjointness", &operators.self_adjointness),
                ("completeness", &operators.completeness),
                ("commutation", &operators.commutation),
            ] {
                let at = res.at.as_deref().map(|a| format!(" at {a}")).unwrap_or_default();
                writeln!(out, "  [{}] {name:<18} {:.3e}{at}", mark(res.within(args.tol)), res.value)?;
            }
            writeln!(out, "  [{}] {:<18} {:.3e}", mark(operators.state_norm <= args.tol), "state norm", operators.state_norm)?;
            writeln!(out, "  [{}] {:<18} {:.3e}", mark(sync.ok), "synchronous", sync.residual.value)?;
            writeln!(out, "  [{}] {:<18} {:.3e}", mark(functional.abs() <= args.tol), "L_G,c", functional)?;
            if tracial.checked {
                writeln!(
                    out,
                    "  [{}] {:<18} trace {:.3e}, swap {:.3e}, reversal {:.3e} ({} samples, seed {})",
                    mark(tracial.ok),
                    "tracial",
                    tracial.trace.value,
                    tracial.swap.value,
                    tracial.reversal.value,
                    tracial.samples,
                    args.seed
                )?;
            } else {
                writeln!(out, "  [skip] tracial            correlation is not synchronous")?;
            }
            writeln!(out, "  [{}] {:<18} worst {:.3e}; {}", mark(!zero.failed), "zero products", zero.worst, zero.note)?;
            writeln!(out, "  {}", if ok { "all checks passed" } else { "some checks failed" })?;
        }
    }
    out.flush()?;
    Ok(if ok { exit::OK } else { exit::CERTIFIED })
}
