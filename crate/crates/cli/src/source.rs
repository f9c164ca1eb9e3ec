//! Graph sources: `--gen name:args`, `--graph6 file`, `--dimacs file`.

use std::path::{Path, PathBuf};

use chromabound::graph::{parse_dimacs_with_warnings, parse_graph6, Graph};
use clap::Args;

use crate::error::{CliError, CliResult};

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Built-in family: cycle:K, complete:N, path:N, empty:N, kneser:N,K,
    /// petersen; `A*B` is the disjunctive and `A[B]` the lexicographic product.
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<String>,
    /// File whose first graph6 line is used.
    #[arg(long, value_name = "FILE")]
    pub graph6: Option<PathBuf>,
    /// DIMACS edge-format file.
    #[arg(long, value_name = "FILE")]
    pub dimacs: Option<PathBuf>,
}

pub fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::MissingInput {
        path: path.to_path_buf(),
        source,
    })
}

impl GraphSource {
    pub fn load(&self) -> CliResult<Graph> {
        if let Some(spec) = &self.generator {
            return generate(spec);
        }
        if let Some(path) = &self.graph6 {
            let text = read_input(path)?;
            let Some(line) = text.lines().map(str::trim).find(|l| !l.is_empty()) else {
                return Err(CliError::Usage(format!("{} contains no graph6 line", path.display())));
            };
            return Ok(parse_graph6(line)?);
        }
        if let Some(path) = &self.dimacs {
            let (g, warnings) = parse_dimacs_with_warnings(&read_input(path)?)?;
            for w in warnings {
                log::warn!("{}: {w}", path.display());
            }
            return Ok(g);
        }
        Err(CliError::Usage("no graph source given".into()))
    }
}

fn numbers(args: &str, want: usize, spec: &str) -> CliResult<Vec<usize>> {
    let parsed: Result<Vec<usize>, _> = args.split(',').map(|s| s.trim().parse::<usize>()).collect();
    match parsed {
        Ok(v) if v.len() == want => Ok(v),
        _ => Err(CliError::Usage(format!("`{spec}` needs {want} comma-separated integers"))),
    }
}

/// Parses a generator spec such as `cycle:5`, `cycle:5*complete:3` or
/// `cycle:5[complete:3]`.
pub fn generate(spec: &str) -> CliResult<Graph> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once('*') {
        return Ok(generate(a)?.disjunctive_product(&generate(b)?));
    }
    if let Some(inner) = spec.strip_suffix(']') {
        if let Some((a, b)) = inner.split_once('[') {
            return Ok(generate(a)?.lexicographic_product(&generate(b)?));
        }
    }
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let g = match name {
        "cycle" => Graph::cycle(numbers(args, 1, spec)?[0])?,
        "complete" => Graph::complete(numbers(args, 1, spec)?[0])?,
        "path" => Graph::path(numbers(args, 1, spec)?[0])?,
        "empty" => {
            let n = numbers(args, 1, spec)?[0];
            Graph::empty(n).with_name(format!("E{n}"))
        }
        "kneser" => {
            let v = numbers(args, 2, spec)?;
            Graph::kneser(v[0], v[1])?
        }
        "petersen" => Graph::petersen(),
        _ => return Err(CliError::Usage(format!("unknown generator `{spec}`"))),
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(generate("cycle:5").unwrap(), Graph::cycle(5).unwrap());
        assert_eq!(generate("kneser:5,2").unwrap(), Graph::petersen());
        assert_eq!(generate("cycle:5*complete:3").unwrap().n(), 15);
        let lex = generate("cycle:5[complete:3]").unwrap();
        assert_eq!(lex, Graph::cycle(5).unwrap().lexicographic_product(&Graph::complete(3).unwrap()));
        assert_eq!(generate("empty:3").unwrap().edge_count(), 0);
        for bad in ["wheel:5", "cycle", "cycle:x", "kneser:5"] {
            assert!(matches!(generate(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }
}
