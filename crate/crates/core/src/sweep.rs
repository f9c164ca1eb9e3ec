//! Batch comparison of `theta'+`, `xi_SDP` and `chi_f` over a graph list,
//! with a JSONL checkpoint so an interrupted run can resume.
//!
//! The report carries no timings and lists rows sorted by graph6, so a
//! resumed run serializes byte-for-byte like an uninterrupted one.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{encode_graph6, parse_graph6, Graph};
use crate::params::{fractional_chromatic, theta_plus_bar, xi_sdp, CliqueFamily, ParamOptions};

/// Environment variable naming the checkpoint directory.
pub const CACHE_ENV: &str = "CHROMABOUND_CACHE";

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub params: ParamOptions,
    pub family: CliqueFamily,
    /// Largest tolerated `|xi_SDP - chi_f|`, also the sandwich slack.
    pub tolerance: f64,
    pub max_vertices: Option<usize>,
    pub connected_only: bool,
    /// Compute at most this many new graphs, then stop (resume later).
    pub limit: Option<usize>,
    pub checkpoint: Option<PathBuf>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            params: ParamOptions::default(),
            family: CliqueFamily::MaximalOnly,
            tolerance: 1e-5,
            max_vertices: None,
            connected_only: false,
            limit: None,
            checkpoint: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub graph6: String,
    pub n: usize,
    pub edges: usize,
    pub theta_plus_bar: Option<f64>,
    pub xi_sdp: Option<f64>,
    pub chi_f: Option<f64>,
    /// `|xi_SDP - chi_f|`.
    pub diff: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub tolerance: f64,
    /// Graphs selected from the input after filtering and deduplication.
    pub graphs: usize,
    pub rows_complete: usize,
    /// Input lines that failed to parse, with their 1-based line numbers.
    pub skipped_lines: Vec<usize>,
    pub max_diff: f64,
    pub max_diff_graph: Option<String>,
    /// Graphs with `|xi_SDP - chi_f|` above the tolerance.
    pub exceeding: Vec<String>,
    /// Graphs where `theta'+ <= xi_SDP <= chi_f` fails beyond the tolerance.
    pub sandwich_violations: Vec<String>,
    pub failures: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// Bookkeeping about one invocation; kept out of the report so that the
/// report does not depend on how the work was split.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepRun {
    pub resumed: usize,
    pub computed: usize,
    pub corrupt_checkpoint_lines: usize,
    pub complete: bool,
    pub checkpoint: Option<PathBuf>,
}

impl SweepReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Columns: graph6, n, edges, theta_plus_bar, xi_sdp, chi_f, diff, error.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["graph6", "n", "edges", "theta_plus_bar", "xi_sdp", "chi_f", "diff", "error"])
            .map_err(csv_err)?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.graph6.clone(),
                r.n.to_string(),
                r.edges.to_string(),
                opt(r.theta_plus_bar),
                opt(r.xi_sdp),
                opt(r.chi_f),
                opt(r.diff),
                r.error.clone().unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn within_tolerance(&self) -> bool {
        self.exceeding.is_empty() && self.sandwich_violations.is_empty() && self.failures.is_empty()
    }
}

fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e))
}

/// Parses one graph6 string per line; blank lines and `>>graph6<<` headers
/// are ignored, unparsable lines are returned by line number.
pub fn parse_graph6_list(text: &str) -> (Vec<Graph>, Vec<usize>) {
    let mut graphs = Vec::new();
    let mut skipped = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        match parse_graph6(t) {
            Ok(g) => graphs.push(g),
            Err(e) => {
                log::warn!("line {}: skipping unparsable graph6: {e}", k + 1);
                skipped.push(k + 1);
            }
        }
    }
    (graphs, skipped)
}

/// Stable 64-bit FNV-1a digest identifying a sweep's inputs.
fn fnv1a(parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in parts {
        for b in p.bytes().chain([0u8]) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Checkpoint file inside `dir` keyed by the selected graphs and settings.
pub fn checkpoint_path(dir: &Path, graph6s: &[String], opts: &SweepOptions) -> PathBuf {
    let settings = format!("{:?}|{}|{:e}|{}", opts.family, opts.params.clique_cap, opts.params.solver.tol, opts.params.solver.max_iters);
    let mut parts: Vec<&str> = graph6s.iter().map(String::as_str).collect();
    parts.push(&settings);
    dir.join(format!("sweep-{:016x}.jsonl", fnv1a(&parts)))
}

fn compute_row(g: &Graph, graph6: String, opts: &SweepOptions) -> SweepRow {
    let theta = theta_plus_bar(g, &opts.params);
    let xi = xi_sdp(g, opts.family, &opts.params);
    let chi_f = fractional_chromatic(g, &opts.params);
    let errors: Vec<String> = [("theta_plus_bar", theta.as_ref().err()), ("xi_sdp", xi.as_ref().err()), ("chi_f", chi_f.as_ref().err())]
        .into_iter()
        .filter_map(|(name, e)| e.map(|e| format!("{name}: {e}")))
        .collect();
    let xi = xi.ok().map(|p| p.value);
    let chi_f = chi_f.ok().map(|p| p.value);
    SweepRow {
        graph6,
        n: g.n(),
        edges: g.edge_count(),
        theta_plus_bar: theta.ok().map(|p| p.value),
        xi_sdp: xi,
        chi_f,
        diff: xi.zip(chi_f).map(|(a, b)| (a - b).abs()),
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    }
}

fn read_checkpoint(path: &Path, wanted: &HashSet<&str>) -> Result<(BTreeMap<String, SweepRow>, usize)> {
    let mut rows = BTreeMap::new();
    let mut corrupt = 0;
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((rows, 0)),
        Err(e) => return Err(e.into()),
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<SweepRow>(&line) {
            Ok(row) if wanted.contains(row.graph6.as_str()) => {
                rows.insert(row.graph6.clone(), row);
            }
            Ok(_) => {}
            Err(_) => corrupt += 1,
        }
    }
    if corrupt > 0 {
        log::warn!("{}: ignored {corrupt} corrupt checkpoint lines", path.display());
    }
    Ok((rows, corrupt))
}

/// Runs the sweep over `graphs` (already parsed; `skipped_lines` is passed
/// through to the report). Graphs are deduplicated by graph6 string.
pub fn run_sweep(graphs: &[Graph], skipped_lines: Vec<usize>, opts: &SweepOptions) -> Result<(SweepReport, SweepRun)> {
    let mut selected: BTreeMap<String, &Graph> = BTreeMap::new();
    for g in graphs {
        if opts.max_vertices.is_some_and(|k| g.n() > k) || (opts.connected_only && !g.is_connected()) || g.n() == 0 {
            continue;
        }
        selected.entry(encode_graph6(g)).or_insert(g);
    }
    let keys: Vec<String> = selected.keys().cloned().collect();
    let wanted: HashSet<&str> = keys.iter().map(String::as_str).collect();

    let mut run = SweepRun {
        checkpoint: opts.checkpoint.clone(),
        ..Default::default()
    };
    let mut done = BTreeMap::new();
    if let Some(path) = &opts.checkpoint {
        let (rows, corrupt) = read_checkpoint(path, &wanted)?;
        run.resumed = rows.len();
        run.corrupt_checkpoint_lines = corrupt;
        done = rows;
    }

    let mut todo: Vec<(&String, &Graph)> = selected.iter().filter(|(k, _)| !done.contains_key(*k)).map(|(k, g)| (k, *g)).collect();
    if let Some(limit) = opts.limit {
        todo.truncate(limit);
    }
    let sink = match &opts.checkpoint {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            let mut f = OpenOptions::new().create(true).read(true).append(true).open(path)?;
            // a torn last line must not swallow the next record
            let len = f.metadata()?.len();
            if len > 0 {
                use std::io::{Read, Seek, SeekFrom};
                let mut last = [0u8];
                f.seek(SeekFrom::Start(len - 1))?;
                f.read_exact(&mut last)?;
                if last[0] != b'\n' {
                    writeln!(f)?;
                }
            }
            Some(Mutex::new(f))
        }
        None => None,
    };
    let fresh: Vec<SweepRow> = todo
        .par_iter()
        .map(|(key, g)| -> Result<SweepRow> {
            let row = compute_row(g, (*key).clone(), opts);
            if let Some(sink) = &sink {
                let line = serde_json::to_string(&row)?;
                let mut f = sink.lock().expect("checkpoint lock");
                writeln!(f, "{line}")?;
                f.flush()?;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    run.computed = fresh.len();
    for row in fresh {
        done.insert(row.graph6.clone(), row);
    }
    run.complete = done.len() == keys.len();
    Ok((assemble(done, keys.len(), skipped_lines, opts.tolerance), run))
}

fn assemble(rows: BTreeMap<String, SweepRow>, graphs: usize, skipped_lines: Vec<usize>, tol: f64) -> SweepReport {
    let mut report = SweepReport {
        tolerance: tol,
        graphs,
        rows_complete: rows.len(),
        skipped_lines,
        max_diff: 0.0,
        max_diff_graph: None,
        exceeding: Vec::new(),
        sandwich_violations: Vec::new(),
        failures: Vec::new(),
        rows: rows.into_values().collect(),
    };
    for r in &report.rows {
        if r.error.is_some() {
            report.failures.push(r.graph6.clone());
        }
        if let Some(d) = r.diff {
            if d > report.max_diff {
                report.max_diff = d;
                report.max_diff_graph = Some(r.graph6.clone());
            }
            if d > tol {
                report.exceeding.push(r.graph6.clone());
            }
        }
        let bad = matches!((r.theta_plus_bar, r.xi_sdp), (Some(t), Some(x)) if t > x + tol)
            || matches!((r.xi_sdp, r.chi_f), (Some(x), Some(f)) if x > f + tol);
        if bad {
            report.sandwich_violations.push(r.graph6.clone());
        }
    }
    report
}
