//! Side-by-side table of every computable parameter for one graph.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{fractional_chromatic, theta_plus_bar, xi_sdp, CliqueFamily, ParamOptions, ParamValue};
use crate::error::Result;
use crate::graph::{chromatic_number, clique_number, encode_graph6, independence_number, Graph, EXACT_VERTEX_LIMIT};
use crate::npa::{qc_level_bound, MomentOptions, Verdict};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableOptions {
    pub params: ParamOptions,
    pub clique_family: CliqueFamily,
    /// Level of the moment hierarchy to run, if any. Entries are named
    /// `level{N}_bound_c{c}`: they bound the commuting quantum chromatic
    /// number only through their verdicts, they are not that number.
    pub qc_level: Option<usize>,
    /// Colors tried at `qc_level`; defaults to `2..=chi` when empty.
    pub qc_colors: Vec<usize>,
    pub moment: MomentOptions,
    pub ordering_tol: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            params: ParamOptions::default(),
            clique_family: CliqueFamily::MaximalOnly,
            qc_level: None,
            qc_colors: Vec::new(),
            moment: MomentOptions::default(),
            ordering_tol: 1e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamEntry {
    pub value: Option<f64>,
    pub gap: Option<f64>,
    /// Solver status, `Exact` for combinatorial values, or `Error`.
    pub status: String,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ParamEntry {
    fn from_value(v: &ParamValue) -> Self {
        ParamEntry {
            value: Some(v.value),
            gap: Some(v.gap),
            status: format!("{:?}", v.status),
            seconds: v.seconds,
            exact: v.rational.map(|r| r.to_string()),
            lower_bound: None,
            verdict: None,
            error: None,
        }
    }

    fn exact(value: usize, seconds: f64) -> Self {
        ParamEntry {
            value: Some(value as f64),
            gap: Some(0.0),
            status: "Exact".into(),
            seconds,
            exact: Some(value.to_string()),
            lower_bound: None,
            verdict: None,
            error: None,
        }
    }

    fn failed(err: &crate::Error, seconds: f64) -> Self {
        ParamEntry {
            value: None,
            gap: None,
            status: "Error".into(),
            seconds,
            exact: None,
            lower_bound: None,
            verdict: None,
            error: Some(err.to_string()),
        }
    }

    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterReport {
    pub graph: String,
    pub graph6: String,
    pub n: usize,
    pub params: BTreeMap<String, ParamEntry>,
    pub violations: Vec<String>,
}

fn record(params: &mut BTreeMap<String, ParamEntry>, name: &str, r: Result<ParamValue>, start: Instant) {
    let entry = match r {
        Ok(v) => ParamEntry::from_value(&v),
        Err(e) => ParamEntry::failed(&e, start.elapsed().as_secs_f64()),
    };
    params.insert(name.to_string(), entry);
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Instant) {
    let start = Instant::now();
    (f(), start)
}

/// Computes every parameter; individual failures are recorded per entry.
pub fn parameter_table(g: &Graph, opts: &TableOptions) -> ParameterReport {
    let mut params = BTreeMap::new();
    let ((theta, xi), xf) = rayon::join(
        || {
            rayon::join(
                || timed(|| theta_plus_bar(g, &opts.params)),
                || timed(|| xi_sdp(g, opts.clique_family, &opts.params)),
            )
        },
        || timed(|| fractional_chromatic(g, &opts.params)),
    );
    if let Ok(t) = &theta.0 {
        // values within tolerance of an integer count as that integer
        let ceil = if (t.value - t.value.round()).abs() < opts.ordering_tol {
            t.value.round()
        } else {
            t.value.ceil()
        };
        let mut entry = ParamEntry::exact(ceil as usize, t.seconds);
        entry.status = "Derived".into();
        params.insert("chi_vect".to_string(), entry);
    }
    record(&mut params, "theta_plus_bar", theta.0, theta.1);
    record(&mut params, "xi_sdp", xi.0, xi.1);
    record(&mut params, "chi_f", xf.0, xf.1);

    let mut chi = None;
    if g.n() <= EXACT_VERTEX_LIMIT {
        for (name, f) in [
            ("chi", chromatic_number as fn(&Graph) -> Result<usize>),
            ("omega", clique_number),
            ("alpha", independence_number),
        ] {
            let start = Instant::now();
            let entry = match f(g) {
                Ok(v) => {
                    if name == "chi" {
                        chi = Some(v);
                    }
                    ParamEntry::exact(v, start.elapsed().as_secs_f64())
                }
                Err(e) => ParamEntry::failed(&e, start.elapsed().as_secs_f64()),
            };
            params.insert(name.to_string(), entry);
        }
    }

    if let Some(level) = opts.qc_level {
        let colors: Vec<usize> = if opts.qc_colors.is_empty() {
            (2..=chi.unwrap_or(2).max(2)).collect()
        } else {
            opts.qc_colors.clone()
        };
        for c in colors {
            let name = format!("level{level}_bound_c{c}");
            let start = Instant::now();
            let entry = match qc_level_bound(g, c, level, &opts.moment) {
                Ok(r) => ParamEntry {
                    value: Some(r.min_value),
                    gap: Some(r.gap),
                    status: format!("{:?}", r.status),
                    seconds: r.seconds,
                    exact: None,
                    lower_bound: Some(r.lower_bound),
                    verdict: Some(r.verdict),
                    error: None,
                },
                Err(e) => ParamEntry::failed(&e, start.elapsed().as_secs_f64()),
            };
            params.insert(name, entry);
        }
    }

    let violations = ordering_violations(&params, opts.ordering_tol);
    ParameterReport {
        graph: g.label(),
        graph6: encode_graph6(g),
        n: g.n(),
        params,
        violations,
    }
}

fn ordering_violations(params: &BTreeMap<String, ParamEntry>, tol: f64) -> Vec<String> {
    let get = |k: &str| params.get(k).and_then(|e| e.value);
    let mut out = Vec::new();
    let chain = ["theta_plus_bar", "xi_sdp", "chi_f", "chi"];
    for w in chain.windows(2) {
        if let (Some(a), Some(b)) = (get(w[0]), get(w[1])) {
            if a > b + tol {
                out.push(format!("{} = {a} exceeds {} = {b}", w[0], w[1]));
            }
        }
    }
    if let Some(chi) = get("chi") {
        for (name, e) in params {
            if e.verdict == Some(Verdict::CertifiedNoColouring) {
                if let Some(c) = name.rsplit("_c").next().and_then(|c| c.parse::<f64>().ok()) {
                    if c >= chi {
                        out.push(format!("{name} certifies no coloring although chi = {chi}"));
                    }
                }
            }
        }
    }
    out
}

impl ParameterReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Rows `graph,param,value,gap,status,seconds`, parameters in name order.
    pub fn write_csv<W: std::io::Write>(&self, out: W, header: bool) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        let io = |e: csv::Error| crate::Error::Io(std::io::Error::other(e));
        if header {
            w.write_record(["graph", "param", "value", "gap", "status", "seconds"]).map_err(io)?;
        }
        let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for (name, e) in &self.params {
            w.write_record([
                self.graph.as_str(),
                name.as_str(),
                &fmt(e.value),
                &fmt(e.gap),
                e.status.as_str(),
                &format!("{:.6}", e.seconds),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn has_errors(&self) -> bool {
        self.params.values().any(ParamEntry::is_error)
    }
}
