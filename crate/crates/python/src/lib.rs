//! Python bindings: graphs, the parameter chain, hierarchy levels,
//! realization checks and SDPA export. Structured results come back as
//! plain dicts built from the same JSON the CLI prints.

use chromabound::graph::{self, encode_graph6, parse_dimacs, parse_graph6};
use chromabound::npa::{self, build_moment_sdp, MomentOptions};
use chromabound::params::{self, CliqueFamily, ParamOptions, ParamValue, TableOptions};
use chromabound::solver::{export_sdpa_sparse, SolveOptions};
use chromabound::strategy::{self, Realization, RealizationJson};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(chromabound, ChromaboundError, PyException);

fn to_py(e: chromabound::Error) -> PyErr {
    use chromabound::Error as E;
    match e {
        E::Graph6 { .. } | E::Dimacs { .. } | E::Sdpa { .. } | E::InvalidArgument(_) | E::Shape(_) | E::Json(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => ChromaboundError::new_err(e.to_string()),
    }
}

/// Round-trips a serializable value through Python's `json` module.
fn to_dict<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| ChromaboundError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn param_options(tol: Option<f64>, clique_cap: Option<usize>) -> ParamOptions {
    let mut opts = ParamOptions::default();
    if let Some(t) = tol {
        opts.solver = SolveOptions { tol: t, ..opts.solver };
    }
    if let Some(cap) = clique_cap {
        opts.clique_cap = cap;
    }
    opts
}

fn param_dict<'py>(py: Python<'py>, v: &ParamValue) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", v.value)?;
    d.set_item("gap", v.gap)?;
    d.set_item("status", format!("{:?}", v.status))?;
    d.set_item("seconds", v.seconds)?;
    d.set_item("exact", v.rational.map(|r| r.to_string()))?;
    Ok(d)
}

/// Simple undirected graph.
#[pyclass(name = "Graph", module = "chromabound", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGraph {
    inner: graph::Graph,
}

impl From<graph::Graph> for PyGraph {
    fn from(inner: graph::Graph) -> Self {
        PyGraph { inner }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, name=None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, name: Option<String>) -> PyResult<Self> {
        let g = graph::Graph::from_edges(n, &edges).map_err(to_py)?;
        Ok(match name {
            Some(name) => g.with_name(name),
            None => g,
        }
        .into())
    }

    #[staticmethod]
    fn cycle(k: usize) -> PyResult<Self> {
        graph::Graph::cycle(k).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn complete(n: usize) -> PyResult<Self> {
        graph::Graph::complete(n).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        graph::Graph::path(n).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn empty(n: usize) -> Self {
        graph::Graph::empty(n).into()
    }

    #[staticmethod]
    fn kneser(n: usize, k: usize) -> PyResult<Self> {
        graph::Graph::kneser(n, k).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn petersen() -> Self {
        graph::Graph::petersen().into()
    }

    #[staticmethod]
    fn from_graph6(text: &str) -> PyResult<Self> {
        parse_graph6(text.trim()).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        parse_dimacs(text).map(Into::into).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.label()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.inner.n() && v < self.inner.n() && self.inner.has_edge(u, v)
    }

    fn graph6(&self) -> String {
        encode_graph6(&self.inner)
    }

    fn complement(&self) -> Self {
        self.inner.complement().into()
    }

    /// `G * H`: adjacent when either coordinate pair is adjacent.
    fn disjunctive_product(&self, other: &PyGraph) -> Self {
        self.inner.disjunctive_product(&other.inner).into()
    }

    /// `G[H]`.
    fn lexicographic_product(&self, other: &PyGraph) -> Self {
        self.inner.lexicographic_product(&other.inner).into()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph({}, n={}, edges={})", self.inner.label(), self.inner.n(), self.inner.edge_count())
    }
}

#[pyfunction]
#[pyo3(signature = (g, tol=None))]
fn theta_plus_bar<'py>(py: Python<'py>, g: &PyGraph, tol: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    let v = py.detach(|| params::theta_plus_bar(&g.inner, &param_options(tol, None))).map_err(to_py)?;
    param_dict(py, &v)
}

#[pyfunction]
#[pyo3(signature = (g, all_cliques=false, tol=None, clique_cap=None))]
fn xi_sdp<'py>(
    py: Python<'py>,
    g: &PyGraph,
    all_cliques: bool,
    tol: Option<f64>,
    clique_cap: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let family = if all_cliques { CliqueFamily::AllCliques } else { CliqueFamily::MaximalOnly };
    let opts = param_options(tol, clique_cap);
    let v = py.detach(|| params::xi_sdp(&g.inner, family, &opts)).map_err(to_py)?;
    param_dict(py, &v)
}

#[pyfunction]
#[pyo3(signature = (g, tol=None, clique_cap=None))]
fn fractional_chromatic<'py>(
    py: Python<'py>,
    g: &PyGraph,
    tol: Option<f64>,
    clique_cap: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = param_options(tol, clique_cap);
    let v = py.detach(|| params::fractional_chromatic(&g.inner, &opts)).map_err(to_py)?;
    param_dict(py, &v)
}

#[pyfunction]
fn chromatic_number(g: &PyGraph) -> PyResult<usize> {
    graph::chromatic_number(&g.inner).map_err(to_py)
}

#[pyfunction]
fn clique_number(g: &PyGraph) -> PyResult<usize> {
    graph::clique_number(&g.inner).map_err(to_py)
}

#[pyfunction]
fn independence_number(g: &PyGraph) -> PyResult<usize> {
    graph::independence_number(&g.inner).map_err(to_py)
}

/// Every parameter side by side, as the `params` command reports it.
#[pyfunction]
#[pyo3(signature = (g, level=None, colors=None))]
fn parameter_table<'py>(
    py: Python<'py>,
    g: &PyGraph,
    level: Option<usize>,
    colors: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    if level == Some(0) {
        return Err(PyValueError::new_err("level must be at least 1"));
    }
    let opts = TableOptions {
        qc_level: level,
        qc_colors: colors.unwrap_or_default(),
        ..Default::default()
    };
    let report = py.detach(|| params::parameter_table(&g.inner, &opts));
    to_dict(py, &report.to_json())
}

/// Level-`level` moment relaxation for `c` colors. A positive
/// `lower_bound` certifies that no commuting quantum `c`-coloring exists.
#[pyfunction]
#[pyo3(signature = (g, c, level, word_cap=None, max_solver_vars=None))]
fn qc_level_bound<'py>(
    py: Python<'py>,
    g: &PyGraph,
    c: usize,
    level: usize,
    word_cap: Option<usize>,
    max_solver_vars: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut opts = MomentOptions::default();
    opts.word_cap = word_cap.unwrap_or(opts.word_cap);
    opts.max_solver_vars = max_solver_vars.unwrap_or(opts.max_solver_vars);
    let r = py.detach(|| npa::qc_level_bound(&g.inner, c, level, &opts)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("c", r.c)?;
    d.set_item("level", r.level)?;
    d.set_item("min_value", r.min_value)?;
    d.set_item("lower_bound", r.lower_bound)?;
    d.set_item("certified", r.verdict == npa::Verdict::CertifiedNoColouring)?;
    d.set_item("verdict", format!("{:?}", r.verdict))?;
    d.set_item("method", format!("{:?}", r.method))?;
    d.set_item("status", format!("{:?}", r.status))?;
    d.set_item("variables", r.variables)?;
    d.set_item("matrix_order", r.matrix_order)?;
    d.set_item("seconds", r.seconds)?;
    Ok(d)
}

/// `|Γ_N|`: reduced words of length at most `level`.
#[pyfunction]
fn count_words(n: usize, c: usize, level: usize) -> u128 {
    npa::count_words(n, c, level)
}

/// Runs the realization checks on a JSON realization (`{dim, eta, E, F}`).
#[pyfunction]
#[pyo3(signature = (realization_json, g, tol=strategy::DEFAULT_TOL, seed=0, samples=200, max_word_len=4))]
fn verify_realization<'py>(
    py: Python<'py>,
    realization_json: &str,
    g: &PyGraph,
    tol: f64,
    seed: u64,
    samples: usize,
    max_word_len: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let parsed: RealizationJson =
        serde_json::from_str(realization_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let r = Realization::from_json(&parsed).map_err(to_py)?;
    if r.n() != g.inner.n() {
        return Err(PyValueError::new_err(format!(
            "realization has {} inputs, graph has {} vertices",
            r.n(),
            g.inner.n()
        )));
    }
    let operators = strategy::verify_realization(&r, tol);
    let p = strategy::correlation_of(&r).map_err(to_py)?;
    let sync = strategy::check_synchronous(&p, tol);
    let functional = p.graph_functional(&g.inner).map_err(to_py)?;
    let tracial = strategy::check_tracial_and_reversal(&r, max_word_len, samples, seed, tol).map_err(to_py)?;
    let ok = operators.ok && sync.ok && functional.abs() <= tol && (!tracial.checked || tracial.ok);
    to_dict(
        py,
        &serde_json::json!({
            "ok": ok,
            "dim": r.dim,
            "operators": operators,
            "synchronous": sync,
            "graph_functional": functional,
            "tracial": tracial,
        }),
    )
}

/// SDPA sparse text for `target` in {"xi-sdp", "theta-plus", "qc-level"}.
#[pyfunction]
#[pyo3(signature = (g, target, c=None, level=None))]
fn export_sdpa(g: &PyGraph, target: &str, c: Option<usize>, level: Option<usize>) -> PyResult<String> {
    let lmi = match (target, c, level) {
        ("xi-sdp", None, None) => params::xi_sdp_problem(&g.inner, CliqueFamily::MaximalOnly, graph::DEFAULT_CLIQUE_CAP),
        ("theta-plus", None, None) => params::theta_plus_bar_problem(&g.inner),
        ("qc-level", Some(c), Some(level)) => {
            let m = build_moment_sdp(&g.inner, c, level, &MomentOptions::default()).map_err(to_py)?;
            let sdp = m.lmi.to_sdp().map_err(to_py)?;
            return Ok(format!(
                "* objective offset {:.16e}\n{}",
                m.objective_constant,
                export_sdpa_sparse(&sdp)
            ));
        }
        ("qc-level", _, _) => return Err(PyValueError::new_err("qc-level needs c and level")),
        ("xi-sdp" | "theta-plus", _, _) => return Err(PyValueError::new_err("c and level only apply to qc-level")),
        _ => return Err(PyValueError::new_err(format!("unknown target {target:?}"))),
    }
    .map_err(to_py)?;
    Ok(export_sdpa_sparse(&lmi.to_sdp().map_err(to_py)?))
}

#[pymodule]
#[pyo3(name = "chromabound")]
pub fn chromabound_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ChromaboundError", m.py().get_type::<ChromaboundError>())?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(theta_plus_bar, m)?)?;
    m.add_function(wrap_pyfunction!(xi_sdp, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_chromatic, m)?)?;
    m.add_function(wrap_pyfunction!(chromatic_number, m)?)?;
    m.add_function(wrap_pyfunction!(clique_number, m)?)?;
    m.add_function(wrap_pyfunction!(independence_number, m)?)?;
    m.add_function(wrap_pyfunction!(parameter_table, m)?)?;
    m.add_function(wrap_pyfunction!(qc_level_bound, m)?)?;
    m.add_function(wrap_pyfunction!(count_words, m)?)?;
    m.add_function(wrap_pyfunction!(verify_realization, m)?)?;
    m.add_function(wrap_pyfunction!(export_sdpa, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
