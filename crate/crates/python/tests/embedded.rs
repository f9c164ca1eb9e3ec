//! Drives the module through an embedded interpreter, so the bindings are
//! exercised by `cargo test` without installing the wheel.

use pyo3::prelude::*;

use chromabound_py::chromabound_module;

#[test]
fn module_round_trip() {
    pyo3::append_to_inittab!(chromabound_module);
    Python::initialize();
    Python::attach(|py| {
        py.run(
            cr#"
import json, math
import chromabound as cb

c5 = cb.Graph.cycle(5)
assert repr(c5) == "Graph(C5, n=5, edges=5)"
assert abs(cb.xi_sdp(c5)["value"] - 2.5) < 1e-5
assert cb.fractional_chromatic(c5)["exact"] == "5/2"
assert abs(cb.theta_plus_bar(c5)["value"] - math.sqrt(5)) < 1e-4
assert cb.independence_number(c5) == 2 and cb.clique_number(c5) == 2

prod = c5.disjunctive_product(cb.Graph.complete(3))
assert prod.n == 15 and prod.has_edge(0, 1)
assert cb.Graph.from_graph6(c5.graph6()) == cb.Graph(5, c5.edges())
assert cb.Graph.from_dimacs("p edge 2 1\ne 1 2\n").edge_count() == 1

k3 = cb.Graph.complete(3)
r = cb.qc_level_bound(k3, 2, 1)
assert r["certified"] and r["verdict"] == "CertifiedNoColouring"
assert cb.count_words(1, 2, 2) == 9

try:
    cb.Graph(3, [(0, 3)])
except ValueError as e:
    assert "out of range" in str(e)
else:
    raise AssertionError("bad edge accepted")
try:
    cb.qc_level_bound(c5, 2, 3, max_solver_vars=5)
except cb.ChromaboundError as e:
    assert "cap" in str(e)
else:
    raise AssertionError("cap ignored")

sdpa = cb.export_sdpa(k3, "qc-level", c=3, level=1)
assert sdpa.startswith("* objective offset")
"#,
            None,
            None,
        )
        .unwrap_or_else(|e| {
            e.display(py);
            panic!("python assertions failed");
        });
    });
}
