"""Smoke test for the Python bindings.

    pip install --no-build-isolation ./crates/python
    python3 python/smoke_test.py
"""

import json
import math

import chromabound as cb


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    c5 = cb.Graph.cycle(5)
    assert c5.n == 5 and c5.edge_count() == 5 and c5.name == "C5"
    assert cb.Graph.from_graph6(c5.graph6()) == cb.Graph(5, c5.edges())

    xi = cb.xi_sdp(c5)
    close(xi["value"], 2.5, 1e-5)
    chi_f = cb.fractional_chromatic(c5)
    assert chi_f["exact"] == "5/2", chi_f
    close(cb.theta_plus_bar(c5)["value"], math.sqrt(5), 1e-4)
    assert cb.chromatic_number(c5) == 3
    close(cb.fractional_chromatic(cb.Graph.petersen())["value"], 2.5, 1e-9)

    table = cb.parameter_table(cb.Graph.complete(3), level=1)
    assert table["params"]["level1_bound_c2"]["verdict"] == "CertifiedNoColouring"
    assert table["violations"] == []

    k3 = cb.Graph.complete(3)
    assert not cb.qc_level_bound(k3, 3, 1)["certified"]
    r = cb.qc_level_bound(k3, 2, 2)
    assert r["certified"] and r["lower_bound"] > 1e-6, r
    assert cb.count_words(2, 3, 1) == 13

    coloring = [0, 1, 0, 1, 2]
    ops = {f"{v},{i}": [[[1.0 if coloring[v] == i else 0.0, 0.0]]] for v in range(5) for i in range(3)}
    real = json.dumps({"dim": 1, "eta": [[1.0, 0.0]], "E": ops, "F": ops})
    report = cb.verify_realization(real, c5)
    assert report["ok"], report

    text = cb.export_sdpa(c5, "xi-sdp")
    assert "F0 = -C" in text

    for bad in (lambda: cb.Graph.from_graph6("!!"), lambda: cb.export_sdpa(c5, "lovasz")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
