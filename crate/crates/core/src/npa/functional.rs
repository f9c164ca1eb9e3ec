//! The coloring functional `L_{G,c}` on arrays `a[v][i][w][j]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// One `(v, i, w, j)` position with coefficient 1 in `L_{G,c}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalTerm {
    pub v: usize,
    pub i: usize,
    pub w: usize,
    pub j: usize,
}

/// Flat index of `(v, i, w, j)` in an `(n, c, n, c)` row-major array.
pub fn flat_index(n: usize, c: usize, v: usize, i: usize, w: usize, j: usize) -> usize {
    ((v * c + i) * n + w) * c + j
}

/// Positions summed by `L_{G,c}`: `(v,i,v,j)` with `i != j`, and `(v,i,w,i)`
/// for every ordered adjacent pair `v ~ w`.
pub fn functional_terms(g: &Graph, c: usize) -> Vec<FunctionalTerm> {
    let n = g.n();
    let mut terms = Vec::new();
    for v in 0..n {
        for i in 0..c {
            for j in 0..c {
                if i != j {
                    terms.push(FunctionalTerm { v, i, w: v, j });
                }
            }
        }
    }
    for v in 0..n {
        for w in g.neighbors(v) {
            for i in 0..c {
                terms.push(FunctionalTerm { v, i, w, j: i });
            }
        }
    }
    terms
}

/// `L_{G,c}(a)` for a row-major `(n, c, n, c)` array.
pub fn eval_graph_functional(g: &Graph, c: usize, a: &[f64]) -> Result<f64> {
    let n = g.n();
    if a.len() != n * c * n * c {
        return Err(Error::Shape(format!(
            "expected {} = ({n},{c},{n},{c}) entries, got {}",
            n * c * n * c,
            a.len()
        )));
    }
    Ok(functional_terms(g, c)
        .iter()
        .map(|t| a[flat_index(n, c, t.v, t.i, t.w, t.j)])
        .sum())
}
