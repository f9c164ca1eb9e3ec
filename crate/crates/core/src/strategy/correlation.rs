use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::npa::{eval_graph_functional, flat_index};

/// Largest deviation from an invariant and where it occurs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub at: Option<String>,
}

impl Residual {
    pub(crate) fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || (value.is_nan() && !self.value.is_nan()) {
            self.value = value;
            self.at = Some(at());
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.value <= tol
    }
}

/// Outcome probabilities `p(i, j | v, w)` stored row-major in `(n, c, n, c)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub n: usize,
    pub c: usize,
    pub p: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub ok: bool,
    /// Most negative entry, as a positive number.
    pub negativity: Residual,
    pub normalization: Residual,
    pub nonsignaling: Residual,
}

impl Correlation {
    pub fn new(n: usize, c: usize, p: Vec<f64>) -> Result<Self> {
        if p.len() != n * c * n * c {
            return Err(Error::Shape(format!("{} entries for shape ({n},{c},{n},{c})", p.len())));
        }
        Ok(Correlation { n, c, p })
    }

    pub fn zeros(n: usize, c: usize) -> Self {
        Correlation {
            n,
            c,
            p: vec![0.0; n * c * n * c],
        }
    }

    /// Both parties answer with fixed functions `f` and `g` of their inputs.
    pub fn deterministic(f: &[usize], g: &[usize], c: usize) -> Result<Self> {
        let n = f.len();
        if g.len() != n || f.iter().chain(g).any(|&x| x >= c) {
            return Err(Error::InvalidArgument("answer functions must map n inputs into 0..c".into()));
        }
        let mut out = Correlation::zeros(n, c);
        for v in 0..n {
            for w in 0..n {
                out.set(v, f[v], w, g[w], 1.0);
            }
        }
        Ok(out)
    }

    pub fn uniform(n: usize, c: usize) -> Self {
        Correlation {
            n,
            c,
            p: vec![1.0 / (c * c) as f64; n * c * n * c],
        }
    }

    #[inline]
    pub fn get(&self, v: usize, i: usize, w: usize, j: usize) -> f64 {
        self.p[flat_index(self.n, self.c, v, i, w, j)]
    }

    #[inline]
    pub fn set(&mut self, v: usize, i: usize, w: usize, j: usize, x: f64) {
        let k = flat_index(self.n, self.c, v, i, w, j);
        self.p[k] = x;
    }

    /// `Σ_j p(i, j | v, w)`.
    pub fn marginal_a(&self, v: usize, i: usize, w: usize) -> f64 {
        (0..self.c).map(|j| self.get(v, i, w, j)).sum()
    }

    /// `Σ_i p(i, j | v, w)`.
    pub fn marginal_b(&self, v: usize, w: usize, j: usize) -> f64 {
        (0..self.c).map(|i| self.get(v, i, w, j)).sum()
    }

    pub fn validate(&self, tol: f64) -> CorrelationReport {
        let (n, c) = (self.n, self.c);
        let mut negativity = Residual::default();
        let mut normalization = Residual::default();
        let mut nonsignaling = Residual::default();
        for v in 0..n {
            for w in 0..n {
                let mut total = 0.0;
                for i in 0..c {
                    for j in 0..c {
                        let x = self.get(v, i, w, j);
                        total += x;
                        negativity.record(-x, || format!("p({i},{j}|{v},{w})"));
                    }
                }
                normalization.record((total - 1.0).abs(), || format!("inputs ({v},{w})"));
                for i in 0..c {
                    let d = (self.marginal_a(v, i, w) - self.marginal_a(v, i, 0)).abs();
                    nonsignaling.record(d, || format!("Alice marginal of ({v},{i}) against w={w}"));
                    let d = (self.marginal_b(v, w, i) - self.marginal_b(0, w, i)).abs();
                    nonsignaling.record(d, || format!("Bob marginal of ({w},{i}) against v={v}"));
                }
            }
        }
        CorrelationReport {
            ok: negativity.within(tol) && normalization.within(tol) && nonsignaling.within(tol),
            negativity,
            normalization,
            nonsignaling,
        }
    }

    /// `L_{G,c}` of this correlation.
    pub fn graph_functional(&self, g: &Graph) -> Result<f64> {
        if g.n() != self.n {
            return Err(Error::Shape(format!("graph has {} vertices, correlation {}", g.n(), self.n)));
        }
        eval_graph_functional(g, self.c, &self.p)
    }

    /// `max |p(i, j | v, w) - p(j, i | w, v)|`.
    pub fn swap_asymmetry(&self) -> Residual {
        let mut r = Residual::default();
        for v in 0..self.n {
            for w in 0..self.n {
                for i in 0..self.c {
                    for j in 0..self.c {
                        let d = (self.get(v, i, w, j) - self.get(w, j, v, i)).abs();
                        r.record(d, || format!("p({i},{j}|{v},{w})"));
                    }
                }
            }
        }
        r
    }
}

/// `(p2 p1)(a, b | v, w) = Σ_{i,j} p2(a, b | i, j) p1(i, j | v, w)`: answers of
/// `p1` are fed to `p2` as questions.
pub fn compose_correlations(p2: &Correlation, p1: &Correlation) -> Result<Correlation> {
    if p2.n != p1.c {
        return Err(Error::Shape(format!(
            "outer correlation takes {} inputs but inner produces {} outcomes",
            p2.n, p1.c
        )));
    }
    let (n, c, l) = (p1.n, p1.c, p2.c);
    let mut out = Correlation::zeros(n, l);
    for v in 0..n {
        for w in 0..n {
            for i in 0..c {
                for j in 0..c {
                    let q = p1.get(v, i, w, j);
                    if q == 0.0 {
                        continue;
                    }
                    for a in 0..l {
                        for b in 0..l {
                            let k = flat_index(n, l, v, a, w, b);
                            out.p[k] += q * p2.get(i, a, j, b);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
