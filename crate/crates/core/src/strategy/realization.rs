use std::collections::BTreeMap;

use faer::{c64, Col, Mat};
use serde::{Deserialize, Serialize};

use super::correlation::{Correlation, Residual};
use super::op_norm;
use crate::error::{Error, Result};

/// Commuting PVM families `E_{v,i}`, `F_{w,j}` on `C^dim` and a unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub dim: usize,
    /// `e[v][i]`.
    pub e: Vec<Vec<Mat<c64>>>,
    pub f: Vec<Vec<Mat<c64>>>,
    pub eta: Col<c64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub idempotence: Residual,
    pub self_adjointness: Residual,
    pub completeness: Residual,
    pub commutation: Residual,
    /// `| ||eta|| - 1 |`.
    pub state_norm: f64,
}

type JsonMatrix = Vec<Vec<[f64; 2]>>;

/// Wire format: complex entries as `[re, im]`, matrices row-major, operator
/// maps keyed by `"v,i"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationJson {
    pub dim: usize,
    pub eta: Vec<[f64; 2]>,
    #[serde(rename = "E")]
    pub e: BTreeMap<String, JsonMatrix>,
    #[serde(rename = "F")]
    pub f: BTreeMap<String, JsonMatrix>,
}

fn matrix_to_json(m: &Mat<c64>) -> JsonMatrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn matrix_from_json(rows: &JsonMatrix, dim: usize, key: &str) -> Result<Mat<c64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Shape(format!("operator {key} is not {dim}x{dim}")));
    }
    Ok(Mat::from_fn(dim, dim, |r, c| c64::new(rows[r][c][0], rows[r][c][1])))
}

fn family_from_json(map: &BTreeMap<String, JsonMatrix>, dim: usize, name: &str) -> Result<Vec<Vec<Mat<c64>>>> {
    let mut entries = Vec::with_capacity(map.len());
    for (key, rows) in map {
        let parsed = key.split_once(',').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
        let Some((v, i)): Option<(usize, usize)> = parsed else {
            return Err(Error::InvalidArgument(format!("{name} key {key:?} is not \"v,i\"")));
        };
        entries.push((v, i, matrix_from_json(rows, dim, key)?));
    }
    let n = entries.iter().map(|e| e.0 + 1).max().unwrap_or(0);
    let c = entries.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    if entries.len() != n * c {
        return Err(Error::Shape(format!("{name} must list every (v,i) with v < {n}, i < {c}")));
    }
    let mut out = vec![vec![Mat::zeros(dim, dim); c]; n];
    for (v, i, m) in entries {
        out[v][i] = m;
    }
    Ok(out)
}

impl Realization {
    pub fn new(e: Vec<Vec<Mat<c64>>>, f: Vec<Vec<Mat<c64>>>, eta: Col<c64>) -> Result<Self> {
        let dim = eta.nrows();
        let n = e.len();
        let c = e.first().map_or(0, Vec::len);
        if n == 0 || c == 0 {
            return Err(Error::Shape("realization needs at least one input and outcome".into()));
        }
        if f.len() != n {
            return Err(Error::Shape(format!("E has {n} inputs, F has {}", f.len())));
        }
        for fam in e.iter().chain(&f) {
            if fam.len() != c {
                return Err(Error::Shape(format!("every measurement needs {c} outcomes")));
            }
            if fam.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
                return Err(Error::Shape(format!("operators must be {dim}x{dim}")));
            }
        }
        Ok(Realization { dim, e, f, eta })
    }

    pub fn n(&self) -> usize {
        self.e.len()
    }

    pub fn c(&self) -> usize {
        self.e[0].len()
    }

    pub fn to_json(&self) -> RealizationJson {
        let family = |fam: &Vec<Vec<Mat<c64>>>| {
            let mut map = BTreeMap::new();
            for (v, ops) in fam.iter().enumerate() {
                for (i, m) in ops.iter().enumerate() {
                    map.insert(format!("{v},{i}"), matrix_to_json(m));
                }
            }
            map
        };
        RealizationJson {
            dim: self.dim,
            eta: (0..self.dim).map(|k| [self.eta[k].re, self.eta[k].im]).collect(),
            e: family(&self.e),
            f: family(&self.f),
        }
    }

    pub fn from_json(j: &RealizationJson) -> Result<Self> {
        if j.eta.len() != j.dim {
            return Err(Error::Shape(format!("eta has {} entries, dim is {}", j.eta.len(), j.dim)));
        }
        let eta = Col::from_fn(j.dim, |k| c64::new(j.eta[k][0], j.eta[k][1]));
        Realization::new(family_from_json(&j.e, j.dim, "E")?, family_from_json(&j.f, j.dim, "F")?, eta)
    }
}

/// Checks idempotence, self-adjointness, completeness and `[E, F] = 0` in
/// operator norm, reporting the worst offender of each.
pub fn verify_realization(r: &Realization, tol: f64) -> VerifyReport {
    let mut idempotence = Residual::default();
    let mut self_adjointness = Residual::default();
    let mut completeness = Residual::default();
    let mut commutation = Residual::default();
    let id = Mat::<c64>::identity(r.dim, r.dim);
    for (name, fam) in [("E", &r.e), ("F", &r.f)] {
        for (v, ops) in fam.iter().enumerate() {
            let mut sum = Mat::<c64>::zeros(r.dim, r.dim);
            for (i, m) in ops.iter().enumerate() {
                idempotence.record(op_norm(&(m * m - m)), || format!("{name}[{v},{i}]"));
                self_adjointness.record(op_norm(&(m - m.adjoint())), || format!("{name}[{v},{i}]"));
                sum += m;
            }
            completeness.record(op_norm(&(sum - &id)), || format!("{name}[{v},*]"));
        }
    }
    for (v, eops) in r.e.iter().enumerate() {
        for (i, em) in eops.iter().enumerate() {
            for (w, fops) in r.f.iter().enumerate() {
                for (j, fm) in fops.iter().enumerate() {
                    let d = op_norm(&(em * fm - fm * em));
                    commutation.record(d, || format!("E[{v},{i}] F[{w},{j}]"));
                }
            }
        }
    }
    let state_norm = (r.eta.norm_l2() - 1.0).abs();
    VerifyReport {
        ok: idempotence.within(tol)
            && self_adjointness.within(tol)
            && completeness.within(tol)
            && commutation.within(tol)
            && state_norm <= tol,
        idempotence,
        self_adjointness,
        completeness,
        commutation,
        state_norm,
    }
}

/// Imaginary parts above this make `correlation_of` fail.
const IMAGINARY_TOL: f64 = 1e-9;

/// `p(i, j | v, w) = <E_{v,i} F_{w,j} eta, eta>`.
pub fn correlation_of(r: &Realization) -> Result<Correlation> {
    let (n, c) = (r.n(), r.c());
    let f_eta: Vec<Vec<Col<c64>>> = r.f.iter().map(|ops| ops.iter().map(|m| m * &r.eta).collect()).collect();
    let mut p = Correlation::zeros(n, c);
    for v in 0..n {
        for i in 0..c {
            let left = r.e[v][i].adjoint() * &r.eta;
            for w in 0..n {
                for j in 0..c {
                    let z: c64 = left.adjoint() * &f_eta[w][j];
                    if z.im.abs() > IMAGINARY_TOL {
                        return Err(Error::Numerical(format!(
                            "p({i},{j}|{v},{w}) has imaginary part {:e}",
                            z.im
                        )));
                    }
                    p.set(v, i, w, j, z.re);
                }
            }
        }
    }
    Ok(p)
}

/// Restricts to the smallest subspace containing `eta` and invariant under
/// every `F_{w,j}`, grown Krylov-style; directions below `rank_tol` after
/// orthogonalization are discarded. Errors when `E` does not leave that
/// subspace invariant, which cannot happen for synchronous realizations.
pub fn minimize(r: &Realization, rank_tol: f64) -> Result<Realization> {
    let norm = r.eta.norm_l2();
    if norm <= rank_tol {
        return Err(Error::Precondition("state vector is zero".into()));
    }
    let mut basis: Vec<Col<c64>> = vec![&r.eta * faer::Scale(c64::new(1.0 / norm, 0.0))];
    let mut k = 0;
    while k < basis.len() && basis.len() < r.dim {
        let q = basis[k].clone();
        for ops in &r.f {
            for m in ops {
                let mut u = m * &q;
                for _ in 0..2 {
                    for b in &basis {
                        let proj: c64 = b.adjoint() * &u;
                        u -= b * faer::Scale(proj);
                    }
                }
                let nu = u.norm_l2();
                if nu > rank_tol {
                    basis.push(u * faer::Scale(c64::new(1.0 / nu, 0.0)));
                    if basis.len() == r.dim {
                        break;
                    }
                }
            }
        }
        k += 1;
    }
    let q = Mat::from_fn(r.dim, basis.len(), |i, j| basis[j][i]);
    let compress = |m: &Mat<c64>| -> Result<Mat<c64>> {
        let mq = m * &q;
        let reduced = q.adjoint() * &mq;
        let leak = op_norm(&(&mq - &q * &reduced));
        if leak > 1e-8 {
            return Err(Error::Precondition(format!(
                "cyclic subspace is not invariant (leak {leak:e}); is the correlation synchronous?"
            )));
        }
        Ok(reduced)
    };
    let fam = |f: &Vec<Vec<Mat<c64>>>| -> Result<Vec<Vec<Mat<c64>>>> {
        f.iter().map(|ops| ops.iter().map(compress).collect()).collect()
    };
    let e = fam(&r.e)?;
    let f = fam(&r.f)?;
    let eta = q.adjoint() * &r.eta;
    Realization::new(e, f, eta)
}
