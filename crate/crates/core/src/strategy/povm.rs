use faer::{c64, Mat, Side};
use serde::{Deserialize, Serialize};

use super::correlation::Residual;
use super::op_norm;
use crate::error::{Error, Result};

/// One POVM `(P_{v,i})_i` per input on `C^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    pub dim: usize,
    pub ops: Vec<Vec<Mat<c64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PovmReport {
    pub ok: bool,
    /// Most negative eigenvalue, as a positive number.
    pub positivity: Residual,
    pub self_adjointness: Residual,
    pub completeness: Residual,
}

fn hermitian_eigen(m: &Mat<c64>) -> Result<(Mat<c64>, Vec<f64>)> {
    let eig = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    let s = eig.S().column_vector();
    let values = (0..m.nrows()).map(|k| s[k].re).collect();
    Ok((eig.U().to_owned(), values))
}

/// Principal square root of a PSD matrix; tiny negative eigenvalues from
/// rounding are clipped to zero.
pub(crate) fn psd_sqrt(m: &Mat<c64>) -> Result<Mat<c64>> {
    let (u, s) = hermitian_eigen(m)?;
    let d = Mat::from_fn(s.len(), s.len(), |i, j| {
        if i == j {
            c64::new(s[i].max(0.0).sqrt(), 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Ok(&u * &d * u.adjoint())
}

impl Povm {
    pub fn new(ops: Vec<Vec<Mat<c64>>>) -> Result<Self> {
        let dim = ops
            .first()
            .and_then(|f| f.first())
            .map(|m| m.nrows())
            .ok_or_else(|| Error::Shape("empty POVM family".into()))?;
        let c = ops[0].len();
        for fam in &ops {
            if fam.len() != c || fam.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
                return Err(Error::Shape(format!("every POVM needs {c} operators of size {dim}x{dim}")));
            }
        }
        Ok(Povm { dim, ops })
    }

    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn c(&self) -> usize {
        self.ops[0].len()
    }

    pub fn validate(&self, tol: f64) -> Result<PovmReport> {
        let mut positivity = Residual::default();
        let mut self_adjointness = Residual::default();
        let mut completeness = Residual::default();
        let id = Mat::<c64>::identity(self.dim, self.dim);
        for (v, fam) in self.ops.iter().enumerate() {
            let mut sum = Mat::<c64>::zeros(self.dim, self.dim);
            for (i, m) in fam.iter().enumerate() {
                self_adjointness.record(op_norm(&(m - m.adjoint())), || format!("P[{v},{i}]"));
                let herm = (m + m.adjoint()) * faer::Scale(c64::new(0.5, 0.0));
                let (_, s) = hermitian_eigen(&herm)?;
                positivity.record(-s[0], || format!("P[{v},{i}]"));
                sum += m;
            }
            completeness.record(op_norm(&(sum - &id)), || format!("P[{v},*]"));
        }
        Ok(PovmReport {
            ok: positivity.within(tol) && self_adjointness.within(tol) && completeness.within(tol),
            positivity,
            self_adjointness,
            completeness,
        })
    }

    /// Largest `||P^2 - P||` in the family of input `v`.
    pub fn pvm_residual(&self, v: usize) -> f64 {
        self.ops[v].iter().map(|m| op_norm(&(m * m - m))).fold(0.0, f64::max)
    }
}

/// Dilation of the POVM at input `v0` to a PVM. With `W h = (P_{v0,k}^{1/2} h)_k`,
/// an isometry into `c` copies of the space, the new operators are
/// `W P_{v,i} W*` (plus `I - W W*` for `i = 0`) for `v != v0`, and the
/// coordinate projections for `v0`. Compressing by `W` recovers the input
/// and families that were already PVMs stay PVMs.
pub fn dilate_to_pvm(p: &Povm, v0: usize, tol: f64) -> Result<(Povm, Mat<c64>)> {
    if v0 >= p.n() {
        return Err(Error::InvalidArgument(format!("input {v0} out of range")));
    }
    let report = p.validate(tol)?;
    if !report.ok {
        return Err(Error::Precondition(format!("not a POVM family: {report:?}")));
    }
    let (d, c) = (p.dim, p.c());
    let roots: Vec<Mat<c64>> = p.ops[v0].iter().map(psd_sqrt).collect::<Result<_>>()?;
    let w = Mat::from_fn(c * d, d, |r, col| roots[r / d][(r % d, col)]);
    let big = c * d;
    let complement = Mat::<c64>::identity(big, big) - &w * w.adjoint();
    let mut ops = Vec::with_capacity(p.n());
    for (v, fam) in p.ops.iter().enumerate() {
        let new_fam: Vec<Mat<c64>> = if v == v0 {
            (0..c)
                .map(|i| {
                    Mat::from_fn(big, big, |r, s| {
                        if r == s && r / d == i {
                            c64::new(1.0, 0.0)
                        } else {
                            c64::new(0.0, 0.0)
                        }
                    })
                })
                .collect()
        } else {
            fam.iter()
                .enumerate()
                .map(|(i, m)| {
                    let mut x = &w * m * w.adjoint();
                    if i == 0 {
                        x += &complement;
                    }
                    x
                })
                .collect()
        };
        ops.push(new_fam);
    }
    Ok((Povm { dim: big, ops }, w))
}

/// Dilates every input in turn; returns the all-PVM family and the composed
/// isometry `W` with `W* P~_{v,i} W = P_{v,i}`.
pub fn dilate_all(p: &Povm, tol: f64) -> Result<(Povm, Mat<c64>)> {
    let mut cur = p.clone();
    let mut total = Mat::<c64>::identity(p.dim, p.dim);
    for v in 0..p.n() {
        let (next, w) = dilate_to_pvm(&cur, v, tol)?;
        total = &w * &total;
        cur = next;
    }
    Ok((cur, total))
}
