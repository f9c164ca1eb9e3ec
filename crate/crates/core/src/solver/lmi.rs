//! Problems posed in inequality (LMI) form over free variables `z`:
//! minimize `c·z` subject to affine PSD blocks `F0 + Σ z_k F_k ⪰ 0` and
//! affine scalar rows `r0 + Σ z_k r_k >= 0`.
//!
//! They map onto the dual side of [`SdpProblem`]: `y = z`, `C = F0`,
//! `A_k = -F_k`, `b = -c`, so a small number of variables gives a small
//! Schur complement regardless of how many rows there are.

use std::collections::HashSet;

use super::{solve, Block, SdpProblem, SdpSolution, SolveOptions, SolveStatus, SymMatrix};
use crate::error::{Error, Result};

/// `constant + Σ z_var * term` as a symmetric matrix of order `size`.
/// Entries are upper-triangle positions standing for both `(i,j)` and `(j,i)`.
#[derive(Clone, Debug, Default)]
pub struct AffineSym {
    pub size: usize,
    pub constant: Vec<(usize, usize, f64)>,
    pub terms: Vec<(usize, usize, usize, f64)>,
}

impl AffineSym {
    pub fn new(size: usize) -> Self {
        AffineSym {
            size,
            ..Default::default()
        }
    }

    pub fn add_constant(&mut self, i: usize, j: usize, v: f64) {
        self.constant.push((i.min(j), i.max(j), v));
    }

    pub fn add_term(&mut self, var: usize, i: usize, j: usize, v: f64) {
        self.terms.push((var, i.min(j), i.max(j), v));
    }
}

/// `constant + Σ coeff * z_var >= 0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AffineRow {
    pub constant: f64,
    pub coeffs: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, Default)]
pub struct LmiProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub psd: Vec<AffineSym>,
    pub rows: Vec<AffineRow>,
}

#[derive(Clone, Debug)]
pub struct LmiSolution {
    pub status: SolveStatus,
    /// `c·z` at the returned point.
    pub value: f64,
    /// Objective of the paired primal problem; equals `value` at optimality.
    pub bound: f64,
    pub z: Vec<f64>,
    pub sdp: SdpSolution,
}

impl LmiProblem {
    pub fn new(num_vars: usize) -> Self {
        LmiProblem {
            num_vars,
            objective: vec![0.0; num_vars],
            ..Default::default()
        }
    }

    /// Canonical rows: merged coefficients, constant rows checked and
    /// dropped, duplicates removed.
    fn canonical_rows(&self) -> Result<Vec<AffineRow>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for row in &self.rows {
            let mut coeffs = row.coeffs.clone();
            coeffs.sort_by_key(|c| c.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
            for (v, a) in coeffs {
                if v >= self.num_vars {
                    return Err(Error::InvalidProblem(format!("row uses variable {v}")));
                }
                match merged.last_mut() {
                    Some(last) if last.0 == v => last.1 += a,
                    _ => merged.push((v, a)),
                }
            }
            merged.retain(|c| c.1 != 0.0);
            if merged.is_empty() {
                if row.constant < 0.0 {
                    return Err(Error::InvalidProblem(format!(
                        "constant row {} >= 0 cannot hold",
                        row.constant
                    )));
                }
                continue;
            }
            let key: (u64, Vec<(usize, u64)>) = (
                row.constant.to_bits(),
                merged.iter().map(|&(v, a)| (v, a.to_bits())).collect(),
            );
            if seen.insert(key) {
                out.push(AffineRow {
                    constant: row.constant,
                    coeffs: merged,
                });
            }
        }
        Ok(out)
    }

    pub fn to_sdp(&self) -> Result<SdpProblem> {
        if self.objective.len() != self.num_vars {
            return Err(Error::Shape("objective length differs from num_vars".into()));
        }
        let rows = self.canonical_rows()?;
        let mut blocks: Vec<Block> = self.psd.iter().map(|p| Block::Psd(p.size)).collect();
        if !rows.is_empty() {
            blocks.push(Block::Diag(rows.len()));
        }
        let mut prob = SdpProblem::new(blocks);
        let mut a = vec![SymMatrix::new(); self.num_vars];
        for (k, blk) in self.psd.iter().enumerate() {
            for &(i, j, v) in &blk.constant {
                prob.objective.add(k, i, j, v);
            }
            for &(var, i, j, v) in &blk.terms {
                if var >= self.num_vars {
                    return Err(Error::InvalidProblem(format!("block term uses variable {var}")));
                }
                a[var].add(k, i, j, -v);
            }
        }
        let lp = self.psd.len();
        for (r, row) in rows.iter().enumerate() {
            if row.constant != 0.0 {
                prob.objective.add(lp, r, r, row.constant);
            }
            for &(var, v) in &row.coeffs {
                a[var].add(lp, r, r, -v);
            }
        }
        prob.objective.canonicalize();
        for (var, mut mat) in a.into_iter().enumerate() {
            mat.canonicalize();
            prob.add_constraint(mat, -self.objective[var]);
        }
        Ok(prob)
    }

    pub fn solve(&self, opts: &SolveOptions) -> Result<LmiSolution> {
        let prob = self.to_sdp()?;
        let sdp = solve(&prob, opts)?;
        Ok(LmiSolution {
            status: sdp.status,
            value: -sdp.dual_value,
            bound: -sdp.primal_value,
            z: sdp.y.clone(),
            sdp,
        })
    }
}
