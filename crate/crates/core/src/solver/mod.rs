//! Standard-form block SDP and LP solving.
//!
//! Problems are `min <C, X>` subject to `<A_i, X> = b_i` and `X ⪰ 0`, where
//! `X` is block diagonal with dense PSD blocks and nonnegative diagonal (LP)
//! blocks. The dual is `max b·y` subject to `C - Σ y_i A_i ⪰ 0`.

mod ipm;
mod lmi;
mod lp;
mod sdpa;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lmi::{AffineRow, AffineSym, LmiProblem, LmiSolution};
pub use lp::{solve_lp, LpProblem, LpSolution};
pub use sdpa::{export_sdpa_sparse, parse_sdpa_sparse};

/// One diagonal block of the variable `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    /// Dense symmetric PSD block of the given order.
    Psd(usize),
    /// Diagonal block: a nonnegative vector of the given length.
    Diag(usize),
}

impl Block {
    pub fn size(&self) -> usize {
        match *self {
            Block::Psd(n) | Block::Diag(n) => n,
        }
    }

    /// SDPA convention: negative sizes mark diagonal blocks.
    pub fn sdpa_size(&self) -> i64 {
        match *self {
            Block::Psd(n) => n as i64,
            Block::Diag(n) => -(n as i64),
        }
    }
}

/// Sparse block-structured symmetric matrix stored as upper-triangle entries
/// `(block, i, j, value)` with `i <= j`. An off-diagonal entry stands for
/// both `(i, j)` and `(j, i)`, so `<A, X>` picks up `2 * value * X_ij`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymMatrix {
    entries: Vec<(usize, usize, usize, f64)>,
}

impl SymMatrix {
    pub fn new() -> Self {
        SymMatrix::default()
    }

    /// Adds `value` at `(i, j)` and `(j, i)` of `block` (once if `i == j`).
    pub fn add(&mut self, block: usize, i: usize, j: usize, value: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.entries.push((block, i, j, value));
    }

    /// Adds `value` to the linear functional `X -> X_ij`, i.e. half the
    /// coefficient on each off-diagonal position.
    pub fn add_entry_functional(&mut self, block: usize, i: usize, j: usize, value: f64) {
        if i == j {
            self.add(block, i, i, value);
        } else {
            self.add(block, i, j, 0.5 * value);
        }
    }

    /// Merge duplicates, drop zeros and sort.
    pub fn canonicalize(&mut self) {
        self.entries.sort_by_key(|e| (e.0, e.1, e.2));
        let mut out: Vec<(usize, usize, usize, f64)> = Vec::with_capacity(self.entries.len());
        for &e in &self.entries {
            match out.last_mut() {
                Some(last) if (last.0, last.1, last.2) == (e.0, e.1, e.2) => last.3 += e.3,
                _ => out.push(e),
            }
        }
        out.retain(|e| e.3 != 0.0);
        self.entries = out;
    }

    pub fn entries(&self) -> &[(usize, usize, usize, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix {
            entries: self.entries.iter().map(|&(b, i, j, v)| (b, i, j, v * s)).collect(),
        }
    }

    /// `<self, X>` for a block value.
    pub fn dot(&self, x: &[BlockMat]) -> f64 {
        self.entries
            .iter()
            .map(|&(b, i, j, v)| match &x[b] {
                BlockMat::Dense(m) if i == j => v * m[(i, i)],
                BlockMat::Dense(m) => v * (m[(i, j)] + m[(j, i)]),
                BlockMat::Diag(d) => v * d[i],
            })
            .sum()
    }

    /// Frobenius norm, counting off-diagonal entries twice.
    pub fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, i, j, v)| if i == j { v * v } else { 2.0 * v * v })
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_dense(&self, blocks: &[Block]) -> Vec<BlockMat> {
        let mut out = BlockMat::zeros(blocks);
        for &(b, i, j, v) in &self.entries {
            match &mut out[b] {
                BlockMat::Dense(m) => {
                    m[(i, j)] += v;
                    if i != j {
                        m[(j, i)] += v;
                    }
                }
                BlockMat::Diag(d) => d[i] += v,
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub a: SymMatrix,
    pub b: f64,
}

/// `min <C, X>` s.t. `<A_i, X> = b_i`, `X ⪰ 0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SdpProblem {
    pub blocks: Vec<Block>,
    pub objective: SymMatrix,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new(blocks: Vec<Block>) -> Self {
        SdpProblem {
            blocks,
            objective: SymMatrix::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_constraint(&mut self, a: SymMatrix, b: f64) -> usize {
        self.constraints.push(Constraint { a, b });
        self.constraints.len() - 1
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Structural checks run before any iteration.
    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidProblem("no blocks".into()));
        }
        if let Some(k) = self.blocks.iter().position(|b| b.size() == 0) {
            return Err(Error::InvalidProblem(format!("block {k} has size 0")));
        }
        let check = |m: &SymMatrix, what: &str| -> Result<()> {
            for &(b, i, j, v) in &m.entries {
                let block = self.blocks.get(b).ok_or_else(|| {
                    Error::InvalidProblem(format!("{what}: block index {b} out of range"))
                })?;
                if i > j || j >= block.size() {
                    return Err(Error::InvalidProblem(format!(
                        "{what}: entry ({i},{j}) invalid for block {b} of size {}",
                        block.size()
                    )));
                }
                if matches!(block, Block::Diag(_)) && i != j {
                    return Err(Error::InvalidProblem(format!(
                        "{what}: off-diagonal entry ({i},{j}) in diagonal block {b}"
                    )));
                }
                if !v.is_finite() {
                    return Err(Error::InvalidProblem(format!("{what}: non-finite value")));
                }
            }
            Ok(())
        };
        check(&self.objective, "objective")?;
        for (k, c) in self.constraints.iter().enumerate() {
            check(&c.a, &format!("constraint {k}"))?;
            if !c.b.is_finite() {
                return Err(Error::InvalidProblem(format!(
                    "constraint {k}: non-finite right-hand side"
                )));
            }
        }
        Ok(())
    }
}

/// Dense value of one block.
#[derive(Clone, Debug)]
pub enum BlockMat {
    Dense(Mat<f64>),
    Diag(Vec<f64>),
}

impl BlockMat {
    pub fn zeros(blocks: &[Block]) -> Vec<BlockMat> {
        blocks
            .iter()
            .map(|b| match *b {
                Block::Psd(n) => BlockMat::Dense(Mat::zeros(n, n)),
                Block::Diag(n) => BlockMat::Diag(vec![0.0; n]),
            })
            .collect()
    }

    pub fn as_dense(&self) -> Option<&Mat<f64>> {
        match self {
            BlockMat::Dense(m) => Some(m),
            BlockMat::Diag(_) => None,
        }
    }

    pub fn as_diag(&self) -> Option<&[f64]> {
        match self {
            BlockMat::Diag(d) => Some(d),
            BlockMat::Dense(_) => None,
        }
    }

    /// Smallest eigenvalue (smallest entry for diagonal blocks).
    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            BlockMat::Dense(m) => m
                .self_adjoint_eigenvalues(faer::Side::Lower)
                .map(|e| e[0])
                .unwrap_or(f64::NAN),
            BlockMat::Diag(d) => d.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    IterLimit,
    NumericalFailure,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-8,
            max_iters: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SolveStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    pub x: Vec<BlockMat>,
    pub s: Vec<BlockMat>,
    pub y: Vec<f64>,
    /// `|primal - dual| / (1 + |primal|)`.
    pub gap: f64,
    /// `||b - A(X)|| / (1 + ||b||)`.
    pub primal_residual: f64,
    /// `||C - S - A^T y||_F / (1 + ||C||_F)`.
    pub dual_residual: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// `Ok(self)` when optimal, otherwise a solver error carrying the status.
    pub fn require_optimal(self) -> Result<Self> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::Solver {
                status: self.status,
            })
        }
    }
}

/// Solve a block SDP with an infeasible-start primal-dual interior-point
/// method (HKM direction, Mehrotra predictor-corrector).
pub fn solve(problem: &SdpProblem, opts: &SolveOptions) -> Result<SdpSolution> {
    problem.validate()?;
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.max_iters == 0 {
        return Err(Error::InvalidArgument(
            "solver tolerance must be positive and max_iters nonzero".into(),
        ));
    }
    Ok(ipm::Ipm::new(problem).run(opts))
}

#[cfg(test)]
mod tests;
