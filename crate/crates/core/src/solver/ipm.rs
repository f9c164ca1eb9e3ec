//! Infeasible-start primal-dual interior-point method.

use faer::linalg::solvers::DenseSolveCore;
use faer::linalg::triangular_solve::solve_lower_triangular_in_place;
use faer::{Mat, Par, Side};

use super::{Block, BlockMat, SdpProblem, SdpSolution, SolveOptions, SolveStatus, SymMatrix};

struct PsdTerm {
    con: usize,
    /// Both triangles, so `<A, Z> = Σ a Z[q, p]` for any square `Z`.
    full: Vec<(usize, usize, f64)>,
}

pub(super) struct Ipm<'a> {
    problem: &'a SdpProblem,
    blocks: &'a [Block],
    m: usize,
    /// Row-normalized constraints: `A'_i = f_i A_i`, `b'_i = f_i b_i`.
    rows: Vec<SymMatrix>,
    b: Vec<f64>,
    factor: Vec<f64>,
    c: Vec<BlockMat>,
    psd_terms: Vec<Vec<PsdTerm>>,
    diag_cols: Vec<Vec<Vec<(usize, f64)>>>,
}

struct Iterate {
    x: Vec<BlockMat>,
    y: Vec<f64>,
    s: Vec<BlockMat>,
}

impl Clone for Iterate {
    fn clone(&self) -> Self {
        Iterate {
            x: self.x.clone(),
            y: self.y.clone(),
            s: self.s.clone(),
        }
    }
}

fn inner(a: &[BlockMat], b: &[BlockMat]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| match (p, q) {
            (BlockMat::Dense(p), BlockMat::Dense(q)) => {
                let n = p.nrows();
                let mut acc = 0.0;
                for j in 0..n {
                    for i in 0..n {
                        acc += p[(i, j)] * q[(i, j)];
                    }
                }
                acc
            }
            (BlockMat::Diag(p), BlockMat::Diag(q)) => p.iter().zip(q).map(|(a, b)| a * b).sum(),
            _ => unreachable!("block kinds agree"),
        })
        .sum()
}

fn norm(a: &[BlockMat]) -> f64 {
    inner(a, a).sqrt()
}

/// `a + alpha * b`
fn axpy(a: &[BlockMat], alpha: f64, b: &[BlockMat]) -> Vec<BlockMat> {
    a.iter()
        .zip(b)
        .map(|(p, q)| match (p, q) {
            (BlockMat::Dense(p), BlockMat::Dense(q)) => {
                BlockMat::Dense(Mat::from_fn(p.nrows(), p.ncols(), |i, j| {
                    p[(i, j)] + alpha * q[(i, j)]
                }))
            }
            (BlockMat::Diag(p), BlockMat::Diag(q)) => {
                BlockMat::Diag(p.iter().zip(q).map(|(a, b)| a + alpha * b).collect())
            }
            _ => unreachable!("block kinds agree"),
        })
        .collect()
}

/// Blockwise `a * b * c`.
fn triple(a: &[BlockMat], b: &[BlockMat], c: &[BlockMat]) -> Vec<BlockMat> {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((a, b), c)| match (a, b, c) {
            (BlockMat::Dense(a), BlockMat::Dense(b), BlockMat::Dense(c)) => {
                BlockMat::Dense(a * (b * c))
            }
            (BlockMat::Diag(a), BlockMat::Diag(b), BlockMat::Diag(c)) => BlockMat::Diag(
                a.iter()
                    .zip(b)
                    .zip(c)
                    .map(|((a, b), c)| a * b * c)
                    .collect(),
            ),
            _ => unreachable!("block kinds agree"),
        })
        .collect()
}

fn symmetrize(a: &mut [BlockMat]) {
    for blk in a {
        if let BlockMat::Dense(m) = blk {
            let n = m.nrows();
            for j in 0..n {
                for i in j + 1..n {
                    let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
        }
    }
}

fn scaled_identity(blocks: &[Block], scale: &[f64]) -> Vec<BlockMat> {
    blocks
        .iter()
        .zip(scale)
        .map(|(b, &s)| match *b {
            Block::Psd(n) => {
                BlockMat::Dense(Mat::from_fn(n, n, |i, j| if i == j { s } else { 0.0 }))
            }
            Block::Diag(n) => BlockMat::Diag(vec![s; n]),
        })
        .collect()
}

fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest `alpha` with `x + alpha * dx` still positive semidefinite
/// (`f64::INFINITY` when unbounded); `None` if `x` is not positive definite.
fn max_step(x: &[BlockMat], dx: &[BlockMat]) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        match (xb, db) {
            (BlockMat::Dense(xm), BlockMat::Dense(dm)) => {
                let llt = xm.llt(Side::Lower).ok()?;
                let l = llt.L();
                let mut t = dm.clone();
                solve_lower_triangular_in_place(l, t.as_mut(), Par::Seq);
                let mut u = t.transpose().to_owned();
                solve_lower_triangular_in_place(l, u.as_mut(), Par::Seq);
                let n = u.nrows();
                let sym = Mat::from_fn(n, n, |i, j| 0.5 * (u[(i, j)] + u[(j, i)]));
                let lam = sym.self_adjoint_eigenvalues(Side::Lower).ok()?;
                let lmin = lam[0];
                if lmin < 0.0 {
                    alpha = alpha.min(-1.0 / lmin);
                }
            }
            (BlockMat::Diag(xv), BlockMat::Diag(dv)) => {
                for (a, d) in xv.iter().zip(dv) {
                    if *a <= 0.0 {
                        return None;
                    }
                    if *d < 0.0 {
                        alpha = alpha.min(-a / d);
                    }
                }
            }
            _ => unreachable!("block kinds agree"),
        }
    }
    Some(alpha)
}

fn inverse(s: &[BlockMat]) -> Option<Vec<BlockMat>> {
    s.iter()
        .map(|b| match b {
            BlockMat::Dense(m) => {
                let llt = m.llt(Side::Lower).ok()?;
                let mut inv = llt.inverse();
                let n = inv.nrows();
                for j in 0..n {
                    for i in j + 1..n {
                        let v = 0.5 * (inv[(i, j)] + inv[(j, i)]);
                        inv[(i, j)] = v;
                        inv[(j, i)] = v;
                    }
                }
                Some(BlockMat::Dense(inv))
            }
            BlockMat::Diag(d) => {
                if d.iter().any(|&v| v <= 0.0) {
                    None
                } else {
                    Some(BlockMat::Diag(d.iter().map(|v| 1.0 / v).collect()))
                }
            }
        })
        .collect()
}

fn all_finite(a: &[BlockMat]) -> bool {
    a.iter().all(|b| match b {
        BlockMat::Dense(m) => {
            (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].is_finite()))
        }
        BlockMat::Diag(d) => d.iter().all(|v| v.is_finite()),
    })
}

impl<'a> Ipm<'a> {
    pub(super) fn new(problem: &'a SdpProblem) -> Self {
        let blocks = &problem.blocks[..];
        let m = problem.constraints.len();
        let mut rows = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        let mut factor = Vec::with_capacity(m);
        for con in &problem.constraints {
            let mut a = con.a.clone();
            a.canonicalize();
            let nrm = a.frobenius();
            let f = if nrm > 0.0 { 1.0 / nrm } else { 1.0 };
            rows.push(a.scaled(f));
            b.push(con.b * f);
            factor.push(f);
        }
        let mut obj = problem.objective.clone();
        obj.canonicalize();
        let c = obj.to_dense(blocks);

        let mut psd_terms: Vec<Vec<PsdTerm>> = blocks.iter().map(|_| Vec::new()).collect();
        let mut diag_cols: Vec<Vec<Vec<(usize, f64)>>> = blocks
            .iter()
            .map(|blk| match *blk {
                Block::Psd(_) => Vec::new(),
                Block::Diag(n) => vec![Vec::new(); n],
            })
            .collect();
        for (i, row) in rows.iter().enumerate() {
            for &(k, p, q, v) in row.entries() {
                match blocks[k] {
                    Block::Psd(_) => {
                        let terms = &mut psd_terms[k];
                        if terms.last().map(|t| t.con) != Some(i) {
                            terms.push(PsdTerm {
                                con: i,
                                full: Vec::new(),
                            });
                        }
                        let t = terms.last_mut().expect("just pushed");
                        t.full.push((p, q, v));
                        if p != q {
                            t.full.push((q, p, v));
                        }
                    }
                    Block::Diag(_) => diag_cols[k][p].push((i, v)),
                }
            }
        }
        Ipm {
            problem,
            blocks,
            m,
            rows,
            b,
            factor,
            c,
            psd_terms,
            diag_cols,
        }
    }

    fn a_apply(&self, z: &[BlockMat]) -> Vec<f64> {
        self.rows.iter().map(|r| r.dot(z)).collect()
    }

    fn a_adjoint(&self, y: &[f64]) -> Vec<BlockMat> {
        let mut out = BlockMat::zeros(self.blocks);
        for (row, &yi) in self.rows.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for &(k, p, q, v) in row.entries() {
                match &mut out[k] {
                    BlockMat::Dense(mm) => {
                        mm[(p, q)] += yi * v;
                        if p != q {
                            mm[(q, p)] += yi * v;
                        }
                    }
                    BlockMat::Diag(d) => d[p] += yi * v,
                }
            }
        }
        out
    }

    fn initial_point(&self) -> Iterate {
        let mut xi = Vec::new();
        let mut eta = Vec::new();
        for (k, blk) in self.blocks.iter().enumerate() {
            let n = blk.size() as f64;
            let mut a_norms = vec![0.0f64; self.m];
            for (i, row) in self.rows.iter().enumerate() {
                a_norms[i] = row
                    .entries()
                    .iter()
                    .filter(|e| e.0 == k)
                    .map(|&(_, p, q, v)| if p == q { v * v } else { 2.0 * v * v })
                    .sum::<f64>()
                    .sqrt();
            }
            let ratio = self
                .b
                .iter()
                .zip(&a_norms)
                .map(|(b, a)| (1.0 + b.abs()) / (1.0 + a))
                .fold(0.0f64, f64::max);
            let c_norm = norm(std::slice::from_ref(&self.c[k]));
            let a_max = a_norms.iter().copied().fold(0.0f64, f64::max);
            xi.push(10f64.max(n.sqrt()).max(n * ratio));
            eta.push(10f64.max(n.sqrt()).max(c_norm).max(a_max));
        }
        Iterate {
            x: scaled_identity(self.blocks, &xi),
            y: vec![0.0; self.m],
            s: scaled_identity(self.blocks, &eta),
        }
    }

    /// Schur complement `M_ij = <A_i, X A_j S^{-1}>`.
    fn schur(&self, x: &[BlockMat], sinv: &[BlockMat]) -> Mat<f64> {
        let m = self.m;
        let mut mm = Mat::<f64>::zeros(m, m);
        let add = |mm: &mut Mat<f64>, i: usize, j: usize, v: f64| {
            mm[(i, j)] += v;
            if i != j {
                mm[(j, i)] += v;
            }
        };
        for k in 0..self.blocks.len() {
            match (&x[k], &sinv[k]) {
                (BlockMat::Dense(xm), BlockMat::Dense(zm)) => {
                    let n = xm.nrows();
                    let xv: Vec<f64> = (0..n * n).map(|t| xm[(t / n, t % n)]).collect();
                    let zv: Vec<f64> = (0..n * n).map(|t| zm[(t / n, t % n)]).collect();
                    let terms = &self.psd_terms[k];
                    let mut prefix = vec![0usize; terms.len() + 1];
                    for (t, term) in terms.iter().enumerate() {
                        prefix[t + 1] = prefix[t] + term.full.len();
                    }
                    for (jj, tj) in terms.iter().enumerate() {
                        let nnz = tj.full.len();
                        let pair_cost = nnz * prefix[jj + 1];
                        let build_cost = (nnz * n * n).min(2 * n * n * n);
                        if pair_cost <= build_cost + prefix[jj + 1] {
                            for ti in &terms[..=jj] {
                                let mut acc = 0.0;
                                for &(p, q, a) in &ti.full {
                                    let xrow = &xv[q * n..q * n + n];
                                    let zrow = &zv[p * n..p * n + n];
                                    let mut part = 0.0;
                                    for &(r, s, b) in &tj.full {
                                        part += b * xrow[r] * zrow[s];
                                    }
                                    acc += a * part;
                                }
                                add(&mut mm, ti.con, tj.con, acc);
                            }
                        } else {
                            // W = X A_j S^{-1}
                            let w = if nnz * n * n <= 2 * n * n * n {
                                let mut w = vec![0.0; n * n];
                                for &(r, s, b) in &tj.full {
                                    for alpha in 0..n {
                                        let xa = b * xv[alpha * n + r];
                                        if xa == 0.0 {
                                            continue;
                                        }
                                        let zrow = &zv[s * n..s * n + n];
                                        let wrow = &mut w[alpha * n..alpha * n + n];
                                        for (wv, zvv) in wrow.iter_mut().zip(zrow) {
                                            *wv += xa * zvv;
                                        }
                                    }
                                }
                                w
                            } else {
                                let mut a = Mat::<f64>::zeros(n, n);
                                for &(r, s, b) in &tj.full {
                                    a[(r, s)] += b;
                                }
                                let wm = xm * (&a * zm);
                                (0..n * n).map(|t| wm[(t / n, t % n)]).collect()
                            };
                            for ti in &terms[..=jj] {
                                let acc: f64 =
                                    ti.full.iter().map(|&(p, q, a)| a * w[q * n + p]).sum();
                                add(&mut mm, ti.con, tj.con, acc);
                            }
                        }
                    }
                }
                (BlockMat::Diag(xd), BlockMat::Diag(zd)) => {
                    for (p, col) in self.diag_cols[k].iter().enumerate() {
                        let w = xd[p] * zd[p];
                        for (t, &(i, ai)) in col.iter().enumerate() {
                            for &(j, aj) in &col[..=t] {
                                add(&mut mm, i, j, ai * aj * w);
                            }
                        }
                    }
                }
                _ => unreachable!("block kinds agree"),
            }
        }
        mm
    }

    /// Solves the Newton system for a given `R S^{-1}` right-hand side.
    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        chol: &SchurFactor,
        x: &[BlockMat],
        sinv: &[BlockMat],
        rp: &[f64],
        rd: &[BlockMat],
        rsinv: &[BlockMat],
    ) -> (Vec<f64>, Vec<BlockMat>, Vec<BlockMat>) {
        let a1 = self.a_apply(rsinv);
        let a2 = self.a_apply(&triple(x, rd, sinv));
        let rhs: Vec<f64> = (0..self.m).map(|i| rp[i] - a1[i] + a2[i]).collect();
        let mut dy = chol.solve(&rhs);
        let step = |dy: &[f64]| {
            let ds = axpy(rd, -1.0, &self.a_adjoint(dy));
            let mut dx = axpy(rsinv, -1.0, &triple(x, &ds, sinv));
            symmetrize(&mut dx);
            (ds, dx)
        };
        let (mut ds, mut dx) = step(&dy);
        // Refine against the operator itself: near the optimum the assembled
        // Schur matrix drifts from `dy -> A(dX)` and the step would leave the
        // affine space `A(X) = b`.
        for _ in 0..OPERATOR_REFINEMENT_STEPS {
            let adx = self.a_apply(&dx);
            let err: Vec<f64> = rp.iter().zip(&adx).map(|(r, a)| r - a).collect();
            if vnorm(&err) <= f64::EPSILON * (1.0 + vnorm(rp)) {
                break;
            }
            let fix = chol.solve(&err);
            for (d, f) in dy.iter_mut().zip(&fix) {
                *d += f;
            }
            (ds, dx) = step(&dy);
        }
        (dy, dx, ds)
    }

    fn finish(&self, it: Iterate, status: SolveStatus, iterations: usize) -> SdpSolution {
        let y: Vec<f64> = it.y.iter().zip(&self.factor).map(|(y, f)| y * f).collect();
        let primal_value = self.problem.objective.dot(&it.x);
        let dual_value: f64 = self.problem.constraints.iter().zip(&y).map(|(c, y)| c.b * y).sum();
        let b_norm = vnorm(&self.problem.constraints.iter().map(|c| c.b).collect::<Vec<_>>());
        let rp: Vec<f64> = self
            .problem
            .constraints
            .iter()
            .map(|c| c.b - c.a.dot(&it.x))
            .collect();
        let aty = self.a_adjoint(&it.y);
        let rd = axpy(&axpy(&self.c, -1.0, &it.s), -1.0, &aty);
        SdpSolution {
            status,
            primal_value,
            dual_value,
            gap: (primal_value - dual_value).abs() / (1.0 + primal_value.abs()),
            primal_residual: vnorm(&rp) / (1.0 + b_norm),
            dual_residual: norm(&rd) / (1.0 + norm(&self.c)),
            x: it.x,
            s: it.s,
            y,
            iterations,
        }
    }

    pub(super) fn run(&self, opts: &SolveOptions) -> SdpSolution {
        let tol = opts.tol;
        let mut it = self.initial_point();
        let n_total: f64 = self.blocks.iter().map(|b| b.size() as f64).sum();
        let b_norm = vnorm(&self.b);
        let orig_b_norm = vnorm(&self.problem.constraints.iter().map(|c| c.b).collect::<Vec<_>>());
        let c_norm = norm(&self.c);
        let mut best: Option<(f64, Iterate)> = None;
        let mut stalls = 0;

        for iter in 0..=opts.max_iters {
            if !all_finite(&it.x) || !all_finite(&it.s) || it.y.iter().any(|v| !v.is_finite()) {
                return self.fail(best, it, SolveStatus::NumericalFailure, iter);
            }
            let ax = self.a_apply(&it.x);
            let rp: Vec<f64> = self.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
            let aty = self.a_adjoint(&it.y);
            let rd = axpy(&axpy(&self.c, -1.0, &it.s), -1.0, &aty);
            let pobj = inner(&self.c, &it.x);
            let dobj: f64 = self.b.iter().zip(&it.y).map(|(b, y)| b * y).sum();
            let pinf = vnorm(&rp) / (1.0 + b_norm);
            let orig_pinf = vnorm(
                &rp.iter()
                    .zip(&self.factor)
                    .map(|(r, f)| r / f)
                    .collect::<Vec<_>>(),
            ) / (1.0 + orig_b_norm);
            let dinf = norm(&rd) / (1.0 + c_norm);
            let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
            let merit = pinf.max(orig_pinf).max(dinf).max(gap);
            log::trace!(
                "iter {iter}: pobj {pobj:.10e} dobj {dobj:.10e} pinf {pinf:.2e} dinf {dinf:.2e} gap {gap:.2e}"
            );
            if best.as_ref().is_none_or(|(m, _)| merit < *m) {
                best = Some((merit, it.clone()));
            }
            if pinf <= tol && orig_pinf <= tol && dinf <= tol && gap <= tol {
                return self.finish(it, SolveStatus::Optimal, iter);
            }
            if dobj > 0.0 && norm(&axpy(&self.c, -1.0, &rd)) <= tol * dobj {
                return self.finish(it, SolveStatus::PrimalInfeasible, iter);
            }
            if pobj < 0.0 && vnorm(&ax) <= tol * (-pobj) {
                return self.finish(it, SolveStatus::DualInfeasible, iter);
            }
            if iter == opts.max_iters {
                return self.fail(best, it, SolveStatus::IterLimit, iter);
            }

            let Some(sinv) = inverse(&it.s) else {
                return self.fail(best, it, SolveStatus::NumericalFailure, iter);
            };
            let Some(chol) = SchurFactor::new(self.schur(&it.x, &sinv)) else {
                return self.fail(best, it, SolveStatus::NumericalFailure, iter);
            };
            let mu = inner(&it.x, &it.s) / n_total;

            // predictor
            let neg_x: Vec<BlockMat> = axpy(&it.x, -2.0, &it.x);
            let (_, dxa, dsa) = self.direction(&chol, &it.x, &sinv, &rp, &rd, &neg_x);
            let (Some(ap), Some(ad)) = (max_step(&it.x, &dxa), max_step(&it.s, &dsa)) else {
                return self.fail(best, it, SolveStatus::NumericalFailure, iter);
            };
            let (ap, ad) = (ap.min(1.0), ad.min(1.0));
            let mu_aff = inner(&axpy(&it.x, ap, &dxa), &axpy(&it.s, ad, &dsa)) / n_total;
            let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

            // corrector
            let corr = triple(&dxa, &dsa, &sinv);
            let rsinv = axpy(&axpy(&it.x, -2.0, &it.x), -1.0, &corr);
            let rsinv = axpy(&rsinv, sigma * mu, &sinv);
            let (dy, dx, ds) = self.direction(&chol, &it.x, &sinv, &rp, &rd, &rsinv);
            let (Some(ap_max), Some(ad_max)) = (max_step(&it.x, &dx), max_step(&it.s, &ds)) else {
                return self.fail(best, it, SolveStatus::NumericalFailure, iter);
            };
            let gamma = 0.9 + 0.09 * ap.min(ad);
            let ap = (gamma * ap_max).min(1.0);
            let ad = (gamma * ad_max).min(1.0);
            if ap < 1e-10 && ad < 1e-10 {
                stalls += 1;
                if stalls >= 3 {
                    return self.fail(best, it, SolveStatus::NumericalFailure, iter);
                }
            } else {
                stalls = 0;
            }
            it.x = axpy(&it.x, ap, &dx);
            it.s = axpy(&it.s, ad, &ds);
            for (y, d) in it.y.iter_mut().zip(&dy) {
                *y += ad * d;
            }
        }
        unreachable!("loop returns at max_iters")
    }

    fn fail(
        &self,
        best: Option<(f64, Iterate)>,
        current: Iterate,
        status: SolveStatus,
        iter: usize,
    ) -> SdpSolution {
        let it = best.map(|(_, b)| b).unwrap_or(current);
        self.finish(it, status, iter)
    }
}

/// Cholesky factor of the Schur complement with diagonal regularization
/// as a fallback for rank-deficient systems. Solves are refined against
/// the unregularized matrix, which keeps `A dX = r_p` accurate near the
/// optimum where the system is badly conditioned.
struct SchurFactor {
    mm: Mat<f64>,
    llt: Option<faer::linalg::solvers::Llt<f64>>,
}

const REFINEMENT_STEPS: usize = 2;
const OPERATOR_REFINEMENT_STEPS: usize = 2;

impl SchurFactor {
    fn new(mm: Mat<f64>) -> Option<Self> {
        let m = mm.nrows();
        if m == 0 {
            return Some(SchurFactor { mm, llt: None });
        }
        if let Ok(llt) = mm.llt(Side::Lower) {
            return Some(SchurFactor { mm, llt: Some(llt) });
        }
        let dmax = (0..m).map(|i| mm[(i, i)].abs()).fold(0.0f64, f64::max).max(1e-300);
        let mut delta = 1e-13 * dmax;
        let mut reg = mm.clone();
        let mut added = 0.0;
        for _ in 0..8 {
            for i in 0..m {
                reg[(i, i)] += delta - added;
            }
            added = delta;
            if let Ok(llt) = reg.llt(Side::Lower) {
                return Some(SchurFactor { mm, llt: Some(llt) });
            }
            delta *= 100.0;
        }
        None
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let Some(llt) = &self.llt else {
            return Vec::new();
        };
        let m = rhs.len();
        let b = Mat::from_fn(m, 1, |i, _| rhs[i]);
        let mut x = b.clone();
        faer::linalg::solvers::Solve::solve_in_place(llt, x.as_mut());
        for _ in 0..REFINEMENT_STEPS {
            let mut r = &b - &self.mm * &x;
            faer::linalg::solvers::Solve::solve_in_place(llt, r.as_mut());
            x += &r;
        }
        (0..m).map(|i| x[(i, 0)]).collect()
    }
}
