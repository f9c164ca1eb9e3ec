use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn opts() -> SolveOptions {
    SolveOptions::default()
}

#[test]
fn slack_lower_bound() {
    // min x s.t. x - s = 1 on a 2-entry diagonal block
    let mut p = SdpProblem::new(vec![Block::Diag(2)]);
    p.objective.add(0, 0, 0, 1.0);
    let mut a = SymMatrix::new();
    a.add(0, 0, 0, 1.0);
    a.add(0, 1, 1, -1.0);
    p.add_constraint(a, 1.0);
    let s = solve(&p, &opts()).unwrap();
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.primal_value - 1.0).abs() < 1e-7);
}

#[test]
fn forced_identity() {
    let mut p = SdpProblem::new(vec![Block::Psd(2)]);
    p.objective.add(0, 0, 0, 1.0);
    p.objective.add(0, 1, 1, 1.0);
    for i in 0..2 {
        let mut a = SymMatrix::new();
        a.add(0, i, i, 1.0);
        p.add_constraint(a, 1.0);
    }
    let s = solve(&p, &opts()).unwrap();
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.primal_value - 2.0).abs() < 1e-7);
    let x = s.x[0].as_dense().unwrap();
    assert!((x[(0, 0)] - 1.0).abs() < 1e-6 && x[(0, 1)].abs() < 1e-6);
    assert!(s.gap <= 1e-8 && s.primal_residual <= 1e-8 && s.dual_residual <= 1e-8);
}

/// Lovász theta as `min -<J, X>` s.t. `tr X = 1`, `X_ij = 0` on edges.
fn theta_problem(n: usize, edges: &[(usize, usize)]) -> SdpProblem {
    let mut p = SdpProblem::new(vec![Block::Psd(n)]);
    for i in 0..n {
        for j in i..n {
            p.objective.add(0, i, j, -1.0);
        }
    }
    let mut tr = SymMatrix::new();
    for i in 0..n {
        tr.add(0, i, i, 1.0);
    }
    p.add_constraint(tr, 1.0);
    for &(u, v) in edges {
        let mut a = SymMatrix::new();
        a.add_entry_functional(0, u, v, 1.0);
        p.add_constraint(a, 0.0);
    }
    p
}

/// `min over free edge entries of lambda_max(A)`, `A = 1` off edges, by grid search.
fn theta_grid(n: usize, edges: &[(usize, usize)]) -> f64 {
    let grid: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.1).collect();
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; edges.len()];
    loop {
        let mut a = Mat::from_fn(n, n, |_, _| 1.0);
        for (e, &(u, v)) in edges.iter().enumerate() {
            a[(u, v)] = grid[idx[e]];
            a[(v, u)] = grid[idx[e]];
        }
        let lam = a.self_adjoint_eigenvalues(Side::Lower).unwrap();
        best = best.min(lam[n - 1]);
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            return best;
        }
    }
}

#[test]
fn theta_on_empty_and_complete() {
    for n in 1..=5 {
        let s = solve(&theta_problem(n, &[]), &opts()).unwrap();
        assert!((-s.primal_value - n as f64).abs() < 1e-6, "empty {n}");
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let s = solve(&theta_problem(n, &edges), &opts()).unwrap();
        assert!((-s.primal_value - 1.0).abs() < 1e-6, "complete {n}");
        if n <= 3 {
            assert!((theta_grid(n, &edges) - 1.0).abs() < 1e-9);
            assert!((theta_grid(n, &[]) - n as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn infeasible_and_invalid() {
    let mut p = SdpProblem::new(vec![Block::Diag(1)]);
    let mut a = SymMatrix::new();
    a.add(0, 0, 0, 1.0);
    p.add_constraint(a, -1.0);
    assert_eq!(solve(&p, &opts()).unwrap().status, SolveStatus::PrimalInfeasible);

    let mut bad = SdpProblem::new(vec![Block::Diag(2)]);
    bad.objective.add(0, 0, 1, 1.0);
    assert!(matches!(solve(&bad, &opts()), Err(Error::InvalidProblem(_))));
    let mut bad = SdpProblem::new(vec![Block::Psd(2)]);
    bad.objective.add(0, 0, 2, 1.0);
    assert!(bad.validate().is_err());
    let mut bad = SdpProblem::new(vec![Block::Psd(2)]);
    bad.add_constraint(SymMatrix::new(), f64::NAN);
    assert!(bad.validate().is_err());
}

#[test]
fn psd_cone_infeasible() {
    // X_11 = -1 in a 2x2 PSD block
    let mut p = SdpProblem::new(vec![Block::Psd(2)]);
    let mut a = SymMatrix::new();
    a.add(0, 0, 0, 1.0);
    p.add_constraint(a, -1.0);
    assert_eq!(solve(&p, &opts()).unwrap().status, SolveStatus::PrimalInfeasible);
}

#[test]
fn iteration_limit_reports_best_iterate() {
    let p = theta_problem(4, &[(0, 1), (1, 2), (2, 3)]);
    let s = solve(
        &p,
        &SolveOptions {
            tol: 1e-8,
            max_iters: 2,
        },
    )
    .unwrap();
    assert_eq!(s.status, SolveStatus::IterLimit);
    assert!(s.primal_value.is_finite());
}

pub(crate) fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Mat<f64> {
    let g = Mat::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let sym = Mat::from_fn(n, n, |i, j| g[(i, j)] + g[(j, i)]);
    sym.self_adjoint_eigen(Side::Lower).unwrap().U().to_owned()
}

/// Random SDP with a planted primal-dual optimal pair satisfying strict
/// complementarity. Returns the problem and its optimal value.
pub(crate) fn planted_sdp(seed: u64) -> (SdpProblem, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = [rng.random_range(2..7), rng.random_range(1..5)];
    let diag = rng.random_range(1..5);
    let mut blocks: Vec<Block> = sizes.iter().map(|&n| Block::Psd(n)).collect();
    blocks.push(Block::Diag(diag));
    let mut xs = Vec::new();
    let mut ss = Vec::new();
    for &n in &sizes {
        let q = random_orthogonal(n, &mut rng);
        let r = rng.random_range(1..=n);
        let d: Vec<f64> = (0..n)
            .map(|k| if k < r { rng.random_range(0.5..2.0) } else { 0.0 })
            .collect();
        let e: Vec<f64> = (0..n)
            .map(|k| if k < r { 0.0 } else { rng.random_range(0.5..2.0) })
            .collect();
        let build = |w: &[f64]| Mat::from_fn(n, n, |i, j| (0..n).map(|k| q[(i, k)] * w[k] * q[(j, k)]).sum::<f64>());
        xs.push(BlockMat::Dense(build(&d)));
        ss.push(BlockMat::Dense(build(&e)));
    }
    let (xd, sd): (Vec<f64>, Vec<f64>) = (0..diag)
        .map(|_| {
            if rng.random_bool(0.5) {
                (rng.random_range(0.5..2.0), 0.0)
            } else {
                (0.0, rng.random_range(0.5..2.0))
            }
        })
        .unzip();
    xs.push(BlockMat::Diag(xd));
    ss.push(BlockMat::Diag(sd));

    let total: usize = sizes.iter().map(|n| n * (n + 1) / 2).sum::<usize>() + diag;
    let m = rng.random_range(1..=total.min(12));
    let mut p = SdpProblem::new(blocks.clone());
    let mut y = Vec::new();
    let mut c = SymMatrix::new();
    for _ in 0..m {
        let mut a = SymMatrix::new();
        for (k, blk) in blocks.iter().enumerate() {
            match *blk {
                Block::Psd(n) => {
                    for i in 0..n {
                        for j in i..n {
                            a.add(k, i, j, rng.random_range(-1.0..1.0));
                        }
                    }
                }
                Block::Diag(n) => {
                    for i in 0..n {
                        a.add(k, i, i, rng.random_range(-1.0..1.0));
                    }
                }
            }
        }
        let yi: f64 = rng.random_range(-1.0..1.0);
        for &(k, i, j, v) in a.entries() {
            c.add(k, i, j, yi * v);
        }
        let bi = a.dot(&xs);
        p.add_constraint(a, bi);
        y.push(yi);
    }
    for (k, blk) in ss.iter().enumerate() {
        match blk {
            BlockMat::Dense(s) => {
                for i in 0..s.nrows() {
                    for j in i..s.nrows() {
                        c.add(k, i, j, s[(i, j)]);
                    }
                }
            }
            BlockMat::Diag(d) => {
                for (i, v) in d.iter().enumerate() {
                    c.add(k, i, i, *v);
                }
            }
        }
    }
    c.canonicalize();
    p.objective = c;
    let value = p.objective.dot(&xs);
    let dual: f64 = p.constraints.iter().zip(&y).map(|(c, y)| c.b * y).sum();
    assert!((value - dual).abs() < 1e-9);
    (p, value)
}

#[test]
fn planted_optima_recovered() {
    for seed in 0..20 {
        let (p, value) = planted_sdp(seed);
        let s = solve(&p, &opts()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal, "seed {seed}");
        assert!((s.primal_value - value).abs() < 1e-6, "seed {seed}: {} vs {value}", s.primal_value);
        assert!(s.dual_value <= s.primal_value + 10.0 * 1e-8 * (1.0 + value.abs()));
        for blk in &s.x {
            assert!(blk.min_eigenvalue() >= -1e-8);
        }
    }
}

#[test]
fn row_scaling_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for seed in 100..105 {
        let (p, value) = planted_sdp(seed);
        let mut q = p.clone();
        for c in &mut q.constraints {
            let f = 10f64.powf(rng.random_range(-3.0..3.0));
            c.a = c.a.scaled(f);
            c.b *= f;
        }
        let a = solve(&p, &opts()).unwrap();
        let b = solve(&q, &opts()).unwrap();
        assert!((a.primal_value - b.primal_value).abs() < 1e-6);
        assert!((b.primal_value - value).abs() < 1e-6);
    }
}

#[test]
fn sdpa_golden_file() {
    let mut p = SdpProblem::new(vec![Block::Psd(2)]);
    p.objective.add(0, 0, 0, 1.0);
    p.objective.add(0, 1, 1, 1.0);
    let mut a = SymMatrix::new();
    a.add(0, 0, 1, 0.5);
    a.add(0, 0, 0, 1.0);
    p.add_constraint(a, 1.0);
    let golden = "\"min <C,X> s.t. <A_i,X> = b_i, X psd; written with F0 = -C, Fi = A_i\"\n\
1\n\
1\n\
2\n\
1.0000000000000000e0\n\
0 1 1 1 -1.0000000000000000e0\n\
0 1 2 2 -1.0000000000000000e0\n\
1 1 1 1 1.0000000000000000e0\n\
1 1 1 2 5.0000000000000000e-1\n";
    assert_eq!(export_sdpa_sparse(&p), golden);
}

#[test]
fn sdpa_format_rules() {
    let p = SdpProblem::new(vec![Block::Psd(3), Block::Diag(4)]);
    let text = export_sdpa_sparse(&p);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "0");
    assert_eq!(lines[3], "3 -4");
    assert_eq!(parse_sdpa_sparse(&text).unwrap(), p);
    // braces and commas are accepted separators
    let q = parse_sdpa_sparse("1\n1\n{2}\n{1.0}\n0 1 1 1 -1\n1 1 1 1 1\n1 1 2 2 1\n").unwrap();
    assert_eq!(q.blocks, vec![Block::Psd(2)]);
    assert!(parse_sdpa_sparse("1\n1\n2\n1.0\n1 1 3 3 1\n").is_err());
}

#[test]
fn sdpa_round_trip_is_exact_and_solves_identically() {
    for seed in 200..206 {
        let (mut p, _) = planted_sdp(seed);
        p.objective.canonicalize();
        for c in &mut p.constraints {
            c.a.canonicalize();
        }
        let q = parse_sdpa_sparse(&export_sdpa_sparse(&p)).unwrap();
        assert_eq!(p, q, "seed {seed}");
        let a = solve(&p, &opts()).unwrap();
        let b = solve(&q, &opts()).unwrap();
        assert!((a.primal_value - b.primal_value).abs() < 1e-9);
    }
}
