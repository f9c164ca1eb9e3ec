//! Graph parameters bounding the quantum chromatic number from below:
//! `theta'+` of the complement, `xi_SDP`, the fractional chromatic number,
//! and the block LP behind finite-dimensional projective rank.

mod rational;
mod report;

use std::time::Instant;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_cliques, maximal_cliques, maximal_independent_sets, Graph, VertexSet, DEFAULT_CLIQUE_CAP};
use crate::solver::{solve_lp, AffineRow, AffineSym, LmiProblem, LpProblem, SolveOptions, SolveStatus};

pub use rational::approximate as rational_approximation;
pub use report::{parameter_table, ParamEntry, ParameterReport, TableOptions};

/// Largest denominator tried when reconstructing `chi_f`.
pub const CHI_F_MAX_DENOMINATOR: i64 = 64;
/// Largest denominator tried for block-LP weights.
pub const BLOCK_LP_MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CliqueFamily {
    /// Maximal cliques only; the constraints of smaller cliques are implied.
    #[default]
    MaximalOnly,
    AllCliques,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamOptions {
    pub solver: SolveOptions,
    /// Cap on enumerated cliques or independent sets.
    pub clique_cap: usize,
}

impl Default for ParamOptions {
    fn default() -> Self {
        ParamOptions {
            solver: SolveOptions::default(),
            clique_cap: DEFAULT_CLIQUE_CAP,
        }
    }
}

/// A computed parameter with its solver diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamValue {
    pub value: f64,
    /// Relative primal-dual gap reported by the solver.
    pub gap: f64,
    pub status: SolveStatus,
    pub seconds: f64,
    /// Exact value when it is recognizably rational.
    pub rational: Option<Rational64>,
}

fn require_vertices(g: &Graph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::InvalidArgument("graph has no vertices".into()));
    }
    Ok(())
}

/// Fractional chromatic number from the covering LP over maximal
/// independent sets.
pub fn fractional_chromatic(g: &Graph, opts: &ParamOptions) -> Result<ParamValue> {
    require_vertices(g)?;
    let start = Instant::now();
    let sets = maximal_independent_sets(g, opts.clique_cap)?;
    let n = g.n();
    let k = sets.len();
    // Σ_{S ∋ v} w_S - s_v = 1, w, s >= 0
    let mut rows = vec![Vec::new(); n];
    for (j, s) in sets.iter().enumerate() {
        for v in s.iter() {
            rows[v].push((j, 1.0));
        }
    }
    for (v, row) in rows.iter_mut().enumerate() {
        row.push((k + v, -1.0));
    }
    let mut c = vec![1.0; k];
    c.extend(std::iter::repeat_n(0.0, n));
    let lp = LpProblem { c, rows, b: vec![1.0; n] };
    let sol = solve_lp(&lp, &opts.solver)?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::Solver { status: sol.status });
    }
    Ok(ParamValue {
        value: sol.value,
        gap: sol.gap,
        status: sol.status,
        seconds: start.elapsed().as_secs_f64(),
        rational: rational::approximate(sol.value, CHI_F_MAX_DENOMINATOR, 1e-6),
    })
}

/// `min t` such that some symmetric `Z ⪰ 0` has `Z_vv = t - 1`,
/// `Z_vw = -1` on edges and `Z_vw >= -1` everywhere. Its ceiling is the
/// vector chromatic number.
pub fn theta_plus_bar(g: &Graph, opts: &ParamOptions) -> Result<ParamValue> {
    let start = Instant::now();
    solve_lmi(&theta_plus_bar_problem(g)?, opts, start)
}

/// The LMI behind [`theta_plus_bar`]: variable 0 is `t`, then one variable
/// per non-edge in [`Graph::non_edges`] order.
pub fn theta_plus_bar_problem(g: &Graph) -> Result<LmiProblem> {
    require_vertices(g)?;
    let n = g.n();
    let non_edges = g.non_edges();
    let mut lmi = LmiProblem::new(1 + non_edges.len());
    lmi.objective[0] = 1.0;
    let mut z = AffineSym::new(n);
    for v in 0..n {
        z.add_term(0, v, v, 1.0);
        z.add_constant(v, v, -1.0);
    }
    for (u, v) in g.edges() {
        z.add_constant(u, v, -1.0);
    }
    for (k, &(u, v)) in non_edges.iter().enumerate() {
        z.add_term(k + 1, u, v, 1.0);
        lmi.rows.push(AffineRow {
            constant: 1.0,
            coeffs: vec![(k + 1, 1.0)],
        });
    }
    lmi.psd.push(z);
    Ok(lmi)
}

fn solve_lmi(lmi: &LmiProblem, opts: &ParamOptions, start: Instant) -> Result<ParamValue> {
    let sol = lmi.solve(&opts.solver)?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::Solver { status: sol.status });
    }
    Ok(ParamValue {
        value: sol.value,
        gap: sol.sdp.gap,
        status: sol.status,
        seconds: start.elapsed().as_secs_f64(),
        rational: None,
    })
}

/// Entry `Y_vw` of the `xi_SDP` matrix as an affine function of the
/// variables: `Some(var)` for non-edges, else a constant.
fn y_entry(g: &Graph, var_of: &[Vec<Option<usize>>], v: usize, w: usize) -> std::result::Result<usize, f64> {
    if v == w {
        Err(1.0)
    } else if g.has_edge(v, w) {
        Err(0.0)
    } else {
        Ok(var_of[v.min(w)][v.max(w)].expect("non-edge has a variable"))
    }
}

/// `xi_SDP`: minimal `Y_00` over the clique-constrained positive
/// semidefinite relaxation. Variable 0 is `Y_00`; one variable per non-edge.
pub fn xi_sdp(g: &Graph, family: CliqueFamily, opts: &ParamOptions) -> Result<ParamValue> {
    let start = Instant::now();
    solve_lmi(&xi_sdp_problem(g, family, opts.clique_cap)?, opts, start)
}

/// The LMI behind [`xi_sdp`], with at most `clique_cap` enumerated cliques.
pub fn xi_sdp_problem(g: &Graph, family: CliqueFamily, clique_cap: usize) -> Result<LmiProblem> {
    require_vertices(g)?;
    let n = g.n();
    let cliques: Vec<VertexSet> = match family {
        CliqueFamily::MaximalOnly => maximal_cliques(g, clique_cap)?,
        CliqueFamily::AllCliques => all_cliques(g, clique_cap)?,
    };
    let non_edges = g.non_edges();
    let mut var_of = vec![vec![None; n]; n];
    for (k, &(u, v)) in non_edges.iter().enumerate() {
        var_of[u][v] = Some(k + 1);
    }
    let mut lmi = LmiProblem::new(1 + non_edges.len());
    lmi.objective[0] = 1.0;

    let mut y = AffineSym::new(n + 1);
    y.add_term(0, 0, 0, 1.0);
    for v in 0..n {
        y.add_constant(0, v + 1, 1.0);
        y.add_constant(v + 1, v + 1, 1.0);
    }
    for (k, &(u, v)) in non_edges.iter().enumerate() {
        y.add_term(k + 1, u + 1, v + 1, 1.0);
        lmi.rows.push(AffineRow {
            constant: 0.0,
            coeffs: vec![(k + 1, 1.0)],
        });
    }
    lmi.psd.push(y);

    let accumulate = |row: &mut AffineRow, v: usize, w: usize, sign: f64| match y_entry(g, &var_of, v, w) {
        Ok(var) => row.coeffs.push((var, sign)),
        Err(c) => row.constant += sign * c,
    };
    // Σ_{v ∈ S} Y_vw <= 1
    for s in &cliques {
        for w in 0..n {
            let mut row = AffineRow {
                constant: 1.0,
                coeffs: Vec::new(),
            };
            for v in s.iter() {
                accumulate(&mut row, v, w, -1.0);
            }
            lmi.rows.push(row);
        }
    }
    // Y_00 + Σ_{v ∈ S, w ∈ T} Y_vw >= |S| + |T|
    for (a, s) in cliques.iter().enumerate() {
        for t in &cliques[a..] {
            let mut row = AffineRow {
                constant: -((s.len() + t.len()) as f64),
                coeffs: vec![(0, 1.0)],
            };
            for v in s.iter() {
                for w in t.iter() {
                    accumulate(&mut row, v, w, 1.0);
                }
            }
            lmi.rows.push(row);
        }
    }
    Ok(lmi)
}

/// Optimum of the block LP for a block-diagonal projective representation.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockLpResult {
    /// Largest common trace `t`.
    pub value: f64,
    /// Block weights `q_l`.
    pub weights: Vec<f64>,
    /// Exact weights and value when every weight reconstructs and the
    /// constraints hold exactly.
    pub rational_weights: Option<Vec<Rational64>>,
    pub rational_value: Option<Rational64>,
    /// `1 / t`, the induced dimension-over-rank ratio.
    pub ratio: f64,
}

/// `max t` s.t. `Σ_l q_l d_l = 1`, `Σ_l q_l rank_v[l] = t` for every vertex,
/// `q >= 0`. `ranks[v][l]` is the rank of vertex `v`'s projection in block `l`.
pub fn projective_rank_block_lp(dims: &[usize], ranks: &[Vec<usize>], opts: &SolveOptions) -> Result<BlockLpResult> {
    let l = dims.len();
    if l == 0 || ranks.is_empty() {
        return Err(Error::InvalidArgument("need at least one block and one vertex".into()));
    }
    for (v, r) in ranks.iter().enumerate() {
        if r.len() != l {
            return Err(Error::Shape(format!("vertex {v} has {} ranks for {l} blocks", r.len())));
        }
        if let Some(k) = (0..l).find(|&k| r[k] > dims[k]) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v}: rank {} exceeds block dimension {}",
                r[k], dims[k]
            )));
        }
    }
    if dims.contains(&0) {
        return Err(Error::InvalidArgument("block dimensions must be positive".into()));
    }
    // t = Σ q_l r_0l; rows: Σ q d = 1 and Σ q (r_vl - r_0l) = 0
    let mut rows = vec![dims.iter().enumerate().map(|(k, &d)| (k, d as f64)).collect::<Vec<_>>()];
    let mut b = vec![1.0];
    for r in &ranks[1..] {
        let row: Vec<(usize, f64)> = (0..l)
            .map(|k| (k, r[k] as f64 - ranks[0][k] as f64))
            .filter(|e| e.1 != 0.0)
            .collect();
        if !row.is_empty() && !rows.contains(&row) {
            rows.push(row);
            b.push(0.0);
        }
    }
    let lp = LpProblem {
        c: ranks[0].iter().map(|&r| -(r as f64)).collect(),
        rows,
        b,
    };
    let sol = solve_lp(&lp, opts)?;
    match sol.status {
        SolveStatus::Optimal => {}
        SolveStatus::PrimalInfeasible => {
            return Err(Error::Infeasible("rank data admit no common trace".into()))
        }
        status => return Err(Error::Solver { status }),
    }
    let value = -sol.value;
    let rational_weights: Option<Vec<Rational64>> = sol
        .x
        .iter()
        .map(|&q| rational::approximate(q.max(0.0), BLOCK_LP_MAX_DENOMINATOR, 1e-7))
        .collect();
    let exact_t = |q: &[Rational64], r: &[usize]| -> Rational64 {
        q.iter().zip(r).map(|(a, &b)| a * Rational64::from_integer(b as i64)).sum()
    };
    let rational_weights = rational_weights.filter(|q| {
        let total: Rational64 = q.iter().zip(dims).map(|(a, &d)| a * Rational64::from_integer(d as i64)).sum();
        let t0 = exact_t(q, &ranks[0]);
        total == Rational64::from_integer(1) && ranks.iter().all(|r| exact_t(q, r) == t0)
    });
    let rational_value = rational_weights.as_ref().map(|q| exact_t(q, &ranks[0]));
    Ok(BlockLpResult {
        value,
        weights: sol.x,
        rational_value,
        rational_weights,
        ratio: 1.0 / value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{chromatic_number, independence_number};
    use proptest::prelude::*;

    fn opts() -> ParamOptions {
        ParamOptions::default()
    }

    /// Largest eigenvalue of `J - I - Σ_edges E` style matrices is avoided:
    /// for K_n the feasible Z is `(t-1)I - (J - I)`, PSD iff `t >= n`.
    #[test]
    fn theta_complete_graphs() {
        for n in 1..=5 {
            let k = Graph::complete(n).unwrap();
            let t = theta_plus_bar(&k, &opts()).unwrap();
            assert!((t.value - n as f64).abs() < 1e-6, "K{n}: {}", t.value);
        }
    }

    #[test]
    fn theta_eigenvalue_oracle_k3() {
        // Z = tI - J has eigenvalues t - 3, t, t.
        let eig = |t: f64| {
            let z = faer::Mat::from_fn(3, 3, |i, j| if i == j { t - 1.0 } else { -1.0 });
            z.self_adjoint_eigenvalues(faer::Side::Lower).unwrap()[0]
        };
        assert!(eig(3.0).abs() < 1e-12);
        assert!(eig(3.0 - 1e-6) < 0.0);
        let t = theta_plus_bar(&Graph::complete(3).unwrap(), &opts()).unwrap();
        assert!((t.value - 3.0).abs() < 1e-6);
    }

    #[test]
    fn theta_c5_is_sqrt5() {
        let t = theta_plus_bar(&Graph::cycle(5).unwrap(), &opts()).unwrap();
        assert!((t.value - 5f64.sqrt()).abs() < 1e-4, "{}", t.value);
        assert_eq!(t.value.ceil(), 3.0);
    }

    #[test]
    fn theta_edgeless_is_one() {
        let t = theta_plus_bar(&Graph::empty(4), &opts()).unwrap();
        assert!((t.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fractional_values() {
        let c5 = fractional_chromatic(&Graph::cycle(5).unwrap(), &opts()).unwrap();
        assert!((c5.value - 2.5).abs() < 1e-7);
        assert_eq!(c5.rational, Some(Rational64::new(5, 2)));
        for n in 1..=5 {
            let k = fractional_chromatic(&Graph::complete(n).unwrap(), &opts()).unwrap();
            assert_eq!(k.rational, Some(Rational64::from_integer(n as i64)));
        }
        let p = fractional_chromatic(&Graph::petersen(), &opts()).unwrap();
        assert_eq!(p.rational, Some(Rational64::new(5, 2)));
    }

    #[test]
    fn fractional_vertex_transitive_is_n_over_alpha() {
        for g in [
            Graph::cycle(7).unwrap(),
            Graph::cycle(9).unwrap(),
            Graph::kneser(6, 2).unwrap(),
            Graph::cycle(5).unwrap().complement(),
        ] {
            let alpha = independence_number(&g).unwrap();
            let x = fractional_chromatic(&g, &opts()).unwrap();
            assert!((x.value - g.n() as f64 / alpha as f64).abs() < 1e-6, "{}", g.label());
        }
    }

    #[test]
    fn xi_odd_cycles() {
        for (k, expected) in [(5, 2.5), (7, 7.0 / 3.0), (9, 9.0 / 4.0)] {
            let g = Graph::cycle(k).unwrap();
            let xi = xi_sdp(&g, CliqueFamily::MaximalOnly, &opts()).unwrap();
            assert!((xi.value - expected).abs() < 1e-5, "C{k}: {}", xi.value);
        }
    }

    #[test]
    fn xi_complete_graphs() {
        for n in 1..=4 {
            let g = Graph::complete(n).unwrap();
            let xi = xi_sdp(&g, CliqueFamily::MaximalOnly, &opts()).unwrap();
            assert!((xi.value - n as f64).abs() < 1e-5, "K{n}: {}", xi.value);
        }
    }

    #[test]
    fn xi_k2_analytic() {
        // Y = [[y, 1, 1], [1, 1, 0], [1, 0, 1]] is PSD iff y >= 2, and the pair
        // row for S = T = {0, 1} gives y + 2 >= 4.
        let xi = xi_sdp(&Graph::complete(2).unwrap(), CliqueFamily::AllCliques, &opts()).unwrap();
        assert!((xi.value - 2.0).abs() < 1e-6);
    }

    #[test]
    fn sandwich_on_small_graphs() {
        for g in [
            Graph::cycle(5).unwrap(),
            Graph::petersen(),
            Graph::path(4).unwrap(),
            Graph::cycle(6).unwrap(),
            Graph::kneser(5, 2).unwrap().complement(),
        ] {
            let t = theta_plus_bar(&g, &opts()).unwrap().value;
            let xi = xi_sdp(&g, CliqueFamily::MaximalOnly, &opts()).unwrap().value;
            let xf = fractional_chromatic(&g, &opts()).unwrap().value;
            let chi = chromatic_number(&g).unwrap() as f64;
            assert!(t <= xi + 1e-5 && xi <= xf + 1e-5 && xf <= chi + 1e-5, "{}: {t} {xi} {xf} {chi}", g.label());
        }
    }

    #[test]
    fn block_lp_examples() {
        let o = SolveOptions::default();
        let r = projective_rank_block_lp(&[3], &[vec![1], vec![1]], &o).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-8);
        assert_eq!(r.rational_value, Some(Rational64::new(1, 3)));
        assert!((r.ratio - 3.0).abs() < 1e-6);

        let r = projective_rank_block_lp(&[2, 3], &[vec![1, 1]], &o).unwrap();
        assert!((r.value - 0.5).abs() < 1e-8);
        assert_eq!(r.rational_weights, Some(vec![Rational64::new(1, 2), Rational64::from_integer(0)]));

        let err = projective_rank_block_lp(&[3], &[vec![1], vec![2]], &o).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "{err:?}");
        assert!(projective_rank_block_lp(&[2], &[vec![3]], &o).is_err());
        assert!(projective_rank_block_lp(&[2, 2], &[vec![1]], &o).is_err());
    }

    #[test]
    fn block_lp_brute_force_polygon() {
        // Two blocks: the feasible set is a segment; compare with its endpoints.
        let dims = [2usize, 5];
        let ranks = vec![vec![1, 2], vec![1, 2], vec![0, 2]];
        let r = projective_rank_block_lp(&dims, &ranks, &SolveOptions::default()).unwrap();
        // vertex 2 forces q1 = 0, so q2 = 1/5 and t = 2/5
        assert!((r.value - 0.4).abs() < 1e-8);
        assert_eq!(r.rational_value, Some(Rational64::new(2, 5)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn maximal_and_all_cliques_agree(seed in any::<u64>(), n in 2usize..7) {
            let g = crate::graph::random_graph(n, 0.5, seed);
            let a = xi_sdp(&g, CliqueFamily::MaximalOnly, &opts()).unwrap().value;
            let b = xi_sdp(&g, CliqueFamily::AllCliques, &opts()).unwrap().value;
            prop_assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }

        #[test]
        fn xi_monotone_under_adding_edges(seed in any::<u64>(), n in 3usize..7) {
            let g = crate::graph::random_graph(n, 0.4, seed);
            let Some(&(u, v)) = g.non_edges().first() else { return Ok(()); };
            let mut edges = g.edges();
            edges.push((u, v));
            let h = Graph::from_edges(n, &edges).unwrap();
            let a = xi_sdp(&g, CliqueFamily::MaximalOnly, &opts()).unwrap().value;
            let b = xi_sdp(&h, CliqueFamily::MaximalOnly, &opts()).unwrap().value;
            prop_assert!(a <= b + 1e-6, "{a} > {b}");
        }
    }
}
