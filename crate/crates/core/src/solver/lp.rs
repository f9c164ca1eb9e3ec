//! Linear programs in equality form, solved as a single diagonal block.

use super::{solve, Block, SdpProblem, SolveOptions, SolveStatus, SymMatrix};
use crate::error::{Error, Result};

/// `min c·x` s.t. `A x = b`, `x >= 0`, with `A` given as sparse rows.
#[derive(Clone, Debug, Default)]
pub struct LpProblem {
    pub c: Vec<f64>,
    pub rows: Vec<Vec<(usize, f64)>>,
    pub b: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: SolveStatus,
    pub value: f64,
    pub dual_value: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub gap: f64,
}

pub fn solve_lp(lp: &LpProblem, opts: &SolveOptions) -> Result<LpSolution> {
    let n = lp.c.len();
    if n == 0 {
        return Err(Error::InvalidProblem("LP without variables".into()));
    }
    if lp.rows.len() != lp.b.len() {
        return Err(Error::Shape(format!(
            "{} rows but {} right-hand sides",
            lp.rows.len(),
            lp.b.len()
        )));
    }
    let mut prob = SdpProblem::new(vec![Block::Diag(n)]);
    for (j, &cj) in lp.c.iter().enumerate() {
        if cj != 0.0 {
            prob.objective.add(0, j, j, cj);
        }
    }
    for (row, &bi) in lp.rows.iter().zip(&lp.b) {
        let mut a = SymMatrix::new();
        for &(j, v) in row {
            if j >= n {
                return Err(Error::InvalidProblem(format!("LP row uses column {j} of {n}")));
            }
            a.add(0, j, j, v);
        }
        a.canonicalize();
        prob.add_constraint(a, bi);
    }
    let sol = solve(&prob, opts)?;
    let x = sol.x[0].as_diag().expect("diagonal block").to_vec();
    Ok(LpSolution {
        status: sol.status,
        value: sol.primal_value,
        dual_value: sol.dual_value,
        x,
        y: sol.y,
        gap: sol.gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_sum() {
        let lp = LpProblem {
            c: vec![1.0, 1.0],
            rows: vec![vec![(0, 1.0), (1, 1.0)]],
            b: vec![1.0],
        };
        let s = solve_lp(&lp, &SolveOptions::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn lower_bound_via_slack() {
        // min x s.t. x - s = 1, x, s >= 0
        let lp = LpProblem {
            c: vec![1.0, 0.0],
            rows: vec![vec![(0, 1.0), (1, -1.0)]],
            b: vec![1.0],
        };
        let s = solve_lp(&lp, &SolveOptions::default()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn infeasible_detected() {
        let lp = LpProblem {
            c: vec![0.0],
            rows: vec![vec![(0, 1.0)]],
            b: vec![-1.0],
        };
        let s = solve_lp(&lp, &SolveOptions::default()).unwrap();
        assert_eq!(s.status, SolveStatus::PrimalInfeasible);
    }

    #[test]
    fn unbounded_detected() {
        // min -x1 s.t. x1 - x2 = 0
        let lp = LpProblem {
            c: vec![-1.0, 0.0],
            rows: vec![vec![(0, 1.0), (1, -1.0)]],
            b: vec![0.0],
        };
        let s = solve_lp(&lp, &SolveOptions::default()).unwrap();
        assert_eq!(s.status, SolveStatus::DualInfeasible);
    }

    #[test]
    fn fractional_coloring_of_triangle() {
        // independent sets of K3 are the singletons: min Σw s.t. w_v - s_v = 1
        let lp = LpProblem {
            c: vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0],
            rows: (0..3).map(|v| vec![(v, 1.0), (3 + v, -1.0)]).collect(),
            b: vec![1.0; 3],
        };
        let s = solve_lp(&lp, &SolveOptions::default()).unwrap();
        assert!((s.value - 3.0).abs() < 1e-7);
    }
}
