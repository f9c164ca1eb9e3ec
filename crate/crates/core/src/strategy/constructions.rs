use faer::{c64, Col, Mat};

use super::realization::Realization;
use super::{direct_sum, op_norm};
use crate::error::{Error, Result};
use crate::graph::{is_proper_coloring, Graph};

fn scalar(x: f64) -> Mat<c64> {
    Mat::from_fn(1, 1, |_, _| c64::new(x, 0.0))
}

/// One-dimensional realization with `E_{v,i} = F_{v,i} = [coloring(v) = i]`.
pub fn from_classical_coloring(g: &Graph, coloring: &[usize], c: usize) -> Result<Realization> {
    if coloring.len() != g.n() {
        return Err(Error::Shape(format!("{} colors for {} vertices", coloring.len(), g.n())));
    }
    if let Some(v) = coloring.iter().position(|&x| x >= c) {
        return Err(Error::InvalidArgument(format!("vertex {v} has color {} >= {c}", coloring[v])));
    }
    if !is_proper_coloring(g, coloring) {
        return Err(Error::Precondition("coloring is not proper".into()));
    }
    let fam: Vec<Vec<Mat<c64>>> = coloring
        .iter()
        .map(|&col| (0..c).map(|i| scalar(if i == col { 1.0 } else { 0.0 })).collect())
        .collect();
    Realization::new(fam.clone(), fam, Col::from_fn(1, |_| c64::new(1.0, 0.0)))
}

/// Maximally entangled realization on `C^d ⊗ C^d` from rank-`r`
/// projections with `E_v E_w = 0` on edges. Outcome 0 is
/// `E_v ⊗ I` for Alice and `I ⊗ conj(E_w)` for Bob; outcome 1 is the
/// complement. The state is `d^{-1/2} Σ_k e_k ⊗ e_k`, so every marginal of
/// outcome 0 is `r / d`.
pub fn from_projective_representation(projs: &[Mat<c64>], r: usize, g: &Graph) -> Result<Realization> {
    if projs.len() != g.n() {
        return Err(Error::Shape(format!("{} projections for {} vertices", projs.len(), g.n())));
    }
    let Some(d) = projs.first().map(|p| p.nrows()) else {
        return Err(Error::Shape("no projections".into()));
    };
    const TOL: f64 = 1e-10;
    for (v, p) in projs.iter().enumerate() {
        if p.nrows() != d || p.ncols() != d {
            return Err(Error::Shape(format!("projection {v} is not {d}x{d}")));
        }
        if op_norm(&(p * p - p)) > TOL || op_norm(&(p - p.adjoint())) > TOL {
            return Err(Error::Precondition(format!("operator {v} is not an orthogonal projection")));
        }
        let trace: f64 = (0..d).map(|k| p[(k, k)].re).sum();
        if (trace - r as f64).abs() > 1e-8 {
            return Err(Error::Precondition(format!("projection {v} has rank {trace:.3}, expected {r}")));
        }
    }
    for (v, w) in g.edges() {
        let prod = op_norm(&(&projs[v] * &projs[w]));
        if prod > TOL {
            return Err(Error::Precondition(format!(
                "projections of adjacent vertices {v} and {w} are not orthogonal ({prod:e})"
            )));
        }
    }
    let d2 = Mat::<c64>::identity(d, d);
    let fams: Vec<Vec<Mat<c64>>> = projs.iter().map(|p| vec![p.clone(), &d2 - p]).collect();
    Ok(entangle(&fams, d))
}

/// Maximally entangled realization of PVM families `P_{v,i}` on `C^d`:
/// `E_{v,i} = P_{v,i} ⊗ I`, `F_{v,i} = I ⊗ conj(P_{v,i})`. Requires
/// `P_{v,i} P_{w,i} = 0` on edges for every outcome, so the result is a
/// perfect quantum coloring strategy.
pub fn from_pvm_families(families: &[Vec<Mat<c64>>], g: &Graph) -> Result<Realization> {
    if families.len() != g.n() {
        return Err(Error::Shape(format!("{} families for {} vertices", families.len(), g.n())));
    }
    let Some(d) = families.first().and_then(|f| f.first()).map(|p| p.nrows()) else {
        return Err(Error::Shape("no operators".into()));
    };
    const TOL: f64 = 1e-10;
    let c = families[0].len();
    let id = Mat::<c64>::identity(d, d);
    for (v, fam) in families.iter().enumerate() {
        if fam.len() != c || fam.iter().any(|p| p.nrows() != d || p.ncols() != d) {
            return Err(Error::Shape(format!("family {v} needs {c} operators of size {d}x{d}")));
        }
        let mut sum = Mat::<c64>::zeros(d, d);
        for (i, p) in fam.iter().enumerate() {
            if op_norm(&(p * p - p)) > TOL || op_norm(&(p - p.adjoint())) > TOL {
                return Err(Error::Precondition(format!("P[{v},{i}] is not an orthogonal projection")));
            }
            sum += p;
        }
        if op_norm(&(sum - &id)) > TOL {
            return Err(Error::Precondition(format!("family {v} does not sum to the identity")));
        }
    }
    for (v, w) in g.edges() {
        for i in 0..c {
            let prod = op_norm(&(&families[v][i] * &families[w][i]));
            if prod > TOL {
                return Err(Error::Precondition(format!(
                    "outcome {i} of adjacent vertices {v} and {w} is not orthogonal ({prod:e})"
                )));
            }
        }
    }
    Ok(entangle(families, d))
}

fn entangle(families: &[Vec<Mat<c64>>], d: usize) -> Realization {
    let id = Mat::<c64>::identity(d, d);
    let kron = |a: &Mat<c64>, b: &Mat<c64>| {
        let mut out = Mat::<c64>::zeros(d * d, d * d);
        faer::linalg::kron::kron(out.as_mut(), a.as_ref(), b.as_ref());
        out
    };
    let e = families.iter().map(|fam| fam.iter().map(|p| kron(p, &id)).collect()).collect();
    let f = families
        .iter()
        .map(|fam| fam.iter().map(|p| kron(&id, &p.conjugate().to_owned())).collect())
        .collect();
    let s = 1.0 / (d as f64).sqrt();
    let eta = Col::from_fn(d * d, |k| if k / d == k % d { c64::new(s, 0.0) } else { c64::new(0.0, 0.0) });
    Realization { dim: d * d, e, f, eta }
}

/// Direct sum of `c` cyclically relabeled copies: block `k` of `E~_{v,i}`
/// is `E_{v,(k+i) mod c}`, and the state is `c^{-1/2}` times `c` copies of
/// `eta`. Every marginal becomes `1/c`; vanishing of `L_{G,c}` and
/// synchronicity are preserved.
pub fn symmetrize_marginals(r: &Realization) -> Result<Realization> {
    let c = r.c();
    let relabel = |fam: &Vec<Vec<Mat<c64>>>| -> Vec<Vec<Mat<c64>>> {
        fam.iter()
            .map(|ops| {
                (0..c)
                    .map(|i| direct_sum(&(0..c).map(|k| &ops[(k + i) % c]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect()
    };
    let s = c64::new(1.0 / (c as f64).sqrt(), 0.0);
    let eta = Col::from_fn(r.dim * c, |k| r.eta[k % r.dim] * s);
    Realization::new(relabel(&r.e), relabel(&r.f), eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{correlation_of, verify_realization};

    fn rank_one(v: &[f64]) -> Mat<c64> {
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        Mat::from_fn(v.len(), v.len(), |i, j| c64::new(v[i] * v[j] / (n * n), 0.0))
    }

    #[test]
    fn improper_coloring_rejected() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(from_classical_coloring(&c5, &[0, 0, 1, 0, 1], 3).is_err());
        assert!(from_classical_coloring(&c5, &[0, 1, 0, 1, 3], 3).is_err());
        assert!(from_classical_coloring(&c5, &[0, 1], 3).is_err());
    }

    #[test]
    fn single_vertex_rank_one_in_two_dims() {
        let g = Graph::empty(1);
        let r = from_projective_representation(&[rank_one(&[1.0, 1.0])], 1, &g).unwrap();
        assert!(verify_realization(&r, 1e-12).ok);
        let p = correlation_of(&r).unwrap();
        // <(E ⊗ conj E) eta, eta> = Tr(E E^T) / d = 1/2
        assert!((p.get(0, 0, 0, 0) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn complex_projection_uses_conjugate() {
        let s = 0.5f64.sqrt();
        let u = [c64::new(s, 0.0), c64::new(0.0, s)];
        let p = Mat::from_fn(2, 2, |i, j| u[i] * u[j].conj());
        let r = from_projective_representation(&[p], 1, &Graph::empty(1)).unwrap();
        assert!(verify_realization(&r, 1e-12).ok);
        let q = correlation_of(&r).unwrap();
        assert!((q.get(0, 0, 0, 0) - 0.5).abs() < 1e-14);
        assert!(q.get(0, 0, 0, 1).abs() < 1e-14);
    }

    #[test]
    fn edge_orthogonality_required() {
        let g = Graph::complete(2).unwrap();
        let p = rank_one(&[1.0, 0.0]);
        let q = rank_one(&[1.0, 1.0]);
        let err = from_projective_representation(&[p, q], 1, &g).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let bad_rank = rank_one(&[0.0, 1.0]) + rank_one(&[1.0, 0.0]);
        assert!(from_projective_representation(&[bad_rank, rank_one(&[1.0, 0.0])], 1, &Graph::empty(2)).is_err());
    }
}
