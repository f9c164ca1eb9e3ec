use faer::{c64, Col};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::correlation::{Correlation, Residual};
use super::op_norm;
use super::realization::{correlation_of, Realization};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyncReport {
    pub ok: bool,
    /// `max_v 1 - Σ_i p(i, i | v, v)`.
    pub residual: Residual,
}

/// `p(i = j | v = w) = 1` for every input.
pub fn check_synchronous(p: &Correlation, tol: f64) -> SyncReport {
    let mut residual = Residual::default();
    for v in 0..p.n {
        let agree: f64 = (0..p.c).map(|i| p.get(v, i, v, i)).sum();
        residual.record((1.0 - agree).abs(), || format!("v={v}"));
    }
    SyncReport {
        ok: residual.within(tol),
        residual,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomReport {
    pub ok: bool,
    pub synchronous: Residual,
    /// `max_{v~w} 1 - Σ_{i~j} p(i, j | v, w)`.
    pub adjacency: Residual,
}

/// Winning conditions of the `G -> H` homomorphism game; with `H = K_c`
/// these are the perfect `c`-coloring conditions.
pub fn check_hom_conditions(p: &Correlation, g: &Graph, h: &Graph, tol: f64) -> Result<HomReport> {
    if p.n != g.n() || p.c != h.n() {
        return Err(Error::Shape(format!(
            "correlation ({},{}) does not match |G| = {}, |H| = {}",
            p.n,
            p.c,
            g.n(),
            h.n()
        )));
    }
    let synchronous = check_synchronous(p, tol).residual;
    let mut adjacency = Residual::default();
    for (v, w) in g.edges() {
        for (a, b) in [(v, w), (w, v)] {
            let mut mass = 0.0;
            for (i, j) in h.edges() {
                mass += p.get(a, i, b, j) + p.get(a, j, b, i);
            }
            adjacency.record((1.0 - mass).abs(), || format!("edge ({a},{b})"));
        }
    }
    Ok(HomReport {
        ok: synchronous.within(tol) && adjacency.within(tol),
        synchronous,
        adjacency,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracialReport {
    /// Synchronicity of the realized correlation, the hypothesis of the checks.
    pub precondition: SyncReport,
    /// `false` when the precondition failed and nothing else was checked.
    pub checked: bool,
    pub ok: bool,
    /// `max |<XY eta, eta> - <YX eta, eta>|` over sampled words.
    pub trace: Residual,
    /// `max ||E_{v,i} eta - F_{v,i} eta||`.
    pub swap: Residual,
    /// `max ||E_1 ... E_k eta - F_k ... F_1 eta||` over sampled words.
    pub reversal: Residual,
    pub samples: usize,
}

type Letter = (usize, usize);

fn apply_word(ops: &[Vec<faer::Mat<c64>>], word: &[Letter], x: &Col<c64>) -> Col<c64> {
    let mut y = x.clone();
    for &(v, i) in word.iter().rev() {
        y = &ops[v][i] * &y;
    }
    y
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, c: usize, max_len: usize) -> Vec<Letter> {
    let len = rng.random_range(1..=max_len.max(1));
    (0..len).map(|_| (rng.random_range(0..n), rng.random_range(0..c))).collect()
}

fn fmt_word(w: &[Letter]) -> String {
    w.iter().map(|(v, i)| format!("E{v},{i}")).collect::<Vec<_>>().join("*")
}

/// Sampled checks that the state is tracial on the `E` algebra, that
/// `E_{v,i} eta = F_{v,i} eta`, and that words in `E` act on `eta` like the
/// reversed words in `F`. Skipped when the correlation is not synchronous.
pub fn check_tracial_and_reversal(
    r: &Realization,
    max_word_len: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<TracialReport> {
    let precondition = check_synchronous(&correlation_of(r)?, tol);
    let mut report = TracialReport {
        checked: false,
        ok: false,
        precondition,
        trace: Residual::default(),
        swap: Residual::default(),
        reversal: Residual::default(),
        samples,
    };
    if !report.precondition.ok {
        return Ok(report);
    }
    let (n, c) = (r.n(), r.c());
    for v in 0..n {
        for i in 0..c {
            let d = (&r.e[v][i] * &r.eta - &r.f[v][i] * &r.eta).norm_l2();
            report.swap.record(d, || format!("({v},{i})"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inner = |x: &Col<c64>| -> c64 { r.eta.adjoint() * x };
    for _ in 0..samples {
        let x = random_word(&mut rng, n, c, max_word_len);
        let y = random_word(&mut rng, n, c, max_word_len);
        let xy: Vec<Letter> = x.iter().chain(&y).copied().collect();
        let yx: Vec<Letter> = y.iter().chain(&x).copied().collect();
        let d = (inner(&apply_word(&r.e, &xy, &r.eta)) - inner(&apply_word(&r.e, &yx, &r.eta))).norm();
        report.trace.record(d, || format!("X={} Y={}", fmt_word(&x), fmt_word(&y)));
        let reversed: Vec<Letter> = xy.iter().rev().copied().collect();
        let d = (apply_word(&r.e, &xy, &r.eta) - apply_word(&r.f, &reversed, &r.eta)).norm_l2();
        report.reversal.record(d, || fmt_word(&xy));
    }
    report.checked = true;
    report.ok = report.trace.within(tol) && report.swap.within(tol) && report.reversal.within(tol);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroProduct {
    pub v: usize,
    pub w: usize,
    pub i: usize,
    pub e_norm: f64,
    pub f_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroProductReport {
    pub products: Vec<ZeroProduct>,
    pub worst: f64,
    pub all_zero: bool,
    pub minimality_asserted: bool,
    /// Only set when minimality was asserted and some product is nonzero.
    pub failed: bool,
    pub note: String,
}

/// `||E_{v,i} E_{w,i}||` and `||F_{v,i} F_{w,i}||` for each edge and outcome.
/// These vanish for minimal realizations of a perfect strategy; a
/// non-minimal one may carry nonzero products on a part of the space the
/// state never sees, so the report only fails when minimality is asserted.
pub fn check_zero_products(r: &Realization, g: &Graph, tol: f64, minimality_asserted: bool) -> Result<ZeroProductReport> {
    if g.n() != r.n() {
        return Err(Error::Shape(format!("graph has {} vertices, realization {}", g.n(), r.n())));
    }
    let mut products = Vec::new();
    for (v, w) in g.edges() {
        for i in 0..r.c() {
            products.push(ZeroProduct {
                v,
                w,
                i,
                e_norm: op_norm(&(&r.e[v][i] * &r.e[w][i])),
                f_norm: op_norm(&(&r.f[v][i] * &r.f[w][i])),
            });
        }
    }
    let worst = products.iter().map(|p| p.e_norm.max(p.f_norm)).fold(0.0, f64::max);
    let all_zero = worst <= tol;
    Ok(ZeroProductReport {
        products,
        worst,
        all_zero,
        minimality_asserted,
        failed: minimality_asserted && !all_zero,
        note: if all_zero {
            "all edge products vanish".into()
        } else if minimality_asserted {
            "nonzero edge product in a realization asserted minimal".into()
        } else {
            "nonzero edge products; informational only, the realization may not be minimal (see minimize)".into()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_is_not_synchronous() {
        for c in 2..5 {
            let r = check_synchronous(&Correlation::uniform(3, c), 1e-9);
            assert!(!r.ok);
            assert!((r.residual.value - (1.0 - 1.0 / c as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn proper_coloring_wins_hom_game() {
        let c5 = Graph::cycle(5).unwrap();
        let col = [0, 1, 0, 1, 2];
        let p = Correlation::deterministic(&col, &col, 3).unwrap();
        let k3 = Graph::complete(3).unwrap();
        let rep = check_hom_conditions(&p, &c5, &k3, 1e-12).unwrap();
        assert!(rep.ok, "{rep:?}");
        let bad = Correlation::deterministic(&[0, 0, 1, 0, 1], &[0, 0, 1, 0, 1], 3).unwrap();
        let rep = check_hom_conditions(&bad, &c5, &k3, 1e-12).unwrap();
        assert!(!rep.ok);
        assert_eq!(rep.adjacency.value, 1.0);
        assert!(check_hom_conditions(&p, &c5, &Graph::complete(2).unwrap(), 1e-9).is_err());
    }
}
