//! Level-`N` moment relaxation for perfect `c`-coloring strategies.
//!
//! The index set is `Γ_N`, every nonzero reduced word of length `<= N`. Because
//! `Σ_i e_{v,i} = 1`, the last outcome of each vertex is a linear combination
//! of the others, so every moment matrix on `Γ_N` is `T M' Tᵀ` where `M'` is
//! indexed by the words avoiding outcome `c-1` (the reduced basis) and `T`
//! expands each word in that basis. Those reduced words are linearly
//! independent in the algebra, so the relaxation is solved over `M'`: one
//! variable per class of reduced products `α*β` under `w ~ w*`, zero entries
//! dropped, `M'_{1,1} = 1`. Every sum-to-one relation on `Γ_N` then holds by
//! construction and the feasible set is exactly the set of positive moment
//! matrices compatible with the algebra relations.

use std::collections::HashMap;
use std::time::Instant;

use faer::Mat;
use serde::{Deserialize, Serialize};

use super::functional::{functional_terms, FunctionalTerm};
use super::words::{enumerate_words, words_with_outcomes, Family, Generator, Word};
use crate::error::{Error, Result};
use crate::graph::{find_coloring, Graph};
use crate::solver::{AffineRow, AffineSym, LmiProblem, SdpProblem, SdpSolution, SolveOptions, SolveStatus};

pub const DEFAULT_WORD_CAP: usize = 2000;
/// Largest number of moment variables handed to the dense interior-point
/// solver; the Schur complement needs `8 m²` bytes.
pub const DEFAULT_MAX_SOLVER_VARS: usize = 7000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentOptions {
    /// Cap on `|Γ_N|`.
    pub word_cap: usize,
    /// Cap on moment variables passed to the interior-point solver.
    pub max_solver_vars: usize,
    /// A lower bound above this certifies that no coloring exists.
    pub tol: f64,
    pub solver: SolveOptions,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions {
            word_cap: DEFAULT_WORD_CAP,
            max_solver_vars: DEFAULT_MAX_SOLVER_VARS,
            tol: 1e-6,
            solver: SolveOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MomentSdp {
    pub level: usize,
    pub n: usize,
    pub c: usize,
    /// `Γ_N`, identity first.
    pub words: Vec<Word>,
    /// Words avoiding the last outcome; indexes the solved matrix.
    pub basis: Vec<Word>,
    /// Row `k`: `words[k] = Σ coeff * basis[idx]`.
    pub expansion: Vec<Vec<(usize, f64)>>,
    /// Variable classes; `classes[0]` is the identity, pinned to 1, and
    /// class `k >= 1` is solver variable `k - 1`.
    pub classes: Vec<Word>,
    /// Class of each upper-triangle entry of the reduced matrix (`None` for
    /// products that vanish).
    pub entry_class: Vec<Vec<Option<usize>>>,
    /// Positions of `L_{G,c}`.
    pub objective_map: Vec<FunctionalTerm>,
    /// `L_{G,c} = objective_constant + Σ objective[k] * class_k` (`k >= 1`).
    pub objective_constant: f64,
    pub objective: Vec<f64>,
    pub lmi: LmiProblem,
    /// Standard-form problem whose optimum is `-(min L - objective_constant)`.
    pub problem: SdpProblem,
    class_index: HashMap<Word, usize>,
    word_index: HashMap<Word, usize>,
}

fn expand(word: &Word, c: usize, basis_index: &HashMap<Word, usize>) -> Vec<(usize, f64)> {
    let mut terms: Vec<(Vec<Generator>, f64)> = vec![(Vec::new(), 1.0)];
    for &g in word.letters() {
        let mut next = Vec::with_capacity(terms.len() * c);
        for (t, coef) in terms {
            if g.outcome + 1 < c {
                let mut u = t;
                u.push(g);
                next.push((u, coef));
            } else {
                for i in 0..c - 1 {
                    let mut u = t.clone();
                    u.push(Generator { outcome: i, ..g });
                    next.push((u, -coef));
                }
                next.push((t, coef));
            }
        }
        terms = next;
    }
    let mut acc: HashMap<usize, f64> = HashMap::new();
    for (t, coef) in terms {
        let w = super::words::reduce(&t);
        if w.is_zero() {
            continue;
        }
        let idx = basis_index[&w];
        *acc.entry(idx).or_insert(0.0) += coef;
    }
    let mut out: Vec<(usize, f64)> = acc.into_iter().filter(|e| e.1 != 0.0).collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Assemble the level-`level` relaxation for `G` with `c` colors.
pub fn build_moment_sdp(g: &Graph, c: usize, level: usize, opts: &MomentOptions) -> Result<MomentSdp> {
    if c == 0 {
        return Err(Error::InvalidArgument("number of colors must be >= 1".into()));
    }
    if level == 0 {
        return Err(Error::InvalidArgument("hierarchy level must be >= 1".into()));
    }
    let n = g.n();
    let words = enumerate_words(n, c, level, opts.word_cap)?;
    let basis = words_with_outcomes(n, c - 1, level, opts.word_cap)?;
    let basis_index: HashMap<Word, usize> =
        basis.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    let word_index: HashMap<Word, usize> =
        words.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    let expansion: Vec<Vec<(usize, f64)>> =
        words.iter().map(|w| expand(w, c, &basis_index)).collect();

    let k = basis.len();
    let mut classes = vec![Word::one()];
    let mut class_index: HashMap<Word, usize> = HashMap::new();
    class_index.insert(Word::one(), 0);
    let mut entry_class = vec![Vec::with_capacity(k); k];
    for a in 0..k {
        let left = basis[a].adjoint();
        for b in a..k {
            let w = left.mul(&basis[b]);
            let cls = if w.is_zero() {
                None
            } else {
                let key = w.symmetric_class();
                let next = classes.len();
                let id = *class_index.entry(key.clone()).or_insert(next);
                if id == next {
                    classes.push(key);
                }
                Some(id)
            };
            entry_class[a].push(cls);
        }
    }

    let mut block = AffineSym::new(k);
    block.add_constant(0, 0, 1.0);
    for a in 0..k {
        for (off, cls) in entry_class[a].iter().enumerate() {
            if let Some(id) = *cls {
                if id > 0 {
                    block.add_term(id - 1, a, a + off, 1.0);
                } else if (a, a + off) != (0, 0) {
                    block.add_constant(a, a + off, 1.0);
                }
            }
        }
    }

    let mut sdp = MomentSdp {
        level,
        n,
        c,
        words,
        basis,
        expansion,
        entry_class,
        objective_map: functional_terms(g, c),
        objective_constant: 0.0,
        objective: vec![0.0; classes.len()],
        classes,
        lmi: LmiProblem::default(),
        problem: SdpProblem::default(),
        class_index,
        word_index,
    };

    let mut objective = vec![0.0; sdp.classes.len()];
    for t in &sdp.objective_map {
        for (cls, coef) in sdp.product_functional(t.v, t.i, t.w, t.j) {
            objective[cls] += coef;
        }
    }
    sdp.objective_constant = objective[0];
    objective[0] = 0.0;
    sdp.objective = objective;

    let nvars = sdp.classes.len() - 1;
    let mut lmi = LmiProblem::new(nvars);
    for (k, &v) in sdp.objective.iter().enumerate().skip(1) {
        lmi.objective[k - 1] = v;
    }
    lmi.psd.push(block);
    if level == 1 {
        for v in 0..n {
            for w in 0..n {
                for i in 0..c {
                    for j in 0..c {
                        let mut row = AffineRow::default();
                        for (cls, coef) in sdp.product_functional(v, i, w, j) {
                            if cls == 0 {
                                row.constant += coef;
                            } else {
                                row.coeffs.push((cls - 1, coef));
                            }
                        }
                        lmi.rows.push(row);
                    }
                }
            }
        }
    }
    sdp.problem = lmi.to_sdp()?;
    sdp.lmi = lmi;
    Ok(sdp)
}

impl MomentSdp {
    /// Order of the full moment matrix, `|Γ_N|`.
    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn reduced_order(&self) -> usize {
        self.basis.len()
    }

    pub fn num_vars(&self) -> usize {
        self.classes.len() - 1
    }

    /// `s(e_{v,i} f_{w,j})` as a combination of classes.
    fn product_functional(&self, v: usize, i: usize, w: usize, j: usize) -> Vec<(usize, f64)> {
        let e = &self.expansion[self.word_index[&Word::Letters(vec![Generator::e(v, i)])]];
        let f = &self.expansion[self.word_index[&Word::Letters(vec![Generator::f(w, j)])]];
        let mut out = Vec::new();
        for &(p, a) in e {
            for &(q, b) in f {
                let word = self.basis[p].mul(&self.basis[q]);
                if word.is_zero() {
                    continue;
                }
                let cls = self.class_index[&word.symmetric_class()];
                out.push((cls, a * b));
            }
        }
        out
    }

    /// Class of the reduced product of two full words, if it is a variable of
    /// this relaxation.
    pub fn class_of(&self, w: &Word) -> Option<usize> {
        self.class_index.get(&w.symmetric_class()).copied()
    }

    /// Reduced moment matrix from class values (`values[0]` must be 1).
    pub fn reduced_matrix(&self, values: &[f64]) -> Mat<f64> {
        let k = self.basis.len();
        let mut m = Mat::zeros(k, k);
        for a in 0..k {
            for (off, cls) in self.entry_class[a].iter().enumerate() {
                if let Some(id) = *cls {
                    m[(a, a + off)] = values[id];
                    m[(a + off, a)] = values[id];
                }
            }
        }
        m
    }

    /// Full matrix `T M' Tᵀ` on `Γ_N`.
    pub fn full_matrix(&self, reduced: &Mat<f64>) -> Mat<f64> {
        let t = Mat::from_fn(self.words.len(), self.basis.len(), |r, col| {
            self.expansion[r]
                .iter()
                .find(|e| e.0 == col)
                .map_or(0.0, |e| e.1)
        });
        &t * (reduced * t.transpose())
    }

    /// Moment matrix on `Γ_N` of the deterministic strategy given by a
    /// coloring: `s(w) = Π [coloring(v) = i]` over the letters of `w`.
    pub fn classical_full_matrix(&self, coloring: &[usize]) -> Mat<f64> {
        let value = |w: &Word| -> f64 {
            match w {
                Word::Zero => 0.0,
                Word::Letters(l) => {
                    if l.iter().all(|g| coloring[g.vertex] == g.outcome) {
                        1.0
                    } else {
                        0.0
                    }
                }
            }
        };
        let k = self.words.len();
        Mat::from_fn(k, k, |a, b| value(&self.words[a].adjoint().mul(&self.words[b])))
    }

    /// Class values of the same deterministic strategy.
    pub fn classical_class_values(&self, coloring: &[usize]) -> Vec<f64> {
        self.classes
            .iter()
            .map(|w| {
                if w.letters().iter().all(|g| coloring[g.vertex] == g.outcome) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// `L_{G,c}` evaluated on class values.
    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective_constant
            + self
                .objective
                .iter()
                .zip(values)
                .skip(1)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    /// Checks a candidate full moment matrix against every defining
    /// relation on `Γ_N`; returns the largest violation of each kind.
    pub fn check_full_constraints(&self, m: &Mat<f64>) -> ConstraintReport {
        let k = self.words.len();
        let mut rep = ConstraintReport {
            normalization: (m[(0, 0)] - 1.0).abs(),
            ..Default::default()
        };
        let mut class_value: HashMap<Word, f64> = HashMap::new();
        for a in 0..k {
            let left = self.words[a].adjoint();
            for b in 0..k {
                rep.symmetry = rep.symmetry.max((m[(a, b)] - m[(b, a)]).abs());
                let w = left.mul(&self.words[b]);
                if w.is_zero() {
                    rep.zero_entries = rep.zero_entries.max(m[(a, b)].abs());
                    continue;
                }
                let key = w.symmetric_class();
                match class_value.get(&key) {
                    Some(&v) => rep.identification = rep.identification.max((m[(a, b)] - v).abs()),
                    None => {
                        class_value.insert(key, m[(a, b)]);
                    }
                }
            }
        }
        let lookup = |w: Word| -> Option<usize> {
            if w.is_zero() {
                None
            } else {
                Some(self.word_index[&w])
            }
        };
        for a in 0..k {
            if self.words[a].len() + 1 > self.level {
                continue;
            }
            for family in [Family::E, Family::F] {
                for v in 0..self.n {
                    let letter = |i| Generator {
                        family,
                        vertex: v,
                        outcome: i,
                    };
                    let lefts: Vec<Option<usize>> = (0..self.c)
                        .map(|i| lookup(Word::Letters(vec![letter(i)]).mul(&self.words[a])))
                        .collect();
                    let rights: Vec<Option<usize>> = (0..self.c)
                        .map(|i| lookup(self.words[a].mul(&Word::Letters(vec![letter(i)]))))
                        .collect();
                    for b in 0..k {
                        let l: f64 = lefts.iter().flatten().map(|&r| m[(r, b)]).sum();
                        let r: f64 = rights.iter().flatten().map(|&r| m[(r, b)]).sum();
                        rep.sum_to_one = rep
                            .sum_to_one
                            .max((l - m[(a, b)]).abs())
                            .max((r - m[(a, b)]).abs());
                    }
                }
            }
        }
        rep.min_eigenvalue = m
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map(|e| e[0])
            .unwrap_or(f64::NAN);
        rep
    }

    /// Word index and classes as JSON, for debugging.
    pub fn index_json(&self) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "n": self.n,
            "c": self.c,
            "words": self.words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "basis": self.basis.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "classes": self.classes.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Largest violation of each relation, plus the smallest eigenvalue.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub normalization: f64,
    pub symmetry: f64,
    pub identification: f64,
    pub zero_entries: f64,
    pub sum_to_one: f64,
    pub min_eigenvalue: f64,
}

impl ConstraintReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.normalization,
            self.symmetry,
            self.identification,
            self.zero_entries,
            self.sum_to_one,
            (-self.min_eigenvalue).max(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The level-`N` minimum is within tolerance of 0.
    ConsistentWithColouring,
    /// A positive lower bound: no commuting quantum `c`-coloring exists.
    CertifiedNoColouring,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMethod {
    InteriorPoint,
    /// `c >= chi(G)` at `N >= 2`: the coloring's moment matrix attains 0 and
    /// `L >= 0` on every feasible matrix, so the optimum is exactly 0.
    ClassicalCertificate,
}

#[derive(Clone, Debug)]
pub struct QcLevelResult {
    pub c: usize,
    pub level: usize,
    /// Objective at the returned moment matrix.
    pub min_value: f64,
    /// Dual lower bound on the level minimum; the verdict uses this value.
    pub lower_bound: f64,
    pub verdict: Verdict,
    pub method: BoundMethod,
    pub status: SolveStatus,
    pub gap: f64,
    pub variables: usize,
    pub matrix_order: usize,
    pub reduced_order: usize,
    pub seconds: f64,
    /// Reduced moment matrix of the returned point.
    pub moments: Mat<f64>,
    pub solution: Option<SdpSolution>,
}

/// Minimize `L_{G,c}` over the level-`level` relaxation.
///
/// The feasible set contains every correlation realizable by commuting
/// projections, so a lower bound above `opts.tol` certifies `chi_qc(G) > c`.
/// A value near 0 is only consistent with a coloring at this level.
pub fn qc_level_bound(g: &Graph, c: usize, level: usize, opts: &MomentOptions) -> Result<QcLevelResult> {
    let start = Instant::now();
    let sdp = build_moment_sdp(g, c, level, opts)?;
    let vars = sdp.num_vars();
    let base = |min_value: f64, lower_bound: f64, method, status, gap, moments, solution| QcLevelResult {
        c,
        level,
        min_value,
        lower_bound,
        verdict: if lower_bound > opts.tol {
            Verdict::CertifiedNoColouring
        } else {
            Verdict::ConsistentWithColouring
        },
        method,
        status,
        gap,
        variables: vars,
        matrix_order: sdp.order(),
        reduced_order: sdp.reduced_order(),
        seconds: start.elapsed().as_secs_f64(),
        moments,
        solution,
    };
    if vars > opts.max_solver_vars {
        if level >= 2 {
            if let Some(col) = find_coloring(g, c)? {
                let values = sdp.classical_class_values(&col);
                let moments = sdp.reduced_matrix(&values);
                return Ok(base(
                    0.0,
                    0.0,
                    BoundMethod::ClassicalCertificate,
                    SolveStatus::Optimal,
                    0.0,
                    moments,
                    None,
                ));
            }
        }
        return Err(Error::CapExceeded {
            what: "moment SDP variable",
            count: vars,
            cap: opts.max_solver_vars,
        });
    }
    let sol = sdp.lmi.solve(&opts.solver)?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::Solver { status: sol.status });
    }
    let mut values = vec![1.0];
    values.extend_from_slice(&sol.z);
    let moments = sdp.reduced_matrix(&values);
    Ok(base(
        sdp.objective_constant + sol.value,
        sdp.objective_constant + sol.bound,
        BoundMethod::InteriorPoint,
        sol.status,
        sol.sdp.gap,
        moments,
        Some(sol.sdp),
    ))
}
