//! Finite-dimensional strategies: correlations, commuting projection
//! realizations, POVM dilation and the checks relating them.

mod checks;
mod constructions;
mod correlation;
mod povm;
mod realization;

use faer::{c64, Mat};

pub use checks::{
    check_hom_conditions, check_synchronous, check_tracial_and_reversal, check_zero_products, HomReport, SyncReport,
    TracialReport, ZeroProduct, ZeroProductReport,
};
pub use constructions::{
    from_classical_coloring, from_projective_representation, from_pvm_families, symmetrize_marginals,
};
pub use correlation::{compose_correlations, Correlation, CorrelationReport, Residual};
pub use povm::{dilate_all, dilate_to_pvm, Povm, PovmReport};
pub use realization::{correlation_of, minimize, verify_realization, Realization, RealizationJson, VerifyReport};

/// Default tolerance of the operator-norm checks.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Directions shorter than this are dropped when growing cyclic subspaces.
pub const RANK_TOL: f64 = 1e-10;

/// Spectral norm (largest singular value).
pub(crate) fn op_norm(m: &Mat<c64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    match m.singular_values() {
        Ok(s) => s.into_iter().fold(0.0, f64::max),
        Err(_) => f64::NAN,
    }
}

/// Block-diagonal matrix with the given square blocks.
pub(crate) fn direct_sum(blocks: &[&Mat<c64>]) -> Mat<c64> {
    let total: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::<c64>::zeros(total, total);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.as_mut().submatrix_mut(off, off, k, k).copy_from(b.as_ref());
        off += k;
    }
    out
}
