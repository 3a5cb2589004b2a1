//! Dense complex linear algebra for operators of modest size (up to a few
//! hundred rows).

mod eig;
mod matrix;
mod partial;
mod svd;

pub use eig::{hermitian_eig, hermitian_eigenvalues, min_eigenvalue, EigenDecomposition, HERMITICITY_TOL};
pub use matrix::{ComplexMatrix, C64};
pub use partial::{kron, partial_trace, partial_transpose, Subsystem};
pub use svd::{matrix_rank, singular_values, DEFAULT_RANK_TOL};

use crate::Result;

/// `h^{-1/2}` for a positive definite Hermitian `h`.
pub(crate) fn inverse_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig(h)?;
    if e.min_eigenvalue() <= 0.0 {
        return Err(crate::Error::NotPsd(e.min_eigenvalue()));
    }
    Ok(e.map_spectrum(|x| 1.0 / x.sqrt()))
}
