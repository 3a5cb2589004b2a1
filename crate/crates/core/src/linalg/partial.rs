use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::{Error, Result};

/// Which factor of a bipartite `A ⊗ B` operator is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product. Entry `(i·b.rows + k, j·b.cols + l)` is `a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |row, col| {
        a[(row / br, col / bc)] * b[(row % br, col % bc)]
    })
}

fn check_bipartite(m: &ComplexMatrix, (da, db): (usize, usize)) -> Result<()> {
    let n = da * db;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator for dims ({da}, {db})",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Traces out one factor and returns the operator on the kept one.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    })
}

/// Transposes the indices of one factor.
pub fn partial_transpose(m: &ComplexMatrix, dims: (usize, usize), which: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let n = da * db;
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (ia, ib) = (row / db, row % db);
        let (ja, jb) = (col / db, col % db);
        match which {
            Subsystem::A => m[(ja * db + ib, ia * db + jb)],
            Subsystem::B => m[(ia * db + jb, ja * db + ib)],
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, C64};

    fn phi_plus(d: usize) -> ComplexMatrix {
        let s = 1.0 / (d as f64).sqrt();
        let psi: Vec<C64> = (0..d * d)
            .map(|k| C64::new(if k / d == k % d { s } else { 0.0 }, 0.0))
            .collect();
        ComplexMatrix::projector(&psi)
    }

    #[test]
    fn kron_identities_and_layout() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
        let k = kron(
            &ComplexMatrix::diag_real(&[1.0, 0.0]),
            &ComplexMatrix::diag_real(&[1.0, 1.0]),
        );
        assert_eq!(k, ComplexMatrix::diag_real(&[1.0, 1.0, 0.0, 0.0]));
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = ComplexMatrix::from_real(2, 3, &[1.0, 10.0, 100.0, 0.0, 0.0, 1000.0]).unwrap();
        let ab = kron(&a, &b);
        assert_eq!((ab.rows(), ab.cols()), (4, 6));
        // row i·2+k, col j·3+l with i=1,k=0,j=1,l=2 → a[1,1]·b[0,2] = 400
        assert_eq!(ab[(2, 5)], C64::new(400.0, 0.0));
    }

    #[test]
    fn marginal_of_phi_plus() {
        let rho_a = partial_trace(&phi_plus(3), (3, 3), Subsystem::A).unwrap();
        assert!(rho_a.max_abs_diff(&ComplexMatrix::identity(3).scale_real(1.0 / 3.0)) < 1e-15);
    }

    #[test]
    fn product_state_trace() {
        let rho = ComplexMatrix::from_real(2, 2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let sigma = ComplexMatrix::diag_real(&[0.5, 0.25, 0.75]);
        let joint = kron(&rho, &sigma);
        let a = partial_trace(&joint, (2, 3), Subsystem::A).unwrap();
        assert!(a.max_abs_diff(&rho.scale_real(1.5)) < 1e-15);
        let b = partial_trace(&joint, (2, 3), Subsystem::B).unwrap();
        assert!(b.max_abs_diff(&sigma) < 1e-15);
    }

    #[test]
    fn partial_transpose_of_phi_plus_is_flip_over_d() {
        let pt = partial_transpose(&phi_plus(3), (3, 3), Subsystem::B).unwrap();
        let e = hermitian_eig(&pt).unwrap();
        assert!((e.min_eigenvalue() + 1.0 / 3.0).abs() < 1e-14);
        assert!((e.max_eigenvalue() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn partial_transpose_diag_and_involution() {
        let d = ComplexMatrix::diag_real(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose(&d, (2, 2), Subsystem::A).unwrap(), d);
        let m = ComplexMatrix::from_fn(6, 6, |i, j| C64::new((i * 6 + j) as f64, i as f64 - j as f64));
        for which in [Subsystem::A, Subsystem::B] {
            let once = partial_transpose(&m, (2, 3), which).unwrap();
            assert_eq!(partial_transpose(&once, (2, 3), which).unwrap(), m);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let m = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&m, (2, 3), Subsystem::A),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            partial_transpose(&m, (2, 2), Subsystem::B),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
