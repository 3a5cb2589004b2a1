//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies a real Givens rotation, so the off-diagonal mass
//! decreases monotonically. Sweeps stop once the off-diagonal Frobenius norm
//! falls below `1e-14 ‖h‖_F`.

use super::{ComplexMatrix, C64};
use crate::{Error, Result};

/// Relative tolerance on `‖h − h†‖_max` before an input is rejected.
pub const HERMITICITY_TOL: f64 = 1e-9;

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn eigenvector(&self, i: usize) -> Vec<C64> {
        self.eigenvectors.column(i)
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }

    /// `V diag(f(λ)) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * mapped[k]).sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Inputs within `1e-9 ‖h‖_max` of Hermitian are symmetrized first; larger
/// violations are rejected.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = h.ensure_square()?;
    let scale = h.max_abs();
    let violation = h.hermiticity_violation();
    let tolerance = HERMITICITY_TOL * scale;
    if violation > tolerance {
        return Err(Error::NotHermitian { violation, tolerance });
    }

    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence("Jacobi eigensolver"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(h).map(|e| e.eigenvalues)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    hermitian_eig(h).map(|e| e.min_eigenvalue())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let magnitude = apq.norm();
    if magnitude == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if magnitude < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / magnitude;
    let theta = 0.5 * (2.0 * magnitude).atan2(aqq - app);
    let (s, c) = theta.sin_cos();

    // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_close(&e.eigenvalues, &[1.0, 1.0, 1.0], 0.0);
    }

    #[test]
    fn diagonal_input_sorted() {
        let e = hermitian_eig(&ComplexMatrix::diag_real(&[3.0, -1.0, 2.0])).unwrap();
        assert_close(&e.eigenvalues, &[-1.0, 2.0, 3.0], 0.0);
        // eigenvector of −1 is e_1
        assert!((e.eigenvector(0)[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn maximally_entangled_projector_spectrum() {
        let d = 3;
        let s = 1.0 / (d as f64).sqrt();
        let psi: Vec<C64> = (0..d * d)
            .map(|k| {
                if k / d == k % d {
                    C64::new(s, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        let e = hermitian_eig(&ComplexMatrix::projector(&psi)).unwrap();
        let mut expected = vec![0.0; 9];
        expected[8] = 1.0;
        assert_close(&e.eigenvalues, &expected, 1e-14);
    }

    #[test]
    fn pauli_y_has_complex_eigenvectors() {
        let y = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eig(&y).unwrap();
        assert_close(&e.eigenvalues, &[-1.0, 1.0], 1e-15);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&r), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.5 + 1e-12, 0.5, 1.0]).unwrap();
        let e = hermitian_eig(&m).unwrap();
        assert_close(&e.eigenvalues, &[0.5, 1.5], 1e-11);
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert_close(&e.eigenvalues, &[0.0; 4], 0.0);
    }
}
