//! Singular values by one-sided (Hestenes) Jacobi orthogonalization.
//!
//! Working on the columns directly keeps small singular values accurate to
//! roughly `ε σ_max`, which squaring into `A†A` would not.

use super::{ComplexMatrix, C64};

/// Relative rank tolerance used when callers have no better choice.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    // Orthogonalize the columns of whichever orientation is tall.
    let work = if a.rows() >= a.cols() { a.clone() } else { a.adjoint() };
    let m = work.rows();
    let n = work.cols();
    if n == 0 {
        return Vec::new();
    }
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| work.column(j)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let col_p = &mut left[p];
                let col_q = &mut right[0];
                for k in 0..m {
                    let x = col_p[k];
                    let y = col_q[k] * phase.conj();
                    col_p[k] = x * c - y * s;
                    col_q[k] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Number of singular values above `tol · σ_max`; zero for the zero matrix.
pub fn matrix_rank(a: &ComplexMatrix, tol: f64) -> usize {
    let sv = singular_values(a);
    let Some(&largest) = sv.first() else {
        return 0;
    };
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * largest).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_singular_values() {
        assert_eq!(singular_values(&ComplexMatrix::identity(2)), vec![1.0, 1.0]);
        assert_eq!(singular_values(&ComplexMatrix::diag_real(&[2.0, 0.0])), vec![2.0, 0.0]);
        let s = 1.0 / 3f64.sqrt();
        let sv = singular_values(&ComplexMatrix::identity(3).scale_real(s));
        for x in sv {
            assert!((x - s).abs() < 1e-15);
        }
    }

    #[test]
    fn wide_matrix_uses_adjoint() {
        // [[3, 0, 4]] has the single singular value 5
        let a = ComplexMatrix::from_real(1, 3, &[3.0, 0.0, 4.0]).unwrap();
        let sv = singular_values(&a);
        assert_eq!(sv.len(), 1);
        assert!((sv[0] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn complex_rank_one() {
        let u = [C64::new(1.0, 2.0), C64::new(0.0, -1.0), C64::new(0.5, 0.5)];
        let v = [C64::new(0.0, 1.0), C64::new(2.0, 0.0), C64::new(-1.0, 1.0)];
        let a = ComplexMatrix::outer(&u, &v);
        assert_eq!(matrix_rank(&a, DEFAULT_RANK_TOL), 1);
        let nu: f64 = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((singular_values(&a)[0] - nu * nv).abs() < 1e-13);
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(matrix_rank(&ComplexMatrix::zeros(3, 3), DEFAULT_RANK_TOL), 0);
        assert_eq!(matrix_rank(&ComplexMatrix::identity(3), DEFAULT_RANK_TOL), 3);
    }
}
