//! Pure states, density matrices and the named state families.
//!
//! Generators take explicit seeds and draw from a ChaCha8 stream, so a given
//! seed reproduces the same state bit for bit on one platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{
    hermitian_eig, kron, partial_trace, singular_values, ComplexMatrix, Subsystem, C64, HERMITICITY_TOL,
};
use crate::{Error, Result};

/// Minimum Schmidt coefficient used by the random generators before
/// renormalization.
pub const SCHMIDT_FLOOR: f64 = 0.01;

const NORM_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;

/// Dimensions of the Hilbert space a state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemDims {
    Single(usize),
    Bipartite(usize, usize),
}

impl SystemDims {
    pub fn total(self) -> usize {
        match self {
            SystemDims::Single(d) => d,
            SystemDims::Bipartite(a, b) => a * b,
        }
    }

    pub fn bipartite(self) -> Result<(usize, usize)> {
        match self {
            SystemDims::Bipartite(a, b) => Ok((a, b)),
            SystemDims::Single(_) => Err(Error::NotBipartite),
        }
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: SystemDims,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, dims: SystemDims) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dimension {}",
                amplitudes.len(),
                dims.total()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = vector_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalizes the vector first.
    pub fn normalized(mut amplitudes: Vec<C64>, dims: SystemDims) -> Result<Self> {
        let norm = vector_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(1.0));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes, dims)
    }

    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        let amps = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Self::normalized(amps, SystemDims::Bipartite(a.len(), b.len()))
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> SystemDims {
        self.dims
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::projector(&self.amplitudes),
            dims: self.dims,
        }
    }

    /// The `dA × dB` matrix `C[i,j] = ψ_{i·dB + j}`.
    pub fn coefficient_matrix(&self) -> Result<ComplexMatrix> {
        let (da, db) = self.dims.bipartite()?;
        ComplexMatrix::from_vec(da, db, self.amplitudes.clone())
    }

    /// Applies `U ⊗ V`.
    pub fn apply_local(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<PureState> {
        let (da, db) = self.dims.bipartite()?;
        if u.rows() != da || u.cols() != da || v.rows() != db || v.cols() != db {
            return Err(Error::DimensionMismatch("local unitary dimensions".into()));
        }
        let amps = kron(u, v).mul_vec(&self.amplitudes)?;
        PureState::normalized(amps, self.dims)
    }
}

fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: SystemDims,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-9), positivity (eigenvalues ≥ −1e-9) and
    /// unit trace (1e-10).
    pub fn new(matrix: ComplexMatrix, dims: SystemDims) -> Result<Self> {
        let n = matrix.ensure_square()?;
        if n != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{n}x{n} matrix for dimension {}",
                dims.total()
            )));
        }
        let violation = matrix.hermiticity_violation();
        if violation > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                violation,
                tolerance: HERMITICITY_TOL,
            });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized((trace - 1.0).abs()));
        }
        let min = hermitian_eig(&matrix)?.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            dims,
        })
    }

    /// For outputs of validated maps where the invariants hold by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: SystemDims) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        Self { matrix, dims }
    }

    pub fn maximally_mixed(dims: SystemDims) -> Self {
        let n = dims.total();
        Self::from_trusted(ComplexMatrix::identity(n).scale_real(1.0 / n as f64), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> SystemDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    pub fn reduced(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let dims = self.dims.bipartite()?;
        let m = partial_trace(&self.matrix, dims, keep)?;
        let d = match keep {
            Subsystem::A => dims.0,
            Subsystem::B => dims.1,
        };
        Ok(Self::from_trusted(m, SystemDims::Single(d)))
    }

    /// `Σ w_i ρ_i` for weights summing to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::DimensionMismatch("empty mixture".into()));
        };
        let dims = first.dims;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > TRACE_TOL || parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "mixture weights",
                value: total,
                range: "non-negative, summing to 1",
            });
        }
        let n = dims.total();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, rho) in parts {
            if rho.dims != dims {
                return Err(Error::DimensionMismatch("mixture of different dimensions".into()));
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Ok(Self::from_trusted(acc, dims))
    }
}

/// `|φ+⟩ = Σ_i |ii⟩ / √d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(embedded_max_entangled(d, d))
}

/// `Σ_{i<r} |ii⟩ / √r` inside `d ⊗ d`, a maximally entangled state of Schmidt
/// rank `r`.
pub(crate) fn embedded_max_entangled(d: usize, r: usize) -> PureState {
    let s = 1.0 / (r as f64).sqrt();
    let amps = (0..d * d)
        .map(|k| {
            let (i, j) = (k / d, k % d);
            C64::new(if i == j && i < r { s } else { 0.0 }, 0.0)
        })
        .collect();
    PureState {
        amplitudes: amps,
        dims: SystemDims::Bipartite(d, d),
    }
}

/// Squared singular values of the coefficient matrix, descending.
pub fn schmidt_coefficients(psi: &PureState) -> Result<Vec<f64>> {
    let c = psi.coefficient_matrix()?;
    Ok(singular_values(&c).into_iter().map(|s| s * s).collect())
}

/// Number of Schmidt coefficients above `tol`.
pub fn schmidt_rank(psi: &PureState, tol: f64) -> Result<usize> {
    Ok(schmidt_coefficients(psi)?.into_iter().filter(|&l| l > tol).count())
}

/// `p |φ+⟩⟨φ+| + (1 − p) I/d²`.
pub fn isotropic_state(d: usize, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParamOutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    let phi = max_entangled(d)?;
    let n = d * d;
    let mixed = ComplexMatrix::identity(n).scale_real((1.0 - p) / n as f64);
    let m = &phi.density_matrix().matrix.scale_real(p) + &mixed;
    Ok(DensityMatrix::from_trusted(m, SystemDims::Bipartite(d, d)))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows × cols` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary: Gram–Schmidt on the columns of a complex Gaussian
/// matrix (the implied `R` has a positive diagonal).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        // two passes keep the basis orthonormal to machine precision
        for _ in 0..2 {
            for q in &cols {
                let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= overlap * y;
                }
            }
        }
        let norm = vector_norm(&v);
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Uniform point on the probability simplex (normalized exponentials).
pub fn uniform_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

fn check_rank(da: usize, db: usize, r: usize) -> Result<()> {
    if r < 1 || r > da.min(db) {
        return Err(Error::InvalidRank {
            rank: r,
            reason: format!("must lie in [1, {}]", da.min(db)),
        });
    }
    Ok(())
}

/// `Σ_i √λ_i U|i⟩ ⊗ V|i⟩` with Haar-random `U`, `V` and the given
/// coefficients (normalized internally).
pub fn random_pure_with_coefficients<R: Rng + ?Sized>(
    da: usize,
    db: usize,
    coefficients: &[f64],
    rng: &mut R,
) -> Result<PureState> {
    check_rank(da, db, coefficients.len())?;
    let total: f64 = coefficients.iter().sum();
    if coefficients.iter().any(|&c| c <= 0.0 || !c.is_finite()) {
        return Err(Error::ParamOutOfRange {
            name: "Schmidt coefficient",
            value: coefficients.iter().copied().fold(f64::INFINITY, f64::min),
            range: "(0, 1]",
        });
    }
    let u = haar_unitary(da, rng);
    let v = haar_unitary(db, rng);
    let amps = (0..da * db)
        .map(|k| {
            let (a, b) = (k / db, k % db);
            coefficients
                .iter()
                .enumerate()
                .map(|(i, &l)| u[(a, i)] * v[(b, i)] * (l / total).sqrt())
                .sum()
        })
        .collect();
    PureState::normalized(amps, SystemDims::Bipartite(da, db))
}

/// Random pure state of Schmidt rank exactly `r` drawn from `rng`.
pub fn random_pure_with_schmidt_rank_from<R: Rng + ?Sized>(
    da: usize,
    db: usize,
    r: usize,
    rng: &mut R,
) -> Result<PureState> {
    check_rank(da, db, r)?;
    let raw = uniform_simplex(r, rng);
    let floored: Vec<f64> = raw.into_iter().map(|x| x.max(SCHMIDT_FLOOR)).collect();
    random_pure_with_coefficients(da, db, &floored, rng)
}

/// Seeded random pure state of Schmidt rank exactly `r`.
pub fn random_pure_with_schmidt_rank(da: usize, db: usize, r: usize, seed: u64) -> Result<PureState> {
    random_pure_with_schmidt_rank_from(da, db, r, &mut seeded_rng(seed))
}

/// Mixture of `terms` random pure states of Schmidt rank `r` drawn from `rng`.
pub fn random_state_sn_at_most_from<R: Rng + ?Sized>(
    da: usize,
    db: usize,
    r: usize,
    terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    check_rank(da, db, r)?;
    if terms == 0 {
        return Err(Error::ParamOutOfRange {
            name: "terms",
            value: 0.0,
            range: ">= 1",
        });
    }
    let weights = uniform_simplex(terms, rng);
    let n = da * db;
    let mut acc = ComplexMatrix::zeros(n, n);
    for w in weights {
        let psi = random_pure_with_schmidt_rank_from(da, db, r, rng)?;
        acc = &acc + &ComplexMatrix::projector(psi.amplitudes()).scale_real(w);
    }
    Ok(DensityMatrix::from_trusted(acc, SystemDims::Bipartite(da, db)))
}

/// Seeded density matrix with Schmidt number at most `r` by construction.
pub fn random_state_sn_at_most(da: usize, db: usize, r: usize, terms: usize, seed: u64) -> Result<DensityMatrix> {
    random_state_sn_at_most_from(da, db, r, terms, &mut seeded_rng(seed))
}
