//! Quantum channels in Kraus form.
//!
//! Two channels are compared by their action on the `d_in²` matrix units,
//! never by their Kraus lists: Kraus decompositions are not unique.

mod family;
mod io;

use std::f64::consts::TAU;

use rand::Rng;

pub use family::ChannelFamily;
pub use io::ChannelFile;

use crate::linalg::{hermitian_eig, inverse_sqrt, kron, matrix_rank, partial_trace, ComplexMatrix, Subsystem, C64};
use crate::states::{ginibre, DensityMatrix, SystemDims};
use crate::{Error, Result};

/// Tolerance on `‖Σ K†K − I‖_max` accepted by [`QuantumChannel::new`].
pub const TP_TOL: f64 = 1e-9;
/// Eigenvalues below this fraction of `λ_max` are dropped by canonical Kraus
/// recovery.
pub const KRAUS_CUTOFF: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;

/// A completely positive map `ρ ↦ Σ K_α ρ K_α†`.
///
/// [`QuantumChannel::new`] insists on trace preservation. Adjoints of channels
/// are unital rather than trace preserving and are built through
/// [`QuantumChannel::cp_map`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl QuantumChannel {
    /// Trace-preserving channel from Kraus operators (each `d_out × d_in`).
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::cp_map(kraus)?;
        let dev = ch.trace_preservation_error();
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(ch)
    }

    /// Completely positive map with no trace condition.
    pub fn cp_map(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyKraus)?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != d_out || k.cols() != d_in) {
            return Err(Error::DimensionMismatch("Kraus operators of different shapes".into()));
        }
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { kraus, d_in, d_out })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(d)],
            d_in: d,
            d_out: d,
        }
    }

    /// `ρ ↦ p ρ + (1 − p) Tr(ρ) I/d`, realized with the identity plus the
    /// `d² − 1` non-trivial shift-and-clock unitaries.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        check_dim(d)?;
        check_unit("p", p)?;
        let d2 = (d * d) as f64;
        let w0 = (p + (1.0 - p) / d2).sqrt();
        let w = ((1.0 - p) / d2).sqrt();
        let mut kraus = vec![ComplexMatrix::identity(d).scale_real(w0)];
        if w > 0.0 {
            for a in 0..d {
                for b in 0..d {
                    if (a, b) != (0, 0) {
                        kraus.push(weyl(d, a, b).scale_real(w));
                    }
                }
            }
        }
        Self::new(kraus)
    }

    /// `ρ ↦ v ρ + (1 − v) Σ_i ⟨i|ρ|i⟩ |i⟩⟨i|`: off-diagonals scaled by `v`.
    pub fn dephasing(d: usize, v: f64) -> Result<Self> {
        check_dim(d)?;
        check_unit("v", v)?;
        let mut kraus = Vec::with_capacity(d + 1);
        if v > 0.0 {
            kraus.push(ComplexMatrix::identity(d).scale_real(v.sqrt()));
        }
        if v < 1.0 {
            let w = (1.0 - v).sqrt();
            kraus.extend((0..d).map(|i| ComplexMatrix::unit(d, i, i).scale_real(w)));
        }
        Self::new(kraus)
    }

    /// Random channel with `n_kraus` operators, each of rank at most
    /// `max_rank` when given. Built as `K_α = G_α S^{-1/2}` with
    /// `S = Σ G_α†G_α`, which keeps the rank of every `G_α`.
    pub fn random<R: Rng + ?Sized>(d: usize, n_kraus: usize, max_rank: Option<usize>, rng: &mut R) -> Result<Self> {
        check_dim(d)?;
        if n_kraus == 0 {
            return Err(Error::EmptyKraus);
        }
        let raw: Vec<ComplexMatrix> = (0..n_kraus)
            .map(|_| match max_rank {
                Some(r) if r < d => &ginibre(d, r, rng) * &ginibre(r, d, rng),
                _ => ginibre(d, d, rng),
            })
            .collect();
        let s = raw
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, g| &acc + &(&g.adjoint() * g));
        let norm = inverse_sqrt(&s)?;
        Self::new(raw.iter().map(|g| g * &norm).collect())
    }

    /// Convex combination `Σ w_i Φ_i`, realized with Kraus `√w_i K`.
    pub fn mixture(parts: &[(f64, &QuantumChannel)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 || parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "mixture weights",
                value: total,
                range: "non-negative, summing to 1",
            });
        }
        let kraus = parts
            .iter()
            .filter(|(w, _)| *w > 0.0)
            .flat_map(|(w, ch)| ch.kraus.iter().map(move |k| k.scale_real(w.sqrt())))
            .collect();
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `‖Σ K†K − I‖_max`.
    pub fn trace_preservation_error(&self) -> f64 {
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.d_in, self.d_in), |acc, k| {
                &acc + &(&k.adjoint() * k)
            });
        sum.max_abs_diff(&ComplexMatrix::identity(self.d_in))
    }

    /// `Σ K X K†` for an arbitrary `d_in × d_in` operator.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.d_in || x.cols() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator into a channel with d_in = {}",
                x.rows(),
                x.cols(),
                self.d_in
            )));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out = &out + &(&(k * x) * &k.adjoint());
        }
        Ok(out)
    }

    /// Applies the channel to a state on its input space. Bipartite labels
    /// are kept when the channel is square.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix())?;
        let dims = match rho.dims() {
            dims @ SystemDims::Bipartite(..) if self.d_in == self.d_out => dims,
            _ => SystemDims::Single(self.d_out),
        };
        Ok(DensityMatrix::from_trusted(out, dims))
    }

    /// `(id_A ⊗ Φ)(ρ)` using Kraus operators `I ⊗ K_α`.
    pub fn apply_on_b(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let (da, db) = rho.dims().bipartite()?;
        if db != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "subsystem B has dimension {db}, channel expects {}",
                self.d_in
            )));
        }
        let id = ComplexMatrix::identity(da);
        let mut out = ComplexMatrix::zeros(da * self.d_out, da * self.d_out);
        for k in &self.kraus {
            let lifted = kron(&id, k);
            out = &out + &lifted.conjugate_by(rho.matrix())?;
        }
        Ok(DensityMatrix::from_trusted(out, SystemDims::Bipartite(da, self.d_out)))
    }

    /// Choi matrix `(id ⊗ Φ)(|φ+⟩⟨φ+|)`, defined for square channels.
    pub fn choi(&self) -> Result<ChoiMatrix> {
        if self.d_in != self.d_out {
            return Err(Error::NonSquareChannel {
                d_in: self.d_in,
                d_out: self.d_out,
            });
        }
        Ok(ChoiMatrix {
            matrix: self.choi_operator(),
            d: self.d_in,
        })
    }

    /// `(1/d_in) Σ_α |k_α⟩⟨k_α|` with `k_α[(i, a)] = K_α[a, i]`; works for
    /// rectangular Kraus operators too.
    fn choi_operator(&self) -> ComplexMatrix {
        let n = self.d_in * self.d_out;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            let v: Vec<C64> = (0..n).map(|c| k[(c % self.d_out, c / self.d_out)]).collect();
            out = &out + &ComplexMatrix::projector(&v);
        }
        out.scale_real(1.0 / self.d_in as f64)
    }

    /// `then ∘ first`: Kraus `{L_β K_α}`.
    pub fn compose(first: &QuantumChannel, then: &QuantumChannel) -> Result<QuantumChannel> {
        if first.d_out != then.d_in {
            return Err(Error::DimensionMismatch(format!(
                "first channel outputs dimension {}, second expects {}",
                first.d_out, then.d_in
            )));
        }
        let kraus = then
            .kraus
            .iter()
            .flat_map(|l| first.kraus.iter().map(move |k| l * k))
            .collect();
        Ok(QuantumChannel {
            kraus,
            d_in: first.d_in,
            d_out: then.d_out,
        })
    }

    /// `a ⊗ b`: Kraus `{K_α ⊗ R_β}`.
    pub fn tensor(a: &QuantumChannel, b: &QuantumChannel) -> QuantumChannel {
        let kraus = a
            .kraus
            .iter()
            .flat_map(|k| b.kraus.iter().map(move |r| kron(k, r)))
            .collect();
        QuantumChannel {
            kraus,
            d_in: a.d_in * b.d_in,
            d_out: a.d_out * b.d_out,
        }
    }

    /// Heisenberg-picture dual with Kraus `{K_α†}`; unital, and trace
    /// preserving only when the original channel is unital.
    pub fn adjoint(&self) -> QuantumChannel {
        QuantumChannel {
            kraus: self.kraus.iter().map(ComplexMatrix::adjoint).collect(),
            d_in: self.d_out,
            d_out: self.d_in,
        }
    }

    /// Ranks of the stored Kraus operators.
    pub fn kraus_ranks(&self, tol: f64) -> Vec<usize> {
        self.kraus.iter().map(|k| matrix_rank(k, tol)).collect()
    }

    pub fn max_kraus_rank(&self, tol: f64) -> usize {
        self.kraus_ranks(tol).into_iter().max().unwrap_or(0)
    }
}

/// True iff `‖Σ K†K − I‖_max ≤ tol` and the Choi matrix has no eigenvalue
/// below `−tol`.
pub fn is_cptp(ch: &QuantumChannel, tol: f64) -> bool {
    if ch.trace_preservation_error() > tol {
        return false;
    }
    match hermitian_eig(&ch.choi_operator()) {
        Ok(e) => e.min_eigenvalue() >= -tol,
        Err(_) => false,
    }
}

/// Largest entrywise difference between the two channels' outputs over all
/// matrix units `|i⟩⟨j|`.
pub fn action_distance(a: &QuantumChannel, b: &QuantumChannel) -> Result<f64> {
    if a.d_in != b.d_in || a.d_out != b.d_out {
        return Err(Error::DimensionMismatch(format!(
            "channels {}→{} and {}→{}",
            a.d_in, a.d_out, b.d_in, b.d_out
        )));
    }
    let d = a.d_in;
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let e = ComplexMatrix::unit(d, i, j);
            worst = worst.max(a.apply_operator(&e)?.max_abs_diff(&b.apply_operator(&e)?));
        }
    }
    Ok(worst)
}

/// Choi matrix of a square map on `M_d`, a `d² × d²` operator on `A ⊗ B`
/// with `A` the reference copy.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: ComplexMatrix,
    d: usize,
}

impl ChoiMatrix {
    /// Wraps an operator after checking it is a valid channel Choi matrix:
    /// PSD, unit trace and `Tr_B = I/d`.
    pub fn new(matrix: ComplexMatrix, d: usize) -> Result<Self> {
        if matrix.rows() != d * d || matrix.cols() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} Choi matrix for d = {d}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let c = Self { matrix, d };
        c.validate()?;
        Ok(c)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn as_state(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(self.matrix.clone(), SystemDims::Bipartite(self.d, self.d))
    }

    /// `‖Tr_B(C) − I/d‖_max`.
    pub fn marginal_error(&self) -> Result<f64> {
        let ra = partial_trace(&self.matrix, (self.d, self.d), Subsystem::A)?;
        Ok(ra.max_abs_diff(&ComplexMatrix::identity(self.d).scale_real(1.0 / self.d as f64)))
    }

    fn validate(&self) -> Result<()> {
        let min = hermitian_eig(&self.matrix)?.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        let trace_err = (self.matrix.trace().re - 1.0).abs();
        if trace_err > 1e-10 {
            return Err(Error::NotNormalized(trace_err));
        }
        let marginal = self.marginal_error()?;
        if marginal > TP_TOL {
            return Err(Error::NotTracePreserving(marginal));
        }
        Ok(())
    }
}

/// Kraus operators from the eigendecomposition of a Choi-type operator:
/// `K_α[j, i] = √(d λ_α) v_α[(i, j)]` for every `λ_α > 1e-10 λ_max`.
/// No trace condition is imposed.
pub fn canonical_kraus_operators(choi: &ComplexMatrix, d: usize) -> Result<Vec<ComplexMatrix>> {
    if choi.rows() != d * d || choi.cols() != d * d {
        return Err(Error::DimensionMismatch(format!("Choi operator is not {0}x{0}", d * d)));
    }
    let e = hermitian_eig(choi)?;
    let lmax = e.max_eigenvalue();
    if e.min_eigenvalue() < -PSD_TOL * lmax.max(1.0) {
        return Err(Error::NotPsd(e.min_eigenvalue()));
    }
    let cutoff = KRAUS_CUTOFF * lmax;
    let kraus = e
        .eigenvalues
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &l)| l > cutoff)
        .map(|(idx, &l)| {
            let v = e.eigenvector(idx);
            let w = (d as f64 * l).sqrt();
            ComplexMatrix::from_fn(d, d, |j, i| v[i * d + j] * w)
        })
        .collect();
    Ok(kraus)
}

/// Channel recovered from its Choi matrix, Kraus operators ordered by
/// decreasing weight.
pub fn canonical_kraus(c: &ChoiMatrix) -> Result<QuantumChannel> {
    c.validate()?;
    QuantumChannel::new(canonical_kraus_operators(&c.matrix, c.d)?)
}

/// Choi operator of a square CP map without normalization checks.
pub fn choi_operator(ch: &QuantumChannel) -> Result<ComplexMatrix> {
    if ch.d_in != ch.d_out {
        return Err(Error::NonSquareChannel {
            d_in: ch.d_in,
            d_out: ch.d_out,
        });
    }
    Ok(ch.choi_operator())
}

/// Generalized Pauli `X^a Z^b` with `X|j⟩ = |j+1⟩`, `Z|j⟩ = ω^j |j⟩`.
pub fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |row, col| {
        if row == (col + a) % d {
            C64::from_polar(1.0, TAU * ((b * col) % d) as f64 / d as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value: x,
            range: "[0, 1]",
        })
    }
}
