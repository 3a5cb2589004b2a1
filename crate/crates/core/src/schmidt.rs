//! Schmidt-number certificates.
//!
//! Two independent one-sided tests are provided:
//!
//! - the witness `W = I − (d/r) |φ+⟩⟨φ+|`, non-negative on every state of
//!   Schmidt number at most `r`;
//! - the map `Λ_k(X) = Tr(X) I − kX`, which is `r`-positive but
//!   `(r+1)`-negative for `1/(r+1) < k ≤ 1/r`, so a negative eigenvalue of
//!   `(id ⊗ Λ_k)(ρ)` rules out Schmidt number `≤ r`.
//!
//! Neither test can prove an upper bound on the Schmidt number, so verdicts
//! never claim one.

use serde::{Deserialize, Serialize};

use crate::channels::{canonical_kraus_operators, choi_operator, QuantumChannel};
use crate::linalg::{matrix_rank, min_eigenvalue, ComplexMatrix, C64, DEFAULT_RANK_TOL};
use crate::states::{max_entangled, DensityMatrix};
use crate::{Error, Result};

/// Default negativity threshold for certificates.
pub const DEFAULT_TOL: f64 = 1e-9;
const IMAG_TOL: f64 = 1e-10;

/// `W = I_{d²} − (d/r) |φ+⟩⟨φ+|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnWitness {
    d: usize,
    r: usize,
    matrix: ComplexMatrix,
}

impl SnWitness {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

pub fn witness(d: usize, r: usize) -> Result<SnWitness> {
    if r < 1 || r >= d {
        return Err(Error::InvalidRank {
            rank: r,
            reason: format!("witness needs 1 <= r < d = {d}"),
        });
    }
    let phi = max_entangled(d)?;
    let projector = ComplexMatrix::projector(phi.amplitudes());
    let matrix = &ComplexMatrix::identity(d * d) - &projector.scale_real(d as f64 / r as f64);
    Ok(SnWitness { d, r, matrix })
}

/// `Re Tr(W ρ)`; the imaginary part must vanish to 1e-10.
pub fn witness_value(w: &SnWitness, rho: &DensityMatrix) -> Result<f64> {
    witness_value_of(w, rho.matrix())
}

pub(crate) fn witness_value_of(w: &SnWitness, m: &ComplexMatrix) -> Result<f64> {
    let n = w.d * w.d;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} state for a witness on {n} dimensions",
            m.rows(),
            m.cols()
        )));
    }
    let value = w.matrix.trace_product(m)?;
    if value.im.abs() > IMAG_TOL {
        return Err(Error::ComplexExpectation(value.im));
    }
    Ok(value.re)
}

/// `Λ_k(X) = Tr(X) I_d − kX` on `M_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaMap {
    pub d: usize,
    pub k: f64,
}

impl LambdaMap {
    pub fn new(d: usize, k: f64) -> Self {
        Self { d, k }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.d || x.cols() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator for Λ on M_{}",
                x.rows(),
                x.cols(),
                self.d
            )));
        }
        Ok(&ComplexMatrix::identity(self.d).scale(x.trace()) - &x.scale_real(self.k))
    }

    /// Whether `k` lies in the window where `Λ_k` is `r`-positive and
    /// `(r+1)`-negative.
    pub fn in_window(&self, r: usize) -> bool {
        r_positivity_window(r).contains(self.k)
    }
}

/// `(id_A ⊗ Λ_k)` on a bipartite state: each `d_B × d_B` block `X` becomes
/// `Tr(X) I − kX`.
pub fn apply_id_lambda(rho: &DensityMatrix, k: f64) -> Result<ComplexMatrix> {
    let (da, db) = rho.dims().bipartite()?;
    apply_id_lambda_matrix(rho.matrix(), (da, db), k)
}

pub fn apply_id_lambda_matrix(m: &ComplexMatrix, (da, db): (usize, usize), k: f64) -> Result<ComplexMatrix> {
    let n = da * db;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator for dims ({da}, {db})",
            m.rows(),
            m.cols()
        )));
    }
    let mut out = m.scale_real(-k);
    for ia in 0..da {
        for ja in 0..da {
            let block_trace: C64 = (0..db).map(|b| m[(ia * db + b, ja * db + b)]).sum();
            for b in 0..db {
                out[(ia * db + b, ja * db + b)] += block_trace;
            }
        }
    }
    Ok(out)
}

/// The half-open interval `(lo, hi]` of strengths `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KWindow {
    pub lo: f64,
    pub hi: f64,
}

impl KWindow {
    pub fn contains(&self, k: f64) -> bool {
        k > self.lo && k <= self.hi
    }
}

/// `(1/(r+1), 1/r]`.
pub fn r_positivity_window(r: usize) -> KWindow {
    assert!(r >= 1, "r-positivity window needs r >= 1");
    KWindow {
        lo: 1.0 / (r as f64 + 1.0),
        hi: 1.0 / r as f64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Evidence is below `−tolerance`: Schmidt number exceeds `r`.
    CertifiedAbove,
    /// No violation found; the test cannot prove Schmidt number `≤ r`.
    ConsistentWithAtMost,
    /// The test is not decisive in this direction.
    Inconclusive,
}

impl Verdict {
    pub fn token(self) -> &'static str {
        match self {
            Verdict::CertifiedAbove => "certified_above",
            Verdict::ConsistentWithAtMost => "consistent_with_at_most",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn from_evidence(value: f64, tolerance: f64) -> Self {
        if value < -tolerance {
            Verdict::CertifiedAbove
        } else {
            Verdict::ConsistentWithAtMost
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificationResult {
    pub verdict: Verdict,
    pub r: usize,
    pub evidence_value: f64,
    pub tolerance: f64,
}

/// Combines the witness and `Λ_{1/r}` tests, keeping the more negative value.
pub fn certify_sn_above(rho: &DensityMatrix, r: usize, tolerance: f64) -> Result<CertificationResult> {
    let (da, db) = rho.dims().bipartite()?;
    if da != db {
        return Err(Error::DimensionMismatch(format!(
            "certification needs d ⊗ d, got {da} ⊗ {db}"
        )));
    }
    let w = witness(da, r)?;
    let witness_val = witness_value(&w, rho)?;
    let lambda_val = min_eigenvalue(&apply_id_lambda(rho, 1.0 / r as f64)?)?;
    let evidence_value = witness_val.min(lambda_val);
    Ok(CertificationResult {
        verdict: Verdict::from_evidence(evidence_value, tolerance),
        r,
        evidence_value,
        tolerance,
    })
}

/// Maximum rank among the canonical Kraus operators. Any Kraus form whose
/// operators all have rank `≤ r` bounds the Schmidt number of the Choi state
/// by `r`, so this is an upper bound (not necessarily tight).
///
/// Works for trace-non-increasing maps such as adjoints too.
pub fn sn_upper_bound_via_kraus(ch: &QuantumChannel) -> Result<usize> {
    let choi = choi_operator(ch)?;
    let kraus = canonical_kraus_operators(&choi, ch.d_in())?;
    Ok(kraus
        .iter()
        .map(|k| matrix_rank(k, DEFAULT_RANK_TOL))
        .max()
        .unwrap_or(0))
}

/// `(r d − 1)/(d² − 1)`: largest depolarizing parameter with Schmidt number
/// at most `r`.
pub fn isotropic_sn_threshold(d: usize, r: usize) -> Result<f64> {
    check_threshold_args(d, r)?;
    let (d, r) = (d as f64, r as f64);
    Ok((r * d - 1.0) / (d * d - 1.0))
}

/// `(r − 1)/(d − 1)`: largest dephasing parameter with Schmidt number at
/// most `r`.
pub fn dephasing_sn_threshold(d: usize, r: usize) -> Result<f64> {
    check_threshold_args(d, r)?;
    Ok((r as f64 - 1.0) / (d as f64 - 1.0))
}

/// `1/(d + 1)`: depolarizing channels are entanglement breaking up to here.
pub fn eb_threshold(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(1.0 / (d as f64 + 1.0))
}

fn check_threshold_args(d: usize, r: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if r < 1 || r > d {
        return Err(Error::InvalidRank {
            rank: r,
            reason: format!("threshold needs 1 <= r <= d = {d}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;
    use crate::states::{embedded_max_entangled, isotropic_state, SystemDims};

    fn phi_plus(d: usize) -> DensityMatrix {
        max_entangled(d).unwrap().density_matrix()
    }

    #[test]
    fn witness_values_on_reference_states() {
        let w = witness(3, 2).unwrap();
        assert!((witness_value(&w, &phi_plus(3)).unwrap() + 0.5).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(SystemDims::Bipartite(3, 3));
        assert!((witness_value(&w, &mixed).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        for p in [0.0, 0.25, 0.5, 0.625, 0.8, 1.0] {
            let v = witness_value(&w, &isotropic_state(3, p).unwrap()).unwrap();
            assert!((v - (5.0 / 6.0 - 4.0 * p / 3.0)).abs() < 1e-14, "p={p}");
        }
    }

    #[test]
    fn witness_rank_validation() {
        assert!(matches!(witness(3, 3), Err(Error::InvalidRank { .. })));
        assert!(matches!(witness(3, 0), Err(Error::InvalidRank { .. })));
        let w = witness(2, 1).unwrap();
        assert!(matches!(
            witness_value(&w, &phi_plus(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn witness_matrix_is_exact() {
        let w = witness(4, 3).unwrap();
        let m = w.matrix();
        // diagonal |ii⟩ entries: 1 − (d/r)(1/d) = 1 − 1/r
        assert_eq!(m[(0, 0)], C64::new(1.0 - 1.0 / 3.0, 0.0));
        assert_eq!(m[(0, 5)], C64::new(-1.0 / 3.0, 0.0));
        assert_eq!(m[(1, 1)], C64::new(1.0, 0.0));
    }

    #[test]
    fn lambda_map_action() {
        let x = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        let y = LambdaMap::new(3, 0.5).apply(&x).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { x.trace() } else { C64::new(0.0, 0.0) } - x[(i, j)] * 0.5;
                assert!((y[(i, j)] - expected).norm() < 1e-15);
            }
        }
        assert!(LambdaMap::new(3, 0.5).in_window(2));
        assert!(!LambdaMap::new(3, 0.5).in_window(1));
    }

    #[test]
    fn id_lambda_blockwise_matches_single_system_map() {
        // on a product operator, (id ⊗ Λ)(X ⊗ Y) = X ⊗ Λ(Y)
        let x = ComplexMatrix::from_fn(2, 2, |i, j| C64::new(1.0 + i as f64, j as f64));
        let y = ComplexMatrix::from_fn(3, 3, |i, j| C64::new(i as f64 * 0.5, 1.0 - j as f64));
        let lhs = apply_id_lambda_matrix(&crate::linalg::kron(&x, &y), (2, 3), 0.4).unwrap();
        let rhs = crate::linalg::kron(&x, &LambdaMap::new(3, 0.4).apply(&y).unwrap());
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn id_lambda_examples() {
        // k = 0 gives ρ_A ⊗ I
        let rho = isotropic_state(3, 0.8).unwrap();
        let out = apply_id_lambda(&rho, 0.0).unwrap();
        assert!(hermitian_eig(&out).unwrap().min_eigenvalue() >= 0.0);

        // |φ+⟩⟨φ+| with k = 1/2: I/3 − P/2 has eigenvalues −1/6 and 1/3
        let e = hermitian_eig(&apply_id_lambda(&phi_plus(3), 0.5).unwrap()).unwrap();
        assert!((e.min_eigenvalue() + 1.0 / 6.0).abs() < 1e-14);
        assert!((e.max_eigenvalue() - 1.0 / 3.0).abs() < 1e-14);

        // product states survive Λ_k for k ≤ 1
        let a = crate::states::random_state_sn_at_most(3, 3, 1, 1, 3).unwrap();
        for k in [0.25, 0.5, 1.0] {
            assert!(min_eigenvalue(&apply_id_lambda(&a, k).unwrap()).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn windows() {
        assert_eq!(r_positivity_window(1), KWindow { lo: 0.5, hi: 1.0 });
        assert_eq!(r_positivity_window(2), KWindow { lo: 1.0 / 3.0, hi: 0.5 });
        assert_eq!(
            r_positivity_window(3),
            KWindow {
                lo: 0.25,
                hi: 1.0 / 3.0
            }
        );
        let w = r_positivity_window(2);
        assert!(w.contains(0.5) && !w.contains(1.0 / 3.0));
    }

    #[test]
    fn negativity_on_rank_r_plus_one_state() {
        for r in 1..=3 {
            let d = r + 1;
            let psi = embedded_max_entangled(d, r + 1).density_matrix();
            let k = r_positivity_window(r).hi;
            let m = min_eigenvalue(&apply_id_lambda(&psi, k).unwrap()).unwrap();
            assert!((m - (1.0 / (r as f64 + 1.0) - k)).abs() < 1e-14);
        }
    }

    #[test]
    fn certification_examples() {
        let res = certify_sn_above(&phi_plus(3), 2, DEFAULT_TOL).unwrap();
        assert_eq!(res.verdict, Verdict::CertifiedAbove);
        assert!((res.evidence_value + 0.5).abs() < 1e-14);

        let mixed = DensityMatrix::maximally_mixed(SystemDims::Bipartite(3, 3));
        let res = certify_sn_above(&mixed, 2, DEFAULT_TOL).unwrap();
        assert_eq!(res.verdict, Verdict::ConsistentWithAtMost);
        assert!(res.evidence_value > 0.0);

        let res = certify_sn_above(&isotropic_state(3, 0.7).unwrap(), 2, DEFAULT_TOL).unwrap();
        assert_eq!(res.verdict, Verdict::CertifiedAbove);
    }

    #[test]
    fn certification_is_monotone_in_r() {
        for p in [0.3, 0.5, 0.7, 0.9, 1.0] {
            let rho = isotropic_state(4, p).unwrap();
            let verdicts: Vec<_> = (1..4)
                .map(|r| certify_sn_above(&rho, r, DEFAULT_TOL).unwrap().verdict)
                .collect();
            for r in 1..verdicts.len() {
                if verdicts[r] == Verdict::CertifiedAbove {
                    assert_eq!(verdicts[r - 1], Verdict::CertifiedAbove, "p={p}");
                }
            }
        }
    }

    #[test]
    fn upper_bounds() {
        assert_eq!(sn_upper_bound_via_kraus(&QuantumChannel::identity(3)).unwrap(), 3);
        // measure-and-prepare: rank-one Kraus |ψ_j⟩⟨j|
        let kraus = (0..3).map(|j| ComplexMatrix::unit(3, (j + 1) % 3, j)).collect();
        let eb = QuantumChannel::new(kraus).unwrap();
        assert_eq!(sn_upper_bound_via_kraus(&eb).unwrap(), 1);
        for p in [0.1, 0.5, 0.9] {
            let dep = QuantumChannel::depolarizing(3, p).unwrap();
            assert_eq!(sn_upper_bound_via_kraus(&dep).unwrap(), 3);
        }
    }

    #[test]
    fn closed_form_thresholds() {
        assert_eq!(isotropic_sn_threshold(3, 2).unwrap(), 5.0 / 8.0);
        assert_eq!(isotropic_sn_threshold(3, 1).unwrap(), 0.25);
        assert_eq!(isotropic_sn_threshold(3, 3).unwrap(), 1.0);
        assert_eq!(isotropic_sn_threshold(3, 1).unwrap(), eb_threshold(3).unwrap());
        assert_eq!(dephasing_sn_threshold(3, 2).unwrap(), 0.5);
        assert!(isotropic_sn_threshold(3, 4).is_err());
    }
}
