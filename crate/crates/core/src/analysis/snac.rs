//! 2-local Schmidt-number annihilation study.
//!
//! A channel `Φ` acting on both halves of a bipartite system is tested with
//! the `(id ⊗ Λ_k)` criterion on `(Φ ⊗ Φ)(|ψ⟩⟨ψ|)` for
//! `|ψ⟩ = Σ_j √q_j |jj⟩`. A negative eigenvalue shows some output keeps
//! Schmidt number above `r` (for `k` in the `r` window), so `Φ` is not
//! 2-locally `r`-annihilating. A non-negative spectrum proves nothing.
//!
//! Computational-basis Schmidt vectors suffice for covariant families such as
//! the depolarizing channel; `verify` checks that against random local bases.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NEGATIVITY_TOL;
use crate::channels::{ChannelFamily, QuantumChannel};
use crate::linalg::{kron, min_eigenvalue, ComplexMatrix, C64};
use crate::schmidt::{apply_id_lambda, Verdict};
use crate::states::{DensityMatrix, PureState, SystemDims};
use crate::{Error, Result};

use super::sweep::uniform_grid;

/// Squared Schmidt coefficients `q_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint {
    q: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidSimplexPoint("empty".into()));
        }
        if q.iter().any(|&x| x.is_nan() || x < 0.0) {
            return Err(Error::InvalidSimplexPoint(format!(
                "negative or NaN component in {q:?}"
            )));
        }
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSimplexPoint(format!("components sum to {total}")));
        }
        Ok(Self { q })
    }

    pub fn uniform(d: usize) -> Self {
        Self {
            q: vec![1.0 / d as f64; d],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `Σ_j √q_j |jj⟩`.
    pub fn state(&self) -> PureState {
        let d = self.q.len();
        let amps = (0..d * d)
            .map(|k| {
                let (i, j) = (k / d, k % d);
                C64::new(if i == j { self.q[i].sqrt() } else { 0.0 }, 0.0)
            })
            .collect();
        PureState::normalized(amps, SystemDims::Bipartite(d, d)).expect("simplex point has unit norm")
    }
}

/// All points `n / N` with non-negative integers `n` summing to `N`, in
/// lexicographic order of `n`.
pub fn simplex_lattice(d: usize, subdivisions: usize) -> Vec<SimplexPoint> {
    fn fill(prefix: &mut Vec<usize>, remaining: usize, slots: usize, total: usize, out: &mut Vec<SimplexPoint>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(SimplexPoint {
                q: prefix.iter().map(|&n| n as f64 / total as f64).collect(),
            });
            prefix.pop();
            return;
        }
        for n in 0..=remaining {
            prefix.push(n);
            fill(prefix, remaining - n, slots - 1, total, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 && subdivisions > 0 {
        fill(&mut Vec::with_capacity(d), subdivisions, d, subdivisions, &mut out);
    }
    out
}

/// Caches `Φ(|i⟩⟨j|)` so that `(Φ ⊗ Φ)(|ψ_q⟩⟨ψ_q|)` is a weighted sum of
/// `d²` Kronecker products.
#[derive(Debug, Clone)]
pub struct TwoLocalEvaluator {
    d: usize,
    images: Vec<ComplexMatrix>,
}

impl TwoLocalEvaluator {
    pub fn new(ch: &QuantumChannel) -> Result<Self> {
        let d = ch.d_in();
        if ch.d_out() != d {
            return Err(Error::NonSquareChannel {
                d_in: d,
                d_out: ch.d_out(),
            });
        }
        let images = (0..d * d)
            .map(|k| ch.apply_operator(&ComplexMatrix::unit(d, k / d, k % d)))
            .collect::<Result<_>>()?;
        Ok(Self { d, images })
    }

    pub fn output(&self, q: &SimplexPoint) -> Result<DensityMatrix> {
        let d = self.d;
        if q.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "simplex point of length {} for d = {d}",
                q.len()
            )));
        }
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let w = (q.q[i] * q.q[j]).sqrt();
                if w == 0.0 {
                    continue;
                }
                let img = &self.images[i * d + j];
                out = &out + &kron(img, img).scale_real(w);
            }
        }
        Ok(DensityMatrix::from_trusted(out, SystemDims::Bipartite(d, d)))
    }

    pub fn min_eig(&self, q: &SimplexPoint, k: f64) -> Result<f64> {
        check_k(k)?;
        min_eigenvalue(&apply_id_lambda(&self.output(q)?, k)?)
    }
}

/// `(Φ ⊗ Φ)(|ψ⟩⟨ψ|)` with `|ψ⟩ = Σ_j √q_j |jj⟩`.
pub fn two_local_output(ch: &QuantumChannel, q: &SimplexPoint) -> Result<DensityMatrix> {
    TwoLocalEvaluator::new(ch)?.output(q)
}

/// `(Φ ⊗ Φ)(|ψ⟩⟨ψ|)` for an arbitrary bipartite pure state, through the
/// tensor-product channel.
pub fn two_local_output_state(ch: &QuantumChannel, psi: &PureState) -> Result<DensityMatrix> {
    let (da, db) = psi.dims().bipartite()?;
    if da != ch.d_in() || db != ch.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "state on {da} ⊗ {db} for a channel on M_{}",
            ch.d_in()
        )));
    }
    QuantumChannel::tensor(ch, ch).apply(&psi.density_matrix())
}

/// Smallest eigenvalue of `(id ⊗ Λ_k)((Φ ⊗ Φ)(|ψ_q⟩⟨ψ_q|))`.
pub fn snac_min_eig(ch: &QuantumChannel, q: &SimplexPoint, k: f64) -> Result<f64> {
    TwoLocalEvaluator::new(ch)?.min_eig(q, k)
}

pub fn snac_min_eig_for_state(ch: &QuantumChannel, psi: &PureState, k: f64) -> Result<f64> {
    check_k(k)?;
    min_eigenvalue(&apply_id_lambda(&two_local_output_state(ch, psi)?, k)?)
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k <= 1.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name: "k",
            value: k,
            range: "(0, 1]",
        })
    }
}

/// Closed form of [`snac_min_eig`] for the depolarizing channel at uniform
/// `q`: the output is isotropic with parameter `p²`, so the minimum is
/// `1/d − k (p²(d² − 1) + 1)/d²`.
pub fn snac_uniform_closed_form(d: usize, p: f64, k: f64) -> f64 {
    let d = d as f64;
    1.0 / d - k * (p * p * (d * d - 1.0) + 1.0) / (d * d)
}

/// `(E ⊗ E)(|ψ_q⟩⟨ψ_q|)` for the depolarizing channel written entry by
/// entry: with `t = (1−p)²/d²`,
///
/// - `|jj⟩⟨jj|`: `p² q_j + 2p(1−p) q_j / d + t`,
/// - `|ij⟩⟨ij|`, `i ≠ j`: `p(1−p)(q_i + q_j)/d + t`,
/// - `|ii⟩⟨jj|`, `i ≠ j`: `p² √(q_i q_j)`,
///
/// and zero elsewhere.
pub fn depolarizing_two_local_closed_form(d: usize, p: f64, q: &SimplexPoint) -> Result<ComplexMatrix> {
    if q.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "simplex point of length {} for d = {d}",
            q.len()
        )));
    }
    let q = q.as_slice();
    let df = d as f64;
    let t = (1.0 - p) * (1.0 - p) / (df * df);
    let n = d * d;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            let idx = i * d + j;
            let diag = if i == j {
                p * p * q[i] + 2.0 * p * (1.0 - p) * q[i] / df + t
            } else {
                p * (1.0 - p) * (q[i] + q[j]) / df + t
            };
            m[(idx, idx)] = C64::new(diag, 0.0);
            if i != j {
                m[(i * d + i, j * d + j)] = C64::new(p * p * (q[i] * q[j]).sqrt(), 0.0);
            }
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnacRecord {
    pub p: f64,
    pub min_eig: f64,
    pub q_star: SimplexPoint,
    /// `CertifiedAbove` when the minimum is below `−1e-9` (the channel is not
    /// 2-locally annihilating for this `r`), otherwise `Inconclusive`.
    pub verdict: Verdict,
}

/// For each `p` on a uniform grid of `[0, 1]`, minimizes [`snac_min_eig`]
/// over the simplex lattice with `q_grid` subdivisions. Ties keep the first
/// lattice point in lexicographic order.
pub fn snac_sweep(family: &ChannelFamily, d: usize, k: f64, p_grid: usize, q_grid: usize) -> Result<Vec<SnacRecord>> {
    if p_grid < 2 || q_grid < 2 {
        return Err(Error::ParamOutOfRange {
            name: "grid",
            value: p_grid.min(q_grid) as f64,
            range: ">= 2",
        });
    }
    check_k(k)?;
    let lattice = simplex_lattice(d, q_grid);
    uniform_grid(p_grid)
        .into_par_iter()
        .map(|p| {
            let eval = TwoLocalEvaluator::new(&family.channel(d, p)?)?;
            let mut best: Option<(f64, &SimplexPoint)> = None;
            for q in &lattice {
                let v = eval.min_eig(q, k)?;
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, q));
                }
            }
            let (min_eig, q_star) = best.expect("lattice is non-empty");
            Ok(SnacRecord {
                p,
                min_eig,
                q_star: q_star.clone(),
                verdict: if min_eig < -NEGATIVITY_TOL {
                    Verdict::CertifiedAbove
                } else {
                    Verdict::Inconclusive
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_size_and_points() {
        let l = simplex_lattice(3, 30);
        assert_eq!(l.len(), 496);
        assert!(l.contains(&SimplexPoint::new(vec![10.0 / 30.0; 3]).unwrap()));
        for q in &l {
            assert!((q.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(simplex_lattice(2, 4).len(), 5);
    }

    #[test]
    fn simplex_validation() {
        assert!(SimplexPoint::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexPoint::new(vec![1.5, -0.5]).is_err());
        assert!(SimplexPoint::new(vec![]).is_err());
    }

    #[test]
    fn identity_on_product_input() {
        let q = SimplexPoint::new(vec![1.0, 0.0, 0.0]).unwrap();
        let out = two_local_output(&QuantumChannel::identity(3), &q).unwrap();
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::unit(9, 0, 0)) < 1e-15);
    }

    #[test]
    fn closed_form_matches_generic_application() {
        let q = SimplexPoint::new(vec![0.5, 0.3, 0.2]).unwrap();
        for p in [0.0, 0.2, 0.5, 0.77, 1.0] {
            let ch = QuantumChannel::depolarizing(3, p).unwrap();
            let generic = two_local_output_state(&ch, &q.state()).unwrap();
            let cached = two_local_output(&ch, &q).unwrap();
            let closed = depolarizing_two_local_closed_form(3, p, &q).unwrap();
            assert!(generic.matrix().max_abs_diff(&closed) < 1e-12, "p={p}");
            assert!(cached.matrix().max_abs_diff(&closed) < 1e-12, "p={p}");
            assert!((cached.matrix().trace().re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn uniform_min_eig_closed_form() {
        let q = SimplexPoint::uniform(3);
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let ch = QuantumChannel::depolarizing(3, p).unwrap();
            for k in [0.5, 1.0] {
                let got = snac_min_eig(&ch, &q, k).unwrap();
                assert!((got - snac_uniform_closed_form(3, p, k)).abs() < 1e-12, "p={p} k={k}");
            }
            // at k = 1 the closed form is (2 − 8p²)/9
            assert!((snac_uniform_closed_form(3, p, 1.0) - (2.0 - 8.0 * p * p) / 9.0).abs() < 1e-15);
            // at k = 1/2 it is (5 − 8p²)/18
            assert!((snac_uniform_closed_form(3, p, 0.5) - (5.0 - 8.0 * p * p) / 18.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sweep_reports_lattice_minimizer() {
        // product inputs give min eig (1 − p)/3 · (1 − k(p + (1 − p)/3))
        let product = |p: f64, k: f64| (1.0 - p) / 3.0 * (1.0 - k * (p + (1.0 - p) / 3.0));
        let recs = snac_sweep(&ChannelFamily::Depolarizing, 3, 0.5, 11, 6).unwrap();
        assert_eq!(recs.len(), 11);
        for rec in &recs[1..] {
            let uniform = snac_uniform_closed_form(3, rec.p, 0.5);
            assert!(
                (rec.min_eig - uniform.min(product(rec.p, 0.5))).abs() < 1e-12,
                "p={}",
                rec.p
            );
            if uniform < product(rec.p, 0.5) - 1e-12 {
                for &x in rec.q_star.as_slice() {
                    assert!((x - 1.0 / 3.0).abs() < 1e-12, "p={} q*={:?}", rec.p, rec.q_star);
                }
            }
        }
        // at small p the product point wins, at large p the uniform point
        assert_eq!(recs[1].q_star.as_slice(), &[0.0, 0.0, 1.0]);
        assert_eq!(recs[9].q_star, SimplexPoint::uniform(3));
    }

    #[test]
    fn k_validation() {
        let ch = QuantumChannel::identity(2);
        assert!(snac_min_eig(&ch, &SimplexPoint::uniform(2), 0.0).is_err());
        assert!(snac_min_eig(&ch, &SimplexPoint::uniform(2), 1.5).is_err());
    }
}
