//! Closure and counterexample experiments for Schmidt-number breaking
//! channels, with seeded random channels.
//!
//! - `T1`: convex mixtures of 2-SNBC channels stay 2-SNBC.
//! - `T3`: series composition of channels with rank-≤2 Kraus operators stays
//!   2-SNBC.
//! - `T4`: parallel composition does not: Kraus ranks multiply, and `S ⊗ S`
//!   for a 2-SNBC `S` can be certified above 2.
//! - `P1`: `S ∘ F` and `F ∘ S` stay 2-SNBC for any channel `F`.
//! - `P2`: the Kraus-rank bound of a channel equals that of its adjoint.

use serde::{Deserialize, Serialize};

use super::NEGATIVITY_TOL;
use crate::channels::QuantumChannel;
use crate::linalg::{ComplexMatrix, DEFAULT_RANK_TOL};
use crate::schmidt::{sn_upper_bound_via_kraus, witness, witness_value_of};
use crate::states::seeded_rng;
use crate::Result;

const D: usize = 3;
const R: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub cases: usize,
    /// Most adverse value seen (smallest witness value, or 0/1 flags).
    pub worst: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub seed: u64,
    pub checks: Vec<TheoremCheck>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: &str) -> Option<&TheoremCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

fn choi_witness(ch: &QuantumChannel, d: usize, r: usize) -> Result<f64> {
    witness_value_of(&witness(d, r)?, ch.choi()?.matrix())
}

/// Kraus `{P_{01}, |2⟩⟨2|}`: a 2-SNBC channel whose Kraus ranks are 2 and 1.
pub fn block_dephasing_channel() -> QuantumChannel {
    let p01 = ComplexMatrix::diag_real(&[1.0, 1.0, 0.0]);
    let p2 = ComplexMatrix::diag_real(&[0.0, 0.0, 1.0]);
    QuantumChannel::new(vec![p01, p2]).expect("projective channel is trace preserving")
}

/// Runs every experiment; `Err` only on numerical failure.
pub fn theorem_suite(seed: u64) -> Result<TheoremReport> {
    let mut rng = seeded_rng(seed);
    let low_rank: Vec<QuantumChannel> = (0..6)
        .map(|i| QuantumChannel::random(D, 2 + i % 2, Some(R), &mut rng))
        .collect::<Result<_>>()?;
    let generic: Vec<QuantumChannel> = (0..6)
        .map(|i| QuantumChannel::random(D, 1 + i % 4, None, &mut rng))
        .collect::<Result<_>>()?;

    let checks = vec![
        convexity(&low_rank)?,
        series_closure(&low_rank)?,
        tensor_counterexample(&low_rank)?,
        composition_with_any_channel(&low_rank, &generic)?,
        adjoint_bound(&low_rank, &generic)?,
    ];
    Ok(TheoremReport { seed, checks })
}

fn convexity(low_rank: &[QuantumChannel]) -> Result<TheoremCheck> {
    let mut members = vec![
        QuantumChannel::depolarizing(D, 0.3)?,
        QuantumChannel::dephasing(D, 0.4)?,
    ];
    members.extend(low_rank.iter().take(3).cloned());
    let mut worst = f64::INFINITY;
    let mut cases = 0;
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            for step in 0..=10 {
                let w = step as f64 / 10.0;
                let mix = QuantumChannel::mixture(&[(w, a), (1.0 - w, b)])?;
                worst = worst.min(choi_witness(&mix, D, R)?);
                cases += 1;
            }
        }
    }
    Ok(TheoremCheck {
        id: "T1".into(),
        description: "convex mixtures of 2-SNBC channels keep a non-negative witness".into(),
        passed: worst >= -NEGATIVITY_TOL,
        cases,
        worst,
        detail: format!(
            "{} channels, 11 weights per pair, min witness {worst:.3e}",
            members.len()
        ),
    })
}

fn series_closure(low_rank: &[QuantumChannel]) -> Result<TheoremCheck> {
    let mut worst = f64::INFINITY;
    let mut max_rank = 0;
    let mut cases = 0;
    for a in low_rank {
        for b in low_rank {
            let comp = QuantumChannel::compose(a, b)?;
            worst = worst.min(choi_witness(&comp, D, R)?);
            max_rank = max_rank.max(comp.max_kraus_rank(DEFAULT_RANK_TOL));
            cases += 1;
        }
    }
    Ok(TheoremCheck {
        id: "T3".into(),
        description: "compositions of rank-<=2 Kraus channels stay 2-SNBC".into(),
        passed: worst >= -NEGATIVITY_TOL && max_rank <= R,
        cases,
        worst,
        detail: format!("max composite Kraus rank {max_rank}, min witness {worst:.3e}"),
    })
}

fn tensor_counterexample(low_rank: &[QuantumChannel]) -> Result<TheoremCheck> {
    let s = block_dephasing_channel();
    let single_rank = s.max_kraus_rank(DEFAULT_RANK_TOL);
    let ss = QuantumChannel::tensor(&s, &s);
    let product_rank = ss.max_kraus_rank(DEFAULT_RANK_TOL);
    let single_witness = choi_witness(&s, D, R)?;
    // Choi of S ⊗ S lives on (3·3) ⊗ (3·3); the d = 9 witness with r = 2
    let product_witness = choi_witness(&ss, D * D, R)?;

    let mut random_ok = true;
    for pair in low_rank.chunks(2).filter(|c| c.len() == 2) {
        let t = QuantumChannel::tensor(&pair[0], &pair[1]);
        let expected = pair[0].max_kraus_rank(DEFAULT_RANK_TOL) * pair[1].max_kraus_rank(DEFAULT_RANK_TOL);
        random_ok &= t.max_kraus_rank(DEFAULT_RANK_TOL) == expected;
    }

    let passed = single_rank == 2
        && product_rank == 4
        && single_witness >= -NEGATIVITY_TOL
        && product_witness < -NEGATIVITY_TOL
        && random_ok;
    Ok(TheoremCheck {
        id: "T4".into(),
        description: "tensor products multiply Kraus ranks and can leave 2-SNBC".into(),
        passed,
        cases: 1 + low_rank.len() / 2,
        worst: product_witness,
        detail: format!(
            "Kraus rank {single_rank}x{single_rank} -> {product_rank}; witness(S) = {single_witness:.6}, \
             witness(S⊗S, d=9, r=2) = {product_witness:.6}"
        ),
    })
}

fn composition_with_any_channel(low_rank: &[QuantumChannel], generic: &[QuantumChannel]) -> Result<TheoremCheck> {
    let mut snbc = vec![
        QuantumChannel::depolarizing(D, 0.5)?,
        QuantumChannel::dephasing(D, 0.5)?,
    ];
    snbc.extend(low_rank.iter().take(2).cloned());
    let mut worst = f64::INFINITY;
    let mut cases = 0;
    for s in &snbc {
        for f in generic {
            worst = worst.min(choi_witness(&QuantumChannel::compose(f, s)?, D, R)?);
            worst = worst.min(choi_witness(&QuantumChannel::compose(s, f)?, D, R)?);
            cases += 2;
        }
    }
    Ok(TheoremCheck {
        id: "P1".into(),
        description: "S∘F and F∘S stay 2-SNBC for 2-SNBC S and arbitrary F".into(),
        passed: worst >= -NEGATIVITY_TOL,
        cases,
        worst,
        detail: format!("min witness {worst:.3e}"),
    })
}

fn adjoint_bound(low_rank: &[QuantumChannel], generic: &[QuantumChannel]) -> Result<TheoremCheck> {
    let mut family = vec![
        QuantumChannel::identity(D),
        QuantumChannel::depolarizing(D, 0.7)?,
        QuantumChannel::dephasing(D, 0.4)?,
        block_dephasing_channel(),
    ];
    family.extend(low_rank.iter().cloned());
    family.extend(generic.iter().cloned());
    let mut mismatches = Vec::new();
    for (i, ch) in family.iter().enumerate() {
        let a = sn_upper_bound_via_kraus(ch)?;
        let b = sn_upper_bound_via_kraus(&ch.adjoint())?;
        if a != b {
            mismatches.push(format!("#{i}: {a} vs {b}"));
        }
    }
    Ok(TheoremCheck {
        id: "P2".into(),
        description: "Kraus-rank Schmidt bound is invariant under the adjoint".into(),
        passed: mismatches.is_empty(),
        cases: family.len(),
        worst: mismatches.len() as f64,
        detail: if mismatches.is_empty() {
            format!("{} channels, all bounds equal", family.len())
        } else {
            mismatches.join("; ")
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_for_seed_zero() {
        let rep = theorem_suite(0).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{}: {}", c.id, c.detail);
        }
        assert_eq!(rep.checks.len(), 5);
    }

    #[test]
    fn t1_example_mixture() {
        let a = QuantumChannel::depolarizing(3, 0.3).unwrap();
        let b = QuantumChannel::dephasing(3, 0.4).unwrap();
        let mix = QuantumChannel::mixture(&[(0.5, &a), (0.5, &b)]).unwrap();
        assert!(choi_witness(&mix, 3, 2).unwrap() >= 0.0);
    }

    #[test]
    fn t4_counterexample_ranks() {
        let s = block_dephasing_channel();
        assert_eq!(s.kraus_ranks(DEFAULT_RANK_TOL), vec![2, 1]);
        let ss = QuantumChannel::tensor(&s, &s);
        assert_eq!(ss.kraus_ranks(DEFAULT_RANK_TOL), vec![4, 2, 2, 1]);
    }

    #[test]
    fn p2_depolarizing() {
        let ch = QuantumChannel::depolarizing(3, 0.7).unwrap();
        assert_eq!(sn_upper_bound_via_kraus(&ch).unwrap(), 3);
        assert_eq!(sn_upper_bound_via_kraus(&ch.adjoint()).unwrap(), 3);
    }
}
