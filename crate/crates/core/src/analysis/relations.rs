use serde::{Deserialize, Serialize};

use super::sweep::{bisect_crossing, witness_threshold};
use crate::channels::ChannelFamily;
use crate::linalg::{min_eigenvalue, partial_transpose, Subsystem};
use crate::schmidt::{witness, witness_value};
use crate::states::isotropic_state;
use crate::{Error, Result};

/// Thresholds closer than this are treated as coincident.
const GAP_TOL: f64 = 1e-8;

/// Minimum eigenvalue of the partial transpose of the isotropic state.
pub fn ppt_min_eigenvalue(d: usize, p: f64) -> Result<f64> {
    let rho = isotropic_state(d, p)?;
    min_eigenvalue(&partial_transpose(rho.matrix(), (d, d), Subsystem::B)?)
}

/// Bisected PPT crossing of the isotropic family, which is where the
/// depolarizing channel stops being entanglement breaking.
pub fn eb_ppt_threshold(d: usize, tol: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    bisect_crossing(|p| ppt_min_eigenvalue(d, p), 0.0, 1.0, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidpointCheck {
    pub p: f64,
    pub ppt_min_eig: f64,
    pub witness_value: f64,
}

/// Depolarizing channel: where it is entanglement breaking versus where it
/// is `r`-Schmidt-number breaking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub d: usize,
    pub r: usize,
    pub eb_threshold: f64,
    pub snbc_threshold: f64,
    /// `(eb, snbc]`: `r`-SNBC but not EB. `None` when the thresholds coincide.
    pub gap: Option<(f64, f64)>,
    pub midpoint: Option<MidpointCheck>,
    /// The midpoint violates PPT while the witness stays non-negative.
    pub strict_inclusion_witnessed: bool,
}

pub fn relation_report(d: usize, r: usize, tol: f64) -> Result<RelationReport> {
    if r < 1 || r >= d {
        return Err(Error::InvalidRank {
            rank: r,
            reason: format!("relation report needs 1 <= r < d = {d}"),
        });
    }
    let eb = eb_ppt_threshold(d, tol)?;
    let snbc = witness_threshold(&ChannelFamily::Depolarizing, d, r, tol)?;
    let gap = (snbc - eb > GAP_TOL).then_some((eb, snbc));
    let midpoint = match gap {
        Some((lo, hi)) => {
            let p = 0.5 * (lo + hi);
            Some(MidpointCheck {
                p,
                ppt_min_eig: ppt_min_eigenvalue(d, p)?,
                witness_value: witness_value(&witness(d, r)?, &isotropic_state(d, p)?)?,
            })
        }
        None => None,
    };
    let strict_inclusion_witnessed = midpoint.is_some_and(|m| m.ppt_min_eig < 0.0 && m.witness_value >= 0.0);
    Ok(RelationReport {
        d,
        r,
        eb_threshold: eb,
        snbc_threshold: snbc,
        gap,
        midpoint,
        strict_inclusion_witnessed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eb_thresholds() {
        for d in [2, 3, 4] {
            let t = eb_ppt_threshold(d, 1e-10).unwrap();
            assert!((t - 1.0 / (d as f64 + 1.0)).abs() < 1e-8, "d={d}");
        }
    }

    #[test]
    fn ppt_closed_form() {
        // min eigenvalue of the partial transpose is (1 − p)/d² − p/d
        for p in [0.0, 0.1, 0.5, 1.0] {
            let got = ppt_min_eigenvalue(3, p).unwrap();
            assert!((got - ((1.0 - p) / 9.0 - p / 3.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn report_d3_r2() {
        let rep = relation_report(3, 2, 1e-10).unwrap();
        let (lo, hi) = rep.gap.unwrap();
        assert!((lo - 0.25).abs() < 1e-8 && (hi - 0.625).abs() < 1e-8);
        let m = rep.midpoint.unwrap();
        assert!(m.ppt_min_eig < 0.0 && m.witness_value > 0.0);
        assert!(rep.strict_inclusion_witnessed);
    }

    #[test]
    fn report_r1_has_no_gap() {
        let rep = relation_report(3, 1, 1e-10).unwrap();
        assert!(rep.gap.is_none());
        assert!(!rep.strict_inclusion_witnessed);
    }

    #[test]
    fn report_d4_r2() {
        let rep = relation_report(4, 2, 1e-10).unwrap();
        let (lo, hi) = rep.gap.unwrap();
        assert!((lo - 0.2).abs() < 1e-8 && (hi - 7.0 / 15.0).abs() < 1e-8);
        assert!(relation_report(3, 3, 1e-9).is_err());
    }
}
