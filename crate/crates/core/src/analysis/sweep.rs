use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NEGATIVITY_TOL;
use crate::channels::ChannelFamily;
use crate::schmidt::{witness, witness_value_of, Verdict};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub parameter: f64,
    pub value: f64,
    pub verdict: Verdict,
}

/// `grid` evenly spaced points from 0 to 1 inclusive.
pub fn uniform_grid(grid: usize) -> Vec<f64> {
    (0..grid).map(|i| i as f64 / (grid - 1) as f64).collect()
}

/// `p ↦ Tr(W_r (id ⊗ Φ_p)|φ+⟩⟨φ+|)` for one family member.
pub fn witness_curve(family: &ChannelFamily, d: usize, r: usize, param: f64) -> Result<f64> {
    let w = witness(d, r)?;
    let choi = family.channel(d, param)?.choi()?;
    witness_value_of(&w, choi.matrix())
}

/// Witness value of the family's Choi state at every grid point of `[0, 1]`.
pub fn snbc_witness_sweep(family: &ChannelFamily, d: usize, r: usize, grid: usize) -> Result<Vec<SweepRecord>> {
    if grid < 2 {
        return Err(Error::ParamOutOfRange {
            name: "grid",
            value: grid as f64,
            range: ">= 2",
        });
    }
    // fail fast on bad (d, r) before spawning work
    witness(d, r)?;
    uniform_grid(grid)
        .into_par_iter()
        .map(|parameter| {
            let value = witness_curve(family, d, r, parameter)?;
            Ok(SweepRecord {
                parameter,
                value,
                verdict: Verdict::from_evidence(value, NEGATIVITY_TOL),
            })
        })
        .collect()
}

/// Adjacent grid cells across which the value changes sign (zero counts as
/// non-negative).
pub fn sign_changes(records: &[SweepRecord]) -> Vec<(f64, f64)> {
    records
        .windows(2)
        .filter(|w| (w[0].value < 0.0) != (w[1].value < 0.0))
        .map(|w| (w[0].parameter, w[1].parameter))
        .collect()
}

/// Midpoint bisection for a sign change of `f` on `[lo, hi]`; stops once the
/// bracket is at most `tol` wide and returns its midpoint.
pub fn bisect_crossing<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if tol.is_nan() || tol <= 0.0 || lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::ParamOutOfRange {
            name: "bisection bracket/tol",
            value: tol,
            range: "lo < hi, tol > 0",
        });
    }
    let (mut a, mut b) = (lo, hi);
    let f_lo = f(a)?;
    let f_hi = f(b)?;
    if f_lo * f_hi >= 0.0 || (f_lo * f_hi).is_nan() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let mut fa = f_lo;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Bisected crossing of the witness curve on `[0, 1]`.
pub fn witness_threshold(family: &ChannelFamily, d: usize, r: usize, tol: f64) -> Result<f64> {
    let w = witness(d, r)?;
    bisect_crossing(
        |p| {
            let choi = family.channel(d, p)?.choi()?;
            witness_value_of(&w, choi.matrix())
        },
        0.0,
        1.0,
        tol,
    )
}
