//! Seeded property suites behind `schmidt-lens verify`.
//!
//! Each suite draws its own RNG stream from the seed and the suite name, so
//! running one suite alone gives the same cases as running it inside `all`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    depolarizing_two_local_closed_form, relation_report, simplex_lattice, snac_min_eig, snac_min_eig_for_state,
    snac_uniform_closed_form, theorem_suite, two_local_output, witness_threshold, SimplexPoint, TheoremCheck,
    NEGATIVITY_TOL,
};
use crate::channels::{action_distance, canonical_kraus, is_cptp, ChannelFamily, QuantumChannel};
use crate::linalg::{
    hermitian_eig, kron, matrix_rank, min_eigenvalue, partial_trace, partial_transpose, ComplexMatrix, Subsystem,
    DEFAULT_RANK_TOL,
};
use crate::schmidt::{
    apply_id_lambda, certify_sn_above, dephasing_sn_threshold, isotropic_sn_threshold, r_positivity_window, witness,
    witness_value, Verdict,
};
use crate::states::{
    embedded_max_entangled, ginibre, haar_unitary, isotropic_state, max_entangled, random_pure_with_coefficients,
    random_pure_with_schmidt_rank_from, random_state_sn_at_most_from, schmidt_coefficients, schmidt_rank, seeded_rng,
    uniform_simplex, DensityMatrix, SystemDims,
};
use crate::{Error, Result};

/// Suite names accepted by [`run`], in execution order for `"all"`.
pub const SUITES: &[&str] = &[
    "eig",
    "kron-rank",
    "partial",
    "schmidt",
    "channels",
    "choi-roundtrip",
    "witness",
    "lambda",
    "thresholds",
    "snac",
    "covariance",
    "t1",
    "t3",
    "t4",
    "p1",
    "p2",
    "relations",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    /// Largest error or smallest value observed, depending on the suite.
    pub worst: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteOutcome>,
}

impl VerifyReport {
    pub fn failing(&self) -> impl Iterator<Item = &SuiteOutcome> {
        self.suites.iter().filter(|s| !s.passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteOutcome> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// Parameters for `verify`; `d` and `r` only affect the `relations` suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub d: usize,
    pub r: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, d: 3, r: 2 }
    }
}

/// Runs one suite by name, or every suite for `"all"`.
pub fn run(suite: &str, config: &VerifyConfig) -> Result<VerifyReport> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Error::UnknownSuite(suite.to_string()));
    };
    let theorems = if names.iter().any(|n| matches!(*n, "t1" | "t3" | "t4" | "p1" | "p2")) {
        Some(theorem_suite(config.seed)?)
    } else {
        None
    };
    let mut suites = Vec::with_capacity(names.len());
    for name in names {
        let outcome = match name {
            "t1" | "t3" | "t4" | "p1" | "p2" => {
                let id = name.to_uppercase();
                let check = theorems
                    .as_ref()
                    .and_then(|t| t.check(&id))
                    .expect("theorem suite covers every id");
                from_theorem(name, check)
            }
            _ => run_property(name, config)?,
        };
        suites.push(outcome);
    }
    Ok(VerifyReport {
        seed: config.seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

fn from_theorem(name: &str, check: &TheoremCheck) -> SuiteOutcome {
    SuiteOutcome {
        name: name.to_string(),
        passed: check.passed,
        cases: check.cases,
        failures: usize::from(!check.passed),
        worst: check.worst,
        detail: format!("{}: {}", check.description, check.detail),
    }
}

fn suite_rng(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a of the suite name keeps streams independent across suites
    let tag = name.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    });
    seeded_rng(seed ^ tag)
}

fn run_property(name: &str, config: &VerifyConfig) -> Result<SuiteOutcome> {
    let mut rng = suite_rng(config.seed, name);
    let rng = &mut rng;
    let tally = match name {
        "eig" => eig_suite(rng)?,
        "kron-rank" => kron_rank_suite(rng),
        "partial" => partial_suite(rng)?,
        "schmidt" => schmidt_suite(rng)?,
        "channels" => channels_suite(rng)?,
        "choi-roundtrip" => choi_roundtrip_suite(rng)?,
        "witness" => witness_suite(rng)?,
        "lambda" => lambda_suite(rng)?,
        "thresholds" => thresholds_suite(rng)?,
        "snac" => snac_suite(rng)?,
        "covariance" => covariance_suite(rng)?,
        "relations" => relations_suite(config.d, config.r)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(tally.finish(name))
}

/// Accumulates pass/fail counts and the most adverse observation.
struct Tally {
    cases: usize,
    failures: usize,
    worst: f64,
    larger_is_worse: bool,
    notes: Vec<String>,
}

impl Tally {
    /// Tracks the largest error.
    fn errors() -> Self {
        Self {
            cases: 0,
            failures: 0,
            worst: 0.0,
            larger_is_worse: true,
            notes: Vec::new(),
        }
    }

    /// Tracks the smallest value.
    fn minimum() -> Self {
        Self {
            worst: f64::INFINITY,
            larger_is_worse: false,
            ..Self::errors()
        }
    }

    fn record(&mut self, ok: bool, value: f64) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
        if self.larger_is_worse {
            self.worst = self.worst.max(value);
        } else {
            self.worst = self.worst.min(value);
        }
    }

    fn check(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, name: &str) -> SuiteOutcome {
        let label = if self.larger_is_worse { "max error" } else { "min value" };
        let mut detail = format!(
            "{} cases, {} failures, {label} {:.3e}",
            self.cases, self.failures, self.worst
        );
        for n in &self.notes {
            detail.push_str("; ");
            detail.push_str(n);
        }
        SuiteOutcome {
            name: name.to_string(),
            passed: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            worst: self.worst,
            detail,
        }
    }
}

fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(n, n, rng).hermitian_part()
}

fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let m = g.matmul(&g.adjoint()).expect("square");
    let t = m.trace().re;
    m.scale_real(1.0 / t)
}

fn eig_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::errors();
    for &n in &[1, 2, 3, 4, 5, 8, 9, 16, 27, 36, 81] {
        for _ in 0..3 {
            let h = random_hermitian(n, rng);
            let e = hermitian_eig(&h)?;
            let scale = h.max_abs();
            let recon = e.reconstruct().max_abs_diff(&h) / scale;
            let sum: f64 = e.eigenvalues.iter().sum();
            let tr = h.trace().re;
            let trace_err = (sum - tr).abs() / tr.abs().max(scale);
            let sorted = e.eigenvalues.windows(2).all(|w| w[0] <= w[1]);
            t.record(recon <= 1e-10 && trace_err <= 1e-10 && sorted, recon.max(trace_err));
        }
    }
    Ok(t)
}

fn random_with_rank<R: Rng + ?Sized>(rows: usize, cols: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(rows, rank, rng)
        .matmul(&ginibre(rank, cols, rng))
        .expect("inner dimensions agree")
}

fn kron_rank_suite(rng: &mut ChaCha8Rng) -> Tally {
    let mut t = Tally::errors();
    for _ in 0..200 {
        let (ra, ca) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let (rb, cb) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let ka = rng.random_range(1..=ra.min(ca));
        let kb = rng.random_range(1..=rb.min(cb));
        let a = random_with_rank(ra, ca, ka, rng);
        let b = random_with_rank(rb, cb, kb, rng);
        let rank_a = matrix_rank(&a, DEFAULT_RANK_TOL);
        let rank_b = matrix_rank(&b, DEFAULT_RANK_TOL);
        let rank_ab = matrix_rank(&kron(&a, &b), DEFAULT_RANK_TOL);
        let ok = rank_ab == rank_a * rank_b && rank_a == ka && rank_b == kb;
        t.record(ok, (rank_ab as f64 - (rank_a * rank_b) as f64).abs());
    }
    t
}

fn partial_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::errors();
    for _ in 0..50 {
        let (da, db) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let rho = random_density(da, rng);
        let sigma = random_density(db, rng);
        let joint = kron(&rho, &sigma);
        let err_a = partial_trace(&joint, (da, db), Subsystem::A)?.max_abs_diff(&rho);
        let err_b = partial_trace(&joint, (da, db), Subsystem::B)?.max_abs_diff(&sigma);
        let m = random_density(da * db, rng);
        let pt = partial_transpose(&m, (da, db), Subsystem::B)?;
        let trace_err = (pt.trace() - m.trace()).norm();
        let herm = pt.hermiticity_violation();
        let worst = err_a.max(err_b).max(trace_err).max(herm);
        t.record(worst <= 1e-12, worst);
    }
    Ok(t)
}

fn schmidt_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::errors();
    for _ in 0..100 {
        let (da, db) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let r = rng.random_range(1..=da.min(db));
        let psi = random_pure_with_schmidt_rank_from(da, db, r, rng)?;
        let coeffs = schmidt_coefficients(&psi)?;
        let sum_err = (coeffs.iter().sum::<f64>() - 1.0).abs();
        let non_negative = coeffs.iter().all(|&c| c >= 0.0);
        let rank = schmidt_rank(&psi, 1e-9)?;
        let rotated = psi.apply_local(&haar_unitary(da, rng), &haar_unitary(db, rng))?;
        let rank_rotated = schmidt_rank(&rotated, 1e-9)?;
        t.record(
            sum_err <= 1e-10 && non_negative && rank == r && rank_rotated == r,
            sum_err,
        );
    }
    // separable mixtures are PPT
    for _ in 0..100 {
        let rho = random_state_sn_at_most_from(3, 3, 1, 4, rng)?;
        let m = min_eigenvalue(&partial_transpose(rho.matrix(), (3, 3), Subsystem::B)?)?;
        t.record(m >= -NEGATIVITY_TOL, (-m).max(0.0));
    }
    // isotropic states are valid for every p
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        for d in [2, 3, 4] {
            let ok = isotropic_state(d, p).is_ok();
            t.check(ok);
        }
    }
    Ok(t)
}

fn channels_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::errors();
    for _ in 0..30 {
        let d = rng.random_range(2..=4);
        let n = rng.random_range(1..=4);
        let a = QuantumChannel::random(d, n, None, rng)?;
        let b = QuantumChannel::random(d, rng.random_range(1..=4), None, rng)?;
        let c = QuantumChannel::random(d, rng.random_range(1..=4), None, rng)?;

        let marginal = a.choi()?.marginal_error()?;
        let min_choi = min_eigenvalue(a.choi()?.matrix())?;
        let left = QuantumChannel::compose(&QuantumChannel::compose(&a, &b)?, &c)?;
        let right = QuantumChannel::compose(&a, &QuantumChannel::compose(&b, &c)?)?;
        let assoc = action_distance(&left, &right)?;
        let involution = action_distance(&a.adjoint().adjoint(), &a)?;
        let cptp = is_cptp(&a, 1e-9);

        let worst = marginal.max(assoc).max(involution).max((-min_choi).max(0.0));
        let ok = marginal <= 1e-9 && assoc <= 1e-9 && involution <= 1e-12 && min_choi >= -NEGATIVITY_TOL && cptp;
        t.record(ok, worst);
    }
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        t.check(is_cptp(&QuantumChannel::depolarizing(3, p)?, 1e-9));
        t.check(is_cptp(&QuantumChannel::dephasing(3, p)?, 1e-9));
    }
    let not_tp = QuantumChannel::cp_map(vec![ComplexMatrix::identity(3).scale_real(2f64.sqrt())])?;
    t.check(!is_cptp(&not_tp, 1e-9));
    Ok(t)
}

fn choi_roundtrip_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::errors();
    for _ in 0..100 {
        let d = rng.random_range(2..=4);
        let ch = QuantumChannel::random(d, rng.random_range(1..=d * d), None, rng)?;
        let back = canonical_kraus(&ch.choi()?)?;
        let err = action_distance(&ch, &back)?;
        t.record(err <= 1e-8, err);
    }
    Ok(t)
}

fn witness_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::minimum();
    let w = witness(3, 2)?;
    for _ in 0..1000 {
        let terms = rng.random_range(1..=4);
        let rho = random_state_sn_at_most_from(3, 3, 2, terms, rng)?;
        let v = witness_value(&w, &rho)?;
        t.record(v >= -NEGATIVITY_TOL, v);
    }
    let phi = max_entangled(3)?.density_matrix();
    let cert = certify_sn_above(&phi, 2, NEGATIVITY_TOL)?;
    t.check(cert.verdict == Verdict::CertifiedAbove);
    t.note(format!("|φ+⟩ evidence {:.6}", cert.evidence_value));
    Ok(t)
}

/// Points of `(1/(r+1), 1/r]` used by the window checks.
fn window_samples(r: usize) -> [f64; 4] {
    let w = r_positivity_window(r);
    let width = w.hi - w.lo;
    [w.hi, w.lo + 0.5 * width, w.lo + 0.1 * width, w.lo + 1e-3 * width]
}

fn lambda_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::minimum();
    for (r, d) in [(1, 3), (2, 3), (3, 4)] {
        let ks = window_samples(r);
        for _ in 0..1000 {
            let terms = rng.random_range(1..=3);
            let rho = random_state_sn_at_most_from(d, d, r, terms, rng)?;
            for &k in &ks {
                let m = min_eigenvalue(&apply_id_lambda(&rho, k)?)?;
                t.record(m >= -NEGATIVITY_TOL, m);
            }
        }
        let probe = embedded_max_entangled(d, r + 1).density_matrix();
        let mut max_negative = f64::NEG_INFINITY;
        for &k in &ks {
            let m = min_eigenvalue(&apply_id_lambda(&probe, k)?)?;
            max_negative = max_negative.max(m);
            t.check(m < -NEGATIVITY_TOL);
        }
        t.note(format!("r={r}: rank-{} probe min eig ≤ {max_negative:.3e}", r + 1));
    }
    Ok(t)
}

fn thresholds_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::errors();
    for d in [2, 3, 4] {
        for r in 1..d {
            let analytic = isotropic_sn_threshold(d, r)?;
            let w = witness(d, r)?;
            let at = witness_value(&w, &isotropic_state(d, analytic)?)?;
            let below = witness_value(&w, &isotropic_state(d, analytic - 1e-6)?)?;
            let above = witness_value(&w, &isotropic_state(d, analytic + 1e-6)?)?;
            let bisected = witness_threshold(&ChannelFamily::Depolarizing, d, r, 1e-10)?;
            let err = (bisected - analytic).abs().max(at.abs());
            let ok = err <= 1e-8 && below > 0.0 && above < 0.0 && bisected > 0.0 && bisected < 1.0;
            t.record(ok, err);

            if r >= 2 {
                let deph = dephasing_sn_threshold(d, r)?;
                let got = witness_threshold(&ChannelFamily::Dephasing, d, r, 1e-10)?;
                let err = (got - deph).abs();
                t.record(err <= 1e-8 && got > 0.0 && got < 1.0, err);
            }
        }
    }
    // certify_sn_above is monotone in r
    for _ in 0..100 {
        let d = rng.random_range(3..=4);
        let rho = if rng.random_bool(0.5) {
            isotropic_state(d, rng.random_range(0.0..=1.0))?
        } else {
            random_state_sn_at_most_from(d, d, rng.random_range(1..=d), 2, rng)?
        };
        let verdicts: Vec<Verdict> = (1..d)
            .map(|r| certify_sn_above(&rho, r, NEGATIVITY_TOL).map(|c| c.verdict))
            .collect::<Result<_>>()?;
        let monotone = verdicts
            .windows(2)
            .all(|w| w[1] != Verdict::CertifiedAbove || w[0] == Verdict::CertifiedAbove);
        t.check(monotone);
    }
    Ok(t)
}

fn snac_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::errors();
    // analytic builder vs generic tensor application
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let ch = QuantumChannel::depolarizing(3, p)?;
        let mut points = vec![SimplexPoint::uniform(3)];
        points.push(SimplexPoint::new(uniform_simplex(3, rng))?);
        for q in &points {
            let generic = two_local_output(&ch, q)?;
            let closed = depolarizing_two_local_closed_form(3, p, q)?;
            let err = generic.matrix().max_abs_diff(&closed);
            t.record(err <= 1e-12, err);
        }
    }
    // minimum eigenvalue at the uniform point against its closed form
    let uniform = SimplexPoint::uniform(3);
    let mut paper_gap = 0.0_f64;
    for i in 0..50 {
        let p = i as f64 / 49.0;
        let ch = QuantumChannel::depolarizing(3, p)?;
        for k in [0.5, 1.0] {
            let got = snac_min_eig(&ch, &uniform, k)?;
            let err = (got - snac_uniform_closed_form(3, p, k)).abs();
            t.record(err <= 1e-9, err);
        }
        let k1 = snac_min_eig(&ch, &uniform, 1.0)?;
        paper_gap = paper_gap.max((k1 - (2.0 - 8.0 * p * p) / 9.0).abs());
    }
    t.note(format!("(2-8p^2)/9 matches the k=1 minimum to {paper_gap:.1e}"));
    Ok(t)
}

fn covariance_suite(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::errors();
    for _ in 0..40 {
        let p = rng.random_range(0.0..=1.0);
        let k = [0.5, 1.0, 1.0 / 3.0 + 0.01][rng.random_range(0..3)];
        let ch = QuantumChannel::depolarizing(3, p)?;
        let q = uniform_simplex(3, rng)
            .into_iter()
            .map(|x| x.max(1e-3))
            .collect::<Vec<_>>();
        let total: f64 = q.iter().sum();
        let q = SimplexPoint::new(q.iter().map(|x| x / total).collect())?;
        let reference = snac_min_eig(&ch, &q, k)?;
        let psi = random_pure_with_coefficients(3, 3, q.as_slice(), rng)?;
        let rotated = snac_min_eig_for_state(&ch, &psi, k)?;
        let err = (reference - rotated).abs();
        t.record(err <= 1e-9, err);
    }
    // the lattice points themselves are valid states
    for q in simplex_lattice(3, 6) {
        let rho = DensityMatrix::new(q.state().density_matrix().into_matrix(), SystemDims::Bipartite(3, 3));
        t.check(rho.is_ok());
    }
    Ok(t)
}

fn relations_suite(d: usize, r: usize) -> Result<Tally> {
    let rep = relation_report(d, r, 1e-10)?;
    let mut t = Tally::errors();
    let eb_err = (rep.eb_threshold - 1.0 / (d as f64 + 1.0)).abs();
    let sn_err = (rep.snbc_threshold - isotropic_sn_threshold(d, r)?).abs();
    t.record(eb_err <= 1e-8, eb_err);
    t.record(sn_err <= 1e-8, sn_err);
    match rep.gap {
        Some((lo, hi)) => {
            t.check(r >= 2 && rep.strict_inclusion_witnessed);
            let m = rep.midpoint.expect("midpoint exists with a gap");
            t.note(format!(
                "gap ({lo:.6}, {hi:.6}]; at p* = {:.6}: PT min eig {:.6}, witness {:.6}",
                m.p, m.ppt_min_eig, m.witness_value
            ));
        }
        None => {
            t.check(r == 1);
            t.note(format!("empty gap: thresholds coincide at {:.6}", rep.eb_threshold));
        }
    }
    Ok(t)
}
