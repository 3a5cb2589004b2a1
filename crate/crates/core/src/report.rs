//! Report records and their CSV/JSON encodings.
//!
//! JSON floats are written with 17 significant digits so every `f64`
//! round-trips exactly. CSV floats use the shortest round-trip decimal form.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::analysis::{SnacRecord, SweepRecord};
use crate::schmidt::Verdict;

/// `{family, d, r, threshold, analytic, abs_error}` for `schmidt-lens threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdReport {
    pub family: String,
    pub d: usize,
    pub r: usize,
    pub threshold: f64,
    pub analytic: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub source: String,
    pub d: usize,
    pub r: usize,
    pub seed: u64,
    pub records: Vec<SweepRecord>,
    /// Grid cells `[lo, hi]` across which the witness value changes sign.
    pub sign_changes: Vec<[f64; 2]>,
}

/// One row of `schmidt-lens snac`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnacRow {
    pub p: f64,
    pub min_eig: f64,
    /// `(2 − 8p²)/9`.
    pub formula: f64,
    /// Uniform-point minimum `1/d − k(p²(d² − 1) + 1)/d²` for the requested `k`.
    pub closed_form: f64,
    pub q_star: Vec<f64>,
    pub verdict: Verdict,
}

impl SnacRow {
    pub fn from_record(rec: &SnacRecord, d: usize, k: f64) -> Self {
        Self {
            p: rec.p,
            min_eig: rec.min_eig,
            formula: (2.0 - 8.0 * rec.p * rec.p) / 9.0,
            closed_form: crate::analysis::snac_uniform_closed_form(d, rec.p, k),
            q_star: rec.q_star.as_slice().to_vec(),
            verdict: rec.verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnacReport {
    pub source: String,
    pub d: usize,
    pub k: f64,
    pub q_grid: usize,
    pub seed: u64,
    pub rows: Vec<SnacRow>,
}

/// Pretty JSON formatter that prints floats as `d.dddddddddddddddde±x`.
struct PreciseFormatter(PrettyFormatter<'static>);

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Pretty-printed JSON with 17 significant digits per float and a trailing
/// newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}

/// Columns `parameter,value,verdict`.
pub fn sweep_csv(records: &[SweepRecord]) -> csv::Result<String> {
    csv_text(
        &["parameter", "value", "verdict"],
        records.iter().map(|r| {
            vec![
                r.parameter.to_string(),
                r.value.to_string(),
                r.verdict.token().to_string(),
            ]
        }),
    )
}

/// Columns `p,min_eig,formula,closed_form,q_star,verdict`; `q_star`
/// components are joined with `;`.
pub fn snac_csv(rows: &[SnacRow]) -> csv::Result<String> {
    csv_text(
        &["p", "min_eig", "formula", "closed_form", "q_star", "verdict"],
        rows.iter().map(|r| {
            vec![
                r.p.to_string(),
                r.min_eig.to_string(),
                r.formula.to_string(),
                r.closed_form.to_string(),
                r.q_star.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
                r.verdict.token().to_string(),
            ]
        }),
    )
}

pub fn threshold_csv(rep: &ThresholdReport) -> csv::Result<String> {
    csv_text(
        &["family", "d", "r", "threshold", "analytic", "abs_error"],
        [vec![
            rep.family.clone(),
            rep.d.to_string(),
            rep.r.to_string(),
            rep.threshold.to_string(),
            rep.analytic.to_string(),
            rep.abs_error.to_string(),
        ]],
    )
}

pub fn verify_csv(rep: &crate::verify::VerifyReport) -> csv::Result<String> {
    csv_text(
        &["suite", "passed", "cases", "failures", "worst"],
        rep.suites.iter().map(|s| {
            vec![
                s.name.clone(),
                s.passed.to_string(),
                s.cases.to_string(),
                s.failures.to_string(),
                s.worst.to_string(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_floats_have_17_digits() {
        let rep = ThresholdReport {
            family: "depolarizing".into(),
            d: 3,
            r: 2,
            threshold: 0.625,
            analytic: 0.625,
            abs_error: 0.0,
        };
        let text = to_json(&rep).unwrap();
        assert!(text.contains("\"threshold\": 6.2500000000000000e-1"));
        assert!(text.contains("\"abs_error\": 0.0000000000000000e0"));
        let back: ThresholdReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn json_round_trips_awkward_values() {
        for x in [0.1, 1.0 / 3.0, -2.0 / 3.0, 1e-300, f64::MAX, 5e-324] {
            let text = to_json(&vec![x]).unwrap();
            let back: Vec<f64> = serde_json::from_str(&text).unwrap();
            assert_eq!(back[0].to_bits(), x.to_bits(), "{text}");
        }
    }

    #[test]
    fn sweep_csv_layout() {
        let recs = vec![
            SweepRecord {
                parameter: 0.0,
                value: 5.0 / 6.0,
                verdict: Verdict::ConsistentWithAtMost,
            },
            SweepRecord {
                parameter: 1.0,
                value: -0.5,
                verdict: Verdict::CertifiedAbove,
            },
        ];
        let text = sweep_csv(&recs).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "parameter,value,verdict");
        assert_eq!(lines[1], "0,0.8333333333333334,consistent_with_at_most");
        assert_eq!(lines[2], "1,-0.5,certified_above");
    }
}
