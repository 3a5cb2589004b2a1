//! Command-line front end.
//!
//! Exit codes: `0` success, `1` numerical or verification failure, `2`
//! usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    relation_report, sign_changes, snac_sweep, snbc_witness_sweep, witness_threshold, BISECTION_TOL,
};
use crate::channels::{ChannelFamily, QuantumChannel};
use crate::report::{self, SnacReport, SnacRow, SweepReport, ThresholdReport};
use crate::schmidt::{dephasing_sn_threshold, isotropic_sn_threshold};
use crate::verify::{self, VerifyConfig};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest accepted gap between a bisected threshold and its closed form.
pub const THRESHOLD_AGREEMENT: f64 = 1e-8;

/// Environment variable capping the worker thread count (`0` = automatic).
pub const THREADS_ENV: &str = "SCHMIDT_LENS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "schmidt-lens",
    version,
    about = "Schmidt-number analysis of quantum channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Witness value of the Choi state over a uniform parameter grid.
    Sweep(SweepArgs),
    /// Bisected witness crossing compared with its closed form.
    Threshold(ThresholdArgs),
    /// Minimum eigenvalue of (id ⊗ Λ_k) on 2-local channel outputs.
    Snac(SnacArgs),
    /// Entanglement-breaking versus Schmidt-number-breaking ranges.
    Relations(RelationsArgs),
    /// Seeded property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    /// Seed for randomized steps (accepted by every command).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Source {
    /// Named family: depolarizing or dephasing.
    #[arg(long, conflicts_with = "channel_file")]
    family: Option<String>,
    /// JSON Kraus file {d_in, d_out, kraus}; the channel is held fixed.
    #[arg(long)]
    channel_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[arg(long, default_value = "depolarizing")]
    family: String,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Bisection bracket width.
    #[arg(long, default_value_t = BISECTION_TOL)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SnacArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    d: Option<usize>,
    /// Strength of Λ_k(X) = Tr(X) I − kX.
    #[arg(long, default_value_t = 0.5)]
    k: f64,
    #[arg(long, default_value_t = 11)]
    p_grid: usize,
    /// Simplex lattice subdivisions.
    #[arg(long, default_value_t = 30)]
    q_grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct RelationsArgs {
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Dimension for the relations suite.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Schmidt number for the relations suite.
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[command(flatten)]
    output: Output,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numerical(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDimension(_)
            | Error::InvalidRank { .. }
            | Error::ParamOutOfRange { .. }
            | Error::UnknownFamily(_)
            | Error::UnknownSuite(_)
            | Error::ChannelFormat(_)
            | Error::NonSquareChannel { .. }
            | Error::NotTracePreserving(_)
            | Error::EmptyKraus
            | Error::InvalidSimplexPoint(_)
            | Error::DimensionMismatch(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Snac(a) => cmd_snac(a),
        Command::Relations(a) => cmd_relations(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

/// Builds the global worker pool from `SCHMIDT_LENS_THREADS`, if set.
pub fn configure_threads_from_env() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("cannot configure worker threads: {e}"))
}

fn emit(out: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Numerical(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> std::result::Result<String, Failure> {
    report::to_json(value).map_err(|e| Failure::Numerical(format!("JSON encoding failed: {e}")))
}

fn csv_out(result: csv::Result<String>) -> std::result::Result<String, Failure> {
    result.map_err(|e| Failure::Numerical(format!("CSV encoding failed: {e}")))
}

fn load_channel(path: &Path) -> std::result::Result<QuantumChannel, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(QuantumChannel::from_json(&text)?)
}

/// Resolves `--family`/`--channel-file` and the working dimension.
fn resolve_source(
    source: &Source,
    d: Option<usize>,
    default_family: Option<&str>,
) -> std::result::Result<(ChannelFamily, String, usize), Failure> {
    if let Some(path) = &source.channel_file {
        let ch = load_channel(path)?;
        if ch.d_in() != ch.d_out() {
            return Err(usage(format!(
                "channel file maps {}→{}; a square channel is needed",
                ch.d_in(),
                ch.d_out()
            )));
        }
        let dim = ch.d_in();
        if let Some(d) = d.filter(|&d| d != dim) {
            return Err(usage(format!("--d {d} does not match the channel dimension {dim}")));
        }
        return Ok((ChannelFamily::Fixed(ch), path.display().to_string(), dim));
    }
    let name = source
        .family
        .as_deref()
        .or(default_family)
        .ok_or_else(|| usage("one of --family or --channel-file is required"))?;
    let family: ChannelFamily = name.parse()?;
    let d = d.ok_or_else(|| usage("--d is required with --family"))?;
    Ok((family.clone(), family.name().to_string(), d))
}

fn cmd_sweep(a: SweepArgs) -> CmdResult {
    let (family, source, d) = resolve_source(&a.source, a.d, None)?;
    if a.r < 1 || a.r >= d {
        return Err(usage(format!("--r must satisfy 1 <= r < d = {d}")));
    }
    if a.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let records = snbc_witness_sweep(&family, d, a.r, a.grid)?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_out(report::sweep_csv(&records))?,
        Format::Json => {
            let changes = sign_changes(&records).into_iter().map(|(lo, hi)| [lo, hi]).collect();
            json(&SweepReport {
                source,
                d,
                r: a.r,
                seed: a.output.seed,
                records,
                sign_changes: changes,
            })?
        }
    };
    emit(a.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

/// Runs the threshold computation behind `schmidt-lens threshold`.
pub fn threshold_report(family: &str, d: usize, r: usize, tol: f64) -> crate::Result<ThresholdReport> {
    let fam: ChannelFamily = family.parse()?;
    let analytic = match fam {
        ChannelFamily::Dephasing => dephasing_sn_threshold(d, r)?,
        _ => isotropic_sn_threshold(d, r)?,
    };
    let threshold = witness_threshold(&fam, d, r, tol)?;
    Ok(ThresholdReport {
        family: fam.name().to_string(),
        d,
        r,
        threshold,
        analytic,
        abs_error: (threshold - analytic).abs(),
    })
}

fn cmd_threshold(a: ThresholdArgs) -> CmdResult {
    if a.d < 2 || a.r < 1 || a.r >= a.d {
        return Err(usage(format!(
            "--d >= 2 and 1 <= --r < d are required (got d = {}, r = {})",
            a.d, a.r
        )));
    }
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let family: ChannelFamily = a.family.parse()?;
    if matches!(family, ChannelFamily::Dephasing) && a.r == 1 {
        return Err(usage(
            "the dephasing crossing for r = 1 sits at v = 0 and cannot be bisected",
        ));
    }
    let rep = threshold_report(&a.family, a.d, a.r, a.tol)?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&rep)?,
        Format::Csv => csv_out(report::threshold_csv(&rep))?,
    };
    emit(a.output.out.as_deref(), &text)?;
    if rep.abs_error > THRESHOLD_AGREEMENT {
        eprintln!(
            "error: bisected threshold {} differs from the closed form {} by {:e}",
            rep.threshold, rep.analytic, rep.abs_error
        );
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cmd_snac(a: SnacArgs) -> CmdResult {
    let (family, source, d) = resolve_source(&a.source, a.d.or(Some(3)), Some("depolarizing"))?;
    if d < 2 {
        return Err(usage("--d must be at least 2"));
    }
    if !(a.k > 0.0 && a.k <= 1.0) {
        return Err(usage("--k must lie in (0, 1]"));
    }
    if a.p_grid < 2 || a.q_grid < 2 {
        return Err(usage("--p-grid and --q-grid must be at least 2"));
    }
    let records = snac_sweep(&family, d, a.k, a.p_grid, a.q_grid)?;
    let rows: Vec<SnacRow> = records.iter().map(|r| SnacRow::from_record(r, d, a.k)).collect();
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_out(report::snac_csv(&rows))?,
        Format::Json => json(&SnacReport {
            source,
            d,
            k: a.k,
            q_grid: a.q_grid,
            seed: a.output.seed,
            rows,
        })?,
    };
    emit(a.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_relations(a: RelationsArgs) -> CmdResult {
    if a.d < 2 || a.r < 1 || a.r >= a.d {
        return Err(usage(format!(
            "--d >= 2 and 1 <= --r < d are required (got d = {}, r = {})",
            a.d, a.r
        )));
    }
    if a.output.format == Some(Format::Csv) {
        return Err(usage("relations only supports --format json"));
    }
    let rep = relation_report(a.d, a.r, a.tol)?;
    emit(a.output.out.as_deref(), &json(&rep)?)?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    if a.suite == "relations" && (a.d < 2 || a.r < 1 || a.r >= a.d) {
        return Err(usage(format!(
            "--d >= 2 and 1 <= --r < d are required (got d = {}, r = {})",
            a.d, a.r
        )));
    }
    let config = VerifyConfig {
        seed: a.output.seed,
        d: a.d,
        r: a.r,
    };
    let rep = verify::run(&a.suite, &config)?;

    let mut summary = String::new();
    for s in &rep.suites {
        let tag = if s.passed { "PASS" } else { "FAIL" };
        summary.push_str(&format!("{tag} {}: {}\n", s.name, s.detail));
    }
    let passed = rep.suites.iter().filter(|s| s.passed).count();
    summary.push_str(&format!(
        "{passed}/{} suites passed (seed {})\n",
        rep.suites.len(),
        rep.seed
    ));

    // the detailed report is produced when asked for or when a file is given
    let detail = match (a.output.format, &a.output.out) {
        (Some(Format::Csv), _) => Some(csv_out(report::verify_csv(&rep))?),
        (Some(Format::Json), _) | (None, Some(_)) => Some(json(&rep)?),
        (None, None) => None,
    };
    match (&a.output.out, detail) {
        (Some(path), Some(text)) => {
            print!("{summary}");
            emit(Some(path), &text)?;
        }
        (None, Some(text)) => {
            eprint!("{summary}");
            print!("{text}");
        }
        (_, None) => print!("{summary}"),
    }

    if rep.passed {
        Ok(EXIT_OK)
    } else {
        let names: Vec<&str> = rep.failing().map(|s| s.name.as_str()).collect();
        eprintln!("error: failing properties: {}", names.join(", "));
        Ok(EXIT_FAILURE)
    }
}
