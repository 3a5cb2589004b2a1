use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use schmidt_lens::channels::QuantumChannel;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schmidt-lens"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(text: &str) {
    let doc: Value = serde_json::from_str(text).unwrap();
    let v = schema();
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}\n{text}");
}

/// `(parameter, value, verdict)` rows of a sweep CSV.
fn parse_sweep(text: &str) -> Vec<(f64, f64, String)> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["parameter", "value", "verdict"]
    );
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].to_string())
        })
        .collect()
}

fn crossing_cells(rows: &[(f64, f64, String)]) -> Vec<(f64, f64)> {
    rows.windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| (w[0].0, w[1].0))
        .collect()
}

#[test]
fn depolarizing_sweep_brackets_five_eighths() {
    let o = run(&[
        "sweep",
        "--family",
        "depolarizing",
        "--d",
        "3",
        "--r",
        "2",
        "--grid",
        "101",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_sweep(&stdout(&o));
    assert_eq!(rows.len(), 101);
    let cells = crossing_cells(&rows);
    assert_eq!(cells.len(), 1);
    assert!(cells[0].0 <= 0.625 && 0.625 <= cells[0].1, "{cells:?}");
    assert!((rows[0].1 - 5.0 / 6.0).abs() < 1e-14);
    for (p, v, verdict) in &rows {
        let expected = if *v < -1e-9 {
            "certified_above"
        } else {
            "consistent_with_at_most"
        };
        assert_eq!(verdict, expected, "p = {p}");
    }
}

#[test]
fn dephasing_sweep_brackets_one_half() {
    let o = run(&[
        "sweep",
        "--family",
        "dephasing",
        "--d",
        "3",
        "--r",
        "2",
        "--grid",
        "101",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_sweep(&stdout(&o));
    let cells = crossing_cells(&rows);
    assert_eq!(cells.len(), 1);
    assert!(cells[0].0 <= 0.5 && 0.5 <= cells[0].1, "{cells:?}");
}

#[test]
fn identity_channel_file_gives_minus_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ch.json");
    fs::write(&path, QuantumChannel::identity(3).to_json()).unwrap();
    let o = run(&[
        "sweep",
        "--channel-file",
        path.to_str().unwrap(),
        "--d",
        "3",
        "--r",
        "2",
        "--grid",
        "11",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = parse_sweep(&stdout(&o));
    assert_eq!(rows.len(), 11);
    for (_, v, verdict) in rows {
        assert!((v + 0.5).abs() < 1e-12);
        assert_eq!(verdict, "certified_above");
    }
}

#[test]
fn csv_is_bit_stable_across_runs_and_thread_counts() {
    let args = [
        "sweep",
        "--family",
        "depolarizing",
        "--d",
        "3",
        "--r",
        "2",
        "--grid",
        "41",
    ];
    let a = run(&args);
    let b = bin().args(args).env("SCHMIDT_LENS_THREADS", "1").output().unwrap();
    let c = bin().args(args).env("SCHMIDT_LENS_THREADS", "3").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);

    let snac = ["snac", "--p-grid", "5", "--q-grid", "9", "--seed", "4"];
    assert_eq!(run(&snac).stdout, run(&snac).stdout);
}

#[test]
fn threshold_reports_and_exit_codes() {
    let o = run(&["threshold", "--family", "depolarizing", "--d", "4", "--r", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_valid(&text);
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 6);
    assert!((v["threshold"].as_f64().unwrap() - 11.0 / 15.0).abs() < 1e-8);

    // a bracket this wide cannot reach the 1e-8 agreement
    let loose = run(&[
        "threshold",
        "--family",
        "depolarizing",
        "--d",
        "3",
        "--r",
        "2",
        "--tol",
        "0.01",
    ]);
    assert_eq!(loose.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&loose.stderr).contains("differs"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["threshold", "--d", "3", "--r", "3"],
        vec!["threshold", "--family", "dephasing", "--d", "3", "--r", "1"],
        vec!["threshold", "--family", "bogus"],
        vec!["sweep", "--d", "3"],
        vec!["sweep", "--family", "depolarizing", "--d", "3", "--grid", "1"],
        vec![
            "sweep",
            "--family",
            "depolarizing",
            "--channel-file",
            "x.json",
            "--d",
            "3",
        ],
        vec!["sweep", "--channel-file", "/nonexistent/ch.json"],
        vec!["snac", "--k", "0"],
        vec!["verify", "--suite", "nope"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = run(&args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let bad_threads = bin()
        .args(["verify", "--suite", "t4"])
        .env("SCHMIDT_LENS_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn channel_file_dimension_must_match() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ch.json");
    fs::write(&path, QuantumChannel::identity(2).to_json()).unwrap();
    let o = run(&["sweep", "--channel-file", path.to_str().unwrap(), "--d", "3"]);
    assert_eq!(o.status.code(), Some(2));

    fs::write(
        &path,
        "{\"d_in\": 2, \"d_out\": 2, \"kraus\": [[[2,0],[0,0],[0,0],[2,0]]]}",
    )
    .unwrap();
    let o = run(&["sweep", "--channel-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "non trace-preserving file is rejected");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "--help"]).status.code(), Some(0));
}

#[test]
fn every_command_accepts_seed() {
    for args in [
        vec!["threshold", "--seed", "9"],
        vec![
            "sweep",
            "--family",
            "dephasing",
            "--d",
            "3",
            "--grid",
            "3",
            "--seed",
            "9",
        ],
        vec!["snac", "--p-grid", "2", "--q-grid", "3", "--seed", "9"],
        vec!["relations", "--seed", "9"],
        vec!["verify", "--suite", "t4", "--seed", "9"],
    ] {
        assert_eq!(run(&args).status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn snac_csv_columns_and_rows() {
    let o = run(&["snac", "--p-grid", "11", "--q-grid", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["p", "min_eig", "formula", "closed_form", "q_star", "verdict"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    let p07 = &rows[7];
    let formula: f64 = p07[2].parse().unwrap();
    assert!((formula - (2.0 - 8.0 * 0.49) / 9.0).abs() < 1e-12);
    // at p = 1 the uniform point minimizes and the value is 1/3 − 1/2
    let last = &rows[10];
    assert!((last[1].parse::<f64>().unwrap() + 1.0 / 6.0).abs() < 1e-9);
    assert_eq!(&last[4], "0.3333333333333333;0.3333333333333333;0.3333333333333333");
    assert_eq!(&last[5], "certified_above");
}

#[test]
fn json_reports_validate_against_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["threshold", "--family", "dephasing", "--d", "3", "--r", "2"],
        vec![
            "sweep",
            "--family",
            "depolarizing",
            "--d",
            "3",
            "--r",
            "2",
            "--grid",
            "9",
            "--format",
            "json",
        ],
        vec!["snac", "--p-grid", "3", "--q-grid", "6", "--format", "json"],
        vec!["relations", "--d", "3", "--r", "2"],
        vec!["relations", "--d", "3", "--r", "1"],
        vec!["verify", "--suite", "t4", "--format", "json"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let mut full = args.clone();
        full.extend(["--out", path.to_str().unwrap()]);
        let o = run(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_valid(&fs::read_to_string(&path).unwrap());
    }
    // a document of the wrong shape is rejected
    let doc: Value = serde_json::json!({"family": "depolarizing", "d": 3, "r": 2, "threshold": 0.6});
    assert!(!schema().is_valid(&doc));
}

#[test]
fn verify_t4_prints_counterexample() {
    let o = run(&["verify", "--suite", "t4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS t4"), "{text}");
    assert!(text.contains("2x2 -> 4"), "{text}");
}

#[test]
fn verify_relations_prints_gap() {
    let o = run(&["verify", "--suite", "relations", "--d", "3", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gap (0.250000, 0.625000]"));
}

#[test]
fn verify_all_passes_with_default_seed() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("17/17 suites passed (seed 0)"));
}
