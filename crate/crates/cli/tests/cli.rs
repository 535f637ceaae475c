use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn symrig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symrig"))
        .args(args)
        .env_remove("SYMRIG_WORK_CAP")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Header row and data rows of a CSV report.
fn table(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn falpha06(dir: &Path) -> PathBuf {
    write(dir, "falpha06.json", r#"{"kind":"piecewise_linear_full_branch","cuts":[0.6]}"#)
}

#[test]
fn partition_level_two_endpoints() {
    let dir = TempDir::new().unwrap();
    let map = falpha06(dir.path());
    let out = symrig(&["partition", "--map", s(&map), "--level", "2"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header, ["word", "left", "right", "length", "radius"]);
    let words: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(words, ["00", "01", "10", "11"]);
    let mut ends: Vec<f64> = rows.iter().map(|r| num(&r[1])).collect();
    ends.push(num(&rows[3][2]));
    for (got, want) in ends.iter().zip([0.0, 0.36, 0.6, 0.84, 1.0]) {
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }
}

#[test]
fn falpha_uqs_rows_match_powers() {
    let out = symrig(&["repro", "falpha-uqs", "--alpha", "0.6", "--t", "0.2", "--n", "20"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header[..2], ["n".to_string(), "ratio".to_string()]);
    assert_eq!(rows.len(), 20);
    for (i, row) in rows.iter().enumerate() {
        let expected = 1.5f64.powi(i as i32 + 1);
        assert!((num(&row[1]) / expected - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn self_conjugacy_is_identity() {
    let dir = TempDir::new().unwrap();
    let map = falpha06(dir.path());
    let out = symrig(&["conjugacy", "--from", s(&map), "--to", s(&map), "--grid", "16", "--tol", "1e-10"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header[..4], ["x", "h_lo", "h_hi", "depth"].map(String::from));
    assert_eq!(rows.len(), 16);
    for row in rows {
        let (x, lo, hi) = (num(&row[0]), num(&row[1]), num(&row[2]));
        assert!(lo <= x && x <= hi && hi - lo <= 1e-10);
        assert!((0.5 * (lo + hi) - x).abs() <= 1e-10);
    }
}

#[test]
fn endpoint_table_pairs_cylinders() {
    let dir = TempDir::new().unwrap();
    let f = falpha06(dir.path());
    let g = write(dir.path(), "lin.json", r#"{"kind":"linear","degree":2}"#);
    let out = symrig(&["conjugacy", "--from", s(&f), "--to", s(&g), "--level", "2"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header[..3], ["word", "f_endpoint", "g_endpoint"].map(String::from));
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4][0], "");
    for (row, (fe, ge)) in rows.iter().zip([(0.0, 0.0), (0.36, 0.25), (0.6, 0.5), (0.84, 0.75), (1.0, 1.0)]) {
        assert!((num(&row[1]) - fe).abs() < 1e-15 && (num(&row[2]) - ge).abs() < 1e-15);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let f = falpha06(dir.path());
    let args = ["analyze", "symmetry", "--homeo", "", "--grid", "64", "--scales", "0.25,0.125"];
    let h = write(dir.path(), "h.json", r#"{"kind":"sine_homeo","c":0.5}"#);
    let mut args: Vec<&str> = args.to_vec();
    args[3] = s(&h);
    let a = symrig(&args);
    let b = symrig(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let p = symrig(&["partition", "--map", s(&f), "--level", "6"]);
    let q = symrig(&["partition", "--map", s(&f), "--level", "6"]);
    assert_eq!(p.stdout, q.stdout);
    assert!(!p.stdout.contains(&b'\r'));
}

#[test]
fn floats_round_trip_through_csv() {
    let dir = TempDir::new().unwrap();
    let f = falpha06(dir.path());
    let out = symrig(&["partition", "--map", s(&f), "--level", "3"]);
    let (_, rows) = table(&out);
    for row in rows {
        for cell in &row[1..] {
            let v = num(cell);
            assert_eq!(format!("{v:.16e}"), *cell);
        }
    }
}

#[test]
fn report_file_and_json() {
    let dir = TempDir::new().unwrap();
    let f = falpha06(dir.path());
    let out_path = dir.path().join("report.json");
    let out = symrig(&["analyze", "measure", "--map", s(&f), "--level", "4", "--json", "--out", s(&out_path)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["command"], "analyze measure");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 16);
    assert!(doc["summary"]["max_deviation"].as_f64().unwrap() <= 1e-12);
    assert_eq!(doc["config"]["level"], 4);
}

#[test]
fn validation_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    let with_degree = write(
        dir.path(),
        "bad.json",
        r#"{"kind":"piecewise_linear_full_branch","cuts":[0.6],"degree":2}"#,
    );
    let out = symrig(&["validate", "--map", s(&with_degree)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.degree: unknown field"));

    let syntax = write(dir.path(), "syntax.json", "{\n  \"kind\": \"linear\"\n  \"degree\": 2\n}");
    let out = symrig(&["partition", "--map", s(&syntax), "--level", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax.json:3:"));

    let folded = write(dir.path(), "fold.json", r#"{"kind":"smooth_sine","degree":2,"epsilon":2.5}"#);
    let out = symrig(&["validate", "--map", s(&folded)]);
    assert_eq!(out.status.code(), Some(1));
    let (_, rows) = table(&out);
    assert!(rows.iter().any(|r| r[0] == "non_monotone"));

    let good = falpha06(dir.path());
    let out = symrig(&["validate", "--map", s(&good)]);
    assert!(out.status.success());
    assert_eq!(table(&out).1.len(), 0);

    let out = symrig(&["partition", "--level", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn caps_exit_two_and_io_exits_three() {
    let dir = TempDir::new().unwrap();
    let f = falpha06(dir.path());
    let out = symrig(&["partition", "--map", s(&f), "--level", "5", "--cell-cap", "16"]);
    assert_eq!(out.status.code(), Some(2));

    let sine = write(dir.path(), "sine.json", r#"{"kind":"smooth_sine","degree":2,"epsilon":0.5}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_symrig"))
        .args(["analyze", "tailsum", "--map", s(&sine), "--word", "01", "--k-max", "5"])
        .env("SYMRIG_WORK_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("work cap 100"));

    let out = Command::new(env!("CARGO_BIN_EXE_symrig"))
        .args(["analyze", "tailsum", "--map", s(&sine), "--word", "01", "--k-max", "5", "--work-cap", "1000"])
        .env("SYMRIG_WORK_CAP", "100")
        .output()
        .unwrap();
    assert!(out.status.success());

    let out = symrig(&["partition", "--map", s(&dir.path().join("missing.json")), "--level", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unconverged_conjugacy_is_written_and_flagged() {
    let dir = TempDir::new().unwrap();
    let f = falpha06(dir.path());
    let out = symrig(&["conjugacy", "--from", s(&f), "--to", s(&f), "--grid", "8", "--depth-cap", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("# flagged:"));
    let (_, rows) = table(&out);
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().any(|r| r[5] == "false"));
}

#[test]
fn analyze_subcommands_run() {
    let dir = TempDir::new().unwrap();
    let f = falpha06(dir.path());
    let g = write(dir.path(), "lin.json", r#"{"kind":"linear","degree":2}"#);

    let out = symrig(&["analyze", "qs", "--from", s(&f), "--to", s(&g), "--t", "0.064"]);
    assert!(out.status.success());
    let (_, rows) = table(&out);
    assert!(num(&rows[0][2]) <= 0.25);

    let out = symrig(&["analyze", "uqs", "--map", s(&g), "--x", "0.3", "--t", "0.1", "--n", "5"]);
    let (_, rows) = table(&out);
    assert!(rows.iter().all(|r| (num(&r[1]) - 1.0).abs() < 1e-12));

    let out = symrig(&["analyze", "phi", "--from", s(&f), "--to", s(&g), "--level", "4"]);
    let (header, rows) = table(&out);
    assert_eq!(header[1], "max_ratio");
    assert!((num(&rows[1][1]) - 1.5625).abs() < 1e-12);
    assert_eq!(rows[1][3], "11");
    assert_eq!(rows[1][6], "00");

    let out = symrig(&["analyze", "phi", "--from", s(&f), "--to", s(&g), "--level", "4", "--cells", "1"]);
    let (_, rows) = table(&out);
    assert_eq!(rows.len(), 2);

    let out = symrig(&["analyze", "tailsum", "--map", s(&g), "--word", "0", "--k-max", "10"]);
    let (_, rows) = table(&out);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(num(&row[1]), 0.5f64.powi(k as i32 + 1));
        assert_eq!(row[1], row[3]);
    }

    let out = symrig(&["analyze", "symmetry", "--from", s(&f), "--to", s(&g), "--grid", "32", "--scales", "0.16,0.064"]);
    assert!(out.status.success());
    let (_, rows) = table(&out);
    assert!(num(&rows[1][1]) >= 0.75);

    let out = symrig(&["repro", "rigidity-demo", "--n", "6"]);
    assert!(out.status.success());
    let (_, rows) = table(&out);
    assert_eq!(rows.len(), 6);
    assert!(num(&rows[2][5]) <= 0.25);
}

#[test]
fn repro_suite_passes_and_flags_under_small_caps() {
    let out = symrig(&["repro", "all", "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r["passed"] == true));
    assert_eq!(doc["flagged"], serde_json::Value::Null);

    let out = symrig(&["repro", "all", "--depth-cap", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let (_, rows) = table(&out);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().any(|r| r[5] == "false"));
}
