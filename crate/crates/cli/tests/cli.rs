use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<Value> {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON array")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn relations_pass_for_the_two_shift() {
    let out = dshift(&["relations", "--d", "2", "--N", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert!(!rows.is_empty());
    for r in &rows {
        assert_eq!(r["schema_version"], 1);
        assert!(r["anchor"].as_str().is_some_and(|s| !s.is_empty()));
        assert_eq!(r["ok"], true);
        let q = r["quantity"].as_str().unwrap();
        if !q.starts_with("hyponormal") && q != "column_sum_norm" {
            assert!(r["value"].as_f64().unwrap() < 1e-12, "{r}");
        }
    }
}

#[test]
fn relations_single_variable_has_degenerate_row() {
    let out = dshift(&["relations", "--d", "1", "--N", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(rows(&out)
        .iter()
        .any(|r| r["note"].as_str().unwrap().starts_with("degenerate")));
}

#[test]
fn relations_without_interior_is_a_usage_error() {
    let out = dshift(&["relations", "--d", "2", "--N", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--N"));
}

#[test]
fn nonpositive_tolerance_is_rejected() {
    let out = dshift(&["relations", "--d", "2", "--N", "3", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extremal_tables() {
    let out = dshift(&["extremal", "--d", "2", "--n-max", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 200);
    let ratio = rows[199]["ratio"].as_f64().unwrap();
    assert!((0.98..=1.02).contains(&ratio));

    let rows = self::rows(&dshift(&["extremal", "--d", "1", "--n-max", "10"]));
    assert!(rows.iter().all(|r| r["R_n"] == 1.0));

    let rows = self::rows(&dshift(&["extremal", "--d", "3", "--n-max", "50"]));
    let growth: Vec<f64> = rows.iter().map(|r| r["R_n"].as_f64().unwrap()).collect();
    assert!(growth.windows(2).all(|w| w[1] > w[0]));
    // R_n ~ c n^{1/2} for d = 3
    let slope = (growth[49] / growth[24]).ln() / 2f64.ln();
    assert!((slope - 0.5).abs() < 0.05, "{slope}");
}

#[test]
fn energy_columns_agree() {
    let out = dshift(&["energy", "--d", "2", "--n-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    for r in rows(&out) {
        assert_eq!(r["closed_form"], r["direct"]);
    }
}

#[test]
fn zeta_verdicts() {
    let out = dshift(&["zeta", "--d", "2", "--p", "2", "--M", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows(&out)[0]["verdict"], "divergent");
    let out = dshift(&["zeta", "--d", "2", "--p", "3", "--M", "1000"]);
    let row = &rows(&out)[0];
    assert_eq!(row["verdict"], "convergent");
    assert!(row["tail_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn dilating_the_zero_tuple_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = write(
        dir.path(),
        "zero.json",
        r#"{"d": 2, "m": 2, "matrices": [[[0,0],[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0],[0,0]]]}"#,
    );
    let out = dshift(&["dilate", &tuple, "--N", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let row = &rows(&out)[0];
    assert_eq!(row["coisometry_residual"], 0.0);
    assert_eq!(row["defect_rank"], 2);
    assert_eq!(row["null_status"], "null");
}

#[test]
fn dilating_a_unitary_uses_a_scale() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = write(dir.path(), "u.json", r#"{"d": 1, "m": 1, "matrices": [[[0.6, 0.8]]]}"#);
    let out = dshift(&["dilate", &tuple, "--N", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &rows(&out)[0];
    assert_eq!(row["null_status"], "non_null");
    assert!(row["scale"].as_f64().unwrap() < 1.0);
}

#[test]
fn malformed_tuple_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = write(dir.path(), "bad.json", "{\"d\": 1,\n \"m\": 1,\n \"matrices\": [[[0.1 0.2]]]}");
    let out = dshift(&["dilate", &tuple, "--N", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn non_commuting_tuple_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = write(
        dir.path(),
        "nc.json",
        r#"{"d": 2, "m": 2, "matrices": [[[0,0],[0.5,0],[0,0],[0,0]], [[0,0],[0,0],[0.5,0],[0,0]]]}"#,
    );
    let out = dshift(&["dilate", &tuple, "--N", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("commute"));
}

#[test]
fn vn_on_a_jordan_block() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = write(
        dir.path(),
        "j.json",
        r#"{"d": 2, "m": 2, "matrices": [[[0,0],[0.6,0],[0,0],[0,0]], [[0,0],[0.3,0],[0,0],[0,0]]]}"#,
    );
    let poly = write(
        dir.path(),
        "f.json",
        r#"{"d": 2, "terms": [{"alpha": [1, 0], "re": 1.0, "im": 0.0}, {"alpha": [0, 1], "re": 0.0, "im": 2.0}]}"#,
    );
    let out = dshift(&["vn", &tuple, "--f", &poly, "--N", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let row = &rows(&out)[0];
    assert_eq!(row["holds"], true);
    assert!(row["norm_f_of_T"].as_f64().unwrap() <= row["multiplier_norm"].as_f64().unwrap());
}

#[test]
fn gram_of_orthogonal_points() {
    let dir = tempfile::tempdir().unwrap();
    let points = write(
        dir.path(),
        "p.json",
        r#"{"d": 2, "points": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}"#,
    );
    let out = dshift(&["gram", &points, "--N", "30", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 5);
    let diag: f64 = records[0][4].parse().unwrap();
    assert!((diag - 4.0 / 3.0).abs() < 1e-15);
    let min_eig: f64 = records[4][10].parse().unwrap();
    assert!((min_eig - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn gram_rejects_points_outside_the_ball() {
    let dir = tempfile::tempdir().unwrap();
    let points = write(dir.path(), "p.json", r#"{"d": 1, "points": [[[1.0, 0]]]}"#);
    let out = dshift(&["gram", &points, "--N", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("points[0]"));
}

#[test]
fn output_file_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = dshift(&["relations", "--d", "3", "--N", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn selfcheck_runs_first() {
    let out = dshift(&["--selfcheck", "zeta", "--d", "1", "--p", "2", "--M", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("selfcheck"));
}
