//! End-to-end behavior of the binary: exit codes, output shapes, and the
//! JSON round-trip contract.

use std::process::{Command, Output};

fn confrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confrep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn dims_prints_the_braid_pattern() {
    let out = confrep(&["dims", "--g", "0", "--imax", "2", "--nmax", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# confrep dims g=0 imax=2 nmax=4"));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[2], "0\t1\t1\t1\t1\t1");
    assert_eq!(lines[3], "1\t0\t0\t1\t1\t1");
    assert_eq!(lines[4], "2\t0\t0\t0\t0\t0");
}

#[test]
fn dims_csv_format() {
    let out = confrep(&["dims", "--g", "1", "--imax", "1", "--nmax", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "i,n0,n1,n2");
    assert_eq!(lines[2], "0,1,1,1");
    assert_eq!(lines[3], "1,0,2,2");
}

#[test]
fn dims_rejects_bad_arguments_with_exit_2() {
    let out = confrep(&["dims", "--g=-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn content_examples() {
    let out = confrep(&[
        "content",
        "--n",
        "4",
        "--word",
        "a1 a2 a1^-1 a2^-1 a3 a4 a3^-1 a4^-1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2*e1^e2 + 2*e3^e4");

    let out = confrep(&["content", "--n", "2", "--word", "a1"]);
    assert_eq!(stdout(&out).trim(), "0");

    let out = confrep(&["content", "--n", "2", "--word", "b1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rep_product_expressions() {
    // T*T^-1 is the identity matrix.
    let out = confrep(&["rep", "--g", "1", "--phi", "B1*B1^-1", "--i", "1", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, vec!["1 0", "0 1"]);

    // Unknown entry: usage error.
    let out = confrep(&["rep", "--g", "1", "--phi", "NOPE", "--i", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn xi_of_boundary_twist_is_zero() {
    let out = confrep(&["xi", "--g", "1", "--phi", "D"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("xi(e1) = 0"));
    assert!(text.contains("xi(e2) = 0"));
}

#[test]
fn xi_of_the_identity_is_zero() {
    let out = confrep(&["xi", "--g", "2", "--phi", "1"]);
    assert!(out.status.success());
    for i in 1..=4 {
        assert!(stdout(&out).contains(&format!("xi(e{i}) = 0")));
    }
}

#[test]
fn json_matrix_round_trips_through_the_group_law() {
    let fetch = |phi: &str| -> Vec<Vec<f64>> {
        let out = confrep(&[
            "rep", "--g", "1", "--phi", phi, "--i", "1", "--n", "3", "--format", "json",
        ]);
        assert!(out.status.success());
        let mut rows = Vec::new();
        for line in stdout(&out).lines() {
            let v: serde_json::Value = serde_json::from_str(line).expect("valid JSON per line");
            if let Some(entries) = v.get("entries") {
                let row: Vec<f64> = entries
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|e| parse_rat(e.as_str().unwrap()))
                    .collect();
                rows.push(row);
            }
        }
        rows
    };
    let a = fetch("B1");
    let b = fetch("A1");
    let ab = fetch("B1*A1");
    let n = a.len();
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += a[i][k] * b[k][j];
            }
            assert_eq!(acc, ab[i][j], "group law fails after JSON round-trip");
        }
    }
}

fn parse_rat(s: &str) -> f64 {
    match s.split_once('/') {
        Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

#[test]
fn catalog_subcommand_validates_files() {
    let dir = std::env::temp_dir();
    let good = dir.join("confrep_good_catalog.txt");
    std::fs::write(&good, "genus: 1\n# example\nT1:\na1 -> a1 a2\na2 -> a2\n").unwrap();
    let out = confrep(&["catalog", "--path", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("T1: valid"));

    let bad = dir.join("confrep_bad_catalog.txt");
    std::fs::write(&bad, "genus: 1\nBAD:\na1 -> a1 a1\na2 -> a2\n").unwrap();
    let out = confrep(&["catalog", "--path", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("BAD"), "error names the entry: {err}");
}

#[test]
fn check_failure_exits_1() {
    // At L = 1 the witness search cannot succeed.
    let out = confrep(&[
        "check",
        "--suite",
        "nonsymplectic",
        "--g",
        "2",
        "--L",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL nonsymplectic"));
}

#[test]
fn check_passes_and_echoes_seed() {
    let out = confrep(&[
        "check",
        "--suite",
        "functor-law",
        "--seed",
        "7",
        "--cases",
        "25",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# confrep check seed=7"));
    assert!(text.contains("PASS functor-law"));
}

#[test]
fn check_rejects_unknown_suite() {
    let out = confrep(&["check", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL no-such-suite"));
}
