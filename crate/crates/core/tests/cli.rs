use std::process::Command;

use dimer_core::output::{read_csv, read_json, CSV_COLUMNS};

fn dimer(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dimer")).args(args).output().expect("run dimer")
}

#[test]
fn sweep_csv_header_and_rows() {
    let out = dimer(&["sweep", "--n", "4", "--steps", "9", "--j2-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 9);
    let iso = rows.iter().find(|r| r.j2 == 1.0).unwrap();
    assert!((iso.c12_signed.unwrap() - 0.5).abs() < 1e-10);
    assert!((iso.e_gs + 2.0).abs() < 1e-10);
}

#[test]
fn sweep_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let out = dimer(&[
        "sweep", "--n", "6", "--steps", "5", "--j1", "1", "--j2-min", "0.5", "--j2-max", "1.5", "--format", "json",
        "--seed", "7", "--method", "lanczos", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = read_json(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(doc.metadata.n, 6);
    assert_eq!(doc.metadata.seed, 7);
    assert_eq!(doc.rows.len(), 5);
    let raw: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let row = raw["rows"][0].as_object().unwrap();
    for c in CSV_COLUMNS {
        assert!(row.contains_key(c), "missing {c}");
    }
    for key in ["N", "J1", "seed", "method", "tool_version"] {
        assert!(raw["metadata"].get(key).is_some(), "missing metadata {key}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(dimer(&["sweep", "--n", "5"]).status.code(), Some(1));
    assert_eq!(dimer(&["sweep", "--method", "qr"]).status.code(), Some(1));
    assert_eq!(dimer(&["sweep", "--j2-min", "3", "--j2-max", "1"]).status.code(), Some(1));
    assert_eq!(dimer(&["bogus"]).status.code(), Some(1));
    assert_eq!(dimer(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_root_exits_two() {
    let out = dimer(&["threshold", "--n", "4", "--which", "c12", "--lo", "0.1", "--hi", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn threshold_and_spectrum() {
    let out = dimer(&["threshold", "--n", "4", "--which", "c23", "--lo", "0.1", "--hi", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let root: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((root - 0.5).abs() < 1e-8);

    let out = dimer(&["spectrum", "--n", "4", "--j1", "1", "--j2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn verify_passes_for_small_rings() {
    let out = dimer(&["verify", "--n", "4,6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
