use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oslab")).args(args).env_remove("OSLAB_SEED").output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_timestamp(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn twisted_chain_random_batch() {
    let out = oslab(&["twisted-chain", "--random", "--count", "100", "--dims", "3", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema"], "oslab/1");
    assert_eq!(r["command"], "twisted-chain");
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 300);
    assert_eq!(r["summary"]["checks"], 300);
    assert_eq!(r["summary"]["failed"], 0);
    for row in rows {
        for key in ["name", "instance", "inputsHash", "lhs", "rhs", "margin", "pass", "warning"] {
            assert!(row.get(key).is_some(), "missing {key}");
        }
        let margin = row["rhs"].as_f64().unwrap() - row["lhs"].as_f64().unwrap();
        assert!((margin - row["margin"].as_f64().unwrap()).abs() <= 1e-12 * margin.abs().max(1.0));
        assert_eq!(row["inputsHash"].as_str().unwrap().len(), 16);
    }
    assert_eq!(r["config"]["seed"], 7);
    assert_eq!(r["config"]["dims"], serde_json::json!([3, 3]));
}

#[test]
fn fourier_on_s3_passes() {
    let out = oslab(&["fourier", "--group", "S3", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(r["summary"]["checks"].as_u64().unwrap() > 0);
    assert_eq!(r["summary"]["failed"], 0);
}

#[test]
fn identical_config_is_reproducible_across_thread_counts() {
    let args = ["norms", "--count", "4", "--dims", "2", "3", "--seed", "11"];
    let a = oslab(&[&args[..], &["--jobs", "1"]].concat());
    let b = oslab(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_timestamp(report(&a)), without_timestamp(report(&b)));
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_oslab"))
        .args(["rainwater", "--count", "2"])
        .env("OSLAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["config"]["seed"], 5);
}

#[test]
fn empty_input_is_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "empty.json", "[]");
    let out = oslab(&["norms", "--input", &path]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["rows"].as_array().unwrap().len(), 0);
    assert_eq!(r["summary"]["checks"], 0);
}

#[test]
fn file_input_single_object_and_array() {
    let dir = tempfile::tempdir().unwrap();
    let w = r#"{"dimE":1,"dimF":2,"pairs":[{"a":[[[2,0]]],"b":[[[1,0],[0,0]],[[0,0],[0,1]]]}]}"#;
    let one = write(dir.path(), "one.json", w);
    let many = write(dir.path(), "many.json", &format!("[{w},{w}]"));
    let a = report(&oslab(&["norms", "--input", &one]));
    let b = report(&oslab(&["norms", "--input", &many]));
    let n = a["rows"].as_array().unwrap().len();
    assert!(n > 0);
    assert_eq!(b["rows"].as_array().unwrap().len(), 2 * n);
    assert_eq!(a["rows"][0]["inputsHash"], b["rows"][n]["inputsHash"]);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.json",
        "[\n {\"dimE\":1,\"dimF\":1,\"pairs\":[]},\n {\"dimE\":\"two\",\"dimF\":1,\"pairs\":[]}\n]",
    );
    let out = oslab(&["norms", "--input", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[1].dimE"), "{err}");
    assert!(err.contains("line 3"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_tensor_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "shape.json", r#"{"dimE":2,"dimF":1,"pairs":[{"a":[[[1,0]]],"b":[[[1,0]]]}]}"#);
    let out = oslab(&["norms", "--input", &path]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["norms", "--dims", "9", "3"][..],
        &["norms", "--tol", "-1"],
        &["cocycle", "--suite", "nope"],
        &["fourier", "--group", "Z/0"],
        &["fourier", "--group", "S5"],
        &["norms", "--input", "x.json", "--random"],
        &["norms", "--input", "/nonexistent/file.json"],
    ] {
        let out = oslab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = oslab(&["rainwater", "--count", "2", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "margin"));
    assert_eq!(reader.records().count(), 6);
}

#[test]
fn failing_checks_exit_with_one() {
    let out = oslab(&["twisted-chain", "--count", "3", "--tol", "1e-300", "--seed", "2"]);
    let r = report(&out);
    assert_eq!(r["config"]["tol"], 1e-300);
    let failed = r["summary"]["failed"].as_u64().unwrap();
    assert_eq!(out.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}

#[test]
fn cocycle_suites_pass() {
    for suite in ["complex", "derivations", "polarization", "wedge", "pullback", "trig"] {
        let out = oslab(&["cocycle", "--suite", suite, "--count", "2", "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(report(&out)["summary"]["checks"].as_u64().unwrap() > 0, "{suite}");
    }
}
