use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TRIANGLE: &str = r#"{"type": "simplex_jacobi", "alpha": ["0", "0"], "beta": "0"}"#;
const APPELL_TYPE: &str = r#"{"type": "sum", "terms": [
    {"type": "simplex_jacobi", "alpha": ["0", "0"], "beta": "0"},
    {"type": "point_mass", "location": ["0", "0"], "weight": "1"}
]}"#;

struct Run {
    code: Option<i32>,
    stdout: Vec<u8>,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stderr))
    }
}

fn write_config(dir: &TempDir, functional: &str, pair: &str, degree: usize) -> std::path::PathBuf {
    let path = dir.path().join("config.json");
    let text = format!(r#"{{"functional": {functional}, "pair": {pair}, "max_degree": {degree}}}"#);
    std::fs::write(&path, text).unwrap();
    path
}

fn wops(config: &Path, args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_wops"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap();
    Run {
        code: status.code(),
        stdout,
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
    }
}

#[test]
fn classify_appell() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, TRIANGLE, r#""appell""#, 6);
    let run = wops(&cfg, &["classify"]);
    assert_eq!(run.code, Some(0), "{}", run.stderr);
    let rep = run.json();
    assert_eq!(rep["s"], 0);
    assert_eq!(rep["det_condition"], "1/48");
    assert_eq!(rep["residuals_zero"], true);
    assert!(run.stderr.contains("s = 0"));
}

#[test]
fn classify_appell_type() {
    let dir = tempfile::tempdir().unwrap();
    for pair in [r#""appell_type:1""#, r#""appell_type:2""#] {
        let cfg = write_config(&dir, APPELL_TYPE, pair, 6);
        let run = wops(&cfg, &["classify"]);
        assert_eq!(run.code, Some(0), "{pair}: {}", run.stderr);
        assert_eq!(run.json()["s"], 1);
        assert_eq!(run.json()["p"], 3);
    }
}

#[test]
fn classify_mismatched_pair_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let pair = r#"{"builder": "example2", "params": {"a": ["0", "0"]}}"#;
    let cfg = write_config(&dir, TRIANGLE, pair, 3);
    let run = wops(&cfg, &["classify"]);
    assert_eq!(run.code, Some(1));
    let rep = run.json();
    assert_eq!(rep["passed"], false);
    assert!(!rep["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_appell_to_degree_six() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, TRIANGLE, r#""appell""#, 6);
    let run = wops(&cfg, &["verify"]);
    assert_eq!(run.code, Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    let rep = run.json();
    assert_eq!(rep["passed"], true);
    let names: Vec<&str> = rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for name in [
        "wops",
        "recurrence",
        "pearson_residuals",
        "quasi_orthogonality",
        "ddr[6]",
        "recover_psi",
        "adjoint",
    ] {
        assert!(names.contains(&name), "missing {name}");
    }
}

#[test]
fn verify_point_mass_is_not_quasi_definite() {
    let dir = tempfile::tempdir().unwrap();
    let delta = r#"{"type": "point_mass", "location": ["0", "0"], "weight": "1"}"#;
    let pair = r#"{"builder": "appell", "params": {"alpha": ["0", "0"], "beta": "0"}}"#;
    let cfg = write_config(&dir, delta, pair, 3);
    let run = wops(&cfg, &["verify"]);
    assert_eq!(run.code, Some(1));
    let v = &run.json()["violations"][0];
    assert_eq!(v["kind"], "NotQuasiDefinite");
    assert!(v["message"].as_str().unwrap().contains("degree 1"));
}

#[test]
fn laguerre_jacobi_pair_fails_weak_pearson() {
    // The weight does not vanish on the edge x2 = -x1 while Φ e_2 does not
    // either, so the boundary flux survives.
    let dir = tempfile::tempdir().unwrap();
    let functional = r#"{"type": "laguerre_jacobi", "a": ["0", "0"]}"#;
    let cfg = write_config(&dir, functional, r#""example2""#, 5);
    let run = wops(&cfg, &["verify"]);
    assert_eq!(run.code, Some(1));
    let rep = run.json();
    let failed: Vec<&str> = rep["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["check"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"pearson_residuals"));
    let passed: Vec<&str> = rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == true)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(passed.contains(&"wops") && passed.contains(&"recurrence"));
}

#[test]
fn explore_mode_downgrades_band_violations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, APPELL_TYPE, r#""appell""#, 4);
    let strict = wops(&cfg, &["verify"]).json();
    let kinds = |rep: &Value| -> Vec<String> {
        rep["violations"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v["kind"].as_str().unwrap().to_string())
            .collect()
    };
    let explore_run = wops(&cfg, &["verify", "--mode", "explore"]);
    assert_eq!(explore_run.code, Some(1));
    let explore = explore_run.json();
    assert!(!kinds(&explore).contains(&"BandViolation".to_string()));
    if kinds(&strict).contains(&"BandViolation".to_string()) {
        assert!(!explore["warnings"].as_array().unwrap().is_empty());
    }
}

#[test]
fn export_moments_and_wops() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, TRIANGLE, r#""appell""#, 2);
    let moments = wops(&cfg, &["export", "moments"]);
    assert_eq!(moments.code, Some(0));
    let doc = moments.json();
    assert_eq!(doc["moments"]["m_1_0"], "1/3");
    assert_eq!(doc["moments"]["m_1_1"], "1/12");
    assert_eq!(doc["moments"].as_object().unwrap().len(), 6);
    let basis = wops(&cfg, &["export", "wops"]).json();
    assert_eq!(basis["degrees"][1]["P"], serde_json::json!(["x1 - 1/3", "x2 - 1/3"]));
    assert_eq!(basis["degrees"][1]["H"][0][0], "1/18");
}

#[test]
fn export_ddr_lambda_zero_block() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, TRIANGLE, r#""appell""#, 3);
    let run = wops(&cfg, &["export", "ddr"]);
    assert_eq!(run.code, Some(0), "{}", run.stderr);
    let doc = run.json();
    let degrees = doc["degrees"].as_array().unwrap();
    assert_eq!(degrees.len(), 4);
    for entry in degrees {
        for row in entry["Lambda"][0].as_array().unwrap() {
            assert!(row.as_array().unwrap().iter().all(|x| x == "0"));
        }
    }
    assert!(degrees[1].get("N1").is_some());
}

#[test]
fn export_structure_and_recurrence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, TRIANGLE, r#""appell""#, 3);
    let doc = wops(&cfg, &["export", "structure"]).json();
    let first = &doc["degrees"][1];
    assert_eq!(first["n"], 1);
    assert!(first["M1"].is_array() && first["M2"].is_array());
    let rec = wops(&cfg, &["export", "recurrence"]).json();
    assert_eq!(
        rec["degrees"][1]["coords"][0]["C"],
        serde_json::json!([["1/18"], ["-1/36"]])
    );
}

#[test]
fn export_is_byte_stable_and_honours_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, APPELL_TYPE, r#""appell_type:1""#, 4);
    let a = wops(&cfg, &["export", "structure"]);
    let b = wops(&cfg, &["export", "structure", "--sequential"]);
    assert_eq!(a.code, Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = dir.path().join("out.json");
    let c = wops(&cfg, &["export", "structure", "--out", out.to_str().unwrap()]);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn degree_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, TRIANGLE, r#""appell""#, 5);
    let doc = wops(&cfg, &["export", "moments", "--degree", "1"]).json();
    assert_eq!(doc["max_degree"], 1);
    assert_eq!(doc["moments"].as_object().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, TRIANGLE, r#""appell""#, 2);
    assert_eq!(wops(&cfg, &["export", "hermite"]).code, Some(2));
    assert_eq!(wops(&cfg, &["classify", "--degree", "0"]).code, Some(2));

    let unknown = write_config(&dir, TRIANGLE, r#""hermite""#, 2);
    assert_eq!(wops(&unknown, &["classify"]).code, Some(2));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let run = wops(&bad, &["verify"]);
    assert_eq!(run.code, Some(2));
    assert!(run.stderr.contains("config"));

    let missing = dir.path().join("missing.json");
    assert_eq!(wops(&missing, &["verify"]).code, Some(2));

    let no_config = Command::new(env!("CARGO_BIN_EXE_wops")).arg("verify").output().unwrap();
    assert_eq!(no_config.status.code(), Some(2));
    let bad_flag = Command::new(env!("CARGO_BIN_EXE_wops"))
        .args(["verify", "--mode", "loose"])
        .output()
        .unwrap();
    assert_eq!(bad_flag.status.code(), Some(2));

    let mismatch = write_config(
        &dir,
        r#"{"type": "laguerre_jacobi", "a": ["0", "0", "0"]}"#,
        r#""appell""#,
        2,
    );
    assert_eq!(wops(&mismatch, &["classify"]).code, Some(2));
}
