use std::process::{Command, Output};

fn qsv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsv")).args(args).output().expect("run qsv")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn check_passing_identity_exits_zero() {
    let o = qsv(&["check", "WEIERSTRASS", "q=0.3", "x=0.7+0.2i", "a=1.3", "b=0.9-0.4i", "c=1.7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert!(v["rel_residual"].as_str().unwrap().parse::<f64>().unwrap() < 1e-22);
}

#[test]
fn jackson_worked_example_is_exact() {
    let o = qsv(&["check", "JACKSON_8W7", "q=1/2", "n=1", "a=10", "b=2", "c=3", "d=5", "--backend", "rational", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["params"]["z"], "12");
    assert_eq!(v["lhs"], "0");
    assert_eq!(v["rhs"], "0");
}

#[test]
fn impossible_tolerance_exits_one() {
    // Residuals at 30 digits sit near 1e-35; 1e-60 cannot be met.
    let o = qsv(&["suite", "--identities", "JTP", "--samples", "2", "--tolerance", "1e-60"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["identities"][0]["passes"], 0);
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["check", "NOT_AN_IDENTITY", "q=0.5"][..],
        &["suite", "--identities", "JTP,BOGUS"],
        &["suite", "--samples", "0"],
        &["check", "JTP", "q=0.5", "y=2"],
    ] {
        let o = qsv(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("qsv:"));
    }
}

#[test]
fn suite_output_is_byte_identical_across_runs() {
    let args = ["suite", "--samples", "1", "--seed", "42", "--identities", "all"];
    let (a, b) = (qsv(&args), qsv(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn list_names_every_identity() {
    let o = qsv(&["list", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), qsv::identities::catalog().len());
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    let out = dir.path().join("report.json");
    std::fs::write(&cfg, r#"{"identities": ["BAILEY_66"], "samples": 2, "seed": 3}"#).unwrap();
    let o = qsv(&["suite", "--config", cfg.to_str().unwrap(), "--samples", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["config"]["samples"], 3, "flags override the config file");
    assert_eq!(v["identities"][0]["samples"], 3);
}
