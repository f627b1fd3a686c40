use std::path::Path;
use std::process::{Command, Output};

fn brenier(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brenier"))
        .args(args)
        .current_dir(dir)
        .env_remove("BRENIER_OUT")
        .output()
        .expect("binary runs")
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn reports(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn envelope_center_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = brenier(dir.path(), &["envelope", "--p", "0.25", "--a", "1", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&dir.path().join("o/envelope.csv"));
    let center = rows.iter().find(|r| r[0] == 0.0).expect("t = 0 row");
    assert!((center[1] - 0.8488).abs() < 5e-5, "{}", center[1]);
    let text = std::fs::read_to_string(dir.path().join("o/envelope.csv")).unwrap();
    assert!(text.starts_with("# seed=42\n# config_digest="));
}

#[test]
fn transport1d_gaussian_to_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let out = brenier(dir.path(), &["transport1d", "--source", "gaussian", "--target", "uniform:-1:1", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = reports(&dir.path().join("o/reports.json"));
    let peak = r["reports"].as_array().unwrap().iter().find(|x| x["check_id"] == "max_hessian").unwrap();
    let v = peak["empirical"].as_f64().unwrap();
    assert!((v - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-4, "{v}");
    assert_eq!(peak["seed"], 42);
    assert_eq!(peak["config_digest"], r["config_digest"]);
}

#[test]
fn suite_is_reproducible_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let a = brenier(dir.path(), &["suite", "--seed", "42", "--criteria=[1,6,8]", "--out", "a"]);
    let b = brenier(dir.path(), &["suite", "--seed", "42", "--criteria=[1,6,8]", "--jobs", "4", "--out", "b"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(b.status.code(), Some(0));
    let ja = std::fs::read(dir.path().join("a/suite.json")).unwrap();
    let jb = std::fs::read(dir.path().join("b/suite.json")).unwrap();
    assert!(!ja.is_empty());
    assert_eq!(ja, jb);
    let c = brenier(dir.path(), &["suite", "--seed", "43", "--criteria=[6]", "--out", "c"]);
    assert_eq!(c.status.code(), Some(0));
    assert_ne!(std::fs::read(dir.path().join("c/suite.json")).unwrap(), ja);
}

#[test]
fn config_errors_exit_two_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = brenier(dir.path(), &["envelope", "--envelope.q=3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("envelope.q"));

    let out = brenier(dir.path(), &["transport1d", "--target", "cauchy"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("transport1d.target"));

    let out = brenier(dir.path(), &["envelope", "--p", "-3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("exp.toml"), "seed = 7\nout = \"from_file\"\n[envelope]\np = 1.0\na = 2.0\nrows = 11\n").unwrap();
    let out = brenier(dir.path(), &["--config", "exp.toml", "envelope", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = reports(&dir.path().join("from_file/reports.json"));
    assert_eq!(r["seed"], 7);
    assert_eq!(r["config"]["p"], 1.0);
    assert_eq!(r["config"]["a"], 1.0);
    assert_eq!(csv_rows(&dir.path().join("from_file/envelope.csv")).len(), 11);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_brenier"))
        .args(["envelope", "--rows", "5"])
        .current_dir(dir.path())
        .env("BRENIER_OUT", "env_out")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("env_out/envelope.csv").exists());
}

#[test]
fn report_aggregates_and_propagates_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = brenier(dir.path(), &["envelope", "--rows", "5", "--out", "e"]);
    assert_eq!(out.status.code(), Some(0));
    let ok = brenier(dir.path(), &["report", "e/reports.json", "--out", "s"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(std::fs::read_to_string(dir.path().join("s/summary.txt")).unwrap().contains("1 of 1 checks passed"));

    let mut r = reports(&dir.path().join("e/reports.json"));
    r["reports"][0]["passed"] = false.into();
    r["reports"][0]["status"] = "fail".into();
    std::fs::write(dir.path().join("bad.json"), r.to_string()).unwrap();
    let bad = brenier(dir.path(), &["report", "e/reports.json", "bad.json", "--out", "s"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("1 of 2 checks passed"));
}

#[test]
fn svg_is_optional() {
    let dir = tempfile::tempdir().unwrap();
    brenier(dir.path(), &["envelope", "--rows", "21", "--out", "plain"]);
    assert!(!dir.path().join("plain/envelope.svg").exists());
    brenier(dir.path(), &["envelope", "--rows", "21", "--svg", "--out", "plot"]);
    let svg = std::fs::read_to_string(dir.path().join("plot/envelope.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("config_digest="));
}
