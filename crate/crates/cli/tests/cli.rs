use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opsamp"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn passing_run_exits_zero_and_writes_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("frame");
    let st = bin().args(["run"]).arg(configs().join("frame-check.json")).arg("--out").arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
    let stdout = String::from_utf8_lossy(&st.stdout);
    assert!(stdout.lines().filter(|l| l.starts_with("PASS ")).count() == 6, "{stdout}");
    for f in ["report.json", "metrics.csv"] {
        assert!(out.join(f).exists());
    }
    let r = report(&out);
    assert_eq!(r["experiment"], "frame-check");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["passed"], true);
    assert_eq!(r["config"]["seed"], 1);
}

#[test]
fn seed_override_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "n.json", r#"{"experiment": "norm-equiv", "seed": 1, "operators": 5}"#);
    let run = |dir: &str, seed: &str, threads: &str| {
        let out = tmp.path().join(dir);
        let st = bin().arg("run").arg(&cfg).args(["--seed", seed, "--threads", threads, "--out"]).arg(&out).output().unwrap();
        assert_eq!(st.status.code(), Some(0));
        out
    };
    let a = run("a", "7", "1");
    let b = run("b", "7", "3");
    let c = run("c", "8", "2");
    let bytes = |d: &Path| std::fs::read(d.join("metrics.csv")).unwrap();
    assert_eq!(bytes(&a), bytes(&b));
    assert_ne!(bytes(&a), bytes(&c));
    assert_eq!(report(&a)["config"]["seed"], 7);
    assert_eq!(report(&a)["config_hash"], report(&b)["config_hash"]);
}

#[test]
fn failed_verdict_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "n.json", r#"{"experiment": "norm-equiv", "seed": 1, "operators": 4, "max_spread": 1.0}"#);
    let out = tmp.path().join("o");
    let st = bin().arg("run").arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stdout).contains("FAIL sandwich"));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn config_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("noseed.json", r#"{"experiment": "frame-check"}"#),
        ("kind.json", r#"{"experiment": "fly", "seed": 1}"#),
        ("field.json", r#"{"experiment": "frame-check", "seed": 1, "colour": 3}"#),
        ("broken.json", "{"),
    ] {
        let cfg = write(tmp.path(), name, text);
        let st = bin().arg("run").arg(&cfg).arg("--out").arg(tmp.path().join("x")).output().unwrap();
        assert_eq!(st.status.code(), Some(1), "{name}");
        assert!(!tmp.path().join("x").exists());
    }
    let st = bin().args(["run", "/nonexistent/config.json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
}

#[test]
fn infeasible_region_is_a_structured_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "big.json", r#"{"experiment": "norm-equiv", "seed": 1, "region": [0.0, 1.5, -0.4, 0.4]}"#);
    let out = tmp.path().join("o");
    let st = bin().arg("run").arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
    let r = report(&out);
    assert!(r["error"].as_str().unwrap().contains("area"));
    assert_eq!(r["passed"], false);
}
