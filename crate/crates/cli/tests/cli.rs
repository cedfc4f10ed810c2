use std::path::Path;
use std::process::{Command, Output};

fn mconvex(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mconvex"));
    c.args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("spawn mconvex")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const BALL_VERIFY: &str = r#"
analysis = "verify"
seed = 3
[surface]
type = "sphere"
n = 3
radius = 1.0
[barrier]
m = 2
[sampling]
grid = 10
fd = 50
levels = 4
"#;

#[test]
fn ball_verify_passes_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ball.toml", BALL_VERIFY);
    let out = dir.path().join("report.jsonl");
    let o = mconvex(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with(r#"{"record":"header","format_version":1,"#));
    assert!(lines.last().unwrap().starts_with(r#"{"record":"summary","verdict":"pass""#));
    for name in ["m-psh margin", "vanishing on boundary", "gradient nonvanishing", "eigenvalue list", "level sets"] {
        assert!(text.contains(&format!(r#""name":"{name}","passed":true"#)), "{name}");
    }
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn missing_m_exits_2_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &BALL_VERIFY.replace("m = 2\n", ""));
    let out = dir.path().join("never.jsonl");
    let o = mconvex(&["verify", "-c", &cfg, "-o", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("barrier") && err.contains("`m`"), "{err}");
    assert!(!out.exists());
}

#[test]
fn metric_point_outside_exits_1_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "metric.toml",
        "analysis = \"metric\"\n[surface]\ntype = \"sphere\"\nn = 3\nradius = 1.0\n[metric]\npairs = 0\n[[metric.points]]\np = [1.5, 0.0, 0.0]\nv = [0.0, 1.0, 0.0]\n",
    );
    let out = dir.path().join("never.jsonl");
    let o = mconvex(&["run", "-c", &cfg, "-o", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    let rec: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(rec["record"], "failure");
    assert_eq!(rec["analysis"], "metric");
    assert!(rec["error"].as_str().unwrap().contains("outside"), "{err}");
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1, "temporary files left behind");
}

#[test]
fn failed_verdict_writes_report_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cat.toml",
        "analysis = \"curvature\"\n[surface]\ntype = \"catenoid\"\n[barrier]\nm = 1\n[sampling]\nboundary = 32\n",
    );
    let out = dir.path().join("report.csv");
    let o = mconvex(&["run", "-c", &cfg, "-o", out.to_str().unwrap(), "--format", "csv-summary"], &[]);
    assert_eq!(o.status.code(), Some(1));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("name,passed,measured,threshold,samples,failures,location,note\n"));
    let row = csv.lines().find(|l| l.starts_with("1-convexity,false,")).expect("failing row");
    // the failing check carries a reproduction locator
    assert!(row.split(',').nth(6).is_some_and(|loc| !loc.is_empty()), "{row}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("1-convexity"));
}

#[test]
fn seed_flag_and_env_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ball.toml", BALL_VERIFY);
    let o = mconvex(&["verify", "-c", &cfg, "--seed", "41"], &[("MCONVEX_SAMPLING__GRID", "6")]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains(r#""seed":41,"#));
    assert!(text.contains(r#""grid":6,"#));

    let o = mconvex(&["verify", "-c", &cfg], &[("MCONVEX_BARRIER__SAFETY", "lots")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("barrier.safety"));
}

#[test]
fn analysis_must_be_named_somewhere() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "none.toml", "seed = 1\n");
    let o = mconvex(&["run", "-c", &cfg], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = mconvex(&["verify", "-c", &cfg, "--workers", "0"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn worker_count_does_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ball.toml", BALL_VERIFY);
    let a = mconvex(&["run", "-c", &cfg, "--workers", "1"], &[]);
    let b = mconvex(&["run", "-c", &cfg, "--workers", "4"], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
