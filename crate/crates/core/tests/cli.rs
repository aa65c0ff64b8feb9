use std::path::Path;
use std::process::{Command, Output};

use lkcq::lk_weights::{weights_explicit, SchemeParams};
use serde_json::Value;

fn lkcq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lkcq"))
        .args(args)
        .output()
        .unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn weights_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "w.csv");
    let run = lkcq(&[
        "weights", "--k", "4", "--alpha", "0.3", "--terms", "30", "--out", &out,
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,omega"));
    let want = weights_explicit(SchemeParams::new(4, 0.3).unwrap(), 30).unwrap();
    let got: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(got, want.omegas());
}

#[test]
fn stability_writes_samples_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "s.csv");
    let run = lkcq(&[
        "stability",
        "--k",
        "4",
        "--alpha",
        "0.2",
        "--method",
        "locus",
        "--samples",
        "256",
        "--trunc",
        "20000",
        "--out",
        &out,
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let summary: Value = serde_json::from_slice(&run.stdout).unwrap();
    for key in ["k", "alpha", "theta0_estimate", "contained", "method", "M"] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }
    assert_eq!(summary["method"], "locus");
    assert_eq!(summary["M"], 20000);
    assert_eq!(summary["contained"], true);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("re_z,im_z,re_symbol,im_symbol,arg")
    );
    assert_eq!(text.lines().count(), 256);

    let run = lkcq(&[
        "stability",
        "--k",
        "6",
        "--alpha",
        "0.8",
        "--method",
        "tau8",
        "--samples",
        "80",
        "--out",
        &out,
    ]);
    assert!(run.status.success());
    let summary: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(summary["method"], "tau8");
    assert!(summary["M"].is_null());
}

#[test]
fn solve_is_deterministic_and_pins_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "c.json");
    std::fs::write(
        &cfg,
        r#"{"k": 3, "alpha": 0.5, "T": 1.0, "N": 40, "nodes": 16, "scheme": "corrected", "problem": "example1"}"#,
    )
    .unwrap();
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    assert!(lkcq(&["solve", "--config", &cfg, "--out", &a])
        .status
        .success());
    assert!(lkcq(&["solve", "--config", &cfg, "--out", &b])
        .status
        .success());
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,u");
    assert_eq!(rows.len(), 18);
    for row in [rows[1], rows[17]] {
        let u: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(u, 0.0);
    }
}

#[test]
fn solve_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "c.json");
    let out = path(dir.path(), "u.csv");
    for body in [
        r#"{"k": 4, "alpha": 0.5, "N": 2, "nodes": 8, "scheme": "corrected"}"#,
        r#"{"k": 2, "alpha": 0.5, "N": 10, "nodes": 8, "scheme": "corrected", "problem": "other"}"#,
        r#"{"k": 2, "alpha": 1.5, "N": 10, "nodes": 8, "scheme": "standard"}"#,
        r#"{"k": 2, "alpha": 0.5, "N": 10, "nodes": 8, "scheme": "implicit"}"#,
    ] {
        std::fs::write(&cfg, body).unwrap();
        let run = lkcq(&["solve", "--config", &cfg, "--out", &out]);
        assert!(!run.status.success(), "{body}");
        assert!(String::from_utf8_lossy(&run.stderr).starts_with("error:"));
    }
}

#[test]
fn converge_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "r.json");
    let run = lkcq(&[
        "converge",
        "--k",
        "2",
        "--alpha",
        "0.5",
        "--scheme",
        "corrected",
        "--n-list",
        "20,40,80,160",
        "--nodes",
        "16",
        "--norm",
        "rms",
        "--out",
        &out,
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["n_list"].as_array().unwrap().len(), 4);
    assert_eq!(report["errors"].as_array().unwrap().len(), 3);
    assert_eq!(report["rates"].as_array().unwrap().len(), 2);
    assert_eq!(report["norm"], "rms");
    assert_eq!(report["scheme"], "corrected");

    let bad = lkcq(&[
        "converge",
        "--k",
        "2",
        "--alpha",
        "0.5",
        "--scheme",
        "corrected",
        "--n-list",
        "20,30,40",
        "--out",
        &out,
    ]);
    assert!(!bad.status.success());
}
