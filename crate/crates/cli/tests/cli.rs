use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn selfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).output().expect("binary runs")
}

fn run(cmd: &str, cfg: &str, extra: &[&str]) -> Output {
    let path = config(cfg);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    selfsim(&args)
}

fn result(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON output");
    v["result"].clone()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn dim_examples() {
    let out = run("dim", "four_corner_riesz.json", &[]);
    assert_eq!(code(&out), 0);
    assert!((result(&out)["s"].as_f64().unwrap() - 1.0).abs() < 1e-14);
    let out = run("dim", "middle_thirds_sign.json", &[]);
    assert!((result(&out)["s"].as_f64().unwrap() - 0.6309297536).abs() < 1e-10);
    let maps = r#"--override=maps=[{"r":0.5,"q":[0.0]},{"r":0.25,"q":[0.75]}]"#;
    let out = run("dim", "middle_thirds_sign.json", &[maps]);
    let s = result(&out)["s"].as_f64().unwrap();
    assert!((s - 0.6942419).abs() < 1e-7);
    assert!(result(&out)["residual"].as_f64().unwrap() <= 1e-14);
}

#[test]
fn pv_trace_csv() {
    let out = run("pv-trace", "middle_thirds_sign.json", &["--override", "depth=10"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,F_value,F_err,A_value,A_err"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert!((r[3] - rows[0][3]).abs() <= r[4] + rows[0][4]);
    }
    let out = run("pv-trace", "middle_thirds_sign.json", &["--override", "K=0"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "k,F_value,F_err,A_value,A_err\n");
    let constant = r#"kernel.omega={"kind":"constant","c":1.0}"#;
    let out = run("pv-trace", "middle_thirds_sign.json", &["--override", constant, "--override", "depth=8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let a: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(a > 0.0);
    }
}

#[test]
fn criterion_exit_codes() {
    let out = run("criterion", "line_vertical.json", &[]);
    assert_eq!(code(&out), 2);
    assert_eq!(result(&out)["verdict"], "zero_within_bracket");
    let out = run("perturb", "line_vertical.json", &[]);
    assert_eq!(code(&out), 0);
    let r = result(&out);
    assert_eq!(r["criterion_after"]["verdict"], "nonzero_certified");
    assert!(r["sup_norm_change"].as_f64().unwrap() <= 0.1);
    let out = run("criterion", "four_corner_riesz.json", &[]);
    assert_eq!(code(&out), 0);
    assert!(result(&out)["I"]["value"].as_f64().unwrap() < 0.0);
}

#[test]
fn malformed_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"geometry": {"kind": "euclidean", "dim": 1}, "maps": [{"r": 1.5, "q": [0]}]}"#).unwrap();
    let out = selfsim(&["criterion", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&selfsim(&["dim", bad.to_str().unwrap()])), 1);
    assert_eq!(code(&selfsim(&["dim", "/nonexistent/config.json"])), 1);
    let out = run("criterion", "middle_thirds_sign.json", &["--override", "word=[3]"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_subcommand_prints_usage() {
    let out = selfsim(&[]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn seeded_runs_are_identical() {
    let a = run("birkhoff", "four_corner_riesz.json", &["--seed", "42"]);
    let b = run("birkhoff", "four_corner_riesz.json", &["--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let r = result(&a);
    assert!((r["frequency"]["expected"].as_f64().unwrap() - 0.0625).abs() < 1e-14);
    assert_eq!(r["within_3_stderr"], true);
    let c = run("birkhoff", "four_corner_riesz.json", &["--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn hitting_times_csv() {
    let out = run("birkhoff", "middle_thirds_sign.json", &["--hits", "--override", "n_steps=1000"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k"));
    let ks: Vec<usize> = lines.map(|l| l.parse().unwrap()).collect();
    assert!(ks.windows(2).all(|w| w[0] < w[1]));
    assert!(ks.len() > 400 && ks.len() < 600);
}

#[test]
fn replay_from_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let out = run("criterion", "four_corner_riesz.json", &["--out", first.to_str().unwrap(), "--override", "depth=4"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let again = selfsim(&["criterion", first.to_str().unwrap()]);
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    let b: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(a, b);
    assert_eq!(a["config"]["depth"], 4);
}

#[test]
fn thread_count_does_not_change_results() {
    let one = run("pv-trace", "middle_thirds_sign.json", &["--threads", "1", "--override", "depth=8"]);
    let many = run("pv-trace", "middle_thirds_sign.json", &["--threads", "4", "--override", "depth=8"]);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(code(&run("dim", "middle_thirds_sign.json", &["--threads", "0"])), 1);
}

#[test]
fn integrate_second_moment() {
    let moment = r#"integrand={"kind":"monomial","powers":[2]}"#;
    let out = run("integrate", "middle_thirds_sign.json", &["--override", moment]);
    assert_eq!(code(&out), 0);
    let r = result(&out);
    let (v, e) = (r["value"].as_f64().unwrap(), r["err"].as_f64().unwrap());
    assert!((v - 0.375).abs() <= e);
    let out = run(
        "integrate",
        "middle_thirds_sign.json",
        &["--override", moment, "--override", "method=monte_carlo", "--override", "samples=20000"],
    );
    let r = result(&out);
    assert!((r["mean"].as_f64().unwrap() - 0.375).abs() <= 4.0 * r["stderr"].as_f64().unwrap());
    let region = r#"region={"kind":"complement","word":[1]}"#;
    let out = run("integrate", "middle_thirds_sign.json", &["--override", region]);
    assert!((result(&out)["value"].as_f64().unwrap() - 0.5).abs() < 1e-14);
}

#[test]
fn separation_and_gap_and_maximal() {
    let out = run("separation", "four_corner_riesz.json", &["--override", "depth=5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(result(&out)["report"]["status"]["kind"], "strongly_separated");
    let out = run("gap", "middle_thirds_sign.json", &["--override", "depth=8"]);
    assert_eq!(code(&out), 0);
    assert!(result(&out)["gap"]["value"].as_f64().unwrap() >= 0.0);
    let out = run("maximal", "middle_thirds_sign.json", &["--override", "depth=8", "--override", "max_n=4"]);
    assert_eq!(code(&out), 0);
    let best = &result(&out)["best"];
    assert_eq!((best["m"].as_u64(), best["n"].as_u64()), (Some(0), Some(4)));
}

#[test]
fn divergence_refuses_zero_criterion() {
    let out = run("divergence", "line_vertical.json", &["--override", "word=[1]"]);
    assert_eq!(code(&out), 2);
    assert_eq!(result(&out)["status"], "REFUSED");
    let out = run("divergence", "middle_thirds_sign.json", &["--override", "depth=9"]);
    assert_eq!(code(&out), 0);
    assert_eq!(result(&out)["status"], "PASS");
}

#[test]
fn heisenberg_config_runs() {
    let out = run("criterion", "heisenberg_corners.json", &["--override", "depth=3"]);
    assert_ne!(code(&out), 1);
    let out = run("truncated", "heisenberg_corners.json", &["--override", "eps=0.2", "--override", "depth=5"]);
    assert_ne!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
}
