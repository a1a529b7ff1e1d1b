use serde_json::Value;
use vq_cli::{run, Outcome, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_OK};
use vq_core::schur::Realization;
use vq_core::{FueterSeries, QMatrix};

fn go(args: &[&str]) -> Outcome {
    run(std::iter::once("vqf").chain(args.iter().copied()))
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("bad JSON {:?}: {e}", o.stdout))
}

fn quat(v: &Value) -> [f64; 4] {
    serde_json::from_value(v.clone()).unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("vqf-test-{}-{name}", std::process::id()))
}

#[test]
fn eval_mu_on_the_slice_is_the_coordinate() {
    let o = go(&["eval-mu", "--point", "0,1,2,3", "--alpha", "1,0,0"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(quat(&json(&o)), [1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn structural_defect_is_exact_zero() {
    let o = go(&["structural", "--alpha", "1,1,0"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout.trim(), r#"{"defect":"0/1"}"#);
}

#[test]
fn structural_rejects_zero_index() {
    assert_eq!(go(&["structural", "--alpha", "0,0,0"]).code, EXIT_INVALID);
}

#[test]
fn verify_kernel_suite_passes() {
    let o = go(&["verify", "--suite", "kernel", "--seed", "42"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let lines: Vec<&str> = o.stderr.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l.starts_with("PASS")));
    let report = json(&o);
    assert_eq!(report["passed"], Value::Bool(true));
    assert_eq!(report["seed"], 42);
}

#[test]
fn verify_is_deterministic_per_seed() {
    let a = go(&["verify", "--suite", "fueter", "--seed", "7"]);
    let b = go(&["verify", "--suite", "fueter", "--seed", "7"]);
    assert_eq!(a, b);
    assert_ne!(EXIT_CHECK_FAILED, a.code);
}

#[test]
fn verify_rejects_unknown_suite() {
    let o = go(&["verify", "--suite", "nope"]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(json(&o)["error"].is_string());
}

#[test]
fn unknown_verb_and_bad_flags_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["eval-mu", "--point", "0,1,2", "--alpha", "1,0,0"],
        &["eval-mu", "--point", "0,0,0,0", "--alpha", "1,0,0"],
        &["eval-mu", "--point", "0,1,2,3", "--alpha", "a,b,c"],
        &["kernel", "--point", "0,0.1,0.1,0.1"],
        &["gleason", "--point", "0,0.1,0,0", "--point", "0,-0.1,0,0", "--alpha", "1,0,0"],
        &["blaschke", "--point", "0.9,0.9,0,0"],
        &["realize", "--at", "0.1,0.1,0.1"],
        &["expand-qn", "--n", "99"],
        &["eval-mu", "--trunc", "-3"],
    ] {
        let o = go(args);
        assert_eq!(o.code, EXIT_INVALID, "{args:?}");
        assert!(json(&o)["error"].is_string(), "{args:?}");
    }
}

#[test]
fn apply_vq_kills_fueter_monomials() {
    let o = go(&["apply-vq", "--point", "0.5,1,1,1", "--alpha", "2,1,0", "--tol", "1e-6"]);
    assert_eq!(o.code, EXIT_OK);
    let v = json(&o);
    assert_eq!(v["within_tol"], Value::Bool(true));
    assert_eq!(v["order"], 2);
}

#[test]
fn gleason_on_a_radial_segment() {
    let o = go(&["gleason", "--point", "0.1,0.3,0.2,0.1", "--point", "-0.2,0.6,0.4,0.2", "--alpha", "1,1,0", "--tol", "1e-7"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(json(&o)["within_tol"], Value::Bool(true));
}

#[test]
fn kernel_diagonal_reports_tail() {
    let o = go(&["kernel", "--point", "0.2,0.3,0.1,0.2", "--point", "0.2,0.3,0.1,0.2", "--trunc", "40"]);
    let v = json(&o);
    let k = quat(&v["value"]);
    let r2: f64 = 0.04 + 0.09 + 0.01 + 0.04;
    let tail = v["tail_bound"].as_f64().unwrap();
    assert!((k[0] - 1.0 / (1.0 - r2)).abs() <= tail + 1e-12);
    assert!(k[1..].iter().all(|c| c.abs() < 1e-15));
}

#[test]
fn gram_from_file_matches_inline_points() {
    let path = tmp("points.json");
    std::fs::write(&path, "[[0.1,0.2,0.3,0.1],[0,0.3,-0.1,0.2]]").unwrap();
    let from_file = go(&["gram", "--in", path.to_str().unwrap()]);
    let inline = go(&["gram", "--point", "0.1,0.2,0.3,0.1", "--point", "0,0.3,-0.1,0.2"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(from_file, inline);
    let v = json(&inline);
    let g: QMatrix = serde_json::from_value(v["gram"].clone()).unwrap();
    assert_eq!(g.shape(), (2, 2));
    assert!(v["min_eigenvalue"].as_f64().unwrap() > 0.0);
}

#[test]
fn realize_round_trip_through_file() {
    let out = tmp("r.json");
    let o = go(&["realize", "--point", "0.1,0.2,0.3,0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let r: Realization = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string(&r).unwrap()), text);

    let eval = go(&["realize", "--in", out.to_str().unwrap(), "--at", "0.2,-0.1,0.3", "--trunc", "20"]);
    std::fs::remove_file(&out).ok();
    let v = json(&eval);
    let exact: QMatrix = serde_json::from_value(v["value"].clone()).unwrap();
    let series: QMatrix = serde_json::from_value(v["series_value"].clone()).unwrap();
    assert!(exact.max_abs_diff(&series) <= v["tail_bound"].as_f64().unwrap() + 1e-14);

    let blaschke = json(&go(&["blaschke", "--point", "0.1,0.2,0.3,0.1", "--at", "0.2,-0.1,0.3"]));
    let direct: QMatrix = serde_json::from_value(blaschke["value"].clone()).unwrap();
    assert!(direct.max_abs_diff(&exact) < 1e-14);
}

#[test]
fn expand_qn_output_round_trips() {
    let o = go(&["expand-qn", "--n", "3"]);
    let s: FueterSeries = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string(&s).unwrap()), o.stdout);
    assert_eq!(s.max_degree(), Some(3));
}
