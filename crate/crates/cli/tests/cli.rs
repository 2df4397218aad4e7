use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn discovery(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discovery")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = discovery(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn fit_on_bundled_library() {
    let v = json(&["fit", "--library", "aerobic"]);
    let r = &v["records"][0];
    assert!((r["sigma"].as_f64().unwrap() - 0.669).abs() < 5e-4);
    assert!((r["theta"].as_f64().unwrap() - 46.241).abs() < 5e-3);
    assert_eq!(r["boundary"], Value::Bool(false));
    assert_eq!(v["config"]["n"], 959);
}

#[test]
fn singletons_only_fit_warns() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.csv", "l,count\n1,30\n");
    let out = discovery(&["fit", "--spectrum", &p]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["records"][0]["boundary"], Value::Bool(true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("boundary"));
}

#[test]
fn tokens_and_spectrum_agree() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.txt", "a\nb\na\nc\nc\nc\nd\n");
    let s = write(dir.path(), "s.csv", "l,count\n1,2\n2,1\n3,1\n");
    let run = |flag: &str, p: &str| {
        json(&["estimate", flag, p, "--sigma", "0.5", "--theta", "2", "--m", "0,3n", "--l", "0,1"])
    };
    let (a, b) = (run("--tokens", &t), run("--spectrum", &s));
    assert_eq!(a["records"], b["records"]);
}

#[test]
fn estimates_at_multiples_of_n() {
    let v = json(&["estimate", "--library", "anaerobic", "--fit", "--m", "n,10n,100n"]);
    let got: Vec<f64> = v["records"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    for (g, want) in got.iter().zip([0.409, 0.232, 0.109]) {
        assert!((g - want).abs() < 5e-4, "{got:?}");
    }
    assert_eq!(v["records"][1]["m"], 9690);
}

#[test]
fn good_toulmin_beyond_n_is_flagged() {
    let out = discovery(&["estimate", "--library", "aerobic", "--estimator", "gtoulmin", "--m", "0,n,10n", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let flags: Vec<&str> = text.lines().filter(|l| l.starts_with("gtoulmin")).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(flags, ["false", "false", "true"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unstable"));
}

#[test]
fn one_step_interval_is_a_point() {
    let v = json(&["interval", "--library", "aerobic", "--sigma", "0.6", "--theta", "40", "--m", "0", "--draws", "1000"]);
    let r = &v["records"][0];
    assert_eq!(r["interval"]["lo"], r["value"]);
    assert_eq!(r["interval"]["hi"], r["value"]);
}

#[test]
fn seeded_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = discovery(&[
            "interval", "--library", "aerobic", "--sigma", "0.67", "--theta", "46", "--m", "n", "--l", "0,2", "--draws",
            "2000", "--seed", "5", "--format", "csv", "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# discovery interval\n# config: "));
    assert!(text.contains("# seed: 5\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(discovery(&["fit"]).status.code(), Some(2));
    assert_eq!(discovery(&["estimate", "--library", "nope", "--fit"]).status.code(), Some(2));
    assert_eq!(discovery(&["estimate", "--library", "aerobic", "--sigma", "1.2", "--theta", "1"]).status.code(), Some(2));
    let far = discovery(&["interval", "--library", "aerobic", "--fit", "--m", "n", "--exact"]);
    assert_eq!(far.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&far.stderr).starts_with("error:"));
}

#[test]
fn simulate_csv_shape() {
    let out = discovery(&["simulate", "--replicates", "10", "--groups", "2", "--l", "0,1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "group,n,k,sigma,theta,l,truth,bnp,gt,pd-smooth,poisson-smooth,sgt");
    assert_eq!(rows.len(), 1 + 2 * 3);
}

#[test]
fn posterior_grid_notes_fit_and_mode() {
    let out = discovery(&["posterior-grid", "--library", "aerobic", "--sigma-points", "19", "--theta-points", "20", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n# fit: {"));
    assert!(text.contains("\n# mode: {"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 19 * 20);
}

#[test]
fn fit_from_spectrum_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/naegleria_anaerobic.csv");
    let v = json(&["fit", "--spectrum", path]);
    let r = &v["records"][0];
    assert!((r["sigma"].as_f64().unwrap() - 0.656).abs() < 5e-3);
    assert!((r["theta"].as_f64().unwrap() - 155.408).abs() < 0.5);
}

#[test]
fn heavy_singletons_break_good_toulmin_at_2n() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.csv", "l,count\n1,40\n2,2\n5,1\n");
    let v = json(&["estimate", "--spectrum", &p, "--estimator", "gtoulmin", "--m", "2n"]);
    let r = &v["records"][0];
    assert_eq!(r["unstable"], Value::Bool(true));
    assert!(!(0.0..=1.0).contains(&r["value"].as_f64().unwrap()));
}

#[test]
fn naive_scaling_reports_power_rate_estimate() {
    let v = json(&[
        "interval", "--library", "aerobic", "--fit", "--m", "10n", "--scaling", "naive", "--draws", "2000",
    ]);
    let r = &v["records"][0];
    assert!((r["asymptotic"].as_f64().unwrap() - 0.171).abs() < 5e-4);
    assert!((r["value"].as_f64().unwrap() - 0.165).abs() < 5e-4);
    assert_eq!(r["interval"]["method"], "asymptotic-naive");
}

#[test]
fn cumulative_estimate() {
    let v = json(&["estimate", "--library", "anaerobic", "--fit", "--cumulative", "0,1,2,3", "--m", "n"]);
    let r = &v["records"][0];
    assert!((r["value"].as_f64().unwrap() - 0.679).abs() < 5e-4);
    assert_eq!(r["ls"], serde_json::json!([0, 1, 2, 3]));
}
