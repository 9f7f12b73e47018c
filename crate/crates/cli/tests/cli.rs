use std::process::{Command, Output};

use serde_json::Value;

fn fdde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdde")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = fdde(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SSR: &[&str] = &["classify", "--alpha", "0.3", "--a", "1.7", "--b", "1", "--c", "-0.4"];

#[test]
fn classify_reports_one_switch() {
    let v = json(SSR);
    assert_eq!(v["label"], "SSR");
    assert_eq!(v["header"]["command"], "classify");
    let iv = v["intervals"].as_array().unwrap();
    assert_eq!(iv.len(), 2);
    assert_eq!(iv[0][0].as_f64().unwrap(), 0.0);
    assert!((iv[0][1].as_f64().unwrap() - 0.212729).abs() < 1e-5);
    assert_eq!(iv[0][2], "S");
    assert!(iv[1][1].is_null());
    assert_eq!(iv[1][2], "U");
}

#[test]
fn classify_point_query() {
    let mut args = SSR.to_vec();
    args.extend(["--tau", "0.5"]);
    assert_eq!(json(&args)["point"]["stability"], "U");
}

#[test]
fn constant_c0() {
    let v = json(&["constants", "--id", "c0", "--b", "-1", "--alpha", "0.45"]);
    assert!((v["c"].as_f64().unwrap() + 0.195086).abs() < 1e-4);
}

#[test]
fn zero_b_is_a_usage_error() {
    let out = fdde(&["classify", "--alpha", "0.5", "--a", "0", "--b", "0", "--c", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--b"));
}

#[test]
fn zero_tolerance_is_rejected() {
    let out = fdde(&["verify", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--tolerance"));
}

#[test]
fn bad_values_name_the_flag() {
    for (args, flag) in [
        (vec!["classify", "--alpha", "1.5", "--a", "1", "--b", "1", "--c", "1"], "--alpha"),
        (vec!["classify", "--alpha", "0.5", "--a", "1", "--b", "1", "--c", "0"], "--c"),
        (vec!["classify", "--alpha", "0.5", "--a", "1", "--b", "1"], "--c"),
        (vec!["classify", "--alpha", "0.5", "--a", "1", "--b", "1", "--c", "1", "--step", "0.1"], "--step"),
        (vec!["classify", "--alpha", "x", "--a", "1", "--b", "1", "--c", "1"], "--alpha"),
        (vec!["curve", "--curve", "gamma99", "--b", "1", "--alpha", "0.3", "--c", "-0.4"], "--curve"),
        (vec!["constants", "--id", "c4", "--b", "1", "--alpha", "0.3"], "--id"),
        (vec!["scan", "--alpha", "0.3", "--b", "1", "--a1-min", "2", "--a1-max", "1", "--c-min", "-1", "--c-max", "1"], "--a1-min"),
    ] {
        let out = fdde(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn csv_starts_with_header_comment() {
    let mut args = SSR.to_vec();
    args.extend(["--format", "csv"]);
    let out = fdde(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# fdde "));
    assert!(text.contains("lo,hi,verdict\n"));
    assert!(text.contains(",inf,U\n"));
}

#[test]
fn crossings_ladder_is_cut_at_tau() {
    let v = json(&["crossings", "--alpha", "0.3", "--a", "1.7", "--b", "1", "--c", "-0.4", "--tau", "1"]);
    for r in v["crossings"].as_array().unwrap() {
        for t in r["ladder"].as_array().unwrap() {
            assert!(t.as_f64().unwrap() <= 1.0);
        }
    }
    assert_eq!(v["quartic"].as_array().unwrap().len(), 5);
}

#[test]
fn curve_single_point() {
    let v = json(&["curve", "--curve", "gamma13", "--b", "-1", "--alpha", "0.45", "--c", "-0.3"]);
    let a1 = v["points"][0]["a1"].as_f64().unwrap();
    assert!((a1 - 0.674322).abs() < 5e-4 * 0.674322);
}

#[test]
fn curve_csv_rows() {
    let out = fdde(&[
        "curve", "--curve", "gamma1", "--b", "-1", "--alpha", "0.45", "--c-min", "0.5", "--c-max", "1", "--res", "3",
        "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("curve_id,a1,c\n"));
    assert!(text.contains("gamma1,-0.5,0.5\n"));
}

#[test]
fn simulate_writes_trajectory() {
    let v = json(&["simulate", "--alpha", "0.5", "--a", "-1", "--b", "0.2", "--c", "1", "--tau", "1", "--t-end", "10"]);
    let t = v["times"].as_array().unwrap();
    assert_eq!(t.len(), v["x"].as_array().unwrap().len());
    assert_eq!(v["x"][0].as_f64().unwrap(), 1.0);
}

#[test]
fn simulate_rejects_short_horizon() {
    let out = fdde(&["simulate", "--alpha", "0.5", "--a", "-1", "--b", "0.2", "--c", "1", "--tau", "2", "--t-end", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--t-end"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("fdde-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"alpha":0.3,"a":1.7,"b":1,"c":-0.4,"tau":0.1,"t-end":3}"#).unwrap();
    let path = cfg.to_str().unwrap();
    let v = json(&["classify", "--config", path]);
    assert_eq!(v["point"]["stability"], "S");
    let v = json(&["classify", "--config", path, "--tau", "0.5"]);
    assert_eq!(v["point"]["stability"], "U");

    std::fs::write(&cfg, r#"{"alpha":0.3,"typo":1}"#).unwrap();
    let out = fdde(&["classify", "--config", path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--config"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("fdde-out-{}.json", std::process::id()));
    let mut args = SSR.to_vec();
    let p = path.to_str().unwrap().to_string();
    args.extend(["--out", &p]);
    let out = fdde(&args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["label"], "SSR");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["scan", "--alpha", "0.45", "--b", "-1", "--a1-min", "-1", "--a1-max", "3", "--c-min", "-1", "--c-max", "1", "--res", "6"];
    let first = fdde(&args);
    let second = fdde(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_round_trips_through_body_types() {
    use fdde_cli::output::{ClassifyBody, Envelope};
    let out = fdde(SSR);
    let env: Envelope<ClassifyBody> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env.header.alpha, Some(0.3));
    let again = serde_json::to_string_pretty(&env).unwrap() + "\n";
    assert_eq!(again.as_bytes(), out.stdout.as_slice());
}
