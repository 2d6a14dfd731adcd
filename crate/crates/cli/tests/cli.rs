//! End-to-end runs of the `asymprod` binary.

use std::path::Path;
use std::process::{Command, Output};

const MOTIVATING: [&str; 10] = ["--function", "sin", "--a", "5", "--b", "3", "--c", "4", "--d", "pi/2"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymprod"))
        .args(args)
        .env_remove("ASYMPROD_THREADS")
        .output()
        .expect("binary runs")
}

fn motivating(cmd: &str, extra: &[&str]) -> Output {
    let mut args = vec![cmd];
    args.extend(MOTIVATING);
    args.extend(["--eps", "pi/2"]);
    args.extend(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    (header, lines.map(|l| l.split(',').map(str::to_owned).collect()).collect())
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn eval_motivating_row() {
    let o = motivating("eval", &["--n0", "8", "--count", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["n", "m", "log_D", "D", "log_K", "K", "E"]);
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0][0].as_str(), rows[0][1].as_str()), ("8", "0"));
    assert!((num(&rows[0][3]) - 1.496606).abs() < 1e-6);
    assert!((num(&rows[0][3]) - 1.496_605_762_665_489).abs() < 1e-14);
}

#[test]
fn eval_identity_d_equals_k() {
    let o = run(&["eval", "--function", "identity", "--a", "5", "--b", "3", "--c", "4", "--eps", "2", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r[2], r[4]);
        assert_eq!(r[3], r[5]);
        assert_eq!(num(&r[6]), 1.0);
    }
}

#[test]
fn eval_equal_shifts_gives_ones() {
    let o = run(&["eval", "--function", "sin", "--a", "3", "--b", "3", "--c", "4", "--eps", "1", "--count", "3"]);
    let (_, rows) = csv_rows(&stdout(&o));
    for r in rows {
        assert_eq!([num(&r[3]), num(&r[5]), num(&r[6])], [1.0, 1.0, 1.0]);
    }
}

#[test]
fn eval_json_shape() {
    let o = motivating("eval", &["--format", "json", "--count", "3"]);
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for key in ["n", "m", "log_D", "D", "log_K", "K", "E"] {
        assert!(rows[0].get(key).is_some(), "{key}");
    }
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let one = motivating("eval", &["--threads", "1"]);
    let four = motivating("eval", &["--threads", "4"]);
    let again = motivating("eval", &[]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, again.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_asymprod"))
        .args(["eval"])
        .args(MOTIVATING)
        .args(["--eps", "pi/2"])
        .env("ASYMPROD_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "# motivating example\nfunction=sin\na=5\nb=3\nc=4\nd=pi/2\neps=pi/2\nn0=8\ncount=1\n")
        .unwrap();
    let o = run(&["eval", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&stdout(&o)).1[0][1], "0");
    let o = run(&["eval", "--config", cfg.to_str().unwrap(), "--n0", "9"]);
    assert_eq!(csv_rows(&stdout(&o)).1[0][1], "1");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let o = motivating("eval", &["--out", out.to_str().unwrap(), "--count", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(csv_rows(&std::fs::read_to_string(out).unwrap()).1.len(), 2);
}

#[test]
fn configuration_errors_exit_2() {
    assert_eq!(motivating("eval", &["--n0", "4", "--count", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--function", "nope", "--a", "5", "--b", "3", "--c", "4"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--function", "sin", "--a", "5", "--b", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["eval", "--function", "sin", "--a", "5", "--b", "3", "--c", "4", "--eps", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(motivating("eval", &["--format", "xml"]).status.code(), Some(2));
    assert_eq!(motivating("eval", &["--threads", "many"]).status.code(), Some(2));
    let o = run(&["eval", "--function", "add(sin, cos)", "--a", "5", "--b", "3", "--c", "4", "--eps", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn compat_override_admits_eps_above_cd() {
    let base = ["eval", "--function", "sin", "--a", "5", "--b", "3", "--c", "0.5", "--eps", "1", "--count", "1"];
    assert_eq!(run(&base).status.code(), Some(2));
    let mut with = base.to_vec();
    with.push("--compat-override");
    assert_eq!(run(&with).status.code(), Some(0));
}

#[test]
fn combinator_expressions() {
    let o = run(&[
        "eval",
        "--function",
        "scale(cos, sin)",
        "--a",
        "5",
        "--b",
        "3",
        "--c",
        "4",
        "--eps",
        "1",
        "--count",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["estimate", "--function", "mul(cos, cos)", "--a", "5", "--b", "3", "--c", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn asymptote_examples() {
    let o = run(&["asymptote", "--a", "5", "--b", "3", "--c", "4", "--eps", "pi/2", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["exponent"], 0.5);
    let o = run(&["asymptote", "--a", "3", "--b", "3", "--c", "4", "--eps", "1", "--format", "json"]);
    let v = json(&o);
    assert_eq!((v["exponent"].as_f64(), v["constant"].as_f64()), (Some(0.0), Some(1.0)));
    assert!(v["upper_bound"].is_null());
    let o = run(&["asymptote", "--a", "2", "--b", "1", "--c", "1", "--eps", "0.5"]);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["exponent", "constant", "upper_bound", "effective_eps"]);
    assert!((num(&rows[0][1]) - 0.5).abs() < 1e-14);
    let o = run(&["asymptote", "--a", "5", "--b", "3", "--c", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn estimate_identity_and_sin() {
    let o = run(&["estimate", "--function", "identity", "--a", "5", "--b", "3", "--c", "4", "--eps", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["e_infinity"], 1.0);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("series.csv");
    let o = motivating("estimate", &["--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let e = v["e_infinity"].as_f64().unwrap();
    assert!(e > 0.0 && e < 1.0);
    let bound = json(&run(&["asymptote", "--a", "5", "--b", "3", "--c", "4", "--eps", "1", "--format", "json"]))
        ["upper_bound"]
        .as_f64()
        .unwrap();
    assert!(v["c_constant"].as_f64().unwrap() < bound);
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header, ["n", "m", "log_E", "E"]);
    assert_eq!(rows.len(), 11);
}

#[test]
fn estimate_exp_power_limit() {
    let o = run(&["estimate", "--function", "exp_neg_pow2", "--a", "5", "--b", "3", "--c", "4", "--eps", "1/sqrt(2)"]);
    let e = json(&o)["e_infinity"].as_f64().unwrap();
    assert!((e / (-0.25f64).exp() - 1.0).abs() < 1e-4, "{e}");
}

#[test]
fn estimate_hypothesis_violation_exits_3() {
    let o = run(&["estimate", "--function", "sin", "--a", "5", "--b", "3", "--c", "4", "--eps", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn check_sin_all_passes() {
    let o = motivating("check", &["--suite", "all"]);
    let v = json(&o);
    assert_eq!(o.status.code(), Some(0), "{v:#}");
}

#[test]
fn check_sin_individual_suites() {
    for suite in ["lower_bound", "logconcavity", "upper_bound"] {
        let o = motivating("check", &["--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        let v = json(&o);
        assert_eq!(v["passed"], true);
        assert!(v["reports"].as_array().unwrap().iter().all(|r| r["margin"].as_f64().unwrap() >= 0.0));
    }
}

#[test]
fn check_gaussian_past_inflection_fails() {
    let o = run(&[
        "check",
        "--function",
        "exp_neg_pow2",
        "--a",
        "5",
        "--b",
        "3",
        "--c",
        "4",
        "--eps",
        "1.1/sqrt(2)",
        "--suite",
        "logconcavity",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert!(v["reports"][0]["first_violation"].is_object());
}

#[test]
fn check_constant_one_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("checks.json");
    let o = run(&["check", "--function", "one", "--a", "5", "--b", "3", "--c", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(file, json(&o));
    assert_eq!(file["reports"].as_array().unwrap().len(), 5);
}

fn write_series(path: &Path, f: impl Fn(f64) -> f64) {
    let mut text = String::from("n,E\n");
    for i in 0..11 {
        let n = 1000u64 << i;
        text.push_str(&format!("{n},{:.17e}\n", f(n as f64)));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn convergence_on_synthetic_series() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("log.csv");
    write_series(&series, |n| 0.6 + 2.0 / n.ln());
    let residuals = dir.path().join("res.csv");
    let o =
        run(&["convergence", "--series-file", series.to_str().unwrap(), "--residuals", residuals.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["ranking"][0], "inv_log");
    let (header, rows) = csv_rows(&std::fs::read_to_string(residuals).unwrap());
    assert_eq!(header, ["n", "E", "distance", "inv_log", "inv_n", "power"]);
    assert_eq!(rows.len(), 11);

    let flat = dir.path().join("flat.csv");
    write_series(&flat, |_| 0.8);
    let v = json(&run(&["convergence", "--series-file", flat.to_str().unwrap()]));
    assert_eq!(v["zero_variation"], true);
}

#[test]
fn convergence_sin_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = motivating("convergence", &["--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let fits = v["fits"].as_array().unwrap();
    assert_eq!(fits.len(), 3);
    assert!(fits.iter().all(|f| f["residual_sum"].as_f64().unwrap().is_finite()));
    assert_eq!(v["ranking"].as_array().unwrap().len(), 3);
    assert!(dir.path().join("report.residuals.csv").exists());
}

#[test]
fn catalog_lists_everything() {
    let o = run(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header[0], "name");
    let names: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    for name in ["sin", "arctan", "tanh", "asinh", "erf", "identity", "cos", "sech", "exp_neg_pow2", "one", "arccot"] {
        assert!(names.contains(&name), "{name}");
    }
    let v = json(&run(&["catalog", "--format", "json"]));
    let sin = v.as_array().unwrap().iter().find(|e| e["name"] == "sin").unwrap();
    assert_eq!(sin["closed_form_epsilon"], std::f64::consts::FRAC_PI_2);
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("convergence"));
}
