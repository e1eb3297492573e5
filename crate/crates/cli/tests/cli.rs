//! End-to-end tests of the command-line surface: problem-file ingestion,
//! exit-code mapping, deterministic sweep output, and the solve-table
//! round-trip into boundary fitting.

use std::path::PathBuf;
use std::process::{Command, Output};

const MINIMAL: &str = "\
interval = 0 1
mu = 0.5
alpha = 0.5
k = poly:1
adv = poly:0
reac = poly:0
source = power:-1,0,0
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewfrac"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("skewfrac-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn solve_minimal_recovers_closed_form() {
    let problem = scratch("minimal.prob");
    std::fs::write(&problem, MINIMAL).unwrap();
    let out_path = scratch("solve.json");
    let out = run(&[
        "solve",
        "--problem",
        problem.to_str().unwrap(),
        "--n",
        "8",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let solved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let iv = skewfrac::fraccalc::Interval::new(0.0, 1.0).unwrap();
    let exact = skewfrac::abel::differentiated_rhs_solution(0.5, 0.5, 0.5, iv).unwrap();
    let anti = exact.antiderivative;
    let mut worst = 0.0f64;
    let table = solved["table"].as_array().unwrap();
    assert_eq!(table.len(), 401);
    for row in table {
        let x = row["x"].as_f64().unwrap();
        let u = row["u"].as_f64().unwrap();
        worst = worst.max((u - anti.eval(x)).abs());
    }
    assert!(worst <= 1e-9, "max deviation from the closed form: {worst}");
}

#[test]
fn parse_error_exits_with_code_two() {
    let problem = scratch("bad_mu.prob");
    std::fs::write(&problem, MINIMAL.replace("mu = 0.5", "mu = 1.2")).unwrap();
    let out = run(&["solve", "--problem", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("mu must lie in (0,1)"), "{err}");
}

#[test]
fn condition_violation_exits_with_code_three() {
    let problem = scratch("bad_k.prob");
    std::fs::write(&problem, MINIMAL.replace("k = poly:1", "k = poly:1,-2")).unwrap();
    let out = run(&["solve", "--problem", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("positive"), "{err}");
}

#[test]
fn check_conditions_names_scalar_inequality() {
    let problem = scratch("steep_k.prob");
    std::fs::write(&problem, MINIMAL.replace("k = poly:1", "k = exp-poly:0,10")).unwrap();
    let out = run(&["check-conditions", "--problem", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("scalar"), "{err}");
    // the report itself still goes to stdout
    let body: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("report is valid JSON");
    assert_eq!(body["pass"], serde_json::Value::Bool(false));
}

#[test]
fn verify_abel_is_deterministic() {
    let args = ["verify-abel", "--seed", "7", "--draws", "6"];
    let out1 = run(&args);
    let out2 = run(&args);
    assert!(out1.status.success(), "{}", String::from_utf8_lossy(&out1.stderr));
    assert_eq!(out1.stdout, out2.stdout, "outputs differ between runs");
    let body: serde_json::Value = serde_json::from_slice(&out1.stdout).unwrap();
    for rec in body["records"].as_array().unwrap() {
        assert_eq!(rec["status"], "Pass", "{rec}");
    }
}

#[test]
fn tolerance_override_can_fail_a_check() {
    let out = run(&[
        "verify-specfun",
        "--seed",
        "3",
        "--draws",
        "20",
        "--tol",
        "specfun/gamma-reflection=1e-30",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn table_roundtrip_reproduces_live_fits() {
    let problem = scratch("roundtrip.prob");
    std::fs::write(&problem, MINIMAL).unwrap();
    let table_path = scratch("roundtrip.json");
    let out = run(&[
        "solve",
        "--problem",
        problem.to_str().unwrap(),
        "--n",
        "8",
        "--out",
        table_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let from_table = run(&["analyze-boundary", "--table", table_path.to_str().unwrap()]);
    assert!(from_table.status.success(), "{}", String::from_utf8_lossy(&from_table.stderr));
    let live = run(&[
        "analyze-boundary",
        "--problem",
        problem.to_str().unwrap(),
        "--n",
        "8",
    ]);
    assert!(live.status.success(), "{}", String::from_utf8_lossy(&live.stderr));

    let a: serde_json::Value = serde_json::from_slice(&from_table.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&live.stdout).unwrap();
    let fa = a["fits"].as_array().unwrap();
    let fb = b["fits"].as_array().unwrap();
    assert_eq!(fa.len(), fb.len());
    for (x, y) in fa.iter().zip(fb.iter()) {
        assert_eq!(x["quantity"], y["quantity"]);
        let ex = x["estimate"].as_f64().unwrap();
        let ey = y["estimate"].as_f64().unwrap();
        assert!((ex - ey).abs() <= 1e-12, "{}: {ex} vs {ey}", x["quantity"]);
    }
    // the solution itself carries the basis exponent at both ends
    let u_left = fa.iter().find(|f| f["quantity"] == "u" && f["endpoint"] == "left").unwrap();
    assert!((u_left["estimate"].as_f64().unwrap() - 0.75).abs() < 0.02);
}

#[test]
fn counterexample_reports_divergence() {
    let out = run(&["counterexample", "--mu", "0.5", "--t", "1.8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["diverges"], serde_json::Value::Bool(true));
    assert!(body["p_plus_one_minus_t"].as_f64().unwrap() < -1.0);
}

#[test]
fn csv_output_has_expected_columns() {
    let out = run(&["verify-specfun", "--seed", "1", "--draws", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "check,status,measured,tolerance,ref");
    assert!(lines.clone().count() >= 4);
    for line in lines {
        assert_eq!(line.split(',').count(), 5, "{line}");
    }
}
