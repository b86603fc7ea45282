use std::fs;
use std::process::Command;

use serde_json::Value;

use fracineq_cli::{execute, exit, CliError, Format, Mode, RunConfig};

fn eval_config() -> RunConfig {
    RunConfig {
        mode: Some(Mode::Eval),
        theorems: vec!["HH_fractional".into()],
        functions: vec!["monomial:k=2".into()],
        intervals: vec![[0.0, 1.0]],
        alphas: vec![2.0],
        ..RunConfig::default()
    }
}

fn report(cfg: &RunConfig) -> (Value, u8) {
    let exec = execute(&cfg.resolve().unwrap()).unwrap();
    (serde_json::from_str(&exec.to_json()).unwrap(), exec.exit_code)
}

fn sides(case: &Value) -> Vec<f64> {
    case["sides"].as_array().unwrap().iter().map(|s| s["value"].as_f64().unwrap()).collect()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracineq"))
}

#[test]
fn eval_convex_chain_at_order_two() {
    let (v, code) = report(&eval_config());
    assert_eq!(code, exit::SUCCESS);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 1);
    let s = sides(&cases[0]);
    for (x, e) in s.iter().zip([0.25, 1.0 / 3.0, 0.5]) {
        assert!((x - e).abs() < 1e-12);
    }
    for key in ["version", "seed", "quadrature", "elapsed_ms"] {
        assert!(!v["meta"][key].is_null(), "meta.{key}");
    }
}

#[test]
fn sweep_p_function_bound_all_satisfied() {
    let cfg = RunConfig {
        mode: Some(Mode::Sweep),
        theorems: vec!["P_fractional".into()],
        alphas: vec![0.25, 0.5, 1.0, 2.0, 3.0],
        ..RunConfig::default()
    };
    let (v, code) = report(&cfg);
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["summary"]["violated"], 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 35);
}

#[test]
fn falsify_concave_control_meets_expectation() {
    let cfg = RunConfig {
        mode: Some(Mode::Falsify),
        theorems: vec!["HH_fractional".into()],
        generator: Some("concave".into()),
        trials: Some(25),
        ..RunConfig::default()
    };
    let (v, code) = report(&cfg);
    assert_eq!(code, exit::SUCCESS);
    let f = &v["falsification"];
    assert_eq!(f["expectation"], "out_of_class");
    assert!(f["violations"].as_u64().unwrap() >= 1);
    let first = &v["cases"][0];
    assert_eq!(first["function"], "sqrt");
    assert!(first["margins"][0].as_f64().unwrap() <= -0.04);
}

#[test]
fn reductions_mode_reports_power_bound_comparison() {
    let cfg = RunConfig {
        mode: Some(Mode::Reductions),
        functions: vec!["exp".into()],
        rs: vec![0.5],
        ..RunConfig::default()
    };
    let (v, code) = report(&cfg);
    assert_eq!(code, exit::SUCCESS);
    let c = &v["power_bound_comparisons"][0];
    assert_eq!(c["identical"], false);
    assert_eq!(c["fractional_not_tighter"], true);
}

#[test]
fn membership_mode_lists_verdicts() {
    let cfg = RunConfig {
        mode: Some(Mode::Membership),
        functions: vec!["sqrt".into()],
        classes: vec!["convex".into(), "q".into()],
        ..RunConfig::default()
    };
    let (v, code) = report(&cfg);
    assert_eq!(code, exit::SUCCESS);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases[0]["verdict"], "fail");
    assert_eq!(cases[1]["verdict"], "pass");
    assert_eq!(v["godunova_levin_cross_check"]["disagreements"], 0);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let cfg = RunConfig {
        mode: Some(Mode::Sweep),
        theorems: vec!["Q_fractional".into(), "H_fractional".into()],
        alphas: vec![0.5, 1.5],
        hs: vec!["pow:s=0.5".into()],
        ..RunConfig::default()
    };
    let exec = execute(&cfg.resolve().unwrap()).unwrap();
    let json: Value = serde_json::from_str(&exec.to_json()).unwrap();
    let csv_text = exec.render(Format::Csv).unwrap();
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let cases = json["cases"].as_array().unwrap();
    assert_eq!(rows.len(), cases.len());
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    for (row, case) in rows.iter().zip(cases) {
        assert_eq!(&row[col("theorem")], case["theorem"].as_str().unwrap());
        for (i, v) in sides(case).into_iter().enumerate() {
            let cell: f64 = row[col(&format!("side{}", i + 1))].parse().unwrap();
            assert_eq!(cell, v);
            // 17 significant digits in the CSV cell
            let mantissa = row[col(&format!("side{}", i + 1))].split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17);
        }
        let m1: f64 = row[col("margin1")].parse().unwrap();
        assert_eq!(m1, case["margins"][0].as_f64().unwrap());
    }
}

#[test]
fn reports_are_reproducible_modulo_elapsed_time() {
    let cfg = RunConfig {
        mode: Some(Mode::Sweep),
        theorems: vec!["H_fractional".into(), "R_fractional".into()],
        ..RunConfig::default()
    };
    let strip = |mut v: Value| {
        v["meta"]["elapsed_ms"] = Value::from(0);
        serde_json::to_string(&v).unwrap()
    };
    let (a, _) = report(&cfg);
    let (b, _) = report(&cfg);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn config_errors_name_the_field() {
    let bad = RunConfig {
        alphas: vec![0.0],
        ..eval_config()
    };
    match bad.resolve() {
        Err(CliError::Config(m)) => assert!(m.starts_with("alpha")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn binary_eval_writes_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let status = bin()
        .args(["--mode", "eval", "--theorem", "HH_fractional", "--function", "monomial:k=2"])
        .args(["--interval", "0,1", "--alpha", "2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["cases"][0]["satisfied"], true);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let code = |args: &[&str]| bin().args(args).arg("--out").arg(&out).output().unwrap().status.code();
    // printed constant on the left of the r-convex bound is violated for e^x at α = 2
    assert_eq!(
        code(&["--mode", "eval", "--theorem", "R_fractional", "--function", "exp", "--alpha", "2", "--r", "1"]),
        Some(1)
    );
    assert_eq!(
        code(&[
            "--mode", "eval", "--theorem", "R_fractional", "--function", "exp", "--alpha", "2", "--r", "1", "--r-lhs",
            "proved"
        ]),
        Some(0)
    );
    assert_eq!(code(&["--mode", "eval", "--theorem", "HH_fractional", "--function", "monomial:k=2", "--alpha", "-1"]), Some(2));
    assert_eq!(code(&["--mode", "eval", "--theorem", "HH_fractional"]), Some(2));
    assert_eq!(code(&["--mode", "eval", "--bogus"]), Some(2));
    assert_eq!(
        code(&["--mode", "eval", "--theorem", "H_fractional", "--function", "sqrt", "--h", "recip"]),
        Some(3)
    );
    // out-of-class function in strict mode
    assert_eq!(code(&["--mode", "eval", "--theorem", "HH_fractional", "--function", "sqrt"]), Some(1));
    assert_eq!(
        code(&[
            "--mode", "eval", "--theorem", "P_fractional", "--function", "sqrt", "--strict-preconditions", "off"
        ]),
        Some(0)
    );
}

#[test]
fn binary_reads_config_file_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let out = dir.path().join("r.csv");
    fs::write(
        &cfg_path,
        r#"{"mode":"eval","theorems":["Q_fractional"],"functions":["recip"],"alphas":[0.5],"format":"json"}"#,
    )
    .unwrap();
    let status = bin()
        .arg("--config")
        .arg(&cfg_path)
        .args(["--format", "csv", "--alpha", "0.5,1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(out).unwrap();
    assert!(text.starts_with("theorem,function,a,b,alpha"));
    assert_eq!(text.lines().count(), 3);
}
