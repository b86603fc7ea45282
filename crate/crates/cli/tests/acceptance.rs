//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p fracineq-cli --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fracineq::classes::membership::{
    check_convex, check_godunova_levin, check_h_convex, check_p_function, check_r_convex, cross_check_godunova_levin,
    scan_godunova_levin_triples,
};
use fracineq::classes::{default_corpus, FunctionSpec, HFunction, SamplingPlan};
use fracineq::fractional::{bracket, midpoint_form, rl_left, rl_prefactor, rl_right, FracOrder, Interval};
use fracineq::inequality::falsify::{falsify, FalsifyConfig, Generator};
use fracineq::inequality::reductions::{check_reductions, ReductionConfig};
use fracineq::inequality::sweep::{sweep, SweepConfig};
use fracineq::inequality::{EvalOptions, RLhsForm, TheoremId};
use fracineq::quadrature::QuadratureSpec;
use fracineq::special::{beta_fn, gamma_fn};
use fracineq_cli::{execute, Mode, RunConfig};

const ALPHAS: [f64; 7] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0];

struct Verdict {
    passed: bool,
    detail: String,
    /// Failure matches a documented defect of the stated bound.
    known_failure: bool,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict {
        passed,
        detail,
        known_failure: false,
    }
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

fn special_values() -> Verdict {
    let cases = [
        ("Γ(1)", gamma_fn(1.0).unwrap(), 1.0),
        ("Γ(5)", gamma_fn(5.0).unwrap(), 24.0),
        ("Γ(1/2)", gamma_fn(0.5).unwrap(), PI.sqrt()),
        ("β(1,1)", beta_fn(1.0, 1.0).unwrap(), 1.0),
        ("β(1/2,1/2)", beta_fn(0.5, 0.5).unwrap(), PI),
        ("β(2,3/2)", beta_fn(2.0, 1.5).unwrap(), 4.0 / 15.0),
    ];
    let (name, worst) = cases
        .iter()
        .map(|(n, x, y)| (*n, rel(*x, *y)))
        .fold(("", 0.0), |acc, c| if c.1 > acc.1 { c } else { acc });
    verdict(worst <= 1e-12, format!("max relative error {worst:.1e} ({name})"))
}

fn monomial_oracle() -> Verdict {
    let spec = QuadratureSpec::default();
    let unit = iv(0.0, 1.0);
    let mut worst: f64 = 0.0;
    for k in 0..=3 {
        for alpha in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
            let exact = gamma_fn(k as f64 + 1.0).unwrap() / gamma_fn(k as f64 + 1.0 + alpha).unwrap();
            let left = rl_left(&|x: f64| x.powi(k), unit, order(alpha), &spec).unwrap();
            let right = rl_right(&|x: f64| (1.0 - x).powi(k), unit, order(alpha), &spec).unwrap();
            worst = worst.max(rel(left, exact)).max(rel(right, exact));
        }
    }
    verdict(worst <= 1e-10, format!("24 left + 24 reflected right, max relative error {worst:.1e}"))
}

fn dual_path() -> Verdict {
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut skipped = 0;
    for f in default_corpus() {
        for (a, b) in [(0.0, 1.0), (1.0, 2.0), (0.5, 3.0)] {
            let i = iv(a, b);
            if !f.is_defined_on(i) {
                skipped += 1;
                continue;
            }
            for alpha in ALPHAS {
                let al = order(alpha);
                let br = bracket(&f, i, al, &spec).unwrap().bracket;
                let direct = midpoint_form(&f, i, al, &spec).unwrap() * rl_prefactor(i, al);
                worst = worst.max((direct - br).abs() / br.abs().max(1.0));
                count += 1;
            }
        }
    }
    verdict(
        worst <= 1e-8,
        format!("{count} cases ({skipped} function/interval pairs outside support), max scaled gap {worst:.1e}"),
    )
}

fn reductions() -> Verdict {
    let cfg = ReductionConfig::default();
    let rep = check_reductions(&cfg, &EvalOptions::default()).unwrap();
    let worst = rep.cases.iter().map(|c| c.max_abs_diff).fold(0.0, f64::max);
    let within = rep.cases.iter().filter(|c| c.within).count();
    let ordered = rep.comparisons.iter().filter(|c| c.fractional_not_tighter).count();
    let identical = rep.comparisons.iter().filter(|c| c.identical).count();
    verdict(
        rep.all_within() && rep.comparisons_ordered() && !rep.comparisons.is_empty(),
        format!(
            "{within}/{} identities within 1e-10 (max diff {worst:.1e}); power-bound comparison ordered {ordered}/{}, identical only at r = 1 ({identical})",
            rep.cases.len(),
            rep.comparisons.len()
        ),
    )
}

fn inequality_sweep() -> Verdict {
    let cfg = SweepConfig {
        alphas: ALPHAS.to_vec(),
        ..SweepConfig::default()
    };
    let run = |form: RLhsForm| {
        let opts = EvalOptions {
            r_lhs: form,
            ..EvalOptions::default()
        };
        let rep = sweep(&cfg, &opts).unwrap();
        let bad: Vec<_> = rep
            .outcomes
            .iter()
            .filter_map(|o| o.report())
            .filter(|r| r.worst_margin() < -1e-9)
            .cloned()
            .collect();
        (rep, bad)
    };
    let (rep, bad) = run(RLhsForm::Printed);
    let (_, bad_proved) = run(RLhsForm::Proved);
    let s = &rep.summary;
    let only_r_beyond_one =
        bad.iter().all(|r| r.theorem == TheoremId::RFractional && r.alpha.is_some_and(|a| a > 1.0));
    let worst = bad.iter().map(|r| r.worst_margin()).fold(0.0, f64::min);
    let mut detail = format!(
        "{} evaluated, {} skipped out of class, {} inadmissible (h = 1/λ), {} errors; {} margins below -1e-9",
        s.evaluated,
        s.skipped_precondition,
        s.skipped_inadmissible,
        s.errors,
        bad.len()
    );
    if !bad.is_empty() {
        detail.push_str(&format!(
            " (worst {worst:.3}, all r-convex bound with α > 1: {only_r_beyond_one}; with Γ(α) on the left: {} below)",
            bad_proved.len()
        ));
    }
    Verdict {
        passed: bad.is_empty() && s.errors == 0,
        detail,
        known_failure: !bad.is_empty() && only_r_beyond_one && bad_proved.is_empty() && s.errors == 0,
    }
}

fn falsification() -> Verdict {
    let cfg = FalsifyConfig {
        trials: 1,
        ..FalsifyConfig::new(TheoremId::HhFractional, Generator::Concave)
    };
    let rep = falsify(&cfg, &EvalOptions::default()).unwrap();
    let r = rep.outcomes[0].report().unwrap();
    let left = r.margins[0];
    verdict(
        r.function == "sqrt" && r.alpha == Some(1.0) && !r.satisfied && left <= -0.04 && rep.expectation_met,
        format!(
            "√x on [0,1], α = 1: f(1/2) = {:.5}, mean = {:.5}, left margin {left:.5}",
            r.sides[0].value, r.sides[1].value
        ),
    )
}

fn membership() -> Verdict {
    let plan = SamplingPlan::default();
    let f = |s: &str, a: f64, b: f64| FunctionSpec::parse(s, Some(iv(a, b))).unwrap();
    let sq = f("monomial:k=2", 0.0, 1.0);
    let e = f("exp", 0.0, 1.0);
    let mut checks: Vec<(String, bool)> = vec![
        ("x² convex".into(), check_convex(&sq, &plan).unwrap().passed()),
        ("x² P".into(), check_p_function(&sq, &plan).unwrap().passed()),
        ("x² Q".into(), check_godunova_levin(&sq, &plan).unwrap().passed()),
        ("x² h=λ".into(), check_h_convex(&sq, HFunction::Identity, &plan).unwrap().passed()),
        ("1/x Q".into(), check_godunova_levin(&f("recip", 1.0, 2.0), &plan).unwrap().passed()),
        ("√x not convex".into(), !check_convex(&f("sqrt", 0.0, 1.0), &plan).unwrap().passed()),
        (
            "x²-1 not Q".into(),
            !check_godunova_levin(&f("monomial:k=2,offset=-1", 0.0, 2.0), &plan).unwrap().passed(),
        ),
    ];
    for i in 1..=10 {
        let r = i as f64 / 10.0;
        checks.push((format!("e^x {r}-convex"), check_r_convex(&e, r, &plan).unwrap().passed()));
    }
    let seeded = plan.with_seed(11);
    let deterministic = check_convex(&f("abspow:p=1.5", -1.0, 2.0), &seeded).unwrap()
        == check_convex(&f("abspow:p=1.5", -1.0, 2.0), &seeded).unwrap()
        && check_r_convex(&e, 0.3, &seeded).unwrap() == check_r_convex(&e, 0.3, &seeded).unwrap();
    checks.push(("deterministic under fixed seed".into(), deterministic));
    let failed: Vec<_> = checks.iter().filter(|c| !c.1).map(|c| c.0.clone()).collect();
    let detail = if failed.is_empty() {
        format!("{} verdicts as expected", checks.len())
    } else {
        format!("unexpected: {}", failed.join(", "))
    };
    verdict(failed.is_empty(), detail)
}

fn godunova_levin_cross_check() -> Verdict {
    let plan = SamplingPlan::default();
    let mut members = 0;
    let mut min: f64 = f64::INFINITY;
    let mut disagreements = 0;
    for f in default_corpus() {
        let c = cross_check_godunova_levin(&f, &plan).unwrap();
        if !c.agree {
            disagreements += 1;
        }
        if c.membership.passed() {
            members += 1;
            let scan = scan_godunova_levin_triples(&f, &plan).unwrap();
            min = min.min(scan.min_value);
        }
    }
    verdict(
        min >= -1e-9 && disagreements == 0,
        format!("{members} members, min triple value {min:.3e} over {} random triples each, {disagreements} disagreements", plan.random_triples),
    )
}

fn reproducibility() -> Verdict {
    let cfg = RunConfig {
        mode: Some(Mode::Sweep),
        seed: Some(0),
        ..RunConfig::default()
    };
    let render = || {
        let mut exec = execute(&cfg.resolve().unwrap()).unwrap();
        exec.report.meta.elapsed_ms = 0;
        exec.to_json()
    };
    let (a, b) = (render(), render());
    verdict(a == b, format!("two full sweeps, {} bytes each, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    type Check = fn() -> Verdict;
    let criteria: [(u32, &str, u64, Check); 9] = [
        (1, "special-function golden values", 1, special_values),
        (2, "monomial oracle for both operators", 5, monomial_oracle),
        (3, "dual-path bracket identity", 30, dual_path),
        (4, "alpha = 1 reductions", 10, reductions),
        (5, "inequality sweep", 60, inequality_sweep),
        (6, "concave control violates the convex chain", 1, falsification),
        (7, "membership suite", 30, membership),
        (8, "Godunova-Levin cross-check", 30, godunova_levin_cross_check),
        (9, "reproducible reports", 120, reproducibility),
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (id, title, budget, check) in criteria {
        let start = Instant::now();
        let v = check();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget);
        let ok = v.passed && in_time;
        let tag = if ok {
            "PASS"
        } else if v.known_failure && in_time {
            known += 1;
            "FAIL (known)"
        } else {
            unexpected += 1;
            "FAIL"
        };
        println!(
            "[{tag}] {id}. {title} ({:.2} s, budget {budget} s): {}",
            took.as_secs_f64(),
            v.detail
        );
    }
    println!("{} passed, {known} known failures, {unexpected} unexpected failures", 9 - known - unexpected);
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
