//! Run configurations, execution and report writing for the `fracineq` binary.

pub mod config;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use fracineq::classes::membership::{
    check_convex, check_godunova_levin, check_h_convex, check_nonnegative, check_p_function, check_r_convex,
    cross_check_godunova_levin,
};
use fracineq::classes::MembershipReport;
use fracineq::inequality::falsify::{falsify, FalsifyConfig};
use fracineq::inequality::reductions::{check_reductions, ReductionCase, ReductionConfig};
use fracineq::inequality::report::format_real;
use fracineq::inequality::sweep::{run_cases, CaseOutcome, SkipKind, SweepConfig, SweepSummary};
use fracineq::inequality::BoundReport;
use fracineq::quadrature::QuadratureSpec;

pub use config::{Cli, Format, Mode, Plan, RunConfig};
use config::ClassSel;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Evaluation(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Evaluation(m) => write!(f, "evaluation failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Evaluation(_) | CliError::Io(_) => exit::EVALUATION,
        }
    }
}

pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const VIOLATION: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const EVALUATION: u8 = 3;
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub version: String,
    pub mode: Mode,
    pub seed: u64,
    pub quadrature: QuadratureSpec,
    pub tolerance: f64,
    pub strict_preconditions: bool,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub cases: Vec<Value>,
    #[serde(flatten)]
    pub sections: BTreeMap<String, Value>,
}

/// Typed rows behind the `cases` array, kept for CSV output.
#[derive(Debug, Clone)]
enum Rows {
    Bounds(Vec<BoundReport>),
    Membership(Vec<MembershipRow>),
    Reductions(Vec<ReductionCase>),
}

#[derive(Debug, Clone, Serialize)]
struct MembershipRow {
    function: String,
    a: String,
    b: String,
    class: String,
    status: String,
    samples_used: usize,
    worst_margin: String,
    witness: String,
}

#[derive(Debug, Clone, Serialize)]
struct ReductionRow {
    label: String,
    fractional: String,
    classical: String,
    function: String,
    a: String,
    b: String,
    alpha: String,
    h: String,
    factor: String,
    fractional_sides: String,
    classical_sides: String,
    max_abs_diff: String,
    within: bool,
}

#[derive(Debug, Clone)]
pub struct Execution {
    pub report: Report,
    pub exit_code: u8,
    rows: Rows,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn eval_err(e: impl fmt::Display) -> CliError {
    CliError::Evaluation(e.to_string())
}

struct Body {
    cases: Vec<Value>,
    sections: BTreeMap<String, Value>,
    rows: Rows,
    exit_code: u8,
}

pub fn execute(plan: &Plan) -> Result<Execution, CliError> {
    let start = Instant::now();
    let body = match plan.mode {
        Mode::Eval | Mode::Sweep => bounds(plan)?,
        Mode::Membership => membership(plan)?,
        Mode::Reductions => reductions(plan)?,
        Mode::Falsify => falsification(plan)?,
    };
    let meta = Meta {
        version: VERSION.to_string(),
        mode: plan.mode,
        seed: plan.seed,
        quadrature: plan.opts.quad,
        tolerance: plan.opts.tolerance,
        strict_preconditions: plan.opts.strict,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Ok(Execution {
        report: Report {
            meta,
            cases: body.cases,
            sections: body.sections,
        },
        exit_code: body.exit_code,
        rows: body.rows,
    })
}

fn split_outcomes(outcomes: &[CaseOutcome]) -> (Vec<BoundReport>, Vec<Value>) {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            CaseOutcome::Evaluated { report } => reports.push(report.clone()),
            CaseOutcome::Skipped { .. } => skipped.push(to_value(o)),
        }
    }
    (reports, skipped)
}

fn bounds(plan: &Plan) -> Result<Body, CliError> {
    let cfg = SweepConfig {
        theorems: plan.theorems.clone(),
        functions: plan.functions.clone(),
        intervals: plan.intervals.clone(),
        alphas: plan.alphas.clone(),
        rs: plan.rs.clone(),
        hs: plan.hs.clone(),
    };
    let cases = cfg.cases().map_err(|e| CliError::Config(format!("function: {e}")))?;
    if cases.is_empty() {
        return Err(CliError::Config("interval: no function is defined on the given intervals".into()));
    }
    let outcomes = run_cases(&cases, &plan.opts);
    let summary = SweepSummary::of(&outcomes);
    let fatal = outcomes.iter().any(|o| match o {
        CaseOutcome::Skipped { kind, .. } => match plan.mode {
            Mode::Eval => *kind != SkipKind::Precondition,
            _ => *kind == SkipKind::Error,
        },
        CaseOutcome::Evaluated { .. } => false,
    });
    let exit_code = if fatal {
        exit::EVALUATION
    } else if summary.violated > 0 || (plan.mode == Mode::Eval && summary.skipped_precondition > 0) {
        exit::VIOLATION
    } else {
        exit::SUCCESS
    };
    let (reports, skipped) = split_outcomes(&outcomes);
    let mut sections = BTreeMap::new();
    sections.insert("summary".to_string(), to_value(&summary));
    sections.insert("skipped".to_string(), Value::Array(skipped));
    Ok(Body {
        cases: reports.iter().map(to_value).collect(),
        sections,
        rows: Rows::Bounds(reports),
        exit_code,
    })
}

fn membership_row(res: &Result<MembershipReport, fracineq::Error>, function: &str, a: f64, b: f64, class: String) -> (Value, MembershipRow) {
    match res {
        Ok(rep) => {
            let row = MembershipRow {
                function: rep.function.clone(),
                a: format_real(rep.a),
                b: format_real(rep.b),
                class,
                status: if rep.passed() { "pass".into() } else { "fail".into() },
                samples_used: rep.samples_used,
                worst_margin: format_real(rep.worst_margin),
                witness: rep.witness.map(|w| to_value(&w).to_string()).unwrap_or_default(),
            };
            (to_value(rep), row)
        }
        Err(e) => {
            let v = json!({"function": function, "a": a, "b": b, "class": class, "verdict": "error", "reason": e.to_string()});
            let row = MembershipRow {
                function: function.to_string(),
                a: format_real(a),
                b: format_real(b),
                class,
                status: "error".into(),
                samples_used: 0,
                worst_margin: String::new(),
                witness: e.to_string(),
            };
            (v, row)
        }
    }
}

fn membership(plan: &Plan) -> Result<Body, CliError> {
    let sp = &plan.opts.sampling;
    let mut cases = Vec::new();
    let mut rows = Vec::new();
    let mut cross = Vec::new();
    let mut disagreements = 0;
    for f in &plan.functions {
        let domains = match &plan.intervals {
            Some(ivs) => ivs.iter().copied().filter(|&iv| f.is_defined_on(iv)).collect(),
            None => vec![f.domain],
        };
        for iv in domains {
            let g = f.with_domain(iv).map_err(|e| CliError::Config(format!("function: {e}")))?;
            let id = g.id();
            let mut push = |res: Result<MembershipReport, fracineq::Error>, class: String| {
                let (v, row) = membership_row(&res, &id, iv.a(), iv.b(), class);
                cases.push(v);
                rows.push(row);
            };
            for sel in &plan.classes {
                match sel {
                    ClassSel::Convex => push(check_convex(&g, sp), "convex".into()),
                    ClassSel::Nonnegative => push(check_nonnegative(&g, sp), "nonnegative".into()),
                    ClassSel::GodunovaLevin => push(check_godunova_levin(&g, sp), "Q(I)".into()),
                    ClassSel::PFunction => push(check_p_function(&g, sp), "P(I)".into()),
                    ClassSel::RConvex => {
                        for &r in &plan.rs {
                            push(check_r_convex(&g, r, sp), format!("{r}-convex"));
                        }
                    }
                    ClassSel::HConvex => {
                        for &h in &plan.hs {
                            push(check_h_convex(&g, h, sp), format!("SX(h={h})"));
                        }
                    }
                }
            }
            if plan.classes.contains(&ClassSel::GodunovaLevin) {
                match cross_check_godunova_levin(&g, sp) {
                    Ok(c) => {
                        if !c.agree {
                            disagreements += 1;
                        }
                        cross.push(json!({
                            "function": id,
                            "a": iv.a(),
                            "b": iv.b(),
                            "membership_verdict": c.membership.verdict,
                            "triple_samples": c.triples.samples,
                            "triple_min": c.triples.min_value,
                            "agree": c.agree,
                        }));
                    }
                    Err(e) => cross.push(json!({"function": id, "a": iv.a(), "b": iv.b(), "error": e.to_string()})),
                }
            }
        }
    }
    let mut sections = BTreeMap::new();
    if plan.classes.contains(&ClassSel::GodunovaLevin) {
        sections.insert(
            "godunova_levin_cross_check".to_string(),
            json!({"disagreements": disagreements, "functions": cross}),
        );
    }
    Ok(Body {
        cases,
        sections,
        rows: Rows::Membership(rows),
        exit_code: exit::SUCCESS,
    })
}

fn reductions(plan: &Plan) -> Result<Body, CliError> {
    let mut functions = Vec::new();
    for f in &plan.functions {
        match &plan.intervals {
            Some(ivs) => {
                for &iv in ivs.iter().filter(|&&iv| f.is_defined_on(iv)) {
                    functions.push(f.with_domain(iv).map_err(eval_err)?);
                }
            }
            None => functions.push(f.clone()),
        }
    }
    let cfg = ReductionConfig {
        functions,
        alphas: plan.alphas.clone(),
        rs: plan.rs.clone(),
        hs: plan.hs.iter().copied().filter(|h| h.moment(1.0, &plan.opts.quad).is_ok()).collect(),
        tolerance: 1e-10,
    };
    let rep = check_reductions(&cfg, &plan.opts).map_err(eval_err)?;
    let exit_code = if rep.all_within() && rep.comparisons_ordered() {
        exit::SUCCESS
    } else {
        exit::VIOLATION
    };
    let mut sections = BTreeMap::new();
    sections.insert("power_bound_comparisons".to_string(), to_value(&rep.comparisons));
    sections.insert(
        "summary".to_string(),
        json!({
            "cases": rep.cases.len(),
            "within": rep.cases.iter().filter(|c| c.within).count(),
            "tolerance": rep.tolerance,
            "comparisons": rep.comparisons.len(),
            "comparisons_ordered": rep.comparisons_ordered(),
            "comparisons_identical": rep.comparisons.iter().filter(|c| c.identical).count(),
        }),
    );
    Ok(Body {
        cases: rep.cases.iter().map(to_value).collect(),
        sections,
        rows: Rows::Reductions(rep.cases),
        exit_code,
    })
}

fn falsification(plan: &Plan) -> Result<Body, CliError> {
    let generator = plan.generator.ok_or_else(|| CliError::Config("generator: missing".into()))?;
    let cfg = FalsifyConfig {
        trials: plan.trials,
        seed: plan.seed,
        rs: plan.rs.clone(),
        h: plan.hs[0],
        ..FalsifyConfig::new(plan.theorems[0], generator)
    };
    let rep = falsify(&cfg, &plan.opts).map_err(eval_err)?;
    let (reports, skipped) = split_outcomes(&rep.outcomes);
    let mut sections = BTreeMap::new();
    sections.insert(
        "falsification".to_string(),
        json!({
            "theorem": rep.theorem,
            "generator": rep.generator,
            "trials": rep.trials,
            "expectation": rep.expectation,
            "violations": rep.violations,
            "precondition_failures": rep.precondition_failures,
            "worst_margin": rep.worst_margin,
            "expectation_met": rep.expectation_met,
            "findings": rep.findings,
        }),
    );
    sections.insert("skipped".to_string(), Value::Array(skipped));
    Ok(Body {
        cases: reports.iter().map(to_value).collect(),
        sections,
        rows: Rows::Bounds(reports),
        exit_code: if rep.expectation_met { exit::SUCCESS } else { exit::VIOLATION },
    })
}

impl Execution {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        match &self.rows {
            Rows::Bounds(rs) => {
                if rs.is_empty() {
                    w.write_record(HEADER_BOUNDS).map_err(io)?;
                }
                for r in rs {
                    w.serialize(r.flat()).map_err(io)?;
                }
            }
            Rows::Membership(rs) => {
                for r in rs {
                    w.serialize(r).map_err(io)?;
                }
            }
            Rows::Reductions(rs) => {
                for c in rs {
                    let join = |v: &[f64]| v.iter().map(|x| format_real(*x)).collect::<Vec<_>>().join("|");
                    w.serialize(ReductionRow {
                        label: c.label.clone(),
                        fractional: c.fractional.to_string(),
                        classical: c.classical.to_string(),
                        function: c.function.clone(),
                        a: format_real(c.a),
                        b: format_real(c.b),
                        alpha: format_real(c.alpha),
                        h: c.h.clone().unwrap_or_default(),
                        factor: format_real(c.factor),
                        fractional_sides: join(&c.fractional_sides),
                        classical_sides: join(&c.classical_sides),
                        max_abs_diff: format_real(c.max_abs_diff),
                        within: c.within,
                    })
                    .map_err(io)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }

    /// One line for the terminal.
    pub fn headline(&self) -> String {
        let s = &self.report.sections;
        let detail = match self.report.meta.mode {
            Mode::Eval | Mode::Sweep => s.get("summary").map(|v| {
                format!(
                    "{} cases, {} satisfied, {} violated, {} skipped",
                    v["total"],
                    v["satisfied"],
                    v["violated"],
                    v["total"].as_u64().unwrap_or(0) - v["evaluated"].as_u64().unwrap_or(0)
                )
            }),
            Mode::Membership => Some(format!("{} membership checks", self.report.cases.len())),
            Mode::Reductions => s
                .get("summary")
                .map(|v| format!("{}/{} reductions within tolerance", v["within"], v["cases"])),
            Mode::Falsify => s.get("falsification").map(|v| {
                format!(
                    "{} violations, {} findings, expectation {}",
                    v["violations"],
                    v["findings"].as_array().map_or(0, Vec::len),
                    if v["expectation_met"] == true { "met" } else { "not met" }
                )
            }),
        };
        format!("{:?}: {} (exit {})", self.report.meta.mode, detail.unwrap_or_default(), self.exit_code).to_lowercase()
    }
}

const HEADER_BOUNDS: [&str; 18] = [
    "theorem",
    "function",
    "a",
    "b",
    "alpha",
    "r",
    "h",
    "side1_name",
    "side1",
    "side2_name",
    "side2",
    "side3_name",
    "side3",
    "margin1",
    "margin2",
    "satisfied",
    "tolerance",
    "preconditions_met",
];

/// Resolves, executes and writes the report; returns the exit code.
pub fn run(cfg: &RunConfig) -> Result<(Execution, u8), CliError> {
    let plan = cfg.resolve()?;
    let exec = execute(&plan)?;
    let text = exec.render(plan.format)?;
    match &plan.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    let code = exec.exit_code;
    Ok((exec, code))
}
