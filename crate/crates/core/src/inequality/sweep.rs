//! Grid sweeps over functions, orders and class parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate, BoundReport, Case, CaseKey, EvalOptions, TheoremId};
use crate::classes::{default_corpus, FunctionSpec, HFunction};
use crate::error::{Error, Result};
use crate::fractional::{FracOrder, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipKind {
    /// The function failed a membership check the chain requires.
    Precondition,
    /// The chain is undefined for these parameters (divergent h-moment).
    Inadmissible,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CaseOutcome {
    Evaluated { report: BoundReport },
    Skipped { case: CaseKey, kind: SkipKind, reason: String },
}

impl CaseOutcome {
    pub fn report(&self) -> Option<&BoundReport> {
        match self {
            CaseOutcome::Evaluated { report } => Some(report),
            CaseOutcome::Skipped { .. } => None,
        }
    }
}

pub fn classify(err: &Error) -> SkipKind {
    match err {
        Error::Precondition { .. } | Error::NonPositive { .. } => SkipKind::Precondition,
        Error::DivergentMoment(_) => SkipKind::Inadmissible,
        _ => SkipKind::Error,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub theorems: Vec<TheoremId>,
    pub functions: Vec<FunctionSpec>,
    /// When `None` each function is evaluated on its own domain.
    pub intervals: Option<Vec<Interval>>,
    pub alphas: Vec<f64>,
    pub rs: Vec<f64>,
    pub hs: Vec<HFunction>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            theorems: TheoremId::FRACTIONAL.to_vec(),
            functions: default_corpus(),
            intervals: None,
            alphas: vec![0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0],
            rs: vec![0.25, 0.5, 1.0],
            hs: vec![
                HFunction::Identity,
                HFunction::Constant,
                HFunction::Power { s: 0.5 },
                HFunction::Reciprocal,
            ],
        }
    }
}

impl SweepConfig {
    /// Cases in a fixed order: theorem, function, interval, α, r, h.
    pub fn cases(&self) -> Result<Vec<Case>> {
        let mut out = Vec::new();
        for &theorem in &self.theorems {
            for f in &self.functions {
                let intervals: Vec<Interval> = match &self.intervals {
                    Some(ivs) => ivs.iter().copied().filter(|&iv| f.is_defined_on(iv)).collect(),
                    None => vec![f.domain],
                };
                for iv in intervals {
                    let g = f.with_domain(iv)?;
                    let alphas: Vec<Option<FracOrder>> = if theorem.is_fractional() {
                        self.alphas.iter().map(|&a| FracOrder::new(a).map(Some)).collect::<Result<_>>()?
                    } else {
                        vec![None]
                    };
                    let rs: Vec<Option<f64>> = if theorem.needs_r() {
                        self.rs.iter().copied().map(Some).collect()
                    } else {
                        vec![None]
                    };
                    let hs: Vec<Option<HFunction>> = if theorem.needs_h() {
                        self.hs.iter().copied().map(Some).collect()
                    } else {
                        vec![None]
                    };
                    for &alpha in &alphas {
                        for &r in &rs {
                            for &h in &hs {
                                out.push(Case {
                                    theorem,
                                    function: g.clone(),
                                    interval: iv,
                                    alpha,
                                    r,
                                    h,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Evaluates cases in parallel; the output keeps the input order.
pub fn run_cases(cases: &[Case], opts: &EvalOptions) -> Vec<CaseOutcome> {
    cases
        .par_iter()
        .map(|case| match evaluate(case, opts) {
            Ok(report) => CaseOutcome::Evaluated { report },
            Err(e) => CaseOutcome::Skipped {
                case: case.key(),
                kind: classify(&e),
                reason: e.to_string(),
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total: usize,
    pub evaluated: usize,
    pub satisfied: usize,
    pub violated: usize,
    pub skipped_precondition: usize,
    pub skipped_inadmissible: usize,
    pub errors: usize,
    pub worst_margin: Option<f64>,
}

impl SweepSummary {
    pub fn of(outcomes: &[CaseOutcome]) -> Self {
        let mut s = SweepSummary {
            total: outcomes.len(),
            evaluated: 0,
            satisfied: 0,
            violated: 0,
            skipped_precondition: 0,
            skipped_inadmissible: 0,
            errors: 0,
            worst_margin: None,
        };
        for o in outcomes {
            match o {
                CaseOutcome::Evaluated { report } => {
                    s.evaluated += 1;
                    if report.satisfied {
                        s.satisfied += 1;
                    } else {
                        s.violated += 1;
                    }
                    let w = report.worst_margin();
                    s.worst_margin = Some(s.worst_margin.map_or(w, |m: f64| m.min(w)));
                }
                CaseOutcome::Skipped { kind, .. } => match kind {
                    SkipKind::Precondition => s.skipped_precondition += 1,
                    SkipKind::Inadmissible => s.skipped_inadmissible += 1,
                    SkipKind::Error => s.errors += 1,
                },
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub summary: SweepSummary,
    pub outcomes: Vec<CaseOutcome>,
}

pub fn sweep(cfg: &SweepConfig, opts: &EvalOptions) -> Result<SweepReport> {
    let outcomes = run_cases(&cfg.cases()?, opts);
    Ok(SweepReport {
        summary: SweepSummary::of(&outcomes),
        outcomes,
    })
}
