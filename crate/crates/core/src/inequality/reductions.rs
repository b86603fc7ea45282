//! α = 1 (and h = λ, h = 1) specializations of the fractional chains
//! checked against the classical ones on the same inputs.

use serde::{Deserialize, Serialize};

use super::chains::{
    eval_h_classical, eval_h_fractional, eval_hh_classical, eval_hh_fractional, eval_p_classical, eval_p_fractional,
    eval_q_classical, eval_q_fractional, eval_r_classical, eval_r_fractional,
};
use super::{BoundReport, EvalOptions, TheoremId};
use crate::classes::{FunctionSpec, HFunction};
use crate::error::Result;
use crate::fractional::{FracOrder, Interval};

/// Fractional sides compared with `factor` times the classical sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionCase {
    pub label: String,
    pub fractional: TheoremId,
    pub classical: TheoremId,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub h: Option<String>,
    pub factor: f64,
    pub fractional_sides: Vec<f64>,
    pub classical_sides: Vec<f64>,
    pub max_abs_diff: f64,
    pub within: bool,
}

/// The r-convex bound at α = 1 set beside the classical power bound.
/// The two do not coincide, so this is a comparison and not an identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerBoundComparison {
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub r: f64,
    /// Left side of the fractional bound; equals twice the mean at α = 1.
    pub fractional_lhs: f64,
    pub mean: f64,
    pub lhs_diff: f64,
    /// Per-bracket coefficient β(1, (r+1)/r) = r/(r+1).
    pub fractional_coefficient: f64,
    /// (r/(r+1))^(1/r)
    pub classical_coefficient: f64,
    /// Half the fractional right side, on the scale of the mean.
    pub fractional_rhs_half: f64,
    pub classical_rhs: f64,
    pub identical: bool,
    /// fractional_rhs_half ≥ classical_rhs
    pub fractional_not_tighter: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub tolerance: f64,
    pub cases: Vec<ReductionCase>,
    pub comparisons: Vec<PowerBoundComparison>,
}

impl ReductionReport {
    pub fn all_within(&self) -> bool {
        self.cases.iter().all(|c| c.within)
    }

    pub fn comparisons_ordered(&self) -> bool {
        self.comparisons.iter().all(|c| c.fractional_not_tighter)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionConfig {
    pub functions: Vec<FunctionSpec>,
    /// Orders for the h = λ rescaling, which holds at every α.
    pub alphas: Vec<f64>,
    pub rs: Vec<f64>,
    pub hs: Vec<HFunction>,
    /// Allowed |fractional - factor·classical| relative to max(1, |side|).
    pub tolerance: f64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self {
            functions: crate::classes::default_corpus(),
            alphas: vec![0.5, 1.0, 2.0],
            rs: vec![0.25, 0.5, 0.75, 1.0],
            hs: vec![HFunction::Identity, HFunction::Constant, HFunction::Power { s: 0.5 }],
            tolerance: 1e-10,
        }
    }
}

fn compare(
    label: &str,
    frac: &BoundReport,
    class: &BoundReport,
    factor: f64,
    tol: f64,
) -> ReductionCase {
    let fs = frac.values();
    let cs = class.values();
    let mut max_abs_diff: f64 = if fs.len() == cs.len() { 0.0 } else { f64::INFINITY };
    let mut within = fs.len() == cs.len();
    for (x, y) in fs.iter().zip(&cs) {
        let d = (x - factor * y).abs();
        max_abs_diff = max_abs_diff.max(d);
        within &= d <= tol * x.abs().max(1.0);
    }
    ReductionCase {
        label: label.to_string(),
        fractional: frac.theorem,
        classical: class.theorem,
        function: frac.function.clone(),
        a: frac.a,
        b: frac.b,
        alpha: frac.alpha.unwrap_or(1.0),
        h: frac.h.clone(),
        factor,
        fractional_sides: fs,
        classical_sides: cs,
        max_abs_diff,
        within,
    }
}

/// Evaluates every specialization for one function on its own domain.
/// Preconditions are not enforced: the identities are algebraic.
fn reductions_for(f: &FunctionSpec, cfg: &ReductionConfig, opts: &EvalOptions) -> Result<ReductionReport> {
    let o = EvalOptions { strict: false, ..*opts };
    let iv: Interval = f.domain;
    let one = FracOrder::new(1.0)?;
    let tol = cfg.tolerance;
    let mut cases = Vec::new();

    let hh = eval_hh_classical(f, iv, &o)?;
    cases.push(compare("convex chain at alpha = 1", &eval_hh_fractional(f, iv, one, &o)?, &hh, 1.0, tol));
    cases.push(compare(
        "Godunova-Levin bound at alpha = 1",
        &eval_q_fractional(f, iv, one, &o)?,
        &eval_q_classical(f, iv, &o)?,
        1.0,
        tol,
    ));
    let pc = eval_p_classical(f, iv, &o)?;
    cases.push(compare("P-function chain at alpha = 1", &eval_p_fractional(f, iv, one, &o)?, &pc, 1.0, tol));

    for &alpha in &cfg.alphas {
        let a = FracOrder::new(alpha)?;
        cases.push(compare(
            "h = lambda gives the fractional convex chain",
            &eval_h_fractional(f, HFunction::Identity, iv, a, &o)?,
            &eval_hh_fractional(f, iv, a, &o)?,
            2.0 / alpha,
            tol,
        ));
    }
    for &h in &cfg.hs {
        cases.push(compare(
            "h-convex chain at alpha = 1",
            &eval_h_fractional(f, h, iv, one, &o)?,
            &eval_h_classical(f, h, iv, &o)?,
            2.0,
            tol,
        ));
    }
    let h_id = eval_h_fractional(f, HFunction::Identity, iv, one, &o)?;
    cases.push(compare("h = lambda at alpha = 1 gives the convex chain", &h_id, &hh, 2.0, tol));
    let h_one = eval_h_fractional(f, HFunction::Constant, iv, one, &o)?;
    cases.push(compare("h = 1 at alpha = 1 gives the P-function chain", &h_one, &pc, 1.0, tol));

    let mut comparisons = Vec::new();
    let fa = f.eval(iv.a());
    let fb = f.eval(iv.b());
    if fa > 0.0 && fb > 0.0 {
        for &r in &cfg.rs {
            let frac = eval_r_fractional(f, iv, one, r, &o)?;
            let class = eval_r_classical(f, iv, r, &o)?;
            let (flhs, frhs) = (frac.sides[0].value, frac.sides[1].value);
            let (mean, crhs) = (class.sides[0].value, class.sides[1].value);
            let half = 0.5 * frhs;
            let scale = half.abs().max(crhs.abs()).max(1.0);
            comparisons.push(PowerBoundComparison {
                function: f.id(),
                a: iv.a(),
                b: iv.b(),
                r,
                fractional_lhs: flhs,
                mean,
                lhs_diff: (flhs - 2.0 * mean).abs(),
                fractional_coefficient: r / (r + 1.0),
                classical_coefficient: (r / (r + 1.0)).powf(1.0 / r),
                fractional_rhs_half: half,
                classical_rhs: crhs,
                identical: (half - crhs).abs() <= tol * scale,
                fractional_not_tighter: half >= crhs - tol * scale,
            });
        }
    }
    Ok(ReductionReport {
        tolerance: tol,
        cases,
        comparisons,
    })
}

pub fn check_reductions(cfg: &ReductionConfig, opts: &EvalOptions) -> Result<ReductionReport> {
    let mut out = ReductionReport {
        tolerance: cfg.tolerance,
        cases: Vec::new(),
        comparisons: Vec::new(),
    };
    for f in &cfg.functions {
        let rep = reductions_for(f, cfg, opts)?;
        out.cases.extend(rep.cases);
        out.comparisons.extend(rep.comparisons);
    }
    Ok(out)
}
