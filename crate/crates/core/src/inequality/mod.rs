//! Hadamard-type inequality chains, classical and fractional.
//!
//! Every evaluator returns a [`BoundReport`] holding the chain's sides in
//! order, the consecutive margins and a satisfied flag.

mod chains;
pub mod falsify;
pub mod reductions;
pub mod report;
pub mod sweep;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classes::{HFunction, SamplingPlan};
use crate::classes::FunctionSpec;
use crate::error::{parse_err, Error, Result};
use crate::fractional::{FracOrder, Interval};
use crate::quadrature::QuadratureSpec;

pub use chains::{
    eval_h_classical, eval_h_fractional, eval_hh_classical, eval_hh_fractional, eval_p_classical, eval_p_fractional,
    eval_q_classical, eval_q_fractional, eval_r_classical, eval_r_fractional, mean_value,
};
pub use report::{BoundReport, FlatRecord, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "HH_classical")]
    HhClassical,
    #[serde(rename = "Q_classical")]
    QClassical,
    #[serde(rename = "P_classical")]
    PClassical,
    #[serde(rename = "R_classical")]
    RClassical,
    #[serde(rename = "H_classical")]
    HClassical,
    #[serde(rename = "HH_fractional")]
    HhFractional,
    #[serde(rename = "Q_fractional")]
    QFractional,
    #[serde(rename = "P_fractional")]
    PFractional,
    #[serde(rename = "R_fractional")]
    RFractional,
    #[serde(rename = "H_fractional")]
    HFractional,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::HhClassical,
        TheoremId::QClassical,
        TheoremId::PClassical,
        TheoremId::RClassical,
        TheoremId::HClassical,
        TheoremId::HhFractional,
        TheoremId::QFractional,
        TheoremId::PFractional,
        TheoremId::RFractional,
        TheoremId::HFractional,
    ];

    pub const FRACTIONAL: [TheoremId; 5] = [
        TheoremId::HhFractional,
        TheoremId::QFractional,
        TheoremId::PFractional,
        TheoremId::RFractional,
        TheoremId::HFractional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::HhClassical => "HH_classical",
            TheoremId::QClassical => "Q_classical",
            TheoremId::PClassical => "P_classical",
            TheoremId::RClassical => "R_classical",
            TheoremId::HClassical => "H_classical",
            TheoremId::HhFractional => "HH_fractional",
            TheoremId::QFractional => "Q_fractional",
            TheoremId::PFractional => "P_fractional",
            TheoremId::RFractional => "R_fractional",
            TheoremId::HFractional => "H_fractional",
        }
    }

    pub fn is_fractional(self) -> bool {
        Self::FRACTIONAL.contains(&self)
    }

    pub fn needs_r(self) -> bool {
        matches!(self, TheoremId::RClassical | TheoremId::RFractional)
    }

    pub fn needs_h(self) -> bool {
        matches!(self, TheoremId::HClassical | TheoremId::HFractional)
    }

    /// The classical chain the fractional one specializes to at α = 1.
    pub fn classical_counterpart(self) -> Option<TheoremId> {
        match self {
            TheoremId::HhFractional => Some(TheoremId::HhClassical),
            TheoremId::QFractional => Some(TheoremId::QClassical),
            TheoremId::PFractional => Some(TheoremId::PClassical),
            TheoremId::RFractional => Some(TheoremId::RClassical),
            TheoremId::HFractional => Some(TheoremId::HClassical),
            _ => None,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Self::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|id| id.name()).collect();
                parse_err("theorem id", s, format!("expected one of {}", names.join(", ")))
            })
    }
}

/// Which constant multiplies the bracket on the left of the r-convex bound.
///
/// `Printed` uses Γ(α+1)/(b-a)^α. The integration argument only supports
/// Γ(α)/(b-a)^α, which is `Proved`; the two agree at α = 1 and the printed
/// form is larger by the factor α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RLhsForm {
    #[default]
    Printed,
    Proved,
}

impl FromStr for RLhsForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "printed" => Ok(Self::Printed),
            "proved" => Ok(Self::Proved),
            _ => Err(parse_err("r-lhs form", s, "expected printed or proved")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub quad: QuadratureSpec,
    /// Absolute chain tolerance, scaled by max(1, |last side|).
    pub tolerance: f64,
    /// Failed preconditions become errors instead of annotations.
    pub strict: bool,
    pub sampling: SamplingPlan,
    pub r_lhs: RLhsForm,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            quad: QuadratureSpec::default(),
            tolerance: 1e-9,
            strict: true,
            sampling: SamplingPlan::default(),
            r_lhs: RLhsForm::default(),
        }
    }
}

impl EvalOptions {
    pub fn lenient() -> Self {
        Self {
            strict: false,
            ..Self::default()
        }
    }
}

/// One point of a sweep or campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub theorem: TheoremId,
    pub function: FunctionSpec,
    pub interval: Interval,
    pub alpha: Option<FracOrder>,
    pub r: Option<f64>,
    pub h: Option<HFunction>,
}

/// Serializable identity of a [`Case`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseKey {
    pub theorem: TheoremId,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub alpha: Option<f64>,
    pub r: Option<f64>,
    pub h: Option<String>,
}

impl Case {
    pub fn new(theorem: TheoremId, function: FunctionSpec, interval: Interval) -> Self {
        Self {
            theorem,
            function,
            interval,
            alpha: None,
            r: None,
            h: None,
        }
    }

    pub fn alpha(mut self, alpha: FracOrder) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn h(mut self, h: HFunction) -> Self {
        self.h = Some(h);
        self
    }

    pub fn key(&self) -> CaseKey {
        CaseKey {
            theorem: self.theorem,
            function: self.function.id(),
            a: self.interval.a(),
            b: self.interval.b(),
            alpha: self.alpha.map(FracOrder::get),
            r: self.r,
            h: self.h.map(|h| h.to_string()),
        }
    }
}

fn missing(theorem: TheoremId, what: &'static str) -> Error {
    Error::MissingParameter {
        theorem: theorem.to_string(),
        what,
    }
}

/// Dispatches a case to its evaluator.
pub fn evaluate(case: &Case, opts: &EvalOptions) -> Result<BoundReport> {
    let t = case.theorem;
    let (f, iv) = (&case.function, case.interval);
    let alpha = || case.alpha.ok_or_else(|| missing(t, "alpha"));
    let r = || case.r.ok_or_else(|| missing(t, "r"));
    let h = || case.h.ok_or_else(|| missing(t, "h"));
    match t {
        TheoremId::HhClassical => eval_hh_classical(f, iv, opts),
        TheoremId::QClassical => eval_q_classical(f, iv, opts),
        TheoremId::PClassical => eval_p_classical(f, iv, opts),
        TheoremId::RClassical => eval_r_classical(f, iv, r()?, opts),
        TheoremId::HClassical => eval_h_classical(f, h()?, iv, opts),
        TheoremId::HhFractional => eval_hh_fractional(f, iv, alpha()?, opts),
        TheoremId::QFractional => eval_q_fractional(f, iv, alpha()?, opts),
        TheoremId::PFractional => eval_p_fractional(f, iv, alpha()?, opts),
        TheoremId::RFractional => eval_r_fractional(f, iv, alpha()?, r()?, opts),
        TheoremId::HFractional => eval_h_fractional(f, h()?, iv, alpha()?, opts),
    }
}
