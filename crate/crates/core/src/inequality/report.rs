use serde::{Deserialize, Serialize};

use super::TheoremId;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub alpha: Option<f64>,
    pub r: Option<f64>,
    pub h: Option<String>,
    pub sides: Vec<Side>,
    /// sides[i+1] - sides[i]
    pub margins: Vec<f64>,
    pub satisfied: bool,
    pub tolerance: f64,
    pub preconditions_met: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Inputs identifying a report, filled in by the evaluators.
pub(crate) struct Inputs {
    pub theorem: TheoremId,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub alpha: Option<f64>,
    pub r: Option<f64>,
    pub h: Option<String>,
}

impl BoundReport {
    /// Builds the report and derives margins and the verdict. `base_tol`
    /// is scaled by max(1, |last side|).
    pub(crate) fn assemble(
        inputs: Inputs,
        sides: &[(&'static str, f64)],
        base_tol: f64,
        preconditions_met: bool,
        notes: Vec<String>,
    ) -> Result<Self> {
        for &(side, value) in sides {
            if !value.is_finite() {
                return Err(Error::NonFiniteSide {
                    theorem: inputs.theorem.to_string(),
                    side,
                    value,
                });
            }
        }
        let last = sides.last().map_or(0.0, |s| s.1);
        let tolerance = base_tol * last.abs().max(1.0);
        let margins: Vec<f64> = sides.windows(2).map(|w| w[1].1 - w[0].1).collect();
        let satisfied = margins.iter().all(|&m| m >= -tolerance);
        Ok(Self {
            theorem: inputs.theorem,
            function: inputs.function,
            a: inputs.a,
            b: inputs.b,
            alpha: inputs.alpha,
            r: inputs.r,
            h: inputs.h,
            sides: sides
                .iter()
                .map(|&(name, value)| Side {
                    name: name.to_string(),
                    value,
                })
                .collect(),
            margins,
            satisfied,
            tolerance,
            preconditions_met,
            notes,
        })
    }

    pub fn side(&self, name: &str) -> Option<f64> {
        self.sides.iter().find(|s| s.name == name).map(|s| s.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.sides.iter().map(|s| s.value).collect()
    }

    pub fn worst_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn flat(&self) -> FlatRecord {
        FlatRecord::from(self)
    }
}

/// One CSV row. Reals are written with 17 significant digits so they parse
/// back to the same doubles that appear in the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatRecord {
    pub theorem: String,
    pub function: String,
    pub a: String,
    pub b: String,
    pub alpha: String,
    pub r: String,
    pub h: String,
    pub side1_name: String,
    pub side1: String,
    pub side2_name: String,
    pub side2: String,
    pub side3_name: String,
    pub side3: String,
    pub margin1: String,
    pub margin2: String,
    pub satisfied: bool,
    pub tolerance: String,
    pub preconditions_met: bool,
}

pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_real).unwrap_or_default()
}

impl From<&BoundReport> for FlatRecord {
    fn from(r: &BoundReport) -> Self {
        let side = |i: usize| r.sides.get(i);
        let name = |i: usize| side(i).map(|s| s.name.clone()).unwrap_or_default();
        let value = |i: usize| opt(side(i).map(|s| s.value));
        Self {
            theorem: r.theorem.to_string(),
            function: r.function.clone(),
            a: format_real(r.a),
            b: format_real(r.b),
            alpha: opt(r.alpha),
            r: opt(r.r),
            h: r.h.clone().unwrap_or_default(),
            side1_name: name(0),
            side1: value(0),
            side2_name: name(1),
            side2: value(1),
            side3_name: name(2),
            side3: value(2),
            margin1: opt(r.margins.first().copied()),
            margin2: opt(r.margins.get(1).copied()),
            satisfied: r.satisfied,
            tolerance: format_real(r.tolerance),
            preconditions_met: r.preconditions_met,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs() -> Inputs {
        Inputs {
            theorem: TheoremId::HhClassical,
            function: "f".into(),
            a: 0.0,
            b: 1.0,
            alpha: None,
            r: None,
            h: None,
        }
    }

    #[test]
    fn margins_and_verdict() {
        let r = BoundReport::assemble(inputs(), &[("x", 1.0), ("y", 2.0), ("z", 1.5)], 1e-9, true, vec![]).unwrap();
        assert_eq!(r.margins, vec![1.0, -0.5]);
        assert!(!r.satisfied);
        assert_eq!(r.worst_margin(), -0.5);
        let r = BoundReport::assemble(inputs(), &[("x", 1.0), ("y", 1.0 - 5e-10)], 1e-9, true, vec![]).unwrap();
        assert!(r.satisfied);
    }

    #[test]
    fn tolerance_scales_with_last_side() {
        let r = BoundReport::assemble(inputs(), &[("x", 1e6), ("y", 1e6 - 1e-4)], 1e-9, true, vec![]).unwrap();
        assert_eq!(r.tolerance, 1e-9 * (1e6 - 1e-4));
        assert!(r.satisfied);
    }

    #[test]
    fn non_finite_sides_rejected() {
        let err = BoundReport::assemble(inputs(), &[("x", f64::NAN)], 1e-9, true, vec![]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSide { side: "x", .. }));
    }

    #[test]
    fn flat_values_round_trip() {
        let v = [0.1 + 0.2, std::f64::consts::PI / 7.0, -1.0 / 3.0];
        let r = BoundReport::assemble(inputs(), &[("x", v[0]), ("y", v[1]), ("z", v[2])], 1e-9, true, vec![]).unwrap();
        let flat = r.flat();
        for (s, x) in [&flat.side1, &flat.side2, &flat.side3].into_iter().zip(v) {
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(flat.margin1.parse::<f64>().unwrap(), r.margins[0]);
        assert_eq!(flat.alpha, "");
    }
}
