//! Seeded searches for chain violations.
//!
//! A generator draws functions from a family that is either inside or
//! outside the class a chain needs. Inside the class, any violation beyond
//! ten times the chain tolerance is a finding. Outside it, at least one
//! violation or failed membership check is expected.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sweep::{run_cases, CaseOutcome};
use super::{BoundReport, Case, EvalOptions, TheoremId};
use crate::classes::{Family, FunctionSpec, HFunction, Transform};
use crate::error::{parse_err, Error, Result};
use crate::fractional::{FracOrder, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// c·√(x + s), strictly concave and nonnegative.
    Concave,
    /// a·x² + b·x + c with a > 0 and positive minimum.
    ConvexQuadratic,
    /// c·e^(kx), positive and log-convex.
    LogConvexExp,
    /// m·x + c, negative on [0, 1].
    NegativeAffine,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::Concave,
        Generator::ConvexQuadratic,
        Generator::LogConvexExp,
        Generator::NegativeAffine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Concave => "concave",
            Generator::ConvexQuadratic => "convex_quadratic",
            Generator::LogConvexExp => "log_convex_exp",
            Generator::NegativeAffine => "negative_affine",
        }
    }

    /// The first trial of every campaign: √x, x², e^x and x - 5 on [0, 1].
    pub fn canonical(self) -> FunctionSpec {
        let unit = Interval::new(0.0, 1.0).expect("unit interval");
        let family = match self {
            Generator::Concave => Family::Sqrt,
            Generator::ConvexQuadratic => Family::Quadratic { a: 1.0, b: 0.0, c: 0.0 },
            Generator::LogConvexExp => Family::Exponential { c: 1.0, k: 1.0 },
            Generator::NegativeAffine => Family::Affine { m: 1.0, c: -5.0 },
        };
        FunctionSpec::new(family, unit).expect("canonical generator function")
    }

    pub fn draw(self, rng: &mut ChaCha8Rng) -> Result<FunctionSpec> {
        let mut interval = |lo: f64, hi: f64, wlo: f64, whi: f64| {
            let a = rng.gen_range(lo..hi);
            Interval::new(a, a + rng.gen_range(wlo..whi))
        };
        match self {
            Generator::Concave => {
                let iv = interval(0.0, 1.0, 0.2, 2.0)?;
                let transform = Transform {
                    scale: rng.gen_range(0.5..2.0),
                    offset: 0.0,
                    shift: -rng.gen_range(0.0..1.0),
                };
                FunctionSpec::with_transform(Family::Sqrt, transform, iv)
            }
            Generator::ConvexQuadratic => {
                let iv = interval(0.0, 2.0, 0.1, 3.0)?;
                let a = rng.gen_range(0.1..3.0);
                let b = rng.gen_range(-3.0..3.0);
                let c = b * b / (4.0 * a) + rng.gen_range(0.0..1.0);
                FunctionSpec::new(Family::Quadratic { a, b, c }, iv)
            }
            Generator::LogConvexExp => {
                let iv = interval(0.0, 2.0, 0.1, 2.0)?;
                let c = rng.gen_range(0.2..3.0);
                let k = rng.gen_range(-2.0..2.0);
                FunctionSpec::new(Family::Exponential { c, k }, iv)
            }
            Generator::NegativeAffine => {
                let m = rng.gen_range(-2.0..2.0);
                let c = rng.gen_range(-10.0..-3.0);
                FunctionSpec::new(Family::Affine { m, c }, Interval::new(0.0, 1.0)?)
            }
        }
    }

    /// Whether drawn functions belong to the class the chain needs.
    pub fn expectation(self, theorem: TheoremId, r: Option<f64>, h: Option<HFunction>) -> Expectation {
        use TheoremId::*;
        match self {
            Generator::NegativeAffine => Expectation::OutOfClass,
            Generator::LogConvexExp => Expectation::InClass,
            Generator::Concave => match theorem {
                HhClassical | HhFractional | RClassical | RFractional => Expectation::OutOfClass,
                HClassical | HFractional if h == Some(HFunction::Identity) => Expectation::OutOfClass,
                _ => Expectation::InClass,
            },
            Generator::ConvexQuadratic => match (theorem, r) {
                (RClassical | RFractional, Some(r)) if r < 1.0 => Expectation::Unknown,
                _ => Expectation::InClass,
            },
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        match t.as_str() {
            "concave" => Ok(Generator::Concave),
            "convex_quadratic" | "quadratic" => Ok(Generator::ConvexQuadratic),
            "log_convex_exp" | "log_convex" | "exp" => Ok(Generator::LogConvexExp),
            "negative_affine" | "negative" => Ok(Generator::NegativeAffine),
            _ => Err(parse_err(
                "generator",
                s,
                "expected concave, convex_quadratic, log_convex_exp or negative_affine",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    InClass,
    OutOfClass,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifyConfig {
    pub theorem: TheoremId,
    pub generator: Generator,
    pub trials: usize,
    pub seed: u64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub rs: Vec<f64>,
    pub h: HFunction,
}

impl FalsifyConfig {
    pub fn new(theorem: TheoremId, generator: Generator) -> Self {
        Self {
            theorem,
            generator,
            trials: 200,
            seed: 0,
            alpha_min: 0.25,
            alpha_max: 3.0,
            rs: vec![0.25, 0.5, 1.0],
            h: HFunction::Identity,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain {
                what: "trial count",
                value: 0.0,
            });
        }
        if !(self.alpha_min > 0.0 && self.alpha_min <= self.alpha_max && self.alpha_max.is_finite()) {
            return Err(Error::Domain {
                what: "alpha range",
                value: self.alpha_min,
            });
        }
        if self.theorem.needs_r() && self.rs.is_empty() {
            return Err(Error::MissingParameter {
                theorem: self.theorem.to_string(),
                what: "r",
            });
        }
        Ok(())
    }

    /// Trial i uses its own ChaCha stream, so cases do not depend on each other.
    pub fn cases(&self) -> Result<Vec<Case>> {
        self.validate()?;
        let t = self.theorem;
        (0..self.trials)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(i as u64);
                let (f, alpha, r) = if i == 0 {
                    (self.generator.canonical(), 1.0, self.rs.first().copied())
                } else {
                    let f = self.generator.draw(&mut rng)?;
                    let alpha = rng.gen_range(self.alpha_min..=self.alpha_max);
                    let r = (!self.rs.is_empty()).then(|| self.rs[rng.gen_range(0..self.rs.len())]);
                    (f, alpha, r)
                };
                Ok(Case {
                    theorem: t,
                    interval: f.domain,
                    function: f,
                    alpha: t.is_fractional().then(|| FracOrder::new(alpha)).transpose()?,
                    r: if t.needs_r() { r } else { None },
                    h: t.needs_h().then_some(self.h),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifyReport {
    pub theorem: TheoremId,
    pub generator: Generator,
    pub seed: u64,
    pub trials: usize,
    pub expectation: Expectation,
    pub violations: usize,
    pub precondition_failures: usize,
    /// In-class violations beyond ten times the tolerance.
    pub findings: Vec<BoundReport>,
    /// Worst left-most margin seen; the HH-type chains fail first on the left.
    pub worst_margin: Option<f64>,
    pub expectation_met: bool,
    pub outcomes: Vec<CaseOutcome>,
}

pub fn falsify(cfg: &FalsifyConfig, opts: &EvalOptions) -> Result<FalsifyReport> {
    let cases = cfg.cases()?;
    let lenient = EvalOptions { strict: false, ..*opts };
    let outcomes = run_cases(&cases, &lenient);

    let mut expectation = None;
    let mut violations = 0;
    let mut precondition_failures = 0;
    let mut findings = Vec::new();
    let mut worst_margin: Option<f64> = None;
    for (case, outcome) in cases.iter().zip(&outcomes) {
        let e = cfg.generator.expectation(case.theorem, case.r, case.h);
        expectation = Some(match expectation {
            None => e,
            Some(prev) if prev == e => e,
            Some(_) => Expectation::Unknown,
        });
        match outcome {
            CaseOutcome::Evaluated { report } => {
                if !report.satisfied {
                    violations += 1;
                }
                if !report.preconditions_met {
                    precondition_failures += 1;
                }
                let w = report.worst_margin();
                worst_margin = Some(worst_margin.map_or(w, |m| m.min(w)));
                if report.preconditions_met && w < -10.0 * report.tolerance {
                    findings.push(report.clone());
                }
            }
            CaseOutcome::Skipped { .. } => precondition_failures += 1,
        }
    }
    let expectation = expectation.unwrap_or(Expectation::Unknown);
    let expectation_met = match expectation {
        Expectation::OutOfClass => violations + precondition_failures > 0,
        Expectation::InClass | Expectation::Unknown => findings.is_empty(),
    };
    Ok(FalsifyReport {
        theorem: cfg.theorem,
        generator: cfg.generator,
        seed: cfg.seed,
        trials: cfg.trials,
        expectation,
        violations,
        precondition_failures,
        findings,
        worst_margin,
        expectation_met,
        outcomes,
    })
}
