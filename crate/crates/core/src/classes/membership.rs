//! Sampled membership checks for the generalized convexity classes.
//!
//! A check scans a deterministic (x, y, λ) grid followed by seeded
//! pseudo-random triples and records the smallest slack of the defining
//! inequality. A pass only means no violation was found at that density.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::function::FunctionSpec;
use super::hfunc::HFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub lambda_points: usize,
    pub grid_points: usize,
    pub random_triples: usize,
    pub seed: u64,
    /// Absolute slack below which a sample counts as a violation.
    pub tol: f64,
    /// λ is kept in [eps, 1 - eps] for classes defined on the open interval.
    pub lambda_eps: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            lambda_points: 33,
            grid_points: 17,
            random_triples: 10_000,
            seed: 0,
            tol: 1e-9,
            lambda_eps: 1e-3,
        }
    }
}

impl SamplingPlan {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum MembershipClass {
    Convex,
    Nonnegative,
    GodunovaLevin,
    PFunction,
    RConvex { r: f64 },
    HConvex { h: HFunction },
}

impl fmt::Display for MembershipClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipClass::Convex => f.write_str("convex"),
            MembershipClass::Nonnegative => f.write_str("nonnegative"),
            MembershipClass::GodunovaLevin => f.write_str("Q(I)"),
            MembershipClass::PFunction => f.write_str("P(I)"),
            MembershipClass::RConvex { r } => write!(f, "{r}-convex"),
            MembershipClass::HConvex { h } => write!(f, "SX(h={h})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Combination { x: f64, y: f64, lambda: f64 },
    Point { x: f64 },
    Triple { x: f64, y: f64, z: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub class: MembershipClass,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub verdict: Verdict,
    pub samples_used: usize,
    pub worst_margin: f64,
    pub witness: Option<Witness>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy)]
enum Lambdas {
    Closed,
    Open,
}

struct Scan {
    worst: f64,
    witness: Option<Witness>,
    samples: usize,
}

impl Scan {
    fn new() -> Self {
        Self {
            worst: f64::INFINITY,
            witness: None,
            samples: 0,
        }
    }

    fn record(&mut self, margin: f64, witness: Witness) {
        self.samples += 1;
        if margin < self.worst {
            self.worst = margin;
            self.witness = Some(witness);
        }
    }

    fn into_report(self, class: MembershipClass, f: &FunctionSpec, plan: &SamplingPlan) -> MembershipReport {
        MembershipReport {
            class,
            function: f.id(),
            a: f.domain.a(),
            b: f.domain.b(),
            verdict: if self.worst < -plan.tol { Verdict::Fail } else { Verdict::Pass },
            samples_used: self.samples,
            worst_margin: self.worst,
            witness: self.witness,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Sign {
    Any,
    Positive,
}

fn evaluate(f: &FunctionSpec, x: f64, sign: Sign) -> Result<f64> {
    let v = f.eval(x);
    if !v.is_finite() {
        return Err(Error::Evaluation { x, value: v });
    }
    if sign == Sign::Positive && v <= 0.0 {
        return Err(Error::NonPositive { x, value: v });
    }
    Ok(v)
}

/// Grid points first, then seeded random (x, y, λ).
fn samples(f: &FunctionSpec, plan: &SamplingPlan, lambdas: Lambdas) -> impl Iterator<Item = (f64, f64, f64)> {
    let (a, w) = (f.domain.a(), f.domain.width());
    let (lo, span) = match lambdas {
        Lambdas::Closed => (0.0, 1.0),
        Lambdas::Open => (plan.lambda_eps, 1.0 - 2.0 * plan.lambda_eps),
    };
    let g = plan.grid_points.max(2);
    let l = plan.lambda_points.max(2);
    let node = move |i: usize, n: usize| i as f64 / (n - 1) as f64;
    let grid = (0..g).flat_map(move |i| {
        (0..g).flat_map(move |j| (0..l).map(move |k| (a + w * node(i, g), a + w * node(j, g), lo + span * node(k, l))))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let random = (0..plan.random_triples).map(move |_| {
        let x = a + w * rng.gen::<f64>();
        let y = a + w * rng.gen::<f64>();
        let lam = lo + span * rng.gen::<f64>();
        (x, y, lam)
    });
    grid.chain(random)
}

fn grid_xs(f: &FunctionSpec, plan: &SamplingPlan) -> impl Iterator<Item = f64> {
    let (a, w) = (f.domain.a(), f.domain.width());
    let g = plan.grid_points.max(2);
    (0..g).map(move |i| a + w * i as f64 / (g - 1) as f64)
}

struct Rule<S> {
    lambdas: Lambdas,
    sign: Sign,
    nonnegative: bool,
    slack: S,
}

fn run<S>(f: &FunctionSpec, plan: &SamplingPlan, rule: Rule<S>) -> Result<Scan>
where
    S: Fn(f64, f64, f64, f64) -> f64,
{
    let mut scan = Scan::new();
    if rule.nonnegative {
        for x in grid_xs(f, plan) {
            scan.record(evaluate(f, x, rule.sign)?, Witness::Point { x });
        }
    }
    let random_start = plan.grid_points.max(2).pow(2) * plan.lambda_points.max(2);
    for (i, (x, y, lambda)) in samples(f, plan, rule.lambdas).enumerate() {
        let z = lambda * x + (1.0 - lambda) * y;
        let fx = evaluate(f, x, rule.sign)?;
        let fy = evaluate(f, y, rule.sign)?;
        let fz = evaluate(f, z, rule.sign)?;
        if rule.nonnegative && i >= random_start {
            scan.record(fx, Witness::Point { x });
        }
        scan.record((rule.slack)(fx, fy, fz, lambda), Witness::Combination { x, y, lambda });
    }
    Ok(scan)
}

/// λf(x) + (1-λ)f(y) ≥ f(λx + (1-λ)y) for λ ∈ [0, 1].
pub fn check_convex(f: &FunctionSpec, plan: &SamplingPlan) -> Result<MembershipReport> {
    let rule = Rule {
        lambdas: Lambdas::Closed,
        sign: Sign::Any,
        nonnegative: false,
        slack: |fx: f64, fy: f64, fz: f64, l: f64| l * fx + (1.0 - l) * fy - fz,
    };
    Ok(run(f, plan, rule)?.into_report(MembershipClass::Convex, f, plan))
}

/// f ≥ 0 on the grid and at the random abscissae.
pub fn check_nonnegative(f: &FunctionSpec, plan: &SamplingPlan) -> Result<MembershipReport> {
    let mut scan = Scan::new();
    for x in grid_xs(f, plan) {
        scan.record(evaluate(f, x, Sign::Any)?, Witness::Point { x });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    for _ in 0..plan.random_triples {
        let x = f.domain.a() + f.domain.width() * rng.gen::<f64>();
        scan.record(evaluate(f, x, Sign::Any)?, Witness::Point { x });
    }
    Ok(scan.into_report(MembershipClass::Nonnegative, f, plan))
}

/// Class Q(I): f ≥ 0 and f(λx + (1-λ)y) ≤ f(x)/λ + f(y)/(1-λ), λ ∈ (0, 1).
pub fn check_godunova_levin(f: &FunctionSpec, plan: &SamplingPlan) -> Result<MembershipReport> {
    let rule = Rule {
        lambdas: Lambdas::Open,
        sign: Sign::Any,
        nonnegative: true,
        slack: |fx: f64, fy: f64, fz: f64, l: f64| fx / l + fy / (1.0 - l) - fz,
    };
    Ok(run(f, plan, rule)?.into_report(MembershipClass::GodunovaLevin, f, plan))
}

/// Class P(I): f ≥ 0 and f(λx + (1-λ)y) ≤ f(x) + f(y), λ ∈ [0, 1].
pub fn check_p_function(f: &FunctionSpec, plan: &SamplingPlan) -> Result<MembershipReport> {
    let rule = Rule {
        lambdas: Lambdas::Closed,
        sign: Sign::Any,
        nonnegative: true,
        slack: |fx: f64, fy: f64, fz: f64, _l: f64| fx + fy - fz,
    };
    Ok(run(f, plan, rule)?.into_report(MembershipClass::PFunction, f, plan))
}

/// f(λx + (1-λ)y) ≤ M_r(f(x), f(y); λ) for positive f, r ∈ [0, 1].
/// r = 0 is log-convexity.
pub fn check_r_convex(f: &FunctionSpec, r: f64, plan: &SamplingPlan) -> Result<MembershipReport> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain {
            what: "r-convexity order r (needs 0 ≤ r ≤ 1)",
            value: r,
        });
    }
    let rule = Rule {
        lambdas: Lambdas::Closed,
        sign: Sign::Positive,
        nonnegative: false,
        slack: |fx: f64, fy: f64, fz: f64, l: f64| power_mean_unchecked(fx, fy, l, r) - fz,
    };
    Ok(run(f, plan, rule)?.into_report(MembershipClass::RConvex { r }, f, plan))
}

/// Class SX(h, I): f ≥ 0 and f(λx + (1-λ)y) ≤ h(λ)f(x) + h(1-λ)f(y), λ ∈ (0, 1).
pub fn check_h_convex(f: &FunctionSpec, h: HFunction, plan: &SamplingPlan) -> Result<MembershipReport> {
    let rule = Rule {
        lambdas: Lambdas::Open,
        sign: Sign::Any,
        nonnegative: true,
        slack: |fx: f64, fy: f64, fz: f64, l: f64| h.eval(l) * fx + h.eval(1.0 - l) * fy - fz,
    };
    Ok(run(f, plan, rule)?.into_report(MembershipClass::HConvex { h }, f, plan))
}

/// f(x)(x-y)(x-z) + f(y)(y-x)(y-z) + f(z)(z-x)(z-y).
pub fn godunova_levin_triple(f: &FunctionSpec, x: f64, y: f64, z: f64) -> Result<f64> {
    if x == y || y == z || x == z {
        return Err(Error::CoincidentPoints { x, y, z });
    }
    for p in [x, y, z] {
        if !f.domain.contains(p) {
            return Err(Error::Domain {
                what: "point outside the function's domain",
                value: p,
            });
        }
    }
    let (fx, fy, fz) = (
        evaluate(f, x, Sign::Any)?,
        evaluate(f, y, Sign::Any)?,
        evaluate(f, z, Sign::Any)?,
    );
    Ok(fx * (x - y) * (x - z) + fy * (y - x) * (y - z) + fz * (z - x) * (z - y))
}

/// Smallest cubic combination over grid and seeded random triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleScan {
    pub function: String,
    pub samples: usize,
    pub min_value: f64,
    pub witness: Option<Witness>,
}

pub fn scan_godunova_levin_triples(f: &FunctionSpec, plan: &SamplingPlan) -> Result<TripleScan> {
    let xs: Vec<f64> = grid_xs(f, plan).collect();
    let mut scan = Scan::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            for k in j + 1..xs.len() {
                let (x, y, z) = (xs[i], xs[j], xs[k]);
                scan.record(godunova_levin_triple(f, x, y, z)?, Witness::Triple { x, y, z });
            }
        }
    }
    let (a, w) = (f.domain.a(), f.domain.width());
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut drawn = 0;
    while drawn < plan.random_triples {
        let (x, y, z) = (
            a + w * rng.gen::<f64>(),
            a + w * rng.gen::<f64>(),
            a + w * rng.gen::<f64>(),
        );
        if x == y || y == z || x == z {
            continue;
        }
        drawn += 1;
        scan.record(godunova_levin_triple(f, x, y, z)?, Witness::Triple { x, y, z });
    }
    Ok(TripleScan {
        function: f.id(),
        samples: scan.samples,
        min_value: scan.worst,
        witness: scan.witness,
    })
}

/// Q(I) membership by the defining inequality versus the cubic triple form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GodunovaLevinAgreement {
    pub membership: MembershipReport,
    pub triples: TripleScan,
    pub agree: bool,
}

pub fn cross_check_godunova_levin(f: &FunctionSpec, plan: &SamplingPlan) -> Result<GodunovaLevinAgreement> {
    let membership = check_godunova_levin(f, plan)?;
    let triples = scan_godunova_levin_triples(f, plan)?;
    let agree = membership.passed() == (triples.min_value >= -plan.tol);
    Ok(GodunovaLevinAgreement {
        membership,
        triples,
        agree,
    })
}

/// M_r(x, y; λ) = (λx^r + (1-λ)y^r)^(1/r), or x^λ y^(1-λ) when r = 0.
pub fn power_mean(x: f64, y: f64, lambda: f64, r: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain {
            what: "power mean argument x",
            value: x,
        });
    }
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain {
            what: "power mean argument y",
            value: y,
        });
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain {
            what: "power mean weight lambda",
            value: lambda,
        });
    }
    if !r.is_finite() {
        return Err(Error::Domain {
            what: "power mean order r",
            value: r,
        });
    }
    Ok(power_mean_unchecked(x, y, lambda, r))
}

fn power_mean_unchecked(x: f64, y: f64, lambda: f64, r: f64) -> f64 {
    let (lx, ly) = (x.ln(), y.ln());
    if r == 0.0 {
        return (lambda * lx + (1.0 - lambda) * ly).exp();
    }
    if r == 1.0 {
        return lambda * x + (1.0 - lambda) * y;
    }
    let (ax, ay) = (r * lx, r * ly);
    if ax.abs().max(ay.abs()) < 0.5 {
        // small exponents: expm1/ln_1p keep the r -> 0 limit accurate
        let inner = lambda * ax.exp_m1() + (1.0 - lambda) * ay.exp_m1();
        return (inner.ln_1p() / r).exp();
    }
    let m = ax.max(ay);
    let lse = m + (lambda * (ax - m).exp() + (1.0 - lambda) * (ay - m).exp()).ln();
    (lse / r).exp()
}
