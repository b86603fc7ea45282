//! Left and right Riemann-Liouville integrals and their symmetric bracket.
//!
//! Both operators are evaluated in the unit coordinate s ∈ [0, 1]:
//!
//! ```text
//! J_{a+}^α f(b) = (b-a)^α / Γ(α) · ∫₀¹ s^(α-1) f(b - (b-a)s) ds
//! J_{b-}^α f(a) = (b-a)^α / Γ(α) · ∫₀¹ s^(α-1) f(a + (b-a)s) ds
//! ```
//!
//! so the kernel singularity is handled once, by
//! [`integrate_power_weight`](crate::quadrature::integrate_power_weight).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_power_weight, QuadratureSpec, UnitPoint, WithComplement};
use crate::special::ln_gamma_unchecked;

/// A real function that can be sampled pointwise.
pub trait RealFn {
    fn value(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> RealFn for F {
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

/// A finite interval [a, b] with a < b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn translated(&self, d: f64) -> Result<Self> {
        Self::new(self.a + d, self.b + d)
    }

    /// Some operators are stated only for a ≥ 0.
    pub fn starts_nonnegative(&self) -> bool {
        self.a >= 0.0
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from([a, b]: [f64; 2]) -> Result<Self> {
        Self::new(a, b)
    }
}

impl From<Interval> for [f64; 2] {
    fn from(iv: Interval) -> Self {
        [iv.a, iv.b]
    }
}

/// A strictly positive fractional order α.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain {
                what: "fractional order alpha",
                value: alpha,
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<FracOrder> for f64 {
    fn from(alpha: FracOrder) -> Self {
        alpha.0
    }
}

/// The symmetric sum J_{a+}^α f(b) + J_{b-}^α f(a) and its normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RLBracket {
    pub left: f64,
    pub right: f64,
    pub bracket: f64,
    /// Γ(α+1) / (2(b-a)^α) · bracket; equals the mean of f at α = 1.
    pub normalized_mean: f64,
}

/// (b-a)^α / Γ(α), assembled in log space.
pub fn rl_prefactor(iv: Interval, alpha: FracOrder) -> f64 {
    let a = alpha.get();
    (a * iv.width().ln() - ln_gamma_unchecked(a)).exp()
}

/// Γ(α+1) / (b-a)^α, the factor every fractional Hadamard chain applies to the bracket.
pub fn bracket_scale(iv: Interval, alpha: FracOrder) -> f64 {
    let a = alpha.get();
    (ln_gamma_unchecked(a + 1.0) - a * iv.width().ln()).exp()
}

/// J_{a+}^α f evaluated at b.
pub fn rl_left<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: FracOrder, spec: &QuadratureSpec) -> Result<f64> {
    let (a, b, w) = (iv.a(), iv.b(), iv.width());
    // x = b - (b-a)s, taken from the nearer endpoint
    let g = WithComplement(|p: UnitPoint| {
        let x = if p.t <= 0.5 { b - w * p.t } else { a + w * p.complement };
        f.value(x)
    });
    let q = integrate_power_weight(&g, alpha.get(), spec)?;
    Ok(rl_prefactor(iv, alpha) * q.value)
}

/// J_{b-}^α f evaluated at a.
pub fn rl_right<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: FracOrder, spec: &QuadratureSpec) -> Result<f64> {
    let (a, b, w) = (iv.a(), iv.b(), iv.width());
    let g = WithComplement(|p: UnitPoint| {
        let x = if p.t <= 0.5 { a + w * p.t } else { b - w * p.complement };
        f.value(x)
    });
    let q = integrate_power_weight(&g, alpha.get(), spec)?;
    Ok(rl_prefactor(iv, alpha) * q.value)
}

pub fn bracket<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: FracOrder, spec: &QuadratureSpec) -> Result<RLBracket> {
    let left = rl_left(f, iv, alpha, spec)?;
    let right = rl_right(f, iv, alpha, spec)?;
    let sum = left + right;
    Ok(RLBracket {
        left,
        right,
        bracket: sum,
        normalized_mean: 0.5 * bracket_scale(iv, alpha) * sum,
    })
}

/// ∫₀¹ t^(α-1) [f(ta + (1-t)b) + f((1-t)a + tb)] dt, computed directly in the
/// original variable. Equals Γ(α)/(b-a)^α times the bracket.
pub fn midpoint_form<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: FracOrder, spec: &QuadratureSpec) -> Result<f64> {
    let (a, b) = (iv.a(), iv.b());
    let g = WithComplement(|p: UnitPoint| {
        let (t, c) = (p.t, p.complement);
        f.value(t * a + c * b) + f.value(c * a + t * b)
    });
    Ok(integrate_power_weight(&g, alpha.get(), spec)?.value)
}
