use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::quadrature::{integrate_power_weight, QuadratureSpec, UnitPoint, WithComplement};

/// Positive weight h on (0, 1) defining the class SX(h, I).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "h", rename_all = "snake_case")]
pub enum HFunction {
    /// h(λ) = λ; ordinary nonnegative convexity.
    Identity,
    /// h(λ) = 1; contains the P-functions.
    Constant,
    /// h(λ) = 1/λ; the Godunova-Levin class.
    Reciprocal,
    /// h(λ) = λ^s with s ∈ (0, 1).
    Power { s: f64 },
}

impl HFunction {
    pub fn power(s: f64) -> Result<Self> {
        if s > 0.0 && s < 1.0 {
            Ok(Self::Power { s })
        } else {
            Err(Error::Domain {
                what: "h-function exponent s (needs 0 < s < 1)",
                value: s,
            })
        }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        match self {
            HFunction::Identity => lambda,
            HFunction::Constant => 1.0,
            HFunction::Reciprocal => lambda.recip(),
            HFunction::Power { s } => lambda.powf(*s),
        }
    }

    /// ∫₀¹ t^(α-1) [h(t) + h(1-t)] dt; diverges for h = 1/λ.
    pub fn moment(&self, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
        if matches!(self, HFunction::Reciprocal) {
            return Err(Error::DivergentMoment(format!(
                "∫ t^(α-1) [h(t) + h(1-t)] dt diverges for h = {self} (α = {alpha})"
            )));
        }
        let g = WithComplement(|p: UnitPoint| self.eval(p.t) + self.eval(p.complement));
        Ok(integrate_power_weight(&g, alpha, spec)?.value)
    }

    /// ∫₀¹ h(λ) dλ; diverges for h = 1/λ.
    pub fn unit_integral(&self, spec: &QuadratureSpec) -> Result<f64> {
        if matches!(self, HFunction::Reciprocal) {
            return Err(Error::DivergentMoment(format!("∫₀¹ h(λ) dλ diverges for h = {self}")));
        }
        Ok(integrate_power_weight(&|t: f64| self.eval(t), 1.0, spec)?.value)
    }
}

impl fmt::Display for HFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HFunction::Identity => f.write_str("identity"),
            HFunction::Constant => f.write_str("one"),
            HFunction::Reciprocal => f.write_str("recip"),
            HFunction::Power { s } => write!(f, "pow:s={s}"),
        }
    }
}

impl FromStr for HFunction {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim().to_ascii_lowercase();
        match s.as_str() {
            "identity" | "lambda" | "t" => Ok(Self::Identity),
            "one" | "const" | "1" => Ok(Self::Constant),
            "recip" | "reciprocal" | "inverse" => Ok(Self::Reciprocal),
            _ => {
                let exp = s
                    .strip_prefix("pow:s=")
                    .or_else(|| s.strip_prefix("power:s="))
                    .ok_or_else(|| parse_err("h-function", input, "expected identity, one, recip or pow:s=<s>"))?;
                let v: f64 = exp
                    .parse()
                    .map_err(|_| parse_err("h-function", input, "exponent is not a number"))?;
                Self::power(v).map_err(|e| parse_err("h-function", input, e.to_string()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta_fn;
    use approx::assert_relative_eq;

    #[test]
    fn parse_and_display() {
        for h in [
            HFunction::Identity,
            HFunction::Constant,
            HFunction::Reciprocal,
            HFunction::Power { s: 0.5 },
        ] {
            assert_eq!(h.to_string().parse::<HFunction>().unwrap(), h);
        }
        assert_eq!("lambda".parse::<HFunction>().unwrap(), HFunction::Identity);
        assert!("pow:s=1".parse::<HFunction>().is_err());
        assert!("pow:s=0".parse::<HFunction>().is_err());
        assert!("sin".parse::<HFunction>().is_err());
    }

    #[test]
    fn positive_at_half() {
        for h in [
            HFunction::Identity,
            HFunction::Constant,
            HFunction::Reciprocal,
            HFunction::Power { s: 0.3 },
        ] {
            assert!(h.eval(0.5) > 0.0);
        }
    }

    #[test]
    fn moments_match_closed_forms() {
        let spec = QuadratureSpec::default();
        for alpha in [0.25, 0.5, 1.0, 2.0, 3.0] {
            let m = HFunction::Identity.moment(alpha, &spec).unwrap();
            assert_relative_eq!(m, 1.0 / alpha, max_relative = 1e-12);
            let m = HFunction::Constant.moment(alpha, &spec).unwrap();
            assert_relative_eq!(m, 2.0 / alpha, max_relative = 1e-12);
            for s in [0.1, 0.5, 0.9] {
                // 1/(α+s) + β(α, s+1)
                let exact = 1.0 / (alpha + s) + beta_fn(alpha, s + 1.0).unwrap();
                let m = HFunction::Power { s }.moment(alpha, &spec).unwrap();
                assert_relative_eq!(m, exact, max_relative = 1e-10);
            }
        }
        assert!(matches!(
            HFunction::Reciprocal.moment(1.0, &spec),
            Err(Error::DivergentMoment(_))
        ));
    }

    #[test]
    fn unit_integrals() {
        let spec = QuadratureSpec::default();
        assert_relative_eq!(HFunction::Identity.unit_integral(&spec).unwrap(), 0.5, max_relative = 1e-13);
        assert_relative_eq!(HFunction::Constant.unit_integral(&spec).unwrap(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(
            HFunction::Power { s: 0.5 }.unit_integral(&spec).unwrap(),
            2.0 / 3.0,
            max_relative = 1e-12
        );
        assert!(HFunction::Reciprocal.unit_integral(&spec).is_err());
    }
}
