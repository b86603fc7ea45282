//! Named test functions and their string grammar.
//!
//! A function is written `family[:key=value,...]`. Every family accepts the
//! modifiers `scale=`, `offset=`, `shift=` and the bare flag `neg`, giving
//! `scale · base(x - shift) + offset` (with `neg` flipping the sign of `scale`).
//!
//! | family     | keys                  | base function             |
//! |------------|-----------------------|---------------------------|
//! | `monomial` | `k` (integer)         | x^k                       |
//! | `affine`   | `m` (1), `c` (0)      | m·x + c                   |
//! | `const`    | `c` (1)               | c                         |
//! | `exp`      | `c` (1), `k` (1)      | c·e^(kx)                  |
//! | `recip`    |                       | 1/x                       |
//! | `abspow`   | `p` (> 0)             | \|x\|^p                   |
//! | `sqrt`     |                       | √x                        |
//! | `quad`     | `a` (1), `b` (0), `c` (0) | a·x² + b·x + c        |
//! | `table`    | `x`, `y` (`|`-separated) | piecewise-linear interpolant |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::fractional::{Interval, RealFn};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Monomial { k: i32 },
    Affine { m: f64, c: f64 },
    Constant { c: f64 },
    Exponential { c: f64, k: f64 },
    Reciprocal,
    AbsPower { p: f64 },
    Sqrt,
    Quadratic { a: f64, b: f64, c: f64 },
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
}

impl Family {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Family::Monomial { k } => x.powi(*k),
            Family::Affine { m, c } => m * x + c,
            Family::Constant { c } => *c,
            Family::Exponential { c, k } => c * (k * x).exp(),
            Family::Reciprocal => x.recip(),
            Family::AbsPower { p } => x.abs().powf(*p),
            Family::Sqrt => x.sqrt(),
            Family::Quadratic { a, b, c } => (a * x + b) * x + c,
            Family::Tabulated { xs, ys } => interpolate(xs, ys, x),
        }
    }

    /// Whether the base function is finite and bounded on [lo, hi].
    fn supports(&self, lo: f64, hi: f64) -> bool {
        let avoids_zero = lo > 0.0 || hi < 0.0;
        match self {
            Family::Monomial { k } if *k < 0 => avoids_zero,
            Family::Reciprocal => avoids_zero,
            Family::Sqrt => lo >= 0.0,
            Family::Tabulated { xs, .. } => xs[0] <= lo && hi <= xs[xs.len() - 1],
            _ => true,
        }
    }

    fn default_domain(&self) -> Interval {
        let (a, b) = match self {
            Family::Reciprocal => (1.0, 2.0),
            Family::Monomial { k } if *k < 0 => (1.0, 2.0),
            Family::Tabulated { xs, .. } => (xs[0], xs[xs.len() - 1]),
            _ => (0.0, 1.0),
        };
        Interval::new(a, b).expect("default domains are valid")
    }

    fn write_id(&self, out: &mut String) {
        use std::fmt::Write;
        let _ = match self {
            Family::Monomial { k } => write!(out, "monomial:k={k}"),
            Family::Affine { m, c } => write!(out, "affine:m={m},c={c}"),
            Family::Constant { c } => write!(out, "const:c={c}"),
            Family::Exponential { c, k } => write!(out, "exp:c={c},k={k}"),
            Family::Reciprocal => write!(out, "recip"),
            Family::AbsPower { p } => write!(out, "abspow:p={p}"),
            Family::Sqrt => write!(out, "sqrt"),
            Family::Quadratic { a, b, c } => write!(out, "quad:a={a},b={b},c={c}"),
            Family::Tabulated { xs, ys } => {
                let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|");
                write!(out, "table:x={},y={}", join(xs), join(ys))
            }
        };
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if !(xs[0] <= x && x <= xs[xs.len() - 1]) {
        return f64::NAN;
    }
    let i = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Classes a function is known (by theory, not by sampling) to belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Convex,
    Concave,
    Nonnegative,
    Positive,
    GodunovaLevin,
    PFunction,
    LogConvex,
}

/// `scale · base(x - shift) + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub scale: f64,
    pub offset: f64,
    pub shift: f64,
}

impl Default for Transform {
    fn default() -> Self {
        Self {
            scale: 1.0,
            offset: 0.0,
            shift: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub family: Family,
    pub transform: Transform,
    pub domain: Interval,
    pub claimed: BTreeSet<ClassTag>,
}

impl FunctionSpec {
    pub fn new(family: Family, domain: Interval) -> Result<Self> {
        Self::with_transform(family, Transform::default(), domain)
    }

    pub fn with_transform(family: Family, transform: Transform, domain: Interval) -> Result<Self> {
        validate_family(&family)?;
        for (what, v) in [
            ("scale", transform.scale),
            ("offset", transform.offset),
            ("shift", transform.shift),
        ] {
            if !v.is_finite() {
                return Err(Error::Domain { what, value: v });
            }
        }
        let spec = Self {
            family,
            transform,
            domain,
            claimed: BTreeSet::new(),
        };
        spec.check_defined_on(domain)?;
        Ok(spec)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = &self.transform;
        t.scale * self.family.eval(x - t.shift) + t.offset
    }

    pub fn is_defined_on(&self, iv: Interval) -> bool {
        let s = self.transform.shift;
        self.family.supports(iv.a() - s, iv.b() - s)
    }

    fn check_defined_on(&self, iv: Interval) -> Result<()> {
        if self.is_defined_on(iv) {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "interval endpoint outside the function's support",
                value: iv.a(),
            })
        }
    }

    /// The same function restricted to (or sampled on) another interval.
    pub fn with_domain(&self, iv: Interval) -> Result<Self> {
        self.check_defined_on(iv)?;
        Ok(Self {
            domain: iv,
            ..self.clone()
        })
    }

    pub fn with_claims(mut self, claims: impl IntoIterator<Item = ClassTag>) -> Self {
        self.claimed.extend(claims);
        self
    }

    pub fn claims(&self, tag: ClassTag) -> bool {
        self.claimed.contains(&tag)
    }

    /// c · f. Claims are kept only when c > 0.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.transform.scale *= c;
        out.transform.offset *= c;
        if c <= 0.0 {
            out.claimed.clear();
        }
        out
    }

    /// x ↦ f(x - d), with the domain moved along.
    pub fn translated(&self, d: f64) -> Result<Self> {
        let mut out = self.clone();
        out.transform.shift += d;
        out.domain = self.domain.translated(d)?;
        Ok(out)
    }

    /// Canonical string in the grammar above; parses back to the same function.
    pub fn id(&self) -> String {
        let mut s = String::new();
        self.family.write_id(&mut s);
        let t = &self.transform;
        let mut mods = Vec::new();
        if t.scale != 1.0 {
            mods.push(format!("scale={}", t.scale));
        }
        if t.offset != 0.0 {
            mods.push(format!("offset={}", t.offset));
        }
        if t.shift != 0.0 {
            mods.push(format!("shift={}", t.shift));
        }
        if !mods.is_empty() {
            s.push(if s.contains(':') { ',' } else { ':' });
            s.push_str(&mods.join(","));
        }
        s
    }

    /// Parses `input`; `domain` overrides the family's default interval.
    pub fn parse(input: &str, domain: Option<Interval>) -> Result<Self> {
        let input = input.trim();
        let (name, rest) = input.split_once(':').unwrap_or((input, ""));
        let mut params = Params::parse(input, rest)?;
        let family = match name.trim().to_ascii_lowercase().as_str() {
            "monomial" | "mono" | "pow" => {
                let k = params.required("k")?;
                if k.fract() != 0.0 || k.abs() > i32::MAX as f64 {
                    return Err(parse_err("function", input, "monomial exponent k must be an integer"));
                }
                Family::Monomial { k: k as i32 }
            }
            "affine" | "linear" => Family::Affine {
                m: params.optional("m", 1.0)?,
                c: params.optional("c", 0.0)?,
            },
            "const" | "constant" => Family::Constant {
                c: params.optional("c", 1.0)?,
            },
            "exp" => Family::Exponential {
                c: params.optional("c", 1.0)?,
                k: params.optional("k", 1.0)?,
            },
            "recip" | "reciprocal" => Family::Reciprocal,
            "abspow" => Family::AbsPower {
                p: params.required("p")?,
            },
            "sqrt" => Family::Sqrt,
            "quad" | "quadratic" => Family::Quadratic {
                a: params.optional("a", 1.0)?,
                b: params.optional("b", 0.0)?,
                c: params.optional("c", 0.0)?,
            },
            "table" | "tabulated" => Family::Tabulated {
                xs: params.required_list("x")?,
                ys: params.required_list("y")?,
            },
            other => return Err(parse_err("function", input, format!("unknown family {other:?}"))),
        };
        let mut transform = Transform {
            scale: params.optional("scale", 1.0)?,
            offset: params.optional("offset", 0.0)?,
            shift: params.optional("shift", 0.0)?,
        };
        if params.flag("neg") {
            transform.scale = -transform.scale;
        }
        params.finish()?;
        validate_family(&family).map_err(|e| parse_err("function", input, e.to_string()))?;
        let domain = domain.unwrap_or_else(|| {
            let d = family.default_domain();
            d.translated(transform.shift).unwrap_or(d)
        });
        Self::with_transform(family, transform, domain)
    }
}

fn validate_family(family: &Family) -> Result<()> {
    let finite = |what: &'static str, v: f64| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain { what, value: v })
        }
    };
    match family {
        Family::Affine { m, c } => finite("affine slope", *m).and(finite("affine intercept", *c)),
        Family::Constant { c } => finite("constant", *c),
        Family::Exponential { c, k } => finite("exp coefficient", *c).and(finite("exp rate", *k)),
        Family::AbsPower { p } if !(*p > 0.0 && p.is_finite()) => Err(Error::Domain {
            what: "abspow exponent p",
            value: *p,
        }),
        Family::Quadratic { a, b, c } => finite("quad a", *a)
            .and(finite("quad b", *b))
            .and(finite("quad c", *c)),
        Family::Tabulated { xs, ys } => {
            if xs.len() < 2 || xs.len() != ys.len() {
                return Err(Error::Domain {
                    what: "table length",
                    value: xs.len() as f64,
                });
            }
            if !xs.windows(2).all(|w| w[0] < w[1]) || xs.iter().chain(ys).any(|v| !v.is_finite()) {
                return Err(Error::Domain {
                    what: "table abscissae must be finite and strictly increasing",
                    value: xs[0],
                });
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

struct Params<'a> {
    input: &'a str,
    entries: Vec<(&'a str, Option<&'a str>, bool)>,
}

impl<'a> Params<'a> {
    fn parse(input: &'a str, rest: &'a str) -> Result<Self> {
        let mut entries = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = match item.split_once('=') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (item, None),
            };
            if entries.iter().any(|(seen, _, _)| *seen == k) {
                return Err(parse_err("function", input, format!("duplicate key {k:?}")));
            }
            entries.push((k, v, false));
        }
        Ok(Self { input, entries })
    }

    fn take(&mut self, key: &str) -> Option<Option<&'a str>> {
        self.entries.iter_mut().find(|(k, _, used)| *k == key && !*used).map(|e| {
            e.2 = true;
            e.1
        })
    }

    fn number(&self, key: &str, raw: Option<&str>) -> Result<f64> {
        let raw = raw.ok_or_else(|| parse_err("function", self.input, format!("{key} needs a value")))?;
        raw.parse::<f64>()
            .map_err(|_| parse_err("function", self.input, format!("{key}={raw} is not a number")))
    }

    fn required(&mut self, key: &str) -> Result<f64> {
        match self.take(key) {
            Some(raw) => self.number(key, raw),
            None => Err(parse_err("function", self.input, format!("missing {key}="))),
        }
    }

    fn optional(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            Some(raw) => self.number(key, raw),
            None => Ok(default),
        }
    }

    fn required_list(&mut self, key: &str) -> Result<Vec<f64>> {
        let raw = self
            .take(key)
            .flatten()
            .ok_or_else(|| parse_err("function", self.input, format!("missing {key}=")))?;
        raw.split('|').map(|v| self.number(key, Some(v.trim()))).collect()
    }

    fn flag(&mut self, key: &str) -> bool {
        matches!(self.take(key), Some(None))
    }

    fn finish(self) -> Result<()> {
        match self.entries.iter().find(|(_, _, used)| !used) {
            Some((k, _, _)) => Err(parse_err("function", self.input, format!("unexpected key {k:?}"))),
            None => Ok(()),
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl RealFn for FunctionSpec {
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

/// The shipped corpus: one member per class plus a concave control.
pub fn default_corpus() -> Vec<FunctionSpec> {
    use ClassTag::*;
    let iv = |a, b| Interval::new(a, b).expect("valid corpus interval");
    let entry = |family, domain, claims: &[ClassTag]| {
        FunctionSpec::new(family, domain)
            .expect("valid corpus entry")
            .with_claims(claims.iter().copied())
    };
    vec![
        entry(
            Family::Monomial { k: 2 },
            iv(0.0, 1.0),
            &[Convex, Nonnegative, GodunovaLevin, PFunction],
        ),
        entry(
            Family::Monomial { k: 1 },
            iv(0.0, 1.0),
            &[Convex, Concave, Nonnegative, GodunovaLevin, PFunction],
        ),
        entry(
            Family::Exponential { c: 1.0, k: 1.0 },
            iv(0.0, 1.0),
            &[Convex, Nonnegative, Positive, GodunovaLevin, PFunction, LogConvex],
        ),
        entry(
            Family::Reciprocal,
            iv(1.0, 2.0),
            &[Convex, Nonnegative, Positive, GodunovaLevin, PFunction, LogConvex],
        ),
        entry(
            Family::AbsPower { p: 1.5 },
            iv(0.0, 2.0),
            &[Convex, Nonnegative, GodunovaLevin, PFunction],
        ),
        entry(
            Family::Sqrt,
            iv(0.0, 1.0),
            &[Concave, Nonnegative, GodunovaLevin, PFunction],
        ),
        entry(
            Family::Constant { c: 1.0 },
            iv(0.0, 1.0),
            &[Convex, Concave, Nonnegative, Positive, GodunovaLevin, PFunction, LogConvex],
        ),
    ]
}
