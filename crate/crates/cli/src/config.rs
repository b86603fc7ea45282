use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use fracineq::classes::{default_corpus, FunctionSpec, HFunction, SamplingPlan};
use fracineq::fractional::{FracOrder, Interval};
use fracineq::inequality::falsify::Generator;
use fracineq::inequality::{EvalOptions, RLhsForm, TheoremId};
use fracineq::quadrature::QuadratureSpec;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Eval,
    Sweep,
    Membership,
    Reductions,
    Falsify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(name = "fracineq", version, about = "Check Hadamard-type inequality chains for Riemann-Liouville fractional integrals")]
pub struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Theorem ids, comma separated (e.g. HH_fractional,P_fractional).
    #[arg(long, value_delimiter = ',')]
    pub theorem: Vec<String>,
    /// Function spec; repeat the flag for several functions.
    #[arg(long)]
    pub function: Vec<String>,
    /// Interval as `a,b`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Vec<f64>,
    /// h-functions: identity, one, recip, pow:s=<s>.
    #[arg(long, value_delimiter = ',')]
    pub h: Vec<String>,
    /// Membership classes: convex, nonnegative, q, p, r, h.
    #[arg(long = "class", value_delimiter = ',')]
    pub classes: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub strict_preconditions: Option<Switch>,
    #[arg(long)]
    pub panels: Option<usize>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Falsification generator: concave, convex_quadratic, log_convex_exp, negative_affine.
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Constant on the left of the r-convex bound: printed or proved.
    #[arg(long)]
    pub r_lhs: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverride {
    pub nodes: Option<usize>,
    pub panels: Option<usize>,
    pub target_rel_tol: Option<f64>,
}

/// A run as written in a config file or assembled from flags. Empty lists
/// and missing fields fall back to per-mode defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub theorems: Vec<String>,
    pub functions: Vec<String>,
    pub intervals: Vec<[f64; 2]>,
    pub alphas: Vec<f64>,
    pub rs: Vec<f64>,
    pub hs: Vec<String>,
    pub classes: Vec<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub strict_preconditions: Option<bool>,
    pub quadrature: Option<QuadratureOverride>,
    pub tolerance: Option<f64>,
    pub generator: Option<String>,
    pub trials: Option<usize>,
    pub r_lhs: Option<String>,
}

fn config_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn parse_interval(s: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts[..] else {
        return Err(config_err("interval", format!("expected `a,b`, got {s:?}")));
    };
    let num = |v: &str| v.parse::<f64>().map_err(|_| config_err("interval", format!("{v:?} is not a number")));
    Ok([num(a)?, num(b)?])
}

fn pick<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| config_err("config", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| config_err("config", format!("{}: {e}", path.display())))
    }

    pub fn from_flags(cli: &Cli) -> Result<Self, CliError> {
        let quadrature = (cli.nodes.is_some() || cli.panels.is_some()).then_some(QuadratureOverride {
            nodes: cli.nodes,
            panels: cli.panels,
            target_rel_tol: None,
        });
        Ok(Self {
            mode: cli.mode,
            theorems: cli.theorem.clone(),
            functions: cli.function.clone(),
            intervals: cli.interval.iter().map(|s| parse_interval(s)).collect::<Result<_, _>>()?,
            alphas: cli.alpha.clone(),
            rs: cli.r.clone(),
            hs: cli.h.clone(),
            classes: cli.classes.clone(),
            seed: cli.seed,
            out: cli.out.clone(),
            format: cli.format,
            strict_preconditions: cli.strict_preconditions.map(|s| s == Switch::On),
            quadrature,
            tolerance: cli.tolerance,
            generator: cli.generator.clone(),
            trials: cli.trials,
            r_lhs: cli.r_lhs.clone(),
        })
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        let quadrature = match (self.quadrature, base.quadrature) {
            (Some(f), Some(b)) => Some(QuadratureOverride {
                nodes: f.nodes.or(b.nodes),
                panels: f.panels.or(b.panels),
                target_rel_tol: f.target_rel_tol.or(b.target_rel_tol),
            }),
            (f, b) => f.or(b),
        };
        RunConfig {
            mode: self.mode.or(base.mode),
            theorems: pick(self.theorems, base.theorems),
            functions: pick(self.functions, base.functions),
            intervals: pick(self.intervals, base.intervals),
            alphas: pick(self.alphas, base.alphas),
            rs: pick(self.rs, base.rs),
            hs: pick(self.hs, base.hs),
            classes: pick(self.classes, base.classes),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            strict_preconditions: self.strict_preconditions.or(base.strict_preconditions),
            quadrature,
            tolerance: self.tolerance.or(base.tolerance),
            generator: self.generator.or(base.generator),
            trials: self.trials.or(base.trials),
            r_lhs: self.r_lhs.or(base.r_lhs),
        }
    }

    pub fn resolve(&self) -> Result<Plan, CliError> {
        let mode = self.mode.ok_or_else(|| config_err("mode", "missing (eval, sweep, membership, reductions, falsify)"))?;
        let seed = self.seed.unwrap_or(0);

        let theorems = self
            .theorems
            .iter()
            .map(|s| s.parse::<TheoremId>().map_err(|e| config_err("theorem", e)))
            .collect::<Result<Vec<_>, _>>()?;
        let theorems = match (mode, theorems.is_empty()) {
            (Mode::Sweep, true) => TheoremId::FRACTIONAL.to_vec(),
            (Mode::Eval | Mode::Falsify, true) => return Err(config_err("theorem", format!("mode {mode:?} needs a theorem"))),
            (Mode::Falsify, false) if theorems.len() > 1 => return Err(config_err("theorem", "falsify takes exactly one theorem")),
            _ => theorems,
        };

        let intervals = self
            .intervals
            .iter()
            .map(|&[a, b]| Interval::new(a, b).map_err(|e| config_err("interval", e)))
            .collect::<Result<Vec<_>, _>>()?;
        let functions = if self.functions.is_empty() {
            if mode == Mode::Eval {
                return Err(config_err("function", "mode eval needs a function"));
            }
            default_corpus()
        } else {
            let domain = (intervals.len() == 1).then(|| intervals[0]);
            self.functions
                .iter()
                .map(|s| FunctionSpec::parse(s, domain).map_err(|e| config_err("function", e)))
                .collect::<Result<Vec<_>, _>>()?
        };

        let default_alphas: &[f64] = match mode {
            Mode::Eval => &[1.0],
            Mode::Reductions => &[0.5, 1.0, 2.0],
            _ => &[0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0],
        };
        let alphas = if self.alphas.is_empty() { default_alphas.to_vec() } else { self.alphas.clone() };
        for &a in &alphas {
            FracOrder::new(a).map_err(|e| config_err("alpha", e))?;
        }

        let default_rs: &[f64] = match mode {
            Mode::Reductions => &[0.25, 0.5, 0.75, 1.0],
            _ => &[0.25, 0.5, 1.0],
        };
        let rs = if self.rs.is_empty() { default_rs.to_vec() } else { self.rs.clone() };
        for &r in &rs {
            let lo_ok = if mode == Mode::Membership { r >= 0.0 } else { r > 0.0 };
            if !(lo_ok && r <= 1.0) {
                return Err(config_err("r", format!("{r} is outside (0, 1]")));
            }
        }

        let hs = self
            .hs
            .iter()
            .map(|s| s.parse::<HFunction>().map_err(|e| config_err("h", e)))
            .collect::<Result<Vec<_>, _>>()?;
        let hs = if !hs.is_empty() {
            hs
        } else {
            match mode {
                Mode::Sweep => vec![HFunction::Identity, HFunction::Constant, HFunction::Power { s: 0.5 }, HFunction::Reciprocal],
                Mode::Reductions | Mode::Membership => {
                    vec![HFunction::Identity, HFunction::Constant, HFunction::Power { s: 0.5 }]
                }
                Mode::Eval | Mode::Falsify => vec![HFunction::Identity],
            }
        };

        let classes = if self.classes.is_empty() {
            vec![
                ClassSel::Convex,
                ClassSel::Nonnegative,
                ClassSel::GodunovaLevin,
                ClassSel::PFunction,
                ClassSel::RConvex,
                ClassSel::HConvex,
            ]
        } else {
            self.classes.iter().map(|s| ClassSel::parse(s)).collect::<Result<_, _>>()?
        };

        let q = self.quadrature.unwrap_or(QuadratureOverride {
            nodes: None,
            panels: None,
            target_rel_tol: None,
        });
        let d = QuadratureSpec::default();
        let quad = QuadratureSpec::new(
            q.nodes.unwrap_or(d.nodes),
            q.panels.unwrap_or(d.panels),
            q.target_rel_tol.unwrap_or(d.target_rel_tol),
        )
        .map_err(|e| config_err("quadrature", e))?;

        let tolerance = self.tolerance.unwrap_or(1e-9);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(config_err("tolerance", format!("{tolerance} must be positive")));
        }
        let r_lhs = match &self.r_lhs {
            Some(s) => s.parse::<RLhsForm>().map_err(|e| config_err("r_lhs", e))?,
            None => RLhsForm::default(),
        };
        let opts = EvalOptions {
            quad,
            tolerance,
            strict: self.strict_preconditions.unwrap_or(true),
            sampling: SamplingPlan::default().with_seed(seed),
            r_lhs,
        };

        let generator = match (&self.generator, mode) {
            (Some(g), _) => Some(g.parse::<Generator>().map_err(|e| config_err("generator", e))?),
            (None, Mode::Falsify) => return Err(config_err("generator", "mode falsify needs a generator")),
            (None, _) => None,
        };
        let trials = self.trials.unwrap_or(200);
        if trials == 0 {
            return Err(config_err("trials", "must be at least 1"));
        }

        Ok(Plan {
            mode,
            theorems,
            functions,
            intervals: (!intervals.is_empty()).then_some(intervals),
            alphas,
            rs,
            hs,
            classes,
            seed,
            opts,
            generator,
            trials,
            format: self.format.unwrap_or_default(),
            out: self.out.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassSel {
    Convex,
    Nonnegative,
    GodunovaLevin,
    PFunction,
    /// Expanded over the r grid.
    RConvex,
    /// Expanded over the h list.
    HConvex,
}

impl ClassSel {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "convex" => Ok(Self::Convex),
            "nonnegative" => Ok(Self::Nonnegative),
            "q" | "godunova_levin" => Ok(Self::GodunovaLevin),
            "p" | "p_function" => Ok(Self::PFunction),
            "r" | "r_convex" => Ok(Self::RConvex),
            "h" | "h_convex" => Ok(Self::HConvex),
            _ => Err(config_err("class", format!("unknown class {s:?}"))),
        }
    }
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct Plan {
    pub mode: Mode,
    pub theorems: Vec<TheoremId>,
    pub functions: Vec<FunctionSpec>,
    pub intervals: Option<Vec<Interval>>,
    pub alphas: Vec<f64>,
    pub rs: Vec<f64>,
    pub hs: Vec<HFunction>,
    pub classes: Vec<ClassSel>,
    pub seed: u64,
    pub opts: EvalOptions,
    pub generator: Option<Generator>,
    pub trials: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("fracineq").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let file: RunConfig = serde_json::from_str(
            r#"{"mode":"sweep","alphas":[0.5],"seed":3,"quadrature":{"nodes":16,"panels":4}}"#,
        )
        .unwrap();
        let flags = RunConfig::from_flags(&cli(&["--alpha", "1,2", "--panels", "6"])).unwrap();
        let merged = flags.over(file);
        assert_eq!(merged.mode, Some(Mode::Sweep));
        assert_eq!(merged.alphas, vec![1.0, 2.0]);
        assert_eq!(merged.seed, Some(3));
        let q = merged.quadrature.unwrap();
        assert_eq!((q.nodes, q.panels), (Some(16), Some(6)));
    }

    #[test]
    fn negative_intervals_parse() {
        let c = RunConfig::from_flags(&cli(&["--interval", "-1,2"])).unwrap();
        assert_eq!(c.intervals, vec![[-1.0, 2.0]]);
        assert!(RunConfig::from_flags(&cli(&["--interval", "1"])).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"mode":"eval","alpah":[1]}"#).is_err());
    }

    #[test]
    fn resolve_reports_offending_field() {
        let base = RunConfig {
            mode: Some(Mode::Eval),
            theorems: vec!["HH_fractional".into()],
            functions: vec!["monomial:k=2".into()],
            ..RunConfig::default()
        };
        assert!(base.resolve().is_ok());
        for (bad, field) in [
            (RunConfig { alphas: vec![-1.0], ..base.clone() }, "alpha"),
            (RunConfig { rs: vec![2.0], ..base.clone() }, "r"),
            (RunConfig { theorems: vec!["XX".into()], ..base.clone() }, "theorem"),
            (RunConfig { functions: vec!["wave".into()], ..base.clone() }, "function"),
            (RunConfig { hs: vec!["pow:s=3".into()], ..base.clone() }, "h"),
            (RunConfig { mode: None, ..base.clone() }, "mode"),
        ] {
            match bad.resolve() {
                Err(CliError::Config(msg)) => assert!(msg.starts_with(field), "{msg}"),
                other => panic!("expected config error for {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn sweep_defaults() {
        let plan = RunConfig {
            mode: Some(Mode::Sweep),
            ..RunConfig::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(plan.theorems, TheoremId::FRACTIONAL.to_vec());
        assert_eq!(plan.functions.len(), 7);
        assert_eq!(plan.alphas.len(), 7);
        assert_eq!(plan.hs.len(), 4);
        assert_eq!(plan.seed, 0);
        assert!(plan.opts.strict);
    }
}
