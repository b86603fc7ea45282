use super::report::{BoundReport, Inputs};
use super::{EvalOptions, RLhsForm, TheoremId};
use crate::classes::membership::{
    check_convex, check_godunova_levin, check_h_convex, check_nonnegative, check_p_function, check_r_convex,
};
use crate::classes::{FunctionSpec, HFunction, MembershipReport};
use crate::error::{Error, Result};
use crate::fractional::{bracket, bracket_scale, FracOrder, Interval};
use crate::quadrature::{integrate_power_weight, UnitPoint, WithComplement};
use crate::special::log_beta;

#[derive(Clone, Copy)]
enum Requirement {
    Convex,
    Nonnegative,
    GodunovaLevin,
    PFunction,
    RConvex(f64),
    HConvex(HFunction),
    LeftEndNonnegative,
}

/// Runs the membership checks; returns whether all passed plus notes.
fn preconditions(
    theorem: TheoremId,
    f: &FunctionSpec,
    iv: Interval,
    reqs: &[Requirement],
    opts: &EvalOptions,
) -> Result<(bool, Vec<String>)> {
    let g = f.with_domain(iv)?;
    let plan = &opts.sampling;
    let mut notes = Vec::new();
    for &req in reqs {
        let outcome: Result<MembershipReport> = match req {
            Requirement::LeftEndNonnegative => {
                if !iv.starts_nonnegative() {
                    notes.push(format!("interval starts at a = {} < 0", iv.a()));
                }
                continue;
            }
            Requirement::Convex => check_convex(&g, plan),
            Requirement::Nonnegative => check_nonnegative(&g, plan),
            Requirement::GodunovaLevin => check_godunova_levin(&g, plan),
            Requirement::PFunction => check_p_function(&g, plan),
            Requirement::RConvex(r) => check_r_convex(&g, r, plan),
            Requirement::HConvex(h) => check_h_convex(&g, h, plan),
        };
        match outcome {
            Ok(rep) if rep.passed() => {}
            Ok(rep) => notes.push(format!(
                "{} fails the {} check (worst margin {:e})",
                rep.function, rep.class, rep.worst_margin
            )),
            Err(e) => notes.push(format!("membership check failed: {e}")),
        }
    }
    let met = notes.is_empty();
    if !met && opts.strict {
        return Err(Error::Precondition {
            theorem: theorem.to_string(),
            reason: notes.join("; "),
        });
    }
    Ok((met, notes))
}

fn endpoint(f: &FunctionSpec, x: f64) -> Result<f64> {
    let v = f.eval(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation { x, value: v })
    }
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "r (the bound holds for 0 < r ≤ 1)",
            value: r,
        })
    }
}

fn inputs(theorem: TheoremId, f: &FunctionSpec, iv: Interval) -> Inputs {
    Inputs {
        theorem,
        function: f.id(),
        a: iv.a(),
        b: iv.b(),
        alpha: None,
        r: None,
        h: None,
    }
}

/// (1/(b-a)) ∫_a^b f, by the α = 1 path of the weighted rule.
pub fn mean_value(f: &FunctionSpec, iv: Interval, opts: &EvalOptions) -> Result<f64> {
    let (a, b, w) = (iv.a(), iv.b(), iv.width());
    let g = WithComplement(|p: UnitPoint| {
        let x = if p.t <= 0.5 { a + w * p.t } else { b - w * p.complement };
        f.eval(x)
    });
    Ok(integrate_power_weight(&g, 1.0, &opts.quad)?.value)
}

/// f((a+b)/2) ≤ Γ(α+1)/(2(b-a)^α)·[J_{a+}^α f(b) + J_{b-}^α f(a)] ≤ (f(a)+f(b))/2
/// for convex f ≥ 0 with a ≥ 0.
pub fn eval_hh_fractional(f: &FunctionSpec, iv: Interval, alpha: FracOrder, opts: &EvalOptions) -> Result<BoundReport> {
    use Requirement::*;
    let id = TheoremId::HhFractional;
    let (met, notes) = preconditions(id, f, iv, &[Convex, Nonnegative, LeftEndNonnegative], opts)?;
    let br = bracket(f, iv, alpha, &opts.quad)?;
    let (fa, fb) = (endpoint(f, iv.a())?, endpoint(f, iv.b())?);
    let sides = [
        ("f_mid", endpoint(f, iv.midpoint())?),
        ("normalized_mean", br.normalized_mean),
        ("endpoint_mean", 0.5 * (fa + fb)),
    ];
    let inp = Inputs {
        alpha: Some(alpha.get()),
        ..inputs(id, f, iv)
    };
    BoundReport::assemble(inp, &sides, opts.tolerance, met, notes)
}

/// f((a+b)/2) ≤ 2Γ(α+1)/(b-a)^α·[J_{a+}^α f(b) + J_{b-}^α f(a)] for f ∈ Q(I), a ≥ 0.
pub fn eval_q_fractional(f: &FunctionSpec, iv: Interval, alpha: FracOrder, opts: &EvalOptions) -> Result<BoundReport> {
    use Requirement::*;
    let id = TheoremId::QFractional;
    let (met, notes) = preconditions(id, f, iv, &[GodunovaLevin, LeftEndNonnegative], opts)?;
    let br = bracket(f, iv, alpha, &opts.quad)?;
    let sides = [
        ("f_mid", endpoint(f, iv.midpoint())?),
        ("scaled_bracket", 2.0 * bracket_scale(iv, alpha) * br.bracket),
    ];
    let inp = Inputs {
        alpha: Some(alpha.get()),
        ..inputs(id, f, iv)
    };
    BoundReport::assemble(inp, &sides, opts.tolerance, met, notes)
}

/// f((a+b)/2) ≤ Γ(α+1)/(b-a)^α·[J_{a+}^α f(b) + J_{b-}^α f(a)] ≤ 2(f(a)+f(b)) for f ∈ P(I).
pub fn eval_p_fractional(f: &FunctionSpec, iv: Interval, alpha: FracOrder, opts: &EvalOptions) -> Result<BoundReport> {
    let id = TheoremId::PFractional;
    let (met, notes) = preconditions(id, f, iv, &[Requirement::PFunction], opts)?;
    let br = bracket(f, iv, alpha, &opts.quad)?;
    let (fa, fb) = (endpoint(f, iv.a())?, endpoint(f, iv.b())?);
    let sides = [
        ("f_mid", endpoint(f, iv.midpoint())?),
        ("scaled_bracket", bracket_scale(iv, alpha) * br.bracket),
        ("endpoint_bound", 2.0 * (fa + fb)),
    ];
    let inp = Inputs {
        alpha: Some(alpha.get()),
        ..inputs(id, f, iv)
    };
    BoundReport::assemble(inp, &sides, opts.tolerance, met, notes)
}

/// Bracket bound for positive r-convex f, 0 < r ≤ 1. The right side is
/// [c1 f(a)^r + c2 f(b)^r]^(1/r) + [c2 f(a)^r + c1 f(b)^r]^(1/r) with
/// c1 = (1/(α+1/r))^r and c2 = β(α, (r+1)/r)^r.
pub fn eval_r_fractional(
    f: &FunctionSpec,
    iv: Interval,
    alpha: FracOrder,
    r: f64,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    check_r(r)?;
    let id = TheoremId::RFractional;
    let (met, mut notes) = preconditions(id, f, iv, &[Requirement::RConvex(r)], opts)?;
    let al = alpha.get();
    let br = bracket(f, iv, alpha, &opts.quad)?;
    let lhs = match opts.r_lhs {
        RLhsForm::Printed => bracket_scale(iv, alpha) * br.bracket,
        RLhsForm::Proved => bracket_scale(iv, alpha) / al * br.bracket,
    };
    if opts.r_lhs == RLhsForm::Proved {
        notes.push("left side uses Γ(α)/(b-a)^α".to_string());
    }
    let (fa, fb) = (endpoint(f, iv.a())?, endpoint(f, iv.b())?);
    let c1 = (1.0 / (al + 1.0 / r)).powf(r);
    let c2 = (r * log_beta(al, (r + 1.0) / r)?).exp();
    let (pa, pb) = (fa.powf(r), fb.powf(r));
    let m1 = (c1 * pa + c2 * pb).powf(1.0 / r);
    let m2 = (c2 * pa + c1 * pb).powf(1.0 / r);
    let sides = [("lhs", lhs), ("rhs", m1 + m2)];
    let inp = Inputs {
        alpha: Some(al),
        r: Some(r),
        ..inputs(id, f, iv)
    };
    BoundReport::assemble(inp, &sides, opts.tolerance, met, notes)
}

/// f((a+b)/2)/(α h(½)) ≤ Γ(α)/(b-a)^α·[J_{a+}^α f(b) + J_{b-}^α f(a)]
///   ≤ (f(a)+f(b)) ∫₀¹ t^(α-1)[h(t)+h(1-t)] dt for f ∈ SX(h, I).
pub fn eval_h_fractional(
    f: &FunctionSpec,
    h: HFunction,
    iv: Interval,
    alpha: FracOrder,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    let id = TheoremId::HFractional;
    let al = alpha.get();
    let h_half = h.eval(0.5);
    if !(h_half > 0.0) {
        return Err(Error::Domain {
            what: "h(1/2) (must be positive)",
            value: h_half,
        });
    }
    let moment = h.moment(al, &opts.quad)?;
    let (met, notes) = preconditions(id, f, iv, &[Requirement::HConvex(h)], opts)?;
    let br = bracket(f, iv, alpha, &opts.quad)?;
    let (fa, fb) = (endpoint(f, iv.a())?, endpoint(f, iv.b())?);
    let sides = [
        ("scaled_f_mid", endpoint(f, iv.midpoint())? / (al * h_half)),
        ("weighted_bracket", bracket_scale(iv, alpha) / al * br.bracket),
        ("h_moment_bound", (fa + fb) * moment),
    ];
    let inp = Inputs {
        alpha: Some(al),
        h: Some(h.to_string()),
        ..inputs(id, f, iv)
    };
    BoundReport::assemble(inp, &sides, opts.tolerance, met, notes)
}

/// f((a+b)/2) ≤ mean ≤ (f(a)+f(b))/2 for convex f.
pub fn eval_hh_classical(f: &FunctionSpec, iv: Interval, opts: &EvalOptions) -> Result<BoundReport> {
    let id = TheoremId::HhClassical;
    let (met, notes) = preconditions(id, f, iv, &[Requirement::Convex], opts)?;
    let (fa, fb) = (endpoint(f, iv.a())?, endpoint(f, iv.b())?);
    let sides = [
        ("f_mid", endpoint(f, iv.midpoint())?),
        ("mean", mean_value(f, iv, opts)?),
        ("endpoint_mean", 0.5 * (fa + fb)),
    ];
    BoundReport::assemble(inputs(id, f, iv), &sides, opts.tolerance, met, notes)
}

/// f((a+b)/2) ≤ 4·mean for f ∈ Q(I).
pub fn eval_q_classical(f: &FunctionSpec, iv: Interval, opts: &EvalOptions) -> Result<BoundReport> {
    let id = TheoremId::QClassical;
    let (met, notes) = preconditions(id, f, iv, &[Requirement::GodunovaLevin], opts)?;
    let sides = [
        ("f_mid", endpoint(f, iv.midpoint())?),
        ("four_mean", 4.0 * mean_value(f, iv, opts)?),
    ];
    BoundReport::assemble(inputs(id, f, iv), &sides, opts.tolerance, met, notes)
}

/// f((a+b)/2) ≤ 2·mean ≤ 2(f(a)+f(b)) for f ∈ P(I).
pub fn eval_p_classical(f: &FunctionSpec, iv: Interval, opts: &EvalOptions) -> Result<BoundReport> {
    let id = TheoremId::PClassical;
    let (met, notes) = preconditions(id, f, iv, &[Requirement::PFunction], opts)?;
    let (fa, fb) = (endpoint(f, iv.a())?, endpoint(f, iv.b())?);
    let sides = [
        ("f_mid", endpoint(f, iv.midpoint())?),
        ("two_mean", 2.0 * mean_value(f, iv, opts)?),
        ("endpoint_bound", 2.0 * (fa + fb)),
    ];
    BoundReport::assemble(inputs(id, f, iv), &sides, opts.tolerance, met, notes)
}

/// mean ≤ (r/(r+1))^(1/r) (f(a)^r + f(b)^r)^(1/r) for positive r-convex f.
pub fn eval_r_classical(f: &FunctionSpec, iv: Interval, r: f64, opts: &EvalOptions) -> Result<BoundReport> {
    check_r(r)?;
    let id = TheoremId::RClassical;
    let (met, notes) = preconditions(id, f, iv, &[Requirement::RConvex(r)], opts)?;
    let (fa, fb) = (endpoint(f, iv.a())?, endpoint(f, iv.b())?);
    let coef = (r / (r + 1.0)).powf(1.0 / r);
    let sides = [
        ("mean", mean_value(f, iv, opts)?),
        ("power_bound", coef * (fa.powf(r) + fb.powf(r)).powf(1.0 / r)),
    ];
    let inp = Inputs {
        r: Some(r),
        ..inputs(id, f, iv)
    };
    BoundReport::assemble(inp, &sides, opts.tolerance, met, notes)
}

/// f((a+b)/2)/(2h(½)) ≤ mean ≤ (f(a)+f(b)) ∫₀¹ h for f ∈ SX(h, I).
pub fn eval_h_classical(f: &FunctionSpec, h: HFunction, iv: Interval, opts: &EvalOptions) -> Result<BoundReport> {
    let id = TheoremId::HClassical;
    let h_half = h.eval(0.5);
    if !(h_half > 0.0) {
        return Err(Error::Domain {
            what: "h(1/2) (must be positive)",
            value: h_half,
        });
    }
    let integral = h.unit_integral(&opts.quad)?;
    let (met, notes) = preconditions(id, f, iv, &[Requirement::HConvex(h)], opts)?;
    let (fa, fb) = (endpoint(f, iv.a())?, endpoint(f, iv.b())?);
    let sides = [
        ("scaled_f_mid", endpoint(f, iv.midpoint())? / (2.0 * h_half)),
        ("mean", mean_value(f, iv, opts)?),
        ("h_integral_bound", (fa + fb) * integral),
    ];
    let inp = Inputs {
        h: Some(h.to_string()),
        ..inputs(id, f, iv)
    };
    BoundReport::assemble(inp, &sides, opts.tolerance, met, notes)
}
