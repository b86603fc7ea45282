//! Gauss-Legendre quadrature on [0, 1], including the t^(α-1) endpoint weight.
//!
//! The weighted rule maps ∫₀¹ t^(α-1) g(t) dt to (1/α) ∫₀¹ g(u^(1/α)) du. The
//! transformed integrand is bounded whenever g is, but u^(1/α) still has a
//! derivative singularity at u = 0 (α > 1), and g itself may be singular at
//! t = 1. Both ends of the u-mesh are therefore graded geometrically. Points
//! are handed to integrands together with their complement 1 - t, computed
//! without cancellation, so integrands such as (1 - t)^(q-1) stay accurate right
//! up to the endpoint.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Panel order, composite subdivision count and accuracy target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub panels: usize,
    pub target_rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 32,
            panels: 8,
            target_rel_tol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes: usize, panels: usize, target_rel_tol: f64) -> Result<Self> {
        let spec = Self {
            nodes,
            panels,
            target_rel_tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::Domain {
                what: "quadrature nodes",
                value: self.nodes as f64,
            });
        }
        if self.panels < 1 {
            return Err(Error::Domain {
                what: "quadrature panels",
                value: self.panels as f64,
            });
        }
        if !(self.target_rel_tol > 0.0 && self.target_rel_tol.is_finite()) {
            return Err(Error::Domain {
                what: "quadrature target_rel_tol",
                value: self.target_rel_tol,
            });
        }
        Ok(())
    }

    /// The rule used for the error estimate: half the panels, or half the
    /// nodes when there is only one panel.
    fn coarse(&self) -> (usize, usize) {
        if self.panels >= 2 {
            (self.nodes, self.panels / 2)
        } else {
            ((self.nodes / 2).max(1), 1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// |value - value on the coarser level|.
    pub err_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn meets(&self, spec: &QuadratureSpec) -> bool {
        self.err_estimate <= spec.target_rel_tol * self.value.abs().max(1.0)
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes an `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess for the i-th largest root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared, immutable rule for order `n`; built on first use.
    pub fn cached(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(rule) = cache.read().expect("rule cache poisoned").get(&n) {
            return Arc::clone(rule);
        }
        let mut guard = cache.write().expect("rule cache poisoned");
        Arc::clone(guard.entry(n).or_insert_with(|| Arc::new(Self::new(n))))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Plain ∫_lo^hi f(x) dx.
    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A point of [0, 1] together with its complement 1 - t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPoint {
    pub t: f64,
    pub complement: f64,
}

impl UnitPoint {
    pub fn new(t: f64) -> Self {
        Self {
            t,
            complement: 1.0 - t,
        }
    }
}

/// Something that can be integrated over [0, 1].
pub trait UnitIntegrand {
    fn eval(&self, p: UnitPoint) -> f64;
}

impl<F: Fn(f64) -> f64> UnitIntegrand for F {
    fn eval(&self, p: UnitPoint) -> f64 {
        self(p.t)
    }
}

/// Wraps an integrand that wants the accurate complement as well.
pub struct WithComplement<F>(pub F);

impl<F: Fn(UnitPoint) -> f64> UnitIntegrand for WithComplement<F> {
    fn eval(&self, p: UnitPoint) -> f64 {
        (self.0)(p)
    }
}

/// Composite Gauss-Legendre estimate of ∫₀¹ g(t) dt.
pub fn integrate_smooth<G: UnitIntegrand + ?Sized>(g: &G, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let (fine, n_fine) = uniform_sum(g, spec.nodes, spec.panels)?;
    let (nodes, panels) = spec.coarse();
    let (coarse, n_coarse) = uniform_sum(g, nodes, panels)?;
    Ok(QuadResult {
        value: fine,
        err_estimate: (fine - coarse).abs(),
        evaluations: n_fine + n_coarse,
    })
}

fn uniform_sum<G: UnitIntegrand + ?Sized>(g: &G, nodes: usize, panels: usize) -> Result<(f64, usize)> {
    let rule = GaussLegendre::cached(nodes);
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = k as f64 * h;
        let hi = if k + 1 == panels { 1.0 } else { (k + 1) as f64 * h };
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut panel = 0.0;
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let t = mid + half * x;
            let complement = (1.0 - hi) + half * (1.0 - x);
            let v = g.eval(UnitPoint { t, complement });
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: t, value: v });
            }
            panel += w * v;
        }
        total += panel * half;
    }
    Ok((total, panels * rule.len()))
}

/// ∫₀¹ t^(α-1) g(t) dt via the substitution u = t^α.
pub fn integrate_power_weight<G: UnitIntegrand + ?Sized>(
    g: &G,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain {
            what: "fractional order alpha",
            value: alpha,
        });
    }
    spec.validate()?;
    let (fine, n_fine) = graded_sum(g, alpha, spec.nodes, spec.panels)?;
    let (nodes, panels) = spec.coarse();
    let (coarse, n_coarse) = graded_sum(g, alpha, nodes, panels)?;
    Ok(QuadResult {
        value: fine / alpha,
        err_estimate: (fine - coarse).abs() / alpha,
        evaluations: n_fine + n_coarse,
    })
}

const GRADING_RATIO: f64 = 0.125;
const GRADING_LEVELS: usize = 36;

/// Where a mesh segment measures its coordinate from.
#[derive(Debug, Clone, Copy)]
enum Anchor {
    /// coordinate is u itself
    Zero,
    /// coordinate is w = 1 - u
    One,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    anchor: Anchor,
    lo: f64,
    hi: f64,
}

fn push_graded(out: &mut Vec<Segment>, anchor: Anchor, width: f64) {
    let mut upper = width;
    for _ in 0..GRADING_LEVELS {
        let lower = upper * GRADING_RATIO;
        out.push(Segment {
            anchor,
            lo: lower,
            hi: upper,
        });
        upper = lower;
    }
    out.push(Segment {
        anchor,
        lo: 0.0,
        hi: upper,
    });
}

fn graded_mesh(panels: usize) -> Vec<Segment> {
    let mut mesh = Vec::with_capacity(2 * GRADING_LEVELS + panels + 2);
    if panels == 1 {
        push_graded(&mut mesh, Anchor::Zero, 0.5);
        push_graded(&mut mesh, Anchor::One, 0.5);
        return mesh;
    }
    let h = 1.0 / panels as f64;
    push_graded(&mut mesh, Anchor::Zero, h);
    for k in 1..panels - 1 {
        let (lo, hi) = (k as f64 * h, (k + 1) as f64 * h);
        if hi <= 0.5 {
            mesh.push(Segment {
                anchor: Anchor::Zero,
                lo,
                hi,
            });
        } else {
            mesh.push(Segment {
                anchor: Anchor::One,
                lo: 1.0 - hi,
                hi: 1.0 - lo,
            });
        }
    }
    push_graded(&mut mesh, Anchor::One, h);
    mesh
}

/// Returns ∫₀¹ g(u^(1/α)) du (without the 1/α factor) and the evaluation count.
fn graded_sum<G: UnitIntegrand + ?Sized>(g: &G, alpha: f64, nodes: usize, panels: usize) -> Result<(f64, usize)> {
    let rule = GaussLegendre::cached(nodes);
    let mesh = graded_mesh(panels);
    let inv_alpha = alpha.recip();
    let mut total = 0.0;
    for seg in &mesh {
        let half = 0.5 * (seg.hi - seg.lo);
        let mid = 0.5 * (seg.hi + seg.lo);
        let mut panel = 0.0;
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let s = mid + half * x;
            let ln_u = match seg.anchor {
                Anchor::Zero => s.ln(),
                Anchor::One => (-s).ln_1p(),
            };
            let e = ln_u * inv_alpha;
            let p = UnitPoint {
                t: e.exp(),
                complement: -e.exp_m1(),
            };
            let v = g.eval(p);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: p.t, value: v });
            }
            panel += w * v;
        }
        total += panel * half;
    }
    Ok((total, mesh.len() * rule.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta_fn;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rule_is_symmetric_and_normalized() {
        for n in [1, 2, 3, 7, 16, 32, 64] {
            let rule = GaussLegendre::new(n);
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "n = {n}, sum = {sum}");
            for i in 0..n {
                assert!((rule.nodes()[i] + rule.nodes()[n - 1 - i]).abs() < 1e-15);
                assert!((rule.weights()[i] - rule.weights()[n - 1 - i]).abs() < 1e-15);
                assert!(rule.weights()[i] > 0.0);
            }
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rule_matches_known_small_orders() {
        let two = GaussLegendre::new(2);
        assert_relative_eq!(two.nodes()[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        let three = GaussLegendre::new(3);
        assert_relative_eq!(three.nodes()[2], (0.6f64).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(three.weights()[1], 8.0 / 9.0, max_relative = 1e-15);
        assert_relative_eq!(three.weights()[0], 5.0 / 9.0, max_relative = 1e-15);
    }

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let n = 8;
        let rule = GaussLegendre::new(n);
        for k in 0..(2 * n) as i32 {
            let got = rule.integrate(0.0, 1.0, |x| x.powi(k));
            assert_relative_eq!(got, 1.0 / (k as f64 + 1.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn cached_rule_is_shared() {
        let a = GaussLegendre::cached(24);
        let b = GaussLegendre::cached(24);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, GaussLegendre::new(24));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(1, 8, 1e-10).is_err());
        assert!(QuadratureSpec::new(32, 0, 1e-10).is_err());
        assert!(QuadratureSpec::new(32, 8, 0.0).is_err());
        assert!(QuadratureSpec::new(2, 1, 1e-3).is_ok());
    }

    #[test]
    fn smooth_examples() {
        let spec = QuadratureSpec::default();
        let one = integrate_smooth(&|_t: f64| 1.0, &spec).unwrap();
        assert_relative_eq!(one.value, 1.0, max_relative = 1e-15);
        assert!(one.err_estimate < 1e-15);
        assert!(one.evaluations > 0);
        let lin = integrate_smooth(&|t: f64| t, &spec).unwrap();
        assert_relative_eq!(lin.value, 0.5, max_relative = 1e-15);
        let e = integrate_smooth(&|t: f64| t.exp(), &spec).unwrap();
        assert_relative_eq!(e.value, std::f64::consts::E - 1.0, max_relative = 1e-14);
        assert!(e.meets(&spec));
    }

    #[test]
    fn smooth_single_panel_uses_half_order_estimate() {
        let spec = QuadratureSpec::new(4, 1, 1e-6).unwrap();
        let r = integrate_smooth(&|t: f64| t.powi(5), &spec).unwrap();
        assert_relative_eq!(r.value, 1.0 / 6.0, max_relative = 1e-14);
        // the two-point coarse rule is not exact for t^5
        assert!(r.err_estimate > 1e-4);
        assert_eq!(r.evaluations, 4 + 2);
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let spec = QuadratureSpec::default();
        let err = integrate_smooth(&|t: f64| if t > 0.5 { f64::NAN } else { t }, &spec).unwrap_err();
        match err {
            Error::NonFiniteIntegrand { node, value } => {
                assert!(node > 0.5);
                assert!(value.is_nan());
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = integrate_power_weight(&|t: f64| if t < 0.01 { f64::INFINITY } else { 1.0 }, 0.5, &spec).unwrap_err();
        assert!(matches!(err, Error::NonFiniteIntegrand { .. }));
    }

    #[test]
    fn power_weight_domain() {
        let spec = QuadratureSpec::default();
        for bad in [0.0, -0.5, f64::NAN] {
            assert!(matches!(
                integrate_power_weight(&|_t: f64| 1.0, bad, &spec),
                Err(Error::Domain { .. })
            ));
        }
    }

    #[test]
    fn power_weight_examples() {
        let spec = QuadratureSpec::default();
        let r = integrate_power_weight(&|_t: f64| 1.0, 0.5, &spec).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-13);
        let r = integrate_power_weight(&|t: f64| t, 0.5, &spec).unwrap();
        assert_relative_eq!(r.value, 2.0 / 3.0, max_relative = 1e-12);
        // r = 1: (1 - t)^(1/r) against α = 1 is β(1, 2) = 1/2
        let r = integrate_power_weight(&|t: f64| 1.0 - t, 1.0, &spec).unwrap();
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-13);
    }

    #[test]
    fn weight_normalization() {
        let spec = QuadratureSpec::default();
        for alpha in [0.1, 0.25, 0.5, 1.0, 2.0, 5.0] {
            let r = integrate_power_weight(&|_t: f64| 1.0, alpha, &spec).unwrap();
            assert!((r.value - 1.0 / alpha).abs() <= 1e-12, "alpha = {alpha}: {}", r.value);
        }
    }

    #[test]
    fn monomials_against_closed_form() {
        // ∫ t^(α-1) t^k dt = 1/(α + k)
        let spec = QuadratureSpec::default();
        for alpha in [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 7.5, 50.0] {
            for k in 0..6 {
                let r = integrate_power_weight(&|t: f64| t.powi(k), alpha, &spec).unwrap();
                let exact = 1.0 / (alpha + k as f64);
                assert!(((r.value - exact) / exact).abs() <= 1e-11, "alpha {alpha}, k {k}");
            }
        }
    }

    #[test]
    fn beta_reproduction_grid() {
        let spec = QuadratureSpec::default();
        let grid = [0.25, 0.4, 0.5, 0.9, 1.0, 1.3, 2.0, 2.75, 4.0];
        for p in grid {
            for q in grid {
                let g = WithComplement(|pt: UnitPoint| pt.complement.powf(q - 1.0));
                let r = integrate_power_weight(&g, p, &spec).unwrap();
                let b = beta_fn(p, q).unwrap();
                assert!(((r.value - b) / b).abs() <= 1e-8, "p {p} q {q}: {} vs {b}", r.value);
            }
        }
    }

    #[test]
    fn complement_is_accurate_near_one() {
        // Graded nodes come within ~1e-33 of t = 1; the complement must not
        // collapse to zero there.
        let spec = QuadratureSpec::default();
        let g = WithComplement(|pt: UnitPoint| {
            assert!(pt.complement > 0.0);
            assert!((pt.t + pt.complement - 1.0).abs() < 1e-15);
            1.0
        });
        integrate_power_weight(&g, 0.7, &spec).unwrap();
    }

    #[test]
    fn refinement_does_not_inflate_error_estimate() {
        let integrands: [fn(f64) -> f64; 3] = [|t| t.exp(), |t| (3.0 * t).sin(), |t| 1.0 / (1.0 + t * t)];
        for g in integrands {
            for nodes in [2, 3, 4] {
                for panels in [1, 2, 4, 8] {
                    let coarse = integrate_smooth(&g, &QuadratureSpec::new(nodes, panels, 1e-10).unwrap()).unwrap();
                    let fine = integrate_smooth(&g, &QuadratureSpec::new(nodes, 2 * panels, 1e-10).unwrap()).unwrap();
                    assert!(fine.err_estimate <= 2.0 * coarse.err_estimate + 1e-14);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn power_weight_is_linear(alpha in 0.1f64..5.0, c1 in -3.0f64..3.0, c2 in -3.0f64..3.0) {
            let spec = QuadratureSpec::default();
            let f = |t: f64| t.exp();
            let g = |t: f64| (2.0 * t).cos();
            let both = integrate_power_weight(&|t: f64| c1 * f(t) + c2 * g(t), alpha, &spec).unwrap().value;
            let sep = c1 * integrate_power_weight(&f, alpha, &spec).unwrap().value
                + c2 * integrate_power_weight(&g, alpha, &spec).unwrap().value;
            prop_assert!((both - sep).abs() <= 1e-12 * (1.0 + sep.abs()));
        }
    }
}
