//! Quadrature against `dμ_α(x) = (2^{α+1} Γ(α+1))^{-1} |x|^{2α+1} dx` on
//! (-1,1) and weighted `L^p(dμ_α)` norms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::gauss_jacobi_unit;
use crate::specfun::{gamma, AlphaParam};
use crate::weights::{PowerWeight, Weight};

/// Nodes per half-interval used when no order is given.
pub const DEFAULT_ORDER: usize = 128;

/// Largest supported order; the Golub-Welsch eigenproblem loses weight
/// accuracy beyond it.
pub const MAX_ORDER: usize = 200;

/// `∫_{-1}^{1} dμ_α = 1 / (2^{α+1} Γ(α+2))`.
pub fn total_mass(alpha: AlphaParam) -> f64 {
    let a = alpha.value();
    1.0 / (2f64.powf(a + 1.0) * gamma(a + 2.0))
}

/// Symmetric Gauss rule for `dμ_α`: a Gauss-Jacobi rule for `x^{2α+1}` on
/// (0,1), reflected to (-1,0). Nodes never include 0 or ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    alpha: AlphaParam,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Builds the rule with `order` nodes on each half-interval.
pub fn build_rule(alpha: AlphaParam, order: usize) -> Result<QuadratureRule> {
    if order < 2 {
        return Err(Error::Order { order, detail: "need at least 2 nodes".into() });
    }
    if order > MAX_ORDER {
        return Err(Error::Order {
            order,
            detail: format!("ill-conditioned above {MAX_ORDER} nodes per half-interval"),
        });
    }
    let a = alpha.value();
    let (half_nodes, half_weights) = gauss_jacobi_unit(order, 2.0 * a + 1.0);
    let norm = 1.0 / (2f64.powf(a + 1.0) * gamma(a + 1.0));

    let mut nodes = Vec::with_capacity(2 * order);
    let mut weights = Vec::with_capacity(2 * order);
    for (x, w) in half_nodes.iter().zip(&half_weights).rev() {
        nodes.push(-x);
        weights.push(w * norm);
    }
    for (x, w) in half_nodes.iter().zip(&half_weights) {
        nodes.push(*x);
        weights.push(w * norm);
    }
    Ok(QuadratureRule { alpha, order, nodes, weights })
}

impl QuadratureRule {
    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }

    /// Nodes per half-interval.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`, summed in ascending node order.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut s = 0.0;
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { index: i, x });
            }
            s += w * v;
        }
        Ok(s)
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(x);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { index: i, x });
            }
            s += w * v;
        }
        Ok(s)
    }

    /// Integrates precomputed values at the nodes.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Exponent `p ∈ (1,∞)`, a weight and the order of the measure.
#[derive(Debug, Clone, PartialEq)]
pub struct LpNormSpec {
    p: f64,
    weight: PowerWeight,
    alpha: AlphaParam,
}

impl LpNormSpec {
    pub fn new(p: f64, weight: PowerWeight, alpha: AlphaParam) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(LpNormSpec { p, weight, alpha })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `p' = p/(p-1)`
    pub fn conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub fn weight(&self) -> &PowerWeight {
        &self.weight
    }

    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }
}

/// Share of the p-th power sum that the nodes adjacent to a singular point
/// may carry before the integrand is declared divergent.
const BLOWUP_SHARE: f64 = 0.5;

/// `(∫ |f W|^p dμ_α)^{1/p}` on the rule's nodes.
///
/// Returns `+∞` when the integrand is not finite at some node or when the
/// nodes adjacent to a singular point (0, ±1 or a weight factor) carry more
/// than half of the sum, which is the discrete signature of a non-integrable
/// singularity. This is a heuristic; see [`lp_norm_diverges`] for the
/// refinement test.
pub fn weighted_lp_norm<F: Fn(f64) -> f64>(rule: &QuadratureRule, f: F, spec: &LpNormSpec) -> Result<f64> {
    if rule.alpha() != spec.alpha() {
        return Err(Error::InvalidParameter(format!(
            "rule alpha {} does not match norm alpha {}",
            rule.alpha().value(),
            spec.alpha().value()
        )));
    }
    let p = spec.p();
    let contrib: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| w * (f(x) * spec.weight().eval(x)).abs().powf(p))
        .collect();
    if contrib.iter().any(|c| !c.is_finite()) {
        return Ok(f64::INFINITY);
    }
    let total: f64 = contrib.iter().sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let mut singular = vec![-1.0, 0.0, 1.0];
    singular.extend(spec.weight().singularities());
    if rule.order() >= 8 {
        for s in singular {
            let left = rule.nodes().iter().rposition(|&x| x < s);
            let right = rule.nodes().iter().position(|&x| x > s);
            let near: f64 = left.into_iter().chain(right).map(|i| contrib[i]).sum();
            if near > BLOWUP_SHARE * total {
                return Ok(f64::INFINITY);
            }
        }
    }
    Ok(total.powf(1.0 / p))
}

/// Refinement test: evaluates the norm on rules of order `order/4`,
/// `order/2` and `order`; divergence is reported when both successive
/// ratios are at least 1.05.
pub fn lp_norm_diverges<F: Fn(f64) -> f64>(order: usize, f: F, spec: &LpNormSpec) -> Result<bool> {
    let orders = [(order / 4).max(2), (order / 2).max(2), order];
    let mut vals = [0.0; 3];
    for (v, &o) in vals.iter_mut().zip(&orders) {
        let rule = build_rule(spec.alpha(), o)?;
        *v = weighted_lp_norm(&rule, &f, spec)?;
    }
    if vals.iter().any(|v| v.is_infinite()) {
        return Ok(true);
    }
    Ok(vals[0] > 0.0 && vals[1] >= 1.05 * vals[0] && vals[2] >= 1.05 * vals[1])
}
