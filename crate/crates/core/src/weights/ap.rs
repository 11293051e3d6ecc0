//! Muckenhoupt `A_p` and `A_p^δ` conditions for pairs of weights on (-1,1).

use serde::{Serialize, Serializer};

use super::power::{PowerWeight, Weight};
use crate::error::{Error, Result};
use crate::quad::ShellRule;
use crate::specfun::AlphaParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApVerdict {
    Satisfied,
    Violated,
    Inconclusive,
}

/// Outcome of [`ap_numeric`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApReport {
    pub p: f64,
    pub delta: f64,
    /// Largest `A_p` quotient seen, `+∞` when an average diverges.
    #[serde(serialize_with = "finite_or_inf")]
    pub constant_estimate: f64,
    pub verdict: ApVerdict,
    pub witness_interval: Option<[f64; 2]>,
    pub intervals_tested: usize,
}

fn finite_or_inf<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("inf")
    }
}

const GROWTH_FACTOR: f64 = 1.2;
const GROWTH_RUN: usize = 4;
const STABLE_FACTOR: f64 = 1.05;

/// Numeric semi-decision of `(u^δ, v^δ) ∈ A_p(-1,1)`.
///
/// The quotient `(avg_I u^δ)(avg_I v^{-δ/(p-1)})^{p-1}` is evaluated on the
/// intervals `[c-h, c+h]`, `[c, c+h]`, `[c-h, c]` (clipped to [-1,1]) for
/// `h = 2^{-k}`, `k = 0..=budget`, and `c` ranging over -1, 0, 1 and the
/// singular points of both weights. A divergent average or a supremum that
/// grows by 1.2× per scale over the last four scales gives `Violated`; a
/// supremum that grows by at most 5% per scale over the last four scales
/// gives `Satisfied`; anything else is `Inconclusive`.
pub fn ap_numeric(u: &dyn Weight, v: &dyn Weight, p: f64, delta: f64, budget: usize) -> Result<ApReport> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    if !(delta.is_finite() && delta >= 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be >= 1")));
    }
    if budget < GROWTH_RUN + 1 {
        return Err(Error::InvalidParameter(format!("budget {budget} must be at least {}", GROWTH_RUN + 1)));
    }
    let mut sing: Vec<f64> = u
        .singularities()
        .into_iter()
        .chain(v.singularities())
        .filter(|t| (-1.0..=1.0).contains(t))
        .collect();
    let mut anchors = sing.clone();
    anchors.extend([-1.0, 0.0, 1.0]);
    anchors.sort_by(f64::total_cmp);
    anchors.dedup();
    sing.sort_by(f64::total_cmp);
    sing.dedup();

    let ru = delta;
    let rv = -delta / (p - 1.0);
    let shells = ShellRule::new();
    let quotient = |a: f64, b: f64| -> f64 {
        let len = b - a;
        let iu = power_integral(u, ru, a, b, &sing, &shells);
        if iu == 0.0 {
            return 0.0;
        }
        let iv = power_integral(v, rv, a, b, &sing, &shells);
        (iu / len) * (iv / len).powf(p - 1.0)
    };

    let mut tested = 0;
    let mut sups = Vec::with_capacity(budget + 1);
    let mut best = 0.0f64;
    let mut best_interval = None;
    let mut last_witness = None;
    for k in 0..=budget {
        let h = 0.5f64.powi(k as i32);
        let mut sup = 0.0f64;
        let mut arg = None;
        for &c in &anchors {
            for (a, b) in [(c - h, c + h), (c, c + h), (c - h, c)] {
                let (a, b) = (a.max(-1.0), b.min(1.0));
                if b - a <= 0.0 {
                    continue;
                }
                tested += 1;
                let q = quotient(a, b);
                if q.is_nan() || q > sup {
                    sup = if q.is_nan() { f64::INFINITY } else { q };
                    arg = Some([a, b]);
                }
                if sup.is_infinite() {
                    break;
                }
            }
            if sup.is_infinite() {
                break;
            }
        }
        if sup > best {
            best = sup;
            best_interval = arg;
        }
        last_witness = arg;
        sups.push(sup);
        if sup.is_infinite() {
            return Ok(ApReport {
                p,
                delta,
                constant_estimate: f64::INFINITY,
                verdict: ApVerdict::Violated,
                witness_interval: arg,
                intervals_tested: tested,
            });
        }
    }

    let ratios: Vec<f64> = sups.windows(2).map(|w| w[1] / w[0]).collect();
    let tail = &ratios[ratios.len() - GROWTH_RUN..];
    let (verdict, witness) = if tail.iter().all(|r| *r >= GROWTH_FACTOR) {
        (ApVerdict::Violated, last_witness)
    } else if tail.iter().all(|r| *r <= STABLE_FACTOR || !r.is_finite()) {
        (ApVerdict::Satisfied, best_interval)
    } else {
        (ApVerdict::Inconclusive, best_interval)
    };
    Ok(ApReport {
        p,
        delta,
        constant_estimate: best,
        verdict,
        witness_interval: witness,
        intervals_tested: tested,
    })
}

/// `∫_a^b w^r dx`, split at singular points, `+∞` when divergent.
fn power_integral(w: &dyn Weight, r: f64, a: f64, b: f64, sing: &[f64], shells: &ShellRule) -> f64 {
    let mut pts = vec![a, b];
    pts.extend(sing.iter().copied().filter(|t| *t > a && *t < b));
    pts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for win in pts.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let half = 0.5 * (hi - lo);
        total += shells.towards(|off| w.eval_near(lo, off).powf(r), lo, half);
        total += shells.towards(|off| w.eval_near(hi, -off).powf(r), hi, half);
        if !total.is_finite() {
            return f64::INFINITY;
        }
    }
    total
}

/// Analytic `(u^δ, v^δ) ∈ A_p(-1,1)` for power-like weights: at every
/// singular point `c` in [-1,1] with exponents `a` of `u` and `b` of `v`,
/// `δa > -1`, `δb < p-1` and `a >= b`.
pub fn power_pair_in_ap(u: &PowerWeight, v: &PowerWeight, p: f64, delta: f64) -> bool {
    let mut points: Vec<f64> = vec![-1.0, 0.0, 1.0];
    points.extend(u.factors().iter().chain(v.factors()).map(|f| f.0));
    points
        .into_iter()
        .filter(|c| (-1.0..=1.0).contains(c))
        .all(|c| {
            let (a, b) = (u.exponent_at(c), v.exponent_at(c));
            delta * a > -1.0 && delta * b < p - 1.0 && a >= b
        })
}

/// Whether `|x|^b (1-x)^A (1+x)^B` as `U = V` gives uniformly bounded
/// partial sums on `L^p(dμ_α)`.
pub fn corollary_predicate(alpha: AlphaParam, p: f64, b: f64, a_exp: f64, b_exp: f64) -> bool {
    let a = alpha.value();
    let plus = (a + 0.5).max(0.0);
    let mid = b * p + 2.0 * a + 1.0;
    -1.0 < a_exp * p
        && a_exp * p < p - 1.0
        && -1.0 < b_exp * p
        && b_exp * p < p - 1.0
        && -1.0 + p * plus < mid
        && mid < p - 1.0 + p * (2.0 * a + 1.0) - p * plus
}

/// Endpoints of the unweighted range of `p`; `(1, ∞)` when `α < -1/2`.
pub fn unweighted_p_range(alpha: AlphaParam) -> (f64, f64) {
    let a = alpha.value();
    if a < -0.5 {
        (1.0, f64::INFINITY)
    } else {
        (4.0 * (a + 1.0) / (2.0 * a + 3.0), 4.0 * (a + 1.0) / (2.0 * a + 1.0))
    }
}

/// Hypotheses of the sufficiency results (`thm1` for `α >= -1/2`, `thm2`
/// for `α < -1/2`) and the necessary conditions `thm3_necessary`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremConditions {
    pub thm1: bool,
    pub thm2: bool,
    pub thm3_necessary: bool,
}

fn with_origin_power(w: &PowerWeight, p: f64, extra: f64) -> PowerWeight {
    w.pow(p).mul(&PowerWeight::abs_power(extra))
}

/// Evaluates the theorem hypotheses for power-like `U`, `V`. For such
/// weights all conditions are open in δ, so `delta = 1` also stands for
/// "some δ > 1".
pub fn theorem_conditions(alpha: AlphaParam, p: f64, u: &dyn Weight, v: &dyn Weight, delta: f64) -> Result<TheoremConditions> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    if !(delta.is_finite() && delta >= 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be >= 1")));
    }
    let (u, v) = match (u.as_power(), v.as_power()) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(Error::NotPowerLike),
    };
    let a = alpha.value();
    let h = a + 0.5;
    let q = p / (p - 1.0);

    let thm1 = a >= -0.5 && {
        let e = h * (2.0 - p);
        power_pair_in_ap(&with_origin_power(u, p, e), &with_origin_power(v, p, e), p, delta)
    };
    let thm2 = a < -0.5 && {
        let e1 = (2.0 * a + 1.0) * (1.0 - p);
        let e2 = 2.0 * a + 1.0;
        power_pair_in_ap(&with_origin_power(u, p, e1), &with_origin_power(v, p, e1), p, delta)
            && power_pair_in_ap(&with_origin_power(u, p, e2), &with_origin_power(v, p, e2), p, delta)
    };

    let integrable = |w: &PowerWeight| {
        let mut pts = vec![-1.0, 0.0, 1.0];
        pts.extend(w.factors().iter().map(|f| f.0));
        pts.into_iter()
            .filter(|c| (-1.0..=1.0).contains(c))
            .all(|c| w.exponent_at(c) > -1.0)
    };
    let dominated = {
        let mut pts = vec![-1.0, 0.0, 1.0];
        pts.extend(u.factors().iter().chain(v.factors()).map(|f| f.0));
        pts.into_iter()
            .filter(|c| (-1.0..=1.0).contains(c))
            .all(|c| u.exponent_at(c) >= v.exponent_at(c))
    };
    let thm3_necessary = dominated
        && integrable(&with_origin_power(u, p, h * (2.0 - p)))
        && integrable(&with_origin_power(v, -q, h * (2.0 - q)))
        && integrable(&with_origin_power(u, p, 2.0 * a + 1.0))
        && integrable(&with_origin_power(v, -q, 2.0 * a + 1.0));
    Ok(TheoremConditions { thm1, thm2, thm3_necessary })
}
