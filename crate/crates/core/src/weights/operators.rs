//! Model operators: the Calderón operator on (0,2), the operator `J` and
//! the finite Hilbert transform on (-1,1).

use crate::error::{Error, Result};
use crate::quad::{principal_value, ShellRule};

/// `Ag(x) = (1/x) ∫_0^x |g| + ∫_x^2 |g(y)|/y dy` for `0 < x < 2`.
/// Returns `+∞` when either integral diverges.
pub fn calderon<G: Fn(f64) -> f64>(g: G, x: f64) -> Result<f64> {
    calderon_with_breaks(g, &[], x)
}

/// [`calderon`] for `g` smooth between the points of `breaks`.
pub fn calderon_with_breaks<G: Fn(f64) -> f64>(g: G, breaks: &[f64], x: f64) -> Result<f64> {
    if !(0.0 < x && x < 2.0) {
        return Err(Error::Domain {
            func: "calderon",
            detail: format!("x = {x} outside (0, 2)"),
        });
    }
    let shells = ShellRule::new();
    let hardy = shells.integrate(|y| g(y).abs(), 0.0, x, breaks) / x;
    let tail = shells.integrate(|y| g(y).abs() / y, x, 2.0, breaks);
    Ok(hardy + tail)
}

/// `Jf(x) = ∫_{-1}^{1} f(y)/(2-x-y) dy` for `-1 < x < 1`.
pub fn operator_j<F: Fn(f64) -> f64>(f: F, x: f64) -> Result<f64> {
    operator_j_with_breaks(f, &[], x)
}

pub fn operator_j_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], x: f64) -> Result<f64> {
    if !(-1.0 < x && x < 1.0) {
        return Err(Error::Domain {
            func: "operator_j",
            detail: format!("x = {x} outside (-1, 1)"),
        });
    }
    let v = ShellRule::new().integrate(|y| f(y) / (2.0 - x - y), -1.0, 1.0, breaks);
    Ok(v)
}

/// Accepted disagreement between the extrapolated and paired principal
/// values, relative to `1 + |Hf(x)|`.
pub const HILBERT_TOL: f64 = 1e-9;

/// `Hf(x) = PV ∫_{-1}^{1} f(y)/(x-y) dy`. `f` must be Hölder continuous
/// near `x`.
pub fn hilbert<F: Fn(f64) -> f64>(f: F, x: f64) -> Result<f64> {
    hilbert_with_breaks(f, &[], x)
}

/// [`hilbert`] for `f` smooth between the points of `breaks`.
pub fn hilbert_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], x: f64) -> Result<f64> {
    if !(-1.0 < x && x < 1.0) {
        return Err(Error::Domain {
            func: "hilbert",
            detail: format!("x = {x} outside (-1, 1)"),
        });
    }
    let (v, spread) = principal_value(f, x, breaks, 0.25, 1.0);
    if !v.is_finite() || spread > HILBERT_TOL * (1.0 + v.abs()) {
        return Err(Error::PrincipalValue { x, spread });
    }
    Ok(v)
}
