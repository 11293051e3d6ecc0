//! Bessel-derived special functions and the positive zeros of `J_{α+1}`.
//!
//! The central object is the entire even function `J_ν(z)/z^ν`, evaluated
//! from its power series for small arguments, Bessel's integral for
//! intermediate ones and the Hankel asymptotic expansion for large ones. Everything else (`J_ν`, `𝓘_α`, `E_α`) is
//! expressed through it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::quad::gauss_legendre;

/// Arguments beyond this magnitude are rejected by the Bessel evaluators.
pub const BESSEL_ARG_CAP: f64 = 1.0e7;

/// `𝓘_α` grows like `e^{|z|}`; beyond this the series overflows.
pub const SCRIPT_I_ARG_CAP: f64 = 700.0;

/// Lower bound of the series/asymptotic switchover.
const SERIES_SWITCH_MIN: f64 = 25.0;

/// Largest supported `α`.
pub const ALPHA_MAX: f64 = 40.0;

/// Largest Bessel order accepted by the evaluators.
const NU_MAX: f64 = ALPHA_MAX + 10.0;

const ZERO_SCAN_STEP: f64 = 0.5;
const BISECTION_WIDTH: f64 = 1.0e-6;
const NEWTON_REL_TOL: f64 = 1.0e-13;

/// The order `α > -1` of the expansion.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlphaParam(f64);

impl AlphaParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > -1.0 && alpha <= ALPHA_MAX {
            Ok(AlphaParam(alpha))
        } else {
            Err(Error::InvalidAlpha(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `(α + 1/2)_+`
    pub fn half_shift_positive(self) -> f64 {
        (self.0 + 0.5).max(0.0)
    }

    /// `2^α Γ(α+1)`, the factor linking `𝓘_α(iz)` to `J_α(z)/z^α`.
    pub fn bessel_scale(self) -> f64 {
        2f64.powf(self.0) * gamma(self.0 + 1.0)
    }
}

impl TryFrom<f64> for AlphaParam {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        AlphaParam::new(v)
    }
}

impl From<AlphaParam> for f64 {
    fn from(a: AlphaParam) -> f64 {
        a.0
    }
}

/// Gamma function: exact products at positive integers, Lanczos elsewhere.
#[inline]
pub fn gamma(x: f64) -> f64 {
    if x.fract() == 0.0 && (1.0..=171.0).contains(&x) {
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    statrs::function::gamma::gamma(x)
}

fn check_order(func: &'static str, nu: f64) -> Result<()> {
    if nu.is_finite() && nu > -1.0 && nu <= NU_MAX {
        Ok(())
    } else {
        Err(Error::Domain {
            func,
            detail: format!("order nu = {nu} must lie in (-1, {NU_MAX}]"),
        })
    }
}

fn series_switch(nu: f64) -> f64 {
    SERIES_SWITCH_MIN.max(nu)
}

fn hankel_switch(nu: f64) -> f64 {
    SERIES_SWITCH_MIN.max(nu * nu)
}

/// `Σ (-1)^n (z/2)^{2n} / (n! (ν+1)_n)`, summed in double-double.
fn even_series_sum(nu: f64, z: f64) -> f64 {
    let half = 0.5 * z;
    let q = Dd::prod_f64(half, half);
    let mut term = Dd::from_f64(1.0);
    let mut sum = term;
    let mut largest = 1.0f64;
    for n in 1..2000u32 {
        let nf = f64::from(n);
        let denom = Dd::sum_f64(nf, nu).mul_f64(nf);
        term = term.mul(q).div(denom).neg();
        sum = sum.add(term);
        let t = term.abs_hi();
        largest = largest.max(t);
        if nf > half && t <= 1.0e-33 * largest {
            break;
        }
    }
    sum.to_f64()
}

/// `J_ν(z) = (1/π)∫_0^π cos(νθ - z sin θ) dθ - (sin νπ/π)∫_0^∞ e^{-z sinh t - νt} dt`
/// by composite Gauss-Legendre, for `z >= 25`.
fn bessel_j_integral(nu: f64, z: f64) -> f64 {
    let (gx, gw) = gauss_legendre(16);
    let composite = |g: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize| -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let mid = a + (k as f64 + 0.5) * h;
                gx.iter().zip(&gw).map(|(x, w)| w * g(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
            })
            .sum()
    };
    let panels = ((nu.abs() + z) / 2.0).ceil() as usize + 2;
    let oscillatory = composite(&|t: f64| (nu * t - z * t.sin()).cos(), 0.0, PI, panels);
    let sin_nu = (nu * PI).sin();
    let tail = if sin_nu == 0.0 {
        0.0
    } else {
        let end = (40.0 / z).asinh();
        sin_nu * composite(&|t: f64| (-z * t.sinh() - nu * t).exp(), 0.0, end, 8)
    };
    (oscillatory - tail) / PI
}

/// Hankel asymptotic expansion of `J_ν(z)` for large positive `z`.
fn bessel_j_asymptotic(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    for k in 1..200u32 {
        let kf = f64::from(k);
        let odd = 2.0 * kf - 1.0;
        let next = a * (mu - odd * odd) / (8.0 * kf * z);
        if next == 0.0 || next.abs() > a.abs() {
            break;
        }
        a = next;
        // a_k enters P for even k and Q for odd k with alternating signs
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if a.abs() < 1.0e-17 {
            break;
        }
    }
    let phase = nu * FRAC_PI_2 + FRAC_PI_4;
    let (sz, cz) = z.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cz * cp + sz * sp;
    let sin_chi = sz * cp - cz * sp;
    (2.0 / (PI * z)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// The entire even function `J_ν(z)/z^ν`.
///
/// Uses the power series below `|z| = max(25, ν)`, Bessel's integral up to
/// `max(25, ν²)` and the Hankel asymptotic expansion above it.
pub fn bessel_j_even(nu: f64, z: f64) -> Result<f64> {
    check_order("bessel_j_even", nu)?;
    if !z.is_finite() || z.abs() > BESSEL_ARG_CAP {
        return Err(Error::Range {
            func: "bessel_j_even",
            z: z.abs(),
            cap: BESSEL_ARG_CAP,
        });
    }
    let a = z.abs();
    if a < series_switch(nu) {
        let lead = 1.0 / (2f64.powf(nu) * gamma(nu + 1.0));
        Ok(lead * even_series_sum(nu, a))
    } else {
        Ok(bessel_j_large(nu, a) / a.powf(nu))
    }
}

fn bessel_j_large(nu: f64, z: f64) -> f64 {
    if z < hankel_switch(nu) {
        bessel_j_integral(nu, z)
    } else {
        bessel_j_asymptotic(nu, z)
    }
}

/// Bessel function of the first kind `J_ν(z)` for `z > 0`.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            func: "bessel_j",
            detail: format!("z = {z} must be positive"),
        });
    }
    check_order("bessel_j", nu)?;
    if z.abs() > BESSEL_ARG_CAP {
        return Err(Error::Range {
            func: "bessel_j",
            z,
            cap: BESSEL_ARG_CAP,
        });
    }
    if z < series_switch(nu) {
        Ok(z.powf(nu) * bessel_j_even(nu, z)?)
    } else {
        Ok(bessel_j_large(nu, z))
    }
}

/// `𝓘_α(z) = Γ(α+1) Σ (z/2)^{2n} / (n! Γ(n+α+1))` for real `z`.
pub fn script_i(alpha: AlphaParam, z: f64) -> Result<f64> {
    if !z.is_finite() || z.abs() > SCRIPT_I_ARG_CAP {
        return Err(Error::Range {
            func: "script_i",
            z: z.abs(),
            cap: SCRIPT_I_ARG_CAP,
        });
    }
    let a = alpha.value();
    let q = 0.25 * z * z;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for n in 1..5000u32 {
        let nf = f64::from(n);
        term *= q / (nf * (nf + a));
        sum += term;
        if term <= 1.0e-17 * sum {
            break;
        }
    }
    if sum.is_finite() {
        Ok(sum)
    } else {
        Err(Error::Range {
            func: "script_i",
            z: z.abs(),
            cap: SCRIPT_I_ARG_CAP,
        })
    }
}

/// `𝓘_α(it) = 2^α Γ(α+1) J_α(t)/t^α` for real `t`.
pub fn script_i_imag(alpha: AlphaParam, t: f64) -> Result<f64> {
    Ok(alpha.bessel_scale() * bessel_j_even(alpha.value(), t)?)
}

/// `𝓘_α(z)` for complex `z` from the power series directly.
fn script_i_complex(a: f64, z: Complex64) -> Complex64 {
    let q = 0.25 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..5000u32 {
        let nf = f64::from(n);
        term *= q / (nf * (nf + a));
        sum += term;
        if term.norm() <= 1.0e-17 * sum.norm().max(1e-300) && nf > 0.5 * z.norm() {
            break;
        }
    }
    sum
}

/// `E_α(ix)` for real `x`: `2^α Γ(α+1) (J_α(x)/x^α + i x J_{α+1}(x)/x^{α+1})`.
pub fn e_alpha_imag(alpha: AlphaParam, x: f64) -> Result<Complex64> {
    if x == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let a = alpha.value();
    let scale = alpha.bessel_scale();
    let re = scale * bessel_j_even(a, x)?;
    let im = scale * x * bessel_j_even(a + 1.0, x)?;
    Ok(Complex64::new(re, im))
}

/// The Dunkl kernel `E_α(z) = 𝓘_α(z) + z/(2(α+1)) 𝓘_{α+1}(z)`.
///
/// On the imaginary axis the Bessel form is used; on the real axis the
/// positive series. Elsewhere the complex series is summed directly, which
/// is not asymptotically accelerated.
pub fn e_alpha(alpha: AlphaParam, z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > SCRIPT_I_ARG_CAP {
        return Err(Error::Range {
            func: "e_alpha",
            z: z.norm(),
            cap: SCRIPT_I_ARG_CAP,
        });
    }
    let a = alpha.value();
    if z.re == 0.0 {
        return e_alpha_imag(alpha, z.im);
    }
    let shifted = AlphaParam(a + 1.0);
    if z.im == 0.0 {
        let x = z.re;
        let v = script_i(alpha, x)? + x / (2.0 * (a + 1.0)) * script_i(shifted, x)?;
        return Ok(Complex64::new(v, 0.0));
    }
    let v = script_i_complex(a, z) + z / (2.0 * (a + 1.0)) * script_i_complex(a + 1.0, z);
    Ok(v)
}

/// Increasing positive zeros `s_1 < s_2 < …` of `J_{α+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTable {
    alpha: AlphaParam,
    zeros: Vec<f64>,
}

impl ZeroTable {
    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }

    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// `s_j` for `1 <= j <= count`.
    pub fn get(&self, j: usize) -> Option<f64> {
        j.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }

    /// Signed frequency: `s_{-j} = -s_j`, `s_0 = 0`.
    pub fn signed(&self, j: i64) -> Option<f64> {
        let s = if j == 0 {
            0.0
        } else {
            self.get(j.unsigned_abs() as usize)?
        };
        Some(if j < 0 { -s } else { s })
    }

    /// `M_n = (s_n + s_{n+1}) / 2`; needs `n + 1 <= count`.
    pub fn midpoint(&self, n: usize) -> Option<f64> {
        Some(0.5 * (self.get(n)? + self.get(n + 1)?))
    }

    /// Writes `j,s_j` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "j,s_j")?;
        for (i, s) in self.zeros.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, g17(*s))?;
        }
        Ok(())
    }
}

// A positive multiple of J_ν(z)/z^ν with its derivative: the bare series
// sum below the switch, J_ν itself above it.
fn zero_fn_with_derivative(nu: f64, z: f64) -> Result<(f64, f64)> {
    check_order("build_zero_table", nu + 1.0)?;
    if z > BESSEL_ARG_CAP {
        return Err(Error::Range {
            func: "build_zero_table",
            z,
            cap: BESSEL_ARG_CAP,
        });
    }
    if z < series_switch(nu) {
        let f = even_series_sum(nu, z);
        let df = -z * even_series_sum(nu + 1.0, z) / (2.0 * (nu + 1.0));
        Ok((f, df))
    } else {
        let j = bessel_j_large(nu, z);
        Ok((j, nu / z * j - bessel_j_large(nu + 1.0, z)))
    }
}

fn zero_fn(nu: f64, z: f64) -> Result<f64> {
    Ok(zero_fn_with_derivative(nu, z)?.0)
}

fn refine_zero(nu: f64, index: usize, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let f_mid = zero_fn(nu, mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..60 {
        let (f, df) = zero_fn_with_derivative(nu, z)?;
        if f == 0.0 {
            return Ok(z);
        }
        let step = f / df;
        let next = z - step;
        if !next.is_finite() || next < lo - BISECTION_WIDTH || next > hi + BISECTION_WIDTH {
            return Err(Error::ZeroConvergence {
                index,
                detail: format!("Newton left the bracket [{lo}, {hi}] at z = {z}"),
            });
        }
        z = next;
        if step.abs() <= NEWTON_REL_TOL * z.abs() {
            return Ok(z);
        }
    }
    Err(Error::ZeroConvergence {
        index,
        detail: format!("Newton did not reach relative step {NEWTON_REL_TOL:e}"),
    })
}

/// Locates `s_1..s_{n_max}` by scanning `J_{α+1}(z)/z^{α+1}` for sign
/// changes on a grid of step 0.5, then bisecting to width 1e-6 and
/// finishing with Newton to relative 1e-13.
pub fn build_zero_table(alpha: AlphaParam, n_max: usize) -> Result<ZeroTable> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let nu = alpha.value() + 1.0;
    let scan_limit = (n_max as f64 + nu.abs() + 4.0) * PI + 10.0;
    let mut zeros = Vec::with_capacity(n_max);
    let mut a = 0.0;
    let mut f_a = zero_fn(nu, a)?;
    while zeros.len() < n_max {
        let b = a + ZERO_SCAN_STEP;
        if b > scan_limit {
            return Err(Error::ZeroConvergence {
                index: zeros.len() + 1,
                detail: format!("no sign change found below z = {scan_limit}"),
            });
        }
        let f_b = zero_fn(nu, b)?;
        if f_b == 0.0 {
            zeros.push(b);
            a = b + ZERO_SCAN_STEP * 0.5;
            f_a = zero_fn(nu, a)?;
            continue;
        }
        if (f_a > 0.0) != (f_b > 0.0) {
            zeros.push(refine_zero(nu, zeros.len() + 1, a, b, f_a)?);
        }
        a = b;
        f_a = f_b;
    }
    Ok(ZeroTable { alpha, zeros })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn alpha(a: f64) -> AlphaParam {
        AlphaParam::new(a).unwrap()
    }

    #[test]
    fn alpha_rejects_out_of_range() {
        assert!(AlphaParam::new(-1.0).is_err());
        assert!(AlphaParam::new(f64::NAN).is_err());
        assert!(AlphaParam::new(-0.999).is_ok());
        assert!(AlphaParam::new(ALPHA_MAX).is_ok());
        assert!(AlphaParam::new(ALPHA_MAX + 1.0).is_err());
    }

    #[test]
    fn evaluation_regimes_agree() {
        for nu in [0.3, 7.5, 12.0, 30.0] {
            for z in [25.5f64, 31.0, 47.0] {
                let series = z.powf(nu) * even_series_sum(nu, z) / (2f64.powf(nu) * gamma(nu + 1.0));
                let integral = bessel_j_integral(nu, z);
                assert!((series - integral).abs() < 1e-12, "{nu} {z}: {series} {integral}");
            }
        }
        for nu in [3.0, 7.5, 12.0] {
            let z = hankel_switch(nu) * 1.01;
            let (a, b) = (bessel_j_integral(nu, z), bessel_j_asymptotic(nu, z));
            assert!((a - b).abs() < 1e-13, "{nu} {z}: {a} {b}");
        }
        for z in [26.0, 60.0, 140.0] {
            let lhs = bessel_j(11.0, z).unwrap() + bessel_j(13.0, z).unwrap();
            let rhs = 24.0 / z * bessel_j(12.0, z).unwrap();
            assert!((lhs - rhs).abs() < 1e-13, "{z}");
        }
    }

    #[test]
    fn zeros_for_large_order() {
        let t = build_zero_table(AlphaParam::new(ALPHA_MAX).unwrap(), 30).unwrap();
        assert!(t.zeros()[0] > ALPHA_MAX + 1.0);
        for (k, s) in t.zeros().iter().enumerate() {
            assert!(bessel_j(ALPHA_MAX + 1.0, *s).unwrap().abs() < 1e-13, "{k}");
            if k > 0 {
                assert!(*s - t.zeros()[k - 1] > 2.5);
            }
        }
    }

    #[test]
    fn even_function_at_origin() {
        assert_eq!(bessel_j_even(0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn half_order_closed_forms() {
        // J_{-1/2}(z) = sqrt(2/(πz)) cos z
        let v = bessel_j_even(-0.5, PI).unwrap();
        assert_relative_eq!(v, -(2.0 / PI).sqrt(), max_relative = 1e-14);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-12);
        for &z in &[0.3, 2.0, 7.5, 24.9, 25.1, 60.0, 310.0] {
            let closed = (2.0 / (PI * z)).sqrt() * z.sin();
            assert!((bessel_j(0.5, z).unwrap() - closed).abs() < 1e-14);
        }
    }

    #[test]
    fn first_zero_of_j1() {
        assert!(bessel_j_even(1.0, 3.8317059702).unwrap().abs() < 1e-10);
    }

    #[test]
    fn j1_at_one() {
        // 40 terms of the series, summed from the smallest term up
        let mut terms = Vec::new();
        let mut t = 0.5;
        for n in 0..40 {
            if n > 0 {
                t *= -0.25 / (n as f64 * (n as f64 + 1.0));
            }
            terms.push(t);
        }
        let oracle: f64 = terms.iter().rev().sum();
        assert!((bessel_j(1.0, 1.0).unwrap() - oracle).abs() < 1e-12);
        assert_relative_eq!(oracle, 0.44005058574493355, max_relative = 1e-15);
    }

    #[test]
    fn domain_and_range_errors() {
        assert!(matches!(bessel_j(0.0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_j(0.0, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_j_even(0.0, 1e9), Err(Error::Range { .. })));
        assert!(matches!(bessel_j_even(-1.5, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(script_i(alpha(0.0), 1e4), Err(Error::Range { .. })));
    }

    #[test]
    fn j_near_zero_tends_to_one() {
        assert_relative_eq!(bessel_j(0.0, 1e-12).unwrap(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn script_i_closed_forms() {
        assert_eq!(script_i(alpha(0.3), 0.0).unwrap(), 1.0);
        assert_relative_eq!(script_i(alpha(-0.5), 2.0).unwrap(), 2f64.cosh(), max_relative = 1e-14);
        assert_relative_eq!(script_i(alpha(0.5), 2.0).unwrap(), 2f64.sinh() / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn e_alpha_reference_values() {
        let e = e_alpha(alpha(-0.5), Complex64::new(1.3, 0.0)).unwrap();
        assert_relative_eq!(e.re, 1.3f64.exp(), max_relative = 1e-14);
        assert_eq!(e.im, 0.0);
        let one = e_alpha(alpha(0.7), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        // E_0(2i) = J_0(2) + i J_1(2) from the complex series
        let series = script_i_complex(0.0, Complex64::new(0.0, 2.0))
            + Complex64::new(0.0, 2.0) / 2.0 * script_i_complex(1.0, Complex64::new(0.0, 2.0));
        let bessel = e_alpha(alpha(0.0), Complex64::new(0.0, 2.0)).unwrap();
        assert!((series - bessel).norm() < 1e-14);
        assert_relative_eq!(bessel.re, 0.22389077914123567, max_relative = 1e-13);
        assert_relative_eq!(bessel.im, 0.5767248077568734, max_relative = 1e-13);
    }

    #[test]
    fn e_alpha_off_axis_uses_series() {
        // E_{-1/2}(z) = e^z everywhere
        let z = Complex64::new(0.4, -1.7);
        let e = e_alpha(alpha(-0.5), z).unwrap();
        assert!((e - z.exp()).norm() < 1e-13);
    }

    #[test]
    fn zeros_at_minus_half_are_multiples_of_pi() {
        let t = build_zero_table(alpha(-0.5), 3).unwrap();
        for (j, s) in t.zeros().iter().enumerate() {
            assert!((s - PI * (j + 1) as f64).abs() < 1e-12);
        }
        assert!((t.midpoint(1).unwrap() - 1.5 * PI).abs() < 1e-12);
        assert_eq!(t.midpoint(3), None);
        assert_eq!(t.signed(-2), Some(-t.get(2).unwrap()));
        assert_eq!(t.signed(0), Some(0.0));
    }

    #[test]
    fn first_zero_of_j1_table() {
        let t = build_zero_table(alpha(0.0), 1).unwrap();
        assert!((t.get(1).unwrap() - 3.8317059702).abs() < 1e-9);
    }

    #[test]
    fn n_max_zero_is_rejected() {
        assert!(build_zero_table(alpha(0.0), 0).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = build_zero_table(alpha(-0.5), 2).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "j,s_j\n1,3.1415926535897931\n2,6.2831853071795862\n");
    }
}
