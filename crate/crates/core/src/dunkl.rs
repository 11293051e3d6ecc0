//! The orthonormal system `e_j` on `L²((-1,1), dμ_α)`, Fourier-Dunkl
//! coefficients and partial sums, the kernel `K_n` and its splitting into
//! Hilbert-type pieces.

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::measure::QuadratureRule;
use crate::quad::principal_value;
use crate::specfun::{bessel_j, bessel_j_even, build_zero_table, e_alpha_imag, gamma, script_i_imag, AlphaParam, ZeroTable};

/// `e_j` for `|j| <= max_index`, with cached normalising constants.
#[derive(Debug, Clone)]
pub struct DunklSystem {
    alpha: AlphaParam,
    zeros: ZeroTable,
    norm_constants: Vec<f64>,
    e0: f64,
}

impl DunklSystem {
    /// Builds the system with frequencies `s_1..s_{n_max+1}`, enough for
    /// `e_j` with `|j| <= n_max + 1` and `M_n` with `n <= n_max`.
    pub fn new(alpha: AlphaParam, n_max: usize) -> Result<Self> {
        Self::from_table(build_zero_table(alpha, n_max + 1)?)
    }

    pub fn from_table(zeros: ZeroTable) -> Result<Self> {
        let alpha = zeros.alpha();
        let a = alpha.value();
        let head = 2f64.powf(0.5 * a) * gamma(a + 1.0).sqrt();
        let norm_constants = zeros
            .zeros()
            .iter()
            .map(|&s| Ok(head / script_i_imag(alpha, s)?.abs()))
            .collect::<Result<Vec<_>>>()?;
        let e0 = 2f64.powf(0.5 * (a + 1.0)) * gamma(a + 2.0).sqrt();
        Ok(DunklSystem { alpha, zeros, norm_constants, e0 })
    }

    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }

    pub fn zeros(&self) -> &ZeroTable {
        &self.zeros
    }

    /// Largest `|j|` for which `e_j` is available.
    pub fn max_index(&self) -> usize {
        self.zeros.count()
    }

    /// Largest `n` for which `M_n` is available.
    pub fn max_degree(&self) -> usize {
        self.zeros.count().saturating_sub(1)
    }

    /// The constant `e_0 = 2^{(α+1)/2} Γ(α+2)^{1/2}`.
    pub fn e0(&self) -> f64 {
        self.e0
    }

    /// `2^{α/2} Γ(α+1)^{1/2} / |𝓘_α(i s_j)|` for `j != 0`, `e_0` for `j = 0`.
    pub fn norm_constant(&self, j: i64) -> Result<f64> {
        if j == 0 {
            return Ok(self.e0);
        }
        self.norm_constants
            .get(j.unsigned_abs() as usize - 1)
            .copied()
            .ok_or(Error::IndexOutOfTable { j, max: self.max_index() })
    }

    /// `M_n = (s_n + s_{n+1})/2`.
    pub fn m(&self, n: usize) -> Result<f64> {
        self.zeros.midpoint(n).ok_or(Error::IndexOutOfTable {
            j: n as i64 + 1,
            max: self.max_index(),
        })
    }

    /// `e_j(x)`.
    pub fn eval_e(&self, j: i64, x: f64) -> Result<Complex64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain {
                func: "eval_e",
                detail: format!("x = {x} outside [-1, 1]"),
            });
        }
        if j == 0 {
            return Ok(Complex64::new(self.e0, 0.0));
        }
        let c = self.norm_constant(j)?;
        let s = self.zeros.signed(j).expect("index checked by norm_constant");
        Ok(c * e_alpha_imag(self.alpha, s * x)?)
    }

    /// `e_j(x)` for `j = -n..=n`.
    pub fn eval_all(&self, n: usize, x: f64) -> Result<Vec<Complex64>> {
        self.check_index(n)?;
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        out[n] = Complex64::new(self.e0, 0.0);
        for j in 1..=n {
            let v = self.eval_e(j as i64, x)?;
            out[n + j] = v;
            out[n - j] = v.conj();
        }
        Ok(out)
    }

    /// Values of `e_j` at the rule's nodes: `out[j + n][i] = e_j(x_i)`.
    pub fn node_values(&self, rule: &QuadratureRule, n: usize) -> Result<Vec<Vec<Complex64>>> {
        self.check_index(n)?;
        (-(n as i64)..=n as i64)
            .into_par_iter()
            .map(|j| rule.nodes().iter().map(|&x| self.eval_e(j, x)).collect())
            .collect()
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.max_index() {
            return Err(Error::IndexOutOfTable { j: n as i64, max: self.max_index() });
        }
        Ok(())
    }

    fn check_alpha(&self, rule: &QuadratureRule) -> Result<()> {
        if rule.alpha() != self.alpha {
            return Err(Error::InvalidParameter(format!(
                "rule alpha {} does not match system alpha {}",
                rule.alpha().value(),
                self.alpha.value()
            )));
        }
        Ok(())
    }
}

/// Coefficients `c_j` for `|j| <= degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    alpha: AlphaParam,
    degree: usize,
    coefficients: Vec<Complex64>,
}

impl SeriesExpansion {
    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficient(&self, j: i64) -> Option<Complex64> {
        if j.unsigned_abs() as usize > self.degree {
            return None;
        }
        Some(self.coefficients[(j + self.degree as i64) as usize])
    }

    /// `(j, c_j)` for `j = -degree..=degree`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.degree as i64;
        self.coefficients.iter().enumerate().map(move |(i, c)| (i as i64 - n, *c))
    }

    /// The expansion truncated to `|j| <= n`.
    pub fn truncated(&self, n: usize) -> SeriesExpansion {
        let n = n.min(self.degree);
        let off = self.degree - n;
        SeriesExpansion {
            alpha: self.alpha,
            degree: n,
            coefficients: self.coefficients[off..off + 2 * n + 1].to_vec(),
        }
    }

    /// `j,re_cj,im_cj` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "j,re_cj,im_cj")?;
        for (j, c) in self.iter() {
            writeln!(out, "{},{},{}", j, g17(c.re), g17(c.im))?;
        }
        Ok(())
    }
}

/// `c_j = ∫ f conj(e_j) dμ_α` on `rule`, `|j| <= n`.
pub fn expand<F: Fn(f64) -> f64 + Sync>(system: &DunklSystem, rule: &QuadratureRule, f: F, n: usize) -> Result<SeriesExpansion> {
    expand_complex(system, rule, |x| Complex64::new(f(x), 0.0), n)
}

pub fn expand_complex<F: Fn(f64) -> Complex64 + Sync>(
    system: &DunklSystem,
    rule: &QuadratureRule,
    f: F,
    n: usize,
) -> Result<SeriesExpansion> {
    system.check_alpha(rule)?;
    system.check_index(n)?;
    let values: Vec<Complex64> = rule.nodes().iter().map(|&x| f(x)).collect();
    for (i, (v, &x)) in values.iter().zip(rule.nodes()).enumerate() {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { index: i, x });
        }
    }
    let coefficients = (-(n as i64)..=n as i64)
        .into_par_iter()
        .map(|j| {
            let mut s = Complex64::new(0.0, 0.0);
            for ((&x, &w), v) in rule.nodes().iter().zip(rule.weights()).zip(&values) {
                s += w * v * system.eval_e(j, x)?.conj();
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesExpansion { alpha: system.alpha, degree: n, coefficients })
}

/// `S_n f(x) = Σ_{|j|<=n} c_j e_j(x)`.
pub fn partial_sum(expansion: &SeriesExpansion, system: &DunklSystem, x: f64) -> Result<Complex64> {
    let e = system.eval_all(expansion.degree, x)?;
    Ok(expansion.coefficients.iter().zip(&e).map(|(c, e)| c * e).sum())
}

/// `K_n(x,y) = Σ_{|j|<=n} e_j(x) conj(e_j(y))`, summed term by term.
pub fn kernel_direct_complex(system: &DunklSystem, n: usize, x: f64, y: f64) -> Result<Complex64> {
    system.check_index(n)?;
    let mut s = Complex64::new(0.0, 0.0);
    for j in -(n as i64)..=n as i64 {
        s += system.eval_e(j, x)? * system.eval_e(j, y)?.conj();
    }
    Ok(s)
}

/// Imaginary residue tolerated in [`kernel_direct`], relative to `1 + |K|`.
pub const KERNEL_IMAG_TOL: f64 = 1e-9;

/// Real value of [`kernel_direct_complex`]; fails if the imaginary residue
/// exceeds [`KERNEL_IMAG_TOL`].
pub fn kernel_direct(system: &DunklSystem, n: usize, x: f64, y: f64) -> Result<f64> {
    let k = kernel_direct_complex(system, n, x, y)?;
    if k.im.abs() > KERNEL_IMAG_TOL * (1.0 + k.re.abs()) {
        return Err(Error::InvalidParameter(format!(
            "kernel at ({x}, {y}) has imaginary residue {}",
            k.im
        )));
    }
    Ok(k.re)
}

/// `K_n` as `2^{α+1}Γ(α+2) + 2^{α+1}Γ(α+1) (xy)^{-α} Σ_{j<=n} (J_α(s_j x)J_α(s_j y)
/// + J_{α+1}(s_j x)J_{α+1}(s_j y)) / J_α(s_j)²`. Undefined at `x = 0` or
/// `y = 0`; use [`kernel_direct`] there.
pub fn kernel_closed_sum_form(system: &DunklSystem, n: usize, x: f64, y: f64) -> Result<f64> {
    if x == 0.0 || y == 0.0 {
        return Err(Error::Domain {
            func: "kernel_closed_sum_form",
            detail: "x and y must be nonzero".into(),
        });
    }
    system.check_index(n)?;
    let a = system.alpha.value();
    let (ax, ay) = (x.abs(), y.abs());
    let sign = (x * y).signum();
    let pow = (ax * ay).powf(a);
    let mut sum = 0.0;
    for &s in &system.zeros.zeros()[..n] {
        let ja = bessel_j(a, s)?;
        let even = bessel_j(a, s * ax)? * bessel_j(a, s * ay)?;
        let odd = bessel_j(a + 1.0, s * ax)? * bessel_j(a + 1.0, s * ay)?;
        sum += (even + sign * odd) / (ja * ja);
    }
    Ok(2f64.powf(a + 1.0) * gamma(a + 2.0) + 2f64.powf(a + 1.0) * gamma(a + 1.0) * sum / pow)
}

fn check_b_args(x: f64, y: f64) -> Result<()> {
    if x == y {
        return Err(Error::Diagonal(x));
    }
    if x == 0.0 || y == 0.0 {
        return Err(Error::Domain {
            func: "b_function",
            detail: "x and y must be nonzero".into(),
        });
    }
    Ok(())
}

/// `B(M,x,y) = 2^α Γ(α+1) M x J_{α+1}(M|x|) J_α(M|y|) / (|x|^{α+1} |y|^α (x-y))`.
pub fn b_function(system: &DunklSystem, m: f64, x: f64, y: f64) -> Result<f64> {
    b_function_alpha(system.alpha, m, x, y)
}

pub fn b_function_alpha(alpha: AlphaParam, m: f64, x: f64, y: f64) -> Result<f64> {
    check_b_args(x, y)?;
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("M = {m} must be positive")));
    }
    let a = alpha.value();
    let (ax, ay) = (x.abs(), y.abs());
    let num = m * x * bessel_j(a + 1.0, m * ax)? * bessel_j(a, m * ay)?;
    Ok(alpha.bessel_scale() * num / (ax.powf(a + 1.0) * ay.powf(a) * (x - y)))
}

/// `M^{2(α+1)} (x 𝓘_{α+1}(iMx) 𝓘_α(iMy) - y 𝓘_{α+1}(iMy) 𝓘_α(iMx)) / (2^{α+1} Γ(α+2) (x-y))`,
/// which equals `B(M,x,y) + B(M,y,x)` and `∫_{-M}^{M} E_α(izx) conj(E_α(izy)) dμ_α(z)`.
pub fn product_integral(alpha: AlphaParam, m: f64, x: f64, y: f64) -> Result<f64> {
    if x == y {
        return Err(Error::Diagonal(x));
    }
    let a = alpha.value();
    let up = AlphaParam::new(a + 1.0)?;
    let num = x * script_i_imag(up, m * x)? * script_i_imag(alpha, m * y)?
        - y * script_i_imag(up, m * y)? * script_i_imag(alpha, m * x)?;
    Ok(m.powf(2.0 * (a + 1.0)) * num / (2f64.powf(a + 1.0) * gamma(a + 2.0) * (x - y)))
}

/// `(|K_n - B(M_n,x,y) - B(M_n,y,x)|, |xy|^{-(α+1/2)}/(2-|x|-|y|) + 1)`.
pub fn remainder_bound_check(system: &DunklSystem, n: usize, x: f64, y: f64) -> Result<(f64, f64)> {
    check_b_args(x, y)?;
    let m = system.m(n)?;
    let k = kernel_direct(system, n, x, y)?;
    let b = b_function(system, m, x, y)? + b_function(system, m, y, x)?;
    Ok(((k - b).abs(), remainder_bound(system.alpha, x, y)))
}

/// `|xy|^{-(α+1/2)}/(2-|x|-|y|) + 1`
pub fn remainder_bound(alpha: AlphaParam, x: f64, y: f64) -> f64 {
    (x * y).abs().powf(-(alpha.value() + 0.5)) / (2.0 - x.abs() - y.abs()) + 1.0
}

/// The kernel at one point in both forms with the remainder bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    pub direct: Complex64,
    /// Closed sum form, or the real part of `direct` when `x` or `y` is 0.
    pub closed: f64,
    pub remainder_bound: f64,
}

pub fn kernel_eval(system: &DunklSystem, n: usize, x: f64, y: f64) -> Result<KernelEval> {
    let direct = kernel_direct_complex(system, n, x, y)?;
    let closed = if x == 0.0 || y == 0.0 {
        direct.re
    } else {
        kernel_closed_sum_form(system, n, x, y)?
    };
    Ok(KernelEval {
        n,
        x,
        y,
        direct,
        closed,
        remainder_bound: remainder_bound(system.alpha, x, y),
    })
}

/// Writes `x,y,K_direct,B_sum,residual,bound` for every off-diagonal pair
/// of nonzero points.
pub fn write_kernel_csv<W: Write>(system: &DunklSystem, n: usize, points: &[(f64, f64)], mut out: W) -> Result<()> {
    let io = |e: io::Error| Error::InvalidParameter(format!("write failed: {e}"));
    writeln!(out, "x,y,K_direct,B_sum,residual,bound").map_err(io)?;
    let m = system.m(n)?;
    for &(x, y) in points {
        if x == y || x == 0.0 || y == 0.0 {
            continue;
        }
        let k = kernel_direct(system, n, x, y)?;
        let b = b_function(system, m, x, y)? + b_function(system, m, y, x)?;
        let bound = remainder_bound(system.alpha, x, y);
        writeln!(out, "{},{},{},{},{},{}", g17(x), g17(y), g17(k), g17(b), g17((k - b).abs()), g17(bound))
            .map_err(io)?;
    }
    Ok(())
}

/// `S_n f(x) = T_1 + T_2 + T_3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TSplit {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl TSplit {
    pub fn total(&self) -> f64 {
        self.t1 + self.t2 + self.t3
    }
}

/// Largest tolerated disagreement between two principal-value evaluations,
/// relative to `1 + |value|`.
pub const PV_TOL: f64 = 1e-7;

/// [`t_split_with_breaks`] for `f` smooth on (-1,0) and (0,1).
pub fn t_split<F: Fn(f64) -> f64 + Sync>(system: &DunklSystem, rule: &QuadratureRule, f: F, n: usize, x: f64) -> Result<TSplit> {
    t_split_with_breaks(system, rule, f, &[], n, x)
}

/// `T_1 = PV ∫ f(y) B(M_n,x,y) dμ_α(y)`, `T_2 = PV ∫ f(y) B(M_n,y,x) dμ_α(y)`
/// and `T_3 = S_n f(x) - T_1 - T_2`, where `S_n f` is expanded on `rule`.
/// `breaks` lists points where `f` is not smooth.
pub fn t_split_with_breaks<F: Fn(f64) -> f64 + Sync>(
    system: &DunklSystem,
    rule: &QuadratureRule,
    f: F,
    breaks: &[f64],
    n: usize,
    x: f64,
) -> Result<TSplit> {
    if x == 0.0 || !(-1.0 < x && x < 1.0) {
        return Err(Error::Domain {
            func: "t_split",
            detail: format!("x = {x} must lie in (-1,0) or (0,1)"),
        });
    }
    let a = system.alpha.value();
    let m = system.m(n)?;
    let mut pts = breaks.to_vec();
    pts.push(0.0);
    let max_len = (2.0 / m).min(0.25);
    let scale = 0.5 * m.powf(2.0 * a + 2.0);
    let dens = |y: f64| y.abs().powf(2.0 * a + 1.0);

    let g1 = |y: f64| f(y) * bessel_j_even(a, m * y).unwrap_or(f64::NAN) * dens(y);
    let g2 = |y: f64| f(y) * y * bessel_j_even(a + 1.0, m * y).unwrap_or(f64::NAN) * dens(y);
    let (pv1, spread1) = principal_value(g1, x, &pts, max_len, 0.1 / m);
    let (pv2, spread2) = principal_value(g2, x, &pts, max_len, 0.1 / m);
    for (v, spread) in [(pv1, spread1), (pv2, spread2)] {
        if !v.is_finite() || spread > PV_TOL * (1.0 + v.abs()) {
            return Err(Error::PrincipalValue { x, spread });
        }
    }
    let t1 = scale * x * bessel_j_even(a + 1.0, m * x)? * pv1;
    let t2 = -scale * bessel_j_even(a, m * x)? * pv2;
    let s = partial_sum(&expand(system, rule, &f, n)?, system, x)?.re;
    Ok(TSplit { t1, t2, t3: s - t1 - t2 })
}
