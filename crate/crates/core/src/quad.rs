//! Low-level quadrature building blocks: Gauss-Jacobi nodes via Golub-Welsch
//! (polished by Newton on the three-term recurrence) and a fixed-step
//! tanh-sinh rule for integrands with endpoint singularities.

use nalgebra::{DMatrix, SymmetricEigen};

/// Recurrence coefficients of the monic Jacobi polynomials for the weight
/// `(1-t)^a (1+t)^b` on (-1,1): diagonal `a_k` and off-diagonal `b_k` (k>=1).
fn jacobi_recurrence(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut diag = Vec::with_capacity(m);
    let mut off = Vec::with_capacity(m);
    for k in 0..m {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let d = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        diag.push(d);
        if k >= 1 {
            let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + a + b);
            let den = s * s * (s + 1.0) * (s - 1.0);
            off.push((num / den).sqrt());
        }
    }
    (diag, off)
}

/// Orthonormal polynomial values `p_0..p_{m}` and `p_m'` at `x` for the
/// recurrence `(diag, off)` and total mass `mu0`.
fn orthonormal_eval(x: f64, diag: &[f64], off: &[f64], mu0: f64) -> (f64, f64, f64) {
    let m = diag.len();
    let mut p_prev = 0.0;
    let mut p = 1.0 / mu0.sqrt();
    let mut dp_prev = 0.0;
    let mut dp = 0.0;
    let mut sumsq = p * p;
    for k in 0..m {
        let b_k = if k == 0 { 0.0 } else { off[k - 1] };
        let b_next = if k + 1 < m { off[k] } else { recurrence_tail(diag, off, k) };
        let p_next = ((x - diag[k]) * p - b_k * p_prev) / b_next;
        let dp_next = ((x - diag[k]) * dp + p - b_k * dp_prev) / b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        if k + 1 < m {
            sumsq += p * p;
        }
    }
    (p, dp, sumsq)
}

// b_m is only a scale for p_m; any positive value keeps the roots.
fn recurrence_tail(_diag: &[f64], off: &[f64], _k: usize) -> f64 {
    off.last().copied().unwrap_or(1.0)
}

/// Gauss rule with `m` nodes for the weight `x^beta` on (0,1).
/// Returns nodes in ascending order and their weights.
pub(crate) fn gauss_jacobi_unit(m: usize, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let (diag_t, off_t) = jacobi_recurrence(m, 0.0, beta);
    // x = (1+t)/2 maps the recurrence affinely
    let diag: Vec<f64> = diag_t.iter().map(|d| 0.5 * (1.0 + d)).collect();
    let off: Vec<f64> = off_t.iter().map(|b| 0.5 * b).collect();
    let mu0 = 1.0 / (beta + 1.0);

    let mut mat = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        mat[(k, k)] = diag[k];
        if k + 1 < m {
            mat[(k, k + 1)] = off[k];
            mat[(k + 1, k)] = off[k];
        }
    }
    let eig = SymmetricEigen::new(mat);
    let mut pairs: Vec<(f64, f64)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (x0, w0) in pairs {
        let mut x = x0;
        for _ in 0..3 {
            let (p, dp, _) = orthonormal_eval(x, &diag, &off, mu0);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.abs() > 1e-6 * x.max(1e-3) {
                break;
            }
            x -= step;
        }
        let (_, _, sumsq) = orthonormal_eval(x, &diag, &off, mu0);
        let w = 1.0 / sumsq;
        nodes.push(x);
        weights.push(if w.is_finite() && w > 0.0 { w } else { w0 });
    }
    (nodes, weights)
}

/// Gauss-Legendre rule on (-1,1).
pub(crate) fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi_unit(m, 0.0);
    (
        x.iter().map(|u| 2.0 * u - 1.0).collect(),
        w.iter().map(|v| 2.0 * v).collect(),
    )
}

const TS_STEP: f64 = 1.0 / 16.0;
const TS_MAX_K: usize = 96;

/// Tanh-sinh quadrature of `f` over `[a, b]`. Nodes are placed from the
/// nearer endpoint so the clustering is not lost to cancellation; nodes that
/// round onto an endpoint are dropped.
pub(crate) fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut sum = half_pi * f(c);
    let mut tiny = 0;
    for k in 1..=TS_MAX_K {
        let t = k as f64 * TS_STEP;
        let u = half_pi * t.sinh();
        let cu = u.cosh();
        // 1 - tanh(u)
        let d = 1.0 / (u.exp() * cu);
        let w = half_pi * t.cosh() / (cu * cu);
        if w < 1e-300 || d * h.abs() == 0.0 {
            break;
        }
        let xr = b - h * d;
        let xl = a + h * d;
        let mut add = 0.0;
        if xr != b {
            add += f(xr);
        }
        if xl != a {
            add += f(xl);
        }
        sum += w * add;
        if k > 24 && (w * add).abs() <= 1e-18 * sum.abs() {
            tiny += 1;
            if tiny >= 3 {
                break;
            }
        } else {
            tiny = 0;
        }
    }
    sum * h * TS_STEP
}

/// Integrates over `[points[0], points[last]]`, splitting at every point and
/// into pieces no longer than `max_len`.
pub(crate) fn integrate_pieces<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], max_len: f64) -> f64 {
    let mut pts: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut total = 0.0;
    for win in pts.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let pieces = ((hi - lo) / max_len).ceil().max(1.0) as usize;
        let len = (hi - lo) / pieces as f64;
        for i in 0..pieces {
            let a = lo + i as f64 * len;
            let b = if i + 1 == pieces { hi } else { lo + (i + 1) as f64 * len };
            total += tanh_sinh(&mut f, a, b);
        }
    }
    total
}

const MAX_SHELLS: usize = 90;
const SHELL_POINTS: usize = 16;

/// Integration towards a possibly singular endpoint over dyadic shells
/// `[L/2^{i+1}, L/2^i]`, each by a 16-point Gauss-Legendre rule, closed by
/// a geometric tail. A shell ratio that does not stay below 1 means the
/// integral diverges and `+∞` is returned.
#[derive(Debug, Clone)]
pub(crate) struct ShellRule {
    gx: Vec<f64>,
    gw: Vec<f64>,
}

impl ShellRule {
    pub(crate) fn new() -> Self {
        let (gx, gw) = gauss_legendre(SHELL_POINTS);
        ShellRule { gx, gw }
    }

    /// `∫_0^len f(off) d(off)`, where `off` is the distance from `anchor`.
    /// Shells stop once they no longer move `anchor` in floating point.
    pub(crate) fn towards<F: Fn(f64) -> f64>(&self, f: F, anchor: f64, len: f64) -> f64 {
        let mut total = 0.0;
        let mut prev = f64::NAN;
        let mut last = f64::NAN;
        for i in 0..MAX_SHELLS {
            let hi = len * 0.5f64.powi(i as i32);
            let lo = 0.5 * hi;
            if anchor != 0.0 && anchor + lo == anchor {
                break;
            }
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo);
            let s: f64 = self.gx.iter().zip(&self.gw).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h;
            if !s.is_finite() {
                return f64::INFINITY;
            }
            total += s;
            prev = last;
            last = s;
            if s == 0.0 || (i >= 4 && s.abs() <= 1e-17 * total.abs()) {
                return total;
            }
        }
        if prev.is_nan() {
            return total;
        }
        let ratio = last / prev;
        if !(ratio.abs() < 1.0 - 1e-9) {
            return f64::INFINITY;
        }
        total + last * ratio / (1.0 - ratio)
    }

    /// `∫_lo^hi f`, with shells towards both ends and splits at `breaks`.
    pub(crate) fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64, breaks: &[f64]) -> f64 {
        let mut pts: Vec<f64> = breaks.iter().copied().filter(|t| *t > lo && *t < hi).collect();
        pts.push(lo);
        pts.push(hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut total = 0.0;
        for win in pts.windows(2) {
            let (a, b) = (win[0], win[1]);
            let half = 0.5 * (b - a);
            total += self.towards(|o| f(a + o), a, half) + self.towards(|o| f(b - o), b, half);
        }
        if total.is_nan() {
            f64::INFINITY
        } else {
            total
        }
    }
}

/// Exclusion radii relative to the largest one.
const PV_RADII: [f64; 3] = [1.0, 0.1, 0.01];

/// Principal value `PV ∫_{-1}^{1} g(y)/(x-y) dy`.
///
/// The integral over `|y - x| > ε` is computed for `ε = ε₀, ε₀/10, ε₀/100`
/// with `ε₀ = min(1e-2, eps_cap, R/2)`, where `R` is the distance from `x` to
/// the nearest of `breaks` or ±1, and extrapolated to `ε = 0` by two
/// Richardson steps (the error is odd in ε). Inside `[x-R, x+R]` symmetric
/// points are paired, so the same integrand evaluated down to `t = 0` gives
/// an independent value. Returns the extrapolated value and its distance
/// from the paired value.
pub(crate) fn principal_value<F: Fn(f64) -> f64>(g: F, x: f64, breaks: &[f64], max_len: f64, eps_cap: f64) -> (f64, f64) {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .chain([-1.0, 1.0])
        .filter(|p| (-1.0..=1.0).contains(p) && *p != x)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let lo = pts.iter().copied().filter(|p| *p < x).fold(-1.0, f64::max);
    let hi = pts.iter().copied().filter(|p| *p > x).fold(1.0, f64::min);
    let radius = (x - lo).min(hi - x);

    let direct = |y: f64| g(y) / (x - y);
    let mut left: Vec<f64> = pts.iter().copied().filter(|p| *p < x - radius).collect();
    left.push(x - radius);
    let mut right: Vec<f64> = pts.iter().copied().filter(|p| *p > x + radius).collect();
    right.push(x + radius);
    let outer = integrate_pieces(direct, &left, max_len) + integrate_pieces(direct, &right, max_len);

    let paired = |t: f64| -(g(x + t) - g(x - t)) / t;
    let eps0 = 1e-2f64.min(eps_cap).min(0.5 * radius);
    let shells: Vec<f64> = PV_RADII
        .iter()
        .map(|r| integrate_pieces(paired, &[r * eps0, radius], max_len))
        .collect();
    let inner_tail = integrate_pieces(paired, &[0.0, PV_RADII[2] * eps0], max_len);

    let excl: Vec<f64> = shells.iter().map(|v| outer + v).collect();
    let r1a = (10.0 * excl[1] - excl[0]) / 9.0;
    let r1b = (10.0 * excl[2] - excl[1]) / 9.0;
    let extrapolated = (1000.0 * r1b - r1a) / 999.0;
    let limit = outer + shells[2] + inner_tail;
    (extrapolated, (extrapolated - limit).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_unit_moments() {
        for &beta in &[-0.5, 0.0, 1.0, 5.0, -0.9] {
            let (x, w) = gauss_jacobi_unit(40, beta);
            for k in 0..60 {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
                let exact = 1.0 / (beta + 1.0 + k as f64);
                assert!((s - exact).abs() < 1e-13 * exact, "beta {beta} k {k}: {s} vs {exact}");
            }
        }
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫_0^1 x^{-0.9} dx = 10
        let v = tanh_sinh(|x| x.powf(-0.9), 0.0, 1.0);
        assert!((v - 10.0).abs() < 1e-10, "{v}");
        let v = tanh_sinh(|x| x.ln(), 0.0, 1.0);
        assert!((v + 1.0).abs() < 1e-13);
    }

    #[test]
    fn principal_value_of_polynomials() {
        // PV ∫_{-1}^{1} dy/(x-y) = ln((1+x)/(1-x))
        for &x in &[-0.7, 0.0, 0.3, 0.999] {
            let (v, spread) = principal_value(|_| 1.0, x, &[], 0.5, 1.0);
            assert!((v - ((1.0 + x) / (1.0 - x)).ln()).abs() < 1e-12, "{x}: {v}");
            assert!(spread < 1e-12);
        }
        // PV ∫ y/(x-y) dy = x ln((1+x)/(1-x)) - 2
        let x = 0.4;
        let (v, _) = principal_value(|y| y, x, &[0.0, 0.5], 0.5, 1.0);
        assert!((v - (x * ((1.0 + x) / (1.0 - x)).ln() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn shells_detect_divergence() {
        let r = ShellRule::new();
        assert!((r.integrate(|x: f64| x.powf(-0.99), 0.0, 1.0, &[]) - 100.0).abs() < 1e-9);
        assert!(r.integrate(|x: f64| x.powf(-1.0), 0.0, 1.0, &[]).is_infinite());
        assert!(r.integrate(|x: f64| (x - 0.5).abs().powf(-1.2), 0.0, 1.0, &[0.5]).is_infinite());
        let v = r.integrate(|x: f64| (1.0 - x).ln(), -1.0, 1.0, &[]);
        assert!((v - (2.0 * 2f64.ln() - 2.0)).abs() < 1e-13, "{v}");
    }

    #[test]
    fn pieces_handle_oscillation() {
        let v = integrate_pieces(|x| (60.0 * x).cos(), &[0.0, 1.0], 0.1);
        assert!((v - 60f64.sin() / 60.0).abs() < 1e-14);
    }
}
