//! Operator norms of `f ↦ U S_n f` from `L^p(V^p dμ_α)` to `L^p(dμ_α)`,
//! estimated on a quadrature discretization.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dunkl::DunklSystem;
use crate::error::{Error, Result};
use crate::measure::QuadratureRule;
use crate::weights::Weight;

pub const MAX_ITER: usize = 200;
pub const STAGNATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PnormEstimate {
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn lp(x: &DVector<f64>, p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `sign(x)|x|^{p-1} / ‖x‖_p^{p-1}`: the unit `ℓ^{p'}` vector attaining the
/// duality pairing with `x`.
fn dual(x: &DVector<f64>, p: f64) -> DVector<f64> {
    let n = lp(x, p);
    if n == 0.0 {
        return x.clone();
    }
    x.map(|v| v.signum() * (v.abs() / n).powf(p - 1.0))
}

/// Power iteration for `‖A‖_{ℓ^p → ℓ^p}` from one start vector: `y = Ax`,
/// `z = Aᵀ dual_p(y)`, `x = dual_{p'}(z)`, stopping after [`MAX_ITER`]
/// steps or when the estimate changes by less than [`STAGNATION_TOL`]
/// relative.
pub fn pnorm_from(a: &DMatrix<f64>, p: f64, start: DVector<f64>) -> PnormEstimate {
    let q = p / (p - 1.0);
    let mut x = &start / lp(&start, p);
    let mut est = 0.0;
    for it in 1..=MAX_ITER {
        let y = a * &x;
        let gamma = lp(&y, p);
        if gamma == 0.0 {
            return PnormEstimate { norm: 0.0, iterations: it, converged: true };
        }
        let change = (gamma - est).abs();
        est = gamma;
        if it > 1 && change <= STAGNATION_TOL * gamma {
            return PnormEstimate { norm: gamma, iterations: it, converged: true };
        }
        let z = a.transpose() * dual(&y, p);
        x = dual(&z, q);
    }
    PnormEstimate { norm: est, iterations: MAX_ITER, converged: false }
}

/// Largest estimate over three starts: all ones, the column of largest
/// `ℓ^p` norm, and a seeded random vector. `converged` refers to the start
/// that attained the maximum.
pub fn matrix_pnorm(a: &DMatrix<f64>, p: f64, seed: u64) -> Result<PnormEstimate> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    let n = a.ncols();
    let ones = DVector::from_element(n, 1.0);
    let col = (0..n)
        .max_by(|&i, &j| lp(&a.column(i).into_owned(), p).total_cmp(&lp(&a.column(j).into_owned(), p)))
        .map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            e
        })
        .unwrap_or_else(|| ones.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
    let best = [ones, col, random]
        .into_iter()
        .map(|s| pnorm_from(a, p, s))
        .max_by(|a, b| a.norm.total_cmp(&b.norm))
        .expect("three starts");
    Ok(best)
}

/// The kernel of `S_n` at the nodes of a rule, for all `n` up to a maximum.
#[derive(Debug, Clone)]
pub struct PartialSumFamily {
    e0: f64,
    re: DMatrix<f64>,
    im: DMatrix<f64>,
    weights: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl PartialSumFamily {
    /// Precomputes `e_j(x_i)` for `1 <= j <= n_max` and `U`, `V` at the nodes.
    pub fn new(system: &DunklSystem, rule: &QuadratureRule, n_max: usize, u: &dyn Weight, v: &dyn Weight) -> Result<Self> {
        if rule.alpha() != system.alpha() {
            return Err(Error::InvalidParameter("rule and system use different alpha".into()));
        }
        let values = system.node_values(rule, n_max)?;
        let m = rule.len();
        let mut re = DMatrix::zeros(m, n_max);
        let mut im = DMatrix::zeros(m, n_max);
        for j in 1..=n_max {
            for (i, e) in values[n_max + j].iter().enumerate() {
                re[(i, j - 1)] = e.re;
                im[(i, j - 1)] = e.im;
            }
        }
        let eval = |w: &dyn Weight| -> Result<Vec<f64>> {
            rule.nodes()
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let val = w.eval(x);
                    if val.is_finite() && val > 0.0 {
                        Ok(val)
                    } else {
                        Err(Error::NonFinite { index: i, x })
                    }
                })
                .collect()
        };
        Ok(PartialSumFamily {
            e0: system.e0(),
            re,
            im,
            weights: rule.weights().to_vec(),
            u: eval(u)?,
            v: eval(v)?,
        })
    }

    pub fn n_max(&self) -> usize {
        self.re.ncols()
    }

    /// `K_n(x_i, x_k)`.
    pub fn kernel(&self, n: usize) -> Result<DMatrix<f64>> {
        if n > self.n_max() {
            return Err(Error::IndexOutOfTable { j: n as i64, max: self.n_max() });
        }
        let m = self.weights.len();
        let mut k = DMatrix::from_element(m, m, self.e0 * self.e0);
        if n > 0 {
            let r = self.re.columns(0, n);
            let i = self.im.columns(0, n);
            k += 2.0 * (&r * r.transpose() + &i * i.transpose());
        }
        Ok(k)
    }

    /// `A_ik = w_i^{1/p} U(x_i) K_n(x_i,x_k) w_k^{1/p'} / V(x_k)`, so that
    /// `‖A‖_{ℓ^p→ℓ^p}` approximates the weighted operator norm of `S_n`.
    pub fn operator_matrix(&self, n: usize, p: f64) -> Result<DMatrix<f64>> {
        let q = p / (p - 1.0);
        let mut a = self.kernel(n)?;
        let m = self.weights.len();
        for i in 0..m {
            let row = self.weights[i].powf(1.0 / p) * self.u[i];
            for k in 0..m {
                a[(i, k)] *= row * self.weights[k].powf(1.0 / q) / self.v[k];
            }
        }
        Ok(a)
    }

    pub fn norm(&self, n: usize, p: f64, seed: u64) -> Result<PnormEstimate> {
        matrix_pnorm(&self.operator_matrix(n, p)?, p, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::build_rule;
    use crate::specfun::AlphaParam;
    use crate::weights::PowerWeight;

    #[test]
    fn known_matrix_norms() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -3.0, 4.0]);
        let two = matrix_pnorm(&a, 2.0, 1).unwrap();
        let svd = a.clone().svd(false, false).singular_values.max();
        assert!((two.norm - svd).abs() < 1e-5 * svd);
        let brute = (0..200_000)
            .map(|k| {
                let t = k as f64 * std::f64::consts::PI / 200_000.0;
                let x = DVector::from_vec(vec![t.cos(), t.sin()]);
                lp(&(&a * &x), 3.0) / lp(&x, 3.0)
            })
            .fold(0.0, f64::max);
        let three = matrix_pnorm(&a, 3.0, 1).unwrap();
        assert!((three.norm - brute).abs() < 1e-6 * brute, "{three:?} vs {brute}");
        let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 3.0, -2.0]));
        assert!((matrix_pnorm(&diag, 3.7, 5).unwrap().norm - 3.0).abs() < 1e-12);
    }

    #[test]
    fn projection_has_unit_l2_norm() {
        let alpha = AlphaParam::new(0.0).unwrap();
        let sys = DunklSystem::new(alpha, 8).unwrap();
        let rule = build_rule(alpha, 48).unwrap();
        let one = PowerWeight::one();
        let fam = PartialSumFamily::new(&sys, &rule, 8, &one, &one).unwrap();
        for n in [0, 3, 8] {
            let est = fam.norm(n, 2.0, 9).unwrap();
            assert!((est.norm - 1.0).abs() < 1e-6, "n {n}: {est:?}");
            assert!(est.converged);
        }
    }
}
