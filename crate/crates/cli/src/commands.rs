use std::fmt::Write as _;

use fourier_dunkl::dunkl::{expand_complex, remainder_bound_check, DunklSystem};
use fourier_dunkl::fmt::g17;
use fourier_dunkl::measure::{build_rule, lp_norm_diverges, weighted_lp_norm, LpNormSpec};
use fourier_dunkl::pnorm::{PartialSumFamily, PnormEstimate};
use fourier_dunkl::specfun::build_zero_table;
use fourier_dunkl::weights::{
    ap_numeric, corollary_predicate, power_pair_in_ap, theorem_conditions, ApReport, PowerWeight,
};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{CliError, ExperimentConfig};

/// `j,s_j` for `j <= n_max`.
pub fn cmd_zeros(c: &ExperimentConfig) -> Result<String, CliError> {
    let table = build_zero_table(c.alpha, c.n_max)?;
    let mut buf = Vec::new();
    table
        .write_csv(&mut buf)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("ascii"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    MatrixPnorm,
    RandomProbe,
}

impl NormMethod {
    pub fn name(self) -> &'static str {
        match self {
            NormMethod::MatrixPnorm => "matrix_pnorm",
            NormMethod::RandomProbe => "random_probe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormGrowthRow {
    pub n: usize,
    pub norm_estimate: f64,
    pub method: NormMethod,
    /// False when the power iteration hit its iteration cap.
    pub converged: bool,
}

const PROBE_VECTORS: usize = 32;

fn degrees(c: &ExperimentConfig) -> Vec<usize> {
    let mut ns = c.ns.clone().unwrap_or_else(|| (1..=c.n_max).collect());
    ns.sort_unstable();
    ns.dedup();
    ns
}

/// Estimated norms of `f ↦ U S_n f` from `L^p(V^p dμ_α)` to `L^p(dμ_α)`
/// with `U = V` the configured weight, in ascending `n`.
pub fn norm_growth_rows(c: &ExperimentConfig) -> Result<Vec<NormGrowthRow>, CliError> {
    let ns = degrees(c);
    let top = *ns.last().expect("nonempty");
    let system = DunklSystem::new(c.alpha, top)?;
    let rule = build_rule(c.alpha, c.order)?;
    let w = c.weight.weight();
    let family = PartialSumFamily::new(&system, &rule, top, &w, &w)?;
    let method = if c.method == "random_probe" {
        NormMethod::RandomProbe
    } else {
        NormMethod::MatrixPnorm
    };
    ns.par_iter()
        .map(|&n| {
            let est = match method {
                NormMethod::MatrixPnorm => family.norm(n, c.p, c.seed)?,
                NormMethod::RandomProbe => random_probe(&family, n, c.p, c.seed)?,
            };
            Ok(NormGrowthRow { n, norm_estimate: est.norm, method, converged: est.converged })
        })
        .collect()
}

// largest ‖Ax‖_p/‖x‖_p over seeded random vectors: a lower bound
fn random_probe(family: &PartialSumFamily, n: usize, p: f64, seed: u64) -> Result<PnormEstimate, CliError> {
    let a = family.operator_matrix(n, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    let lp = |v: &DVector<f64>| v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    let mut best = 0.0f64;
    for _ in 0..PROBE_VECTORS {
        let x = DVector::from_fn(a.ncols(), |_, _| rng.gen_range(-1.0..1.0));
        best = best.max(lp(&(&a * &x)) / lp(&x));
    }
    Ok(PnormEstimate { norm: best, iterations: PROBE_VECTORS, converged: true })
}

pub fn norm_growth_csv(rows: &[NormGrowthRow]) -> String {
    let mut s = String::from("n,norm_estimate,method,converged\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.n, g17(r.norm_estimate), r.method.name(), r.converged);
    }
    s
}

/// Least-squares slope of `ln norm` against `ln n` over rows with
/// `n >= n_last / 2`.
pub fn last_octave_slope(rows: &[NormGrowthRow]) -> f64 {
    let Some(last) = rows.last() else { return 0.0 };
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| 2 * r.n >= last.n && r.norm_estimate > 0.0)
        .map(|r| ((r.n as f64).ln(), r.norm_estimate.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn cmd_norm_growth(c: &ExperimentConfig) -> Result<String, CliError> {
    Ok(norm_growth_csv(&norm_growth_rows(c)?))
}

/// A function from the convergence catalog.
pub struct CatalogFunction {
    pub name: String,
    pub f: Box<dyn Fn(f64) -> Complex64 + Sync>,
}

/// `constant`, `sign`, `step` (indicator of [0,1)), `odd` (`x`), `bump`
/// (smooth, supported in |x| < 1/2), `power:BETA` (`|x|^β`) and `e:J`.
pub fn catalog_function(spec: &str, system: &DunklSystem) -> Result<CatalogFunction, CliError> {
    let real = |f: fn(f64) -> f64| -> Box<dyn Fn(f64) -> Complex64 + Sync> { Box::new(move |x| Complex64::new(f(x), 0.0)) };
    let f: Box<dyn Fn(f64) -> Complex64 + Sync> = match spec {
        "constant" => real(|_| 1.0),
        "sign" => real(|x| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 }),
        "step" => real(|x| if x >= 0.0 { 1.0 } else { 0.0 }),
        "odd" => real(|x| x),
        "bump" => real(|x| {
            let t = 4.0 * x * x;
            if t < 1.0 {
                (1.0 - 1.0 / (1.0 - t)).exp()
            } else {
                0.0
            }
        }),
        _ => {
            if let Some(beta) = spec.strip_prefix("power:") {
                let beta: f64 = beta
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad exponent in {spec:?}")))?;
                Box::new(move |x: f64| Complex64::new(x.abs().powf(beta), 0.0))
            } else if let Some(j) = spec.strip_prefix("e:") {
                let j: i64 = j.parse().map_err(|_| CliError::Usage(format!("bad index in {spec:?}")))?;
                if j.unsigned_abs() as usize > system.max_degree() {
                    return Err(CliError::Usage(format!("{spec:?} needs nmax >= {}", j.unsigned_abs())));
                }
                let s = system.clone();
                Box::new(move |x: f64| s.eval_e(j, x).unwrap_or(Complex64::new(f64::NAN, 0.0)))
            } else {
                return Err(CliError::Usage(format!("unknown function {spec:?}")));
            }
        }
    };
    Ok(CatalogFunction { name: spec.to_string(), f })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Set when `f V` looks non-integrable in `L^p(dμ_α)`.
    pub warning: Option<String>,
    pub rows: Vec<(usize, f64)>,
}

/// `‖(S_n f - f) U‖_{L^p(dμ_α)}` on the quadrature nodes.
pub fn convergence(c: &ExperimentConfig) -> Result<ConvergenceReport, CliError> {
    let ns = degrees(c);
    let top = *ns.last().expect("nonempty");
    let system = DunklSystem::new(c.alpha, top)?;
    let rule = build_rule(c.alpha, c.order)?;
    let func = catalog_function(&c.function, &system)?;
    let w = c.weight.weight();
    let spec = LpNormSpec::new(c.p, w.clone(), c.alpha)?;

    let warning = if lp_norm_diverges(c.order, |x| (func.f)(x).norm(), &spec)? {
        Some(format!("{} is not in the weighted L^p space", func.name))
    } else {
        None
    };

    let exp = expand_complex(&system, &rule, &func.f, top)?;
    let values = system.node_values(&rule, top)?;
    let nodes = rule.nodes();
    let fx: Vec<Complex64> = nodes.iter().map(|&x| (func.f)(x)).collect();
    let mut partial: Vec<Complex64> = values[top].iter().map(|e| exp.coefficient(0).expect("c_0") * e).collect();
    let mut rows = Vec::with_capacity(ns.len());
    let mut done = 0;
    for &n in &ns {
        for j in done + 1..=n {
            for sign in [1i64, -1] {
                let jj = sign * j as i64;
                let cj = exp.coefficient(jj).expect("within degree");
                for (acc, e) in partial.iter_mut().zip(&values[(jj + top as i64) as usize]) {
                    *acc += cj * e;
                }
            }
        }
        done = n;
        let err: Vec<f64> = partial.iter().zip(&fx).map(|(s, f)| (s - f).norm()).collect();
        let at = |x: f64| err[nodes.partition_point(|&t| t < x)];
        rows.push((n, weighted_lp_norm(&rule, at, &spec)?));
    }
    Ok(ConvergenceReport { warning, rows })
}

/// `n,lp_error` rows; a divergence warning appears as a `warning,...` row
/// right after the header.
pub fn cmd_convergence(c: &ExperimentConfig) -> Result<String, CliError> {
    let rep = convergence(c)?;
    let mut s = String::from("n,lp_error\n");
    if let Some(w) = &rep.warning {
        let _ = writeln!(s, "warning,{w}");
    }
    for (n, e) in &rep.rows {
        let _ = writeln!(s, "{},{}", n, g17(*e));
    }
    Ok(s)
}

pub const GRID_POINTS: usize = 80;
pub const GRID_EDGE: f64 = 0.95;

/// `GRID_POINTS` equispaced points on `[-GRID_EDGE, GRID_EDGE]`.
pub fn default_grid() -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| -GRID_EDGE + 2.0 * GRID_EDGE * i as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}
pub const AXIS_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRow {
    pub x: f64,
    pub y: f64,
    pub n: usize,
    pub residual: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSweep {
    pub rows: Vec<KernelRow>,
    /// `(n, max residual/bound)`.
    pub max_ratio: Vec<(usize, f64)>,
    /// Grid pairs dropped for lying near an axis or the diagonal.
    pub skipped: usize,
}

/// `|K_n - B(M_n,x,y) - B(M_n,y,x)|` against `|xy|^{-(α+1/2)}/(2-|x|-|y|) + 1`
/// over all grid pairs away from the axes and the diagonal. Degrees default
/// to powers of two up to `n_max`.
pub fn kernel_sweep(c: &ExperimentConfig) -> Result<KernelSweep, CliError> {
    let ns = c.ns.clone().unwrap_or_else(|| {
        let mut v = vec![];
        let mut n = 1;
        while n <= c.n_max {
            v.push(n);
            n *= 2;
        }
        v
    });
    let top = ns.iter().copied().max().expect("nonempty");
    let system = DunklSystem::new(c.alpha, top)?;
    let grid = c.grid.clone().unwrap_or_else(default_grid);
    let mut pairs = Vec::new();
    let mut skipped = 0;
    for &x in &grid {
        for &y in &grid {
            if (x * y).abs() < AXIS_GAP || (x - y).abs() < AXIS_GAP {
                skipped += 1;
            } else {
                pairs.push((x, y));
            }
        }
    }
    let jobs: Vec<(usize, f64, f64)> = ns.iter().flat_map(|&n| pairs.iter().map(move |&(x, y)| (n, x, y))).collect();
    let rows: Vec<KernelRow> = jobs
        .par_iter()
        .map(|&(n, x, y)| {
            let (residual, bound) = remainder_bound_check(&system, n, x, y)?;
            Ok(KernelRow { x, y, n, residual, bound, ratio: residual / bound })
        })
        .collect::<Result<_, CliError>>()?;
    let per_n: Vec<&[KernelRow]> = rows.chunks(pairs.len().max(1)).collect();
    let max_ratio = ns
        .iter()
        .zip(&per_n)
        .map(|(&n, rows)| (n, rows.iter().map(|r| r.ratio).fold(0.0, f64::max)))
        .collect();
    Ok(KernelSweep { rows, max_ratio, skipped })
}

/// `x,y,n,residual,bound,ratio` rows followed by `#` summary lines with
/// the largest ratio per `n` and the number of skipped pairs.
pub fn cmd_kernel_sweep(c: &ExperimentConfig) -> Result<String, CliError> {
    let sweep = kernel_sweep(c)?;
    let mut s = String::from("x,y,n,residual,bound,ratio\n");
    for r in &sweep.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            g17(r.x),
            g17(r.y),
            r.n,
            g17(r.residual),
            g17(r.bound),
            g17(r.ratio)
        );
    }
    for (n, m) in &sweep.max_ratio {
        let _ = writeln!(s, "# n={} max_ratio={}", n, g17(*m));
    }
    let _ = writeln!(s, "# skipped={}", sweep.skipped);
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightJson {
    pub b: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub bb: f64,
    pub extra: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericPair {
    pub pair: String,
    pub analytic: bool,
    pub report: ApReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApCheck {
    pub alpha: f64,
    pub p: f64,
    pub delta: f64,
    pub weight: WeightJson,
    /// Only defined for weights `|x|^b (1-x)^A (1+x)^B`.
    pub corollary: Option<bool>,
    pub thm1: bool,
    pub thm2: bool,
    pub thm3_necessary: bool,
    pub ap_numeric: Vec<NumericPair>,
}

/// Weighted pairs whose `A_p^δ` membership the sufficiency results require
/// for `U = V = w`.
pub fn theorem_pairs(alpha: f64, p: f64, w: &PowerWeight) -> Vec<(String, PowerWeight)> {
    let base = w.pow(p);
    if alpha >= -0.5 {
        let e = (alpha + 0.5) * (2.0 - p);
        vec![("thm1".into(), base.mul(&PowerWeight::abs_power(e)))]
    } else {
        vec![
            ("thm2_first".into(), base.mul(&PowerWeight::abs_power((2.0 * alpha + 1.0) * (1.0 - p)))),
            ("thm2_second".into(), base.mul(&PowerWeight::abs_power(2.0 * alpha + 1.0))),
        ]
    }
}

pub fn ap_check(c: &ExperimentConfig) -> Result<ApCheck, CliError> {
    let w = c.weight.weight();
    let t = theorem_conditions(c.alpha, c.p, &w, &w, c.delta)?;
    let corollary = c
        .weight
        .is_jacobi_type()
        .then(|| corollary_predicate(c.alpha, c.p, c.weight.b, c.weight.a, c.weight.bb));
    let mut numeric = Vec::new();
    if c.numeric {
        for (name, pw) in theorem_pairs(c.alpha.value(), c.p, &w) {
            let report = ap_numeric(&pw, &pw, c.p, c.delta, c.budget)?;
            let analytic = power_pair_in_ap(&pw, &pw, c.p, c.delta);
            numeric.push(NumericPair { pair: name, analytic, report });
        }
    }
    Ok(ApCheck {
        alpha: c.alpha.value(),
        p: c.p,
        delta: c.delta,
        weight: WeightJson { b: c.weight.b, a: c.weight.a, bb: c.weight.bb, extra: c.weight.extra.clone() },
        corollary,
        thm1: t.thm1,
        thm2: t.thm2,
        thm3_necessary: t.thm3_necessary,
        ap_numeric: numeric,
    })
}

pub fn cmd_ap_check(c: &ExperimentConfig) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&ap_check(c)?).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
