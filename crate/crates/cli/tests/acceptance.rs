use std::time::Instant;

use fdunkl_cli::{
    cmd_ap_check, cmd_convergence, cmd_kernel_sweep, cmd_norm_growth, cmd_zeros, kernel_sweep, last_octave_slope,
    norm_growth_rows, ConfigArgs, ExperimentConfig,
};
use fourier_dunkl::dunkl::{b_function, kernel_closed_sum_form, kernel_direct, DunklSystem};
use fourier_dunkl::measure::build_rule;
use fourier_dunkl::specfun::{build_zero_table, e_alpha_imag};
use fourier_dunkl::weights::{
    ap_numeric, calderon, corollary_predicate, hilbert_with_breaks, operator_j_with_breaks, power_pair_in_ap,
    theorem_conditions, ApVerdict, PowerWeight,
};
use fourier_dunkl::AlphaParam;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn alpha(a: f64) -> AlphaParam {
    AlphaParam::new(a).unwrap()
}

fn config(args: &[(&str, &str)]) -> ExperimentConfig {
    let mut c = ConfigArgs::default();
    for &(k, v) in args {
        let v = Some(v.to_string());
        match k {
            "alpha" => c.alpha = v,
            "p" => c.p = v,
            "nmax" => c.nmax = v,
            "order" => c.order = v,
            "ns" => c.ns = v,
            "function" => c.function = v,
            "weight" => c.weight = v,
            "seed" => c.seed = v,
            "method" => c.method = v,
            "grid" => c.grid = v,
            _ => panic!("{k}"),
        }
    }
    c.resolve().unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn orthonormality() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for a in [-0.75, -0.5, 0.0, 2.0] {
        let sys = DunklSystem::new(alpha(a), 16).map_err(|e| e.to_string())?;
        let rule = build_rule(alpha(a), 128).map_err(|e| e.to_string())?;
        let vals = sys.node_values(&rule, 16).map_err(|e| e.to_string())?;
        for j in 0..33 {
            for k in 0..33 {
                let g: Complex64 = rule
                    .weights()
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w * vals[j][i] * vals[k][i].conj())
                    .sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-8 && secs <= 60.0, format!("max |<e_j,e_k> - delta| = {worst:.3e}, {secs:.1} s"))
}

fn trig_reduction() -> Outcome {
    let a = alpha(-0.5);
    let sys = DunklSystem::new(a, 10).map_err(|e| e.to_string())?;
    let c = 2f64.powf(-0.25) * std::f64::consts::PI.powf(0.25);
    let mut worst = 0.0f64;
    for i in 0..=400 {
        let x = -1.0 + i as f64 / 200.0;
        for j in -10i64..=10 {
            let e = sys.eval_e(j, x).map_err(|e| e.to_string())?;
            let t = Complex64::from_polar(c, std::f64::consts::PI * j as f64 * x);
            worst = worst.max((e - t).norm());
        }
    }
    let table = build_zero_table(a, 50).map_err(|e| e.to_string())?;
    let zeros = table
        .zeros()
        .iter()
        .enumerate()
        .map(|(k, s)| (s - (k + 1) as f64 * std::f64::consts::PI).abs())
        .fold(0.0, f64::max);
    check(worst <= 1e-10 && zeros <= 1e-12, format!("basis error {worst:.3e}, zero error {zeros:.3e}"))
}

const FIXED_BITS: u64 = 320;

fn to_fixed(x: f64) -> BigInt {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64 - 1075;
    let mant = BigInt::from((bits & ((1u64 << 52) - 1)) | (1u64 << 52));
    let shift = FIXED_BITS as i64 + exp;
    assert!(shift >= 0);
    mant << shift as u64
}

// sign of the power series of J_1 summed in 320-bit fixed point
fn j1_sign(x: f64) -> std::cmp::Ordering {
    let xf = to_fixed(x);
    let q: BigInt = (&xf * &xf) >> (FIXED_BITS + 2);
    let mut term: BigInt = &xf >> 1u32;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    while term != BigInt::from(0) {
        term = -((&term * &q) >> FIXED_BITS) / BigInt::from(k * (k + 1));
        sum += &term;
        k += 1;
    }
    sum.sign().cmp(&num_bigint::Sign::NoSign)
}

fn zero_accuracy() -> Outcome {
    let table = build_zero_table(alpha(0.0), 10).map_err(|e| e.to_string())?;
    let mut oracle = Vec::new();
    let mut lo = 0.5;
    while oracle.len() < 10 {
        let hi = lo + 0.05;
        if j1_sign(lo) != j1_sign(hi) {
            let (mut a, mut b) = (lo, hi);
            let sa = j1_sign(a);
            loop {
                let m = 0.5 * (a + b);
                if m == a || m == b {
                    break;
                }
                if j1_sign(m) == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            oracle.push(0.5 * (a + b));
        }
        lo = hi;
    }
    let worst = table.zeros().iter().zip(&oracle).map(|(s, o)| (s - o).abs()).fold(0.0, f64::max);
    check(worst <= 1e-9, format!("max |s_j - oracle| = {worst:.3e}"))
}

fn kernel_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_k = 0.0f64;
    for _ in 0..200 {
        let a = rng.gen_range(-0.95..3.0);
        let n = rng.gen_range(0..=20usize);
        let x: f64 = rng.gen_range(-0.99..0.99);
        let y: f64 = rng.gen_range(-0.99..0.99);
        let sys = DunklSystem::new(alpha(a), 20).map_err(|e| e.to_string())?;
        let d = kernel_direct(&sys, n, x, y).map_err(|e| e.to_string())?;
        let c = kernel_closed_sum_form(&sys, n, x, y).map_err(|e| e.to_string())?;
        worst_k = worst_k.max((d - c).abs() / d.abs().max(1.0));
    }
    let mut worst_b = 0.0f64;
    for _ in 0..50 {
        let a = rng.gen_range(-0.95..3.0);
        let m = rng.gen_range(1.0..20.0);
        let x: f64 = rng.gen_range(-0.99..0.99);
        let y: f64 = rng.gen_range(-0.99..0.99);
        let al = alpha(a);
        let sys = DunklSystem::new(al, 1).map_err(|e| e.to_string())?;
        let b = b_function(&sys, m, x, y).map_err(|e| e.to_string())?
            + b_function(&sys, m, y, x).map_err(|e| e.to_string())?;
        // ∫_{-M}^{M} E(izx) conj E(izy) dμ(z) = M^{2α+2} ∫_{-1}^{1} E(iMtx) conj E(iMty) dμ(t)
        let rule = build_rule(al, 200).map_err(|e| e.to_string())?;
        let q = rule
            .integrate_complex(|t| e_alpha_imag(al, m * t * x).unwrap() * e_alpha_imag(al, m * t * y).unwrap().conj())
            .map_err(|e| e.to_string())?
            .re
            * m.powf(2.0 * a + 2.0);
        worst_b = worst_b.max((q - b).abs() / b.abs().max(1.0));
    }
    check(
        worst_k <= 1e-8 && worst_b <= 1e-6,
        format!("closed vs direct {worst_k:.3e}, B-sum vs quadrature {worst_b:.3e}"),
    )
}

fn kernel_bound_stability() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for a in ["-0.75", "0"] {
        let sweep = kernel_sweep(&config(&[("alpha", a), ("ns", "8,16,32")])).map_err(|e| e.to_string())?;
        let c: Vec<f64> = sweep.max_ratio.iter().map(|m| m.1).collect();
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(0.0, f64::max);
        let var = (hi - lo) / lo;
        ok &= var <= 0.25;
        parts.push(format!("alpha {a}: C = {c:.3?}, variation {:.1}%", 100.0 * var));
    }
    check(ok, parts.join("; "))
}

fn convergence_dichotomy() -> Outcome {
    let rows2 = norm_growth_rows(&config(&[("alpha", "0"), ("p", "2"), ("nmax", "64"), ("order", "200")]))
        .map_err(|e| e.to_string())?;
    let (lo2, hi2) = rows2.iter().fold((f64::INFINITY, 0.0f64), |(l, h), r| {
        (l.min(r.norm_estimate), h.max(r.norm_estimate))
    });
    let slope = |p: &str| -> Result<f64, String> {
        let rows = norm_growth_rows(&config(&[("alpha", "0"), ("p", p), ("nmax", "64"), ("order", "200")]))
            .map_err(|e| e.to_string())?;
        Ok(last_octave_slope(&rows))
    };
    let (s3, s6) = (slope("3")?, slope("6")?);
    check(
        lo2 >= 0.98 && hi2 <= 1.02 && s3 <= 0.05 && s6 >= 0.05,
        format!("p=2 range [{lo2:.6}, {hi2:.6}], p=3 slope {s3:.4}, p=6 slope {s6:.4}"),
    )
}

fn corollary_grid() -> Outcome {
    let mut cases = 0;
    let mut positive = 0;
    let mut bad = Vec::new();
    for a in [-0.75, -0.5, 0.0, 1.0] {
        for p in [1.5, 2.0, 3.0, 6.0] {
            for b in [-0.4, 0.0, 0.4] {
                cases += 1;
                if !corollary_predicate(alpha(a), p, b, 0.0, 0.0) {
                    continue;
                }
                positive += 1;
                let w = PowerWeight::jacobi_type(b, 0.0, 0.0);
                let t = theorem_conditions(alpha(a), p, &w, &w, 1.0).map_err(|e| e.to_string())?;
                let sufficient = if a >= -0.5 { t.thm1 } else { t.thm2 };
                if !(sufficient && t.thm3_necessary) {
                    bad.push((a, p, b));
                }
            }
        }
    }
    check(
        bad.is_empty(),
        format!("{cases} cases, {positive} satisfy the predicate, counterexamples {bad:?}"),
    )
}

fn ap_cross_validation() -> Outcome {
    let mut compared = 0;
    let mut mismatches = Vec::new();
    let mut nesting = Vec::new();
    for g in [-0.9, -0.5, 0.0, 0.5, 0.9, 1.5] {
        for p in [1.5, 2.0, 3.0] {
            if (g + 1.0f64).abs() < 0.05 || (g - (p - 1.0f64)).abs() < 0.05 {
                continue;
            }
            let w = PowerWeight::abs_power(g);
            let analytic = power_pair_in_ap(&w, &w, p, 1.0);
            let rep = ap_numeric(&w, &w, p, 1.0, 20).map_err(|e| e.to_string())?;
            compared += 1;
            if (rep.verdict == ApVerdict::Satisfied) != analytic || rep.verdict == ApVerdict::Inconclusive {
                mismatches.push((g, p, rep.verdict));
            }
            for delta in [1.5, 2.0] {
                let strong = ap_numeric(&w, &w, p, delta, 20).map_err(|e| e.to_string())?;
                let analytic_strong = power_pair_in_ap(&w, &w, p, delta);
                if (strong.verdict == ApVerdict::Satisfied && rep.verdict != ApVerdict::Satisfied)
                    || (analytic_strong && !analytic)
                {
                    nesting.push((g, p, delta));
                }
            }
        }
    }
    check(
        mismatches.is_empty() && nesting.is_empty(),
        format!("{compared} pairs compared, mismatches {mismatches:?}, nesting failures {nesting:?}"),
    )
}

fn operator_oracles() -> Outcome {
    let (a, b) = (-0.3, 0.45);
    let ind = |y: f64| if (a..b).contains(&y) { 1.0 } else { 0.0 };
    let mut worst_h = 0.0f64;
    for k in 0..20 {
        let x = -0.95 + 1.9 * (k as f64 + 0.5) / 20.0;
        let h = hilbert_with_breaks(ind, &[a, b], x).map_err(|e| e.to_string())?;
        worst_h = worst_h.max((h - ((x - a) / (x - b)).abs().ln()).abs());
    }
    let mut worst_c = 0.0f64;
    for x in [1e-3, 0.05, 0.3, 0.9, 1.4, 1.99] {
        let v = calderon(|_| 1.0, x).map_err(|e| e.to_string())?;
        worst_c = worst_c.max((v - (1.0 + (2.0 / x).ln())).abs());
    }
    let fs: [(&dyn Fn(f64) -> f64, &[f64]); 3] = [
        (&|y: f64| y.sin() * 3.0, &[]),
        (&|y: f64| if y > 0.2 { -1.0 } else { 0.5 }, &[0.2]),
        (&|y: f64| (1.0 - y).powf(-0.3) * (5.0 * y).cos(), &[]),
    ];
    let mut violations = 0;
    for (f, br) in fs {
        let br1: Vec<f64> = br.iter().map(|t| 1.0 - t).collect();
        for k in 0..20 {
            let x = -0.95 + 1.9 * (k as f64 + 0.5) / 20.0;
            let j = operator_j_with_breaks(f, br, x).map_err(|e| e.to_string())?;
            let bound = fourier_dunkl::weights::calderon_with_breaks(|t| f(1.0 - t), &br1, 1.0 - x)
                .map_err(|e| e.to_string())?;
            if j.abs() > bound * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }
    check(
        worst_h <= 1e-6 && worst_c <= 1e-8 && violations == 0,
        format!("hilbert error {worst_h:.3e}, calderon error {worst_c:.3e}, domination violations {violations}"),
    )
}

fn reproducibility() -> Outcome {
    let runs: [(&str, fn(&ExperimentConfig) -> Result<String, fdunkl_cli::CliError>, ExperimentConfig); 6] = [
        ("zeros", cmd_zeros, config(&[("alpha", "0.3"), ("nmax", "20")])),
        ("norm-growth", cmd_norm_growth, config(&[("p", "3"), ("nmax", "8"), ("order", "48"), ("seed", "7")])),
        (
            "norm-growth random",
            cmd_norm_growth,
            config(&[("p", "3"), ("nmax", "6"), ("order", "32"), ("seed", "7"), ("method", "random_probe")]),
        ),
        ("convergence", cmd_convergence, config(&[("alpha", "-0.75"), ("nmax", "12"), ("function", "step")])),
        ("kernel-sweep", cmd_kernel_sweep, config(&[("alpha", "0.5"), ("ns", "4,8"), ("grid", "-0.8,-0.2,0.3,0.7")])),
        ("ap-check", cmd_ap_check, config(&[("alpha", "-0.75"), ("p", "3"), ("weight", "0.4,0.1,0")])),
    ];
    let mut differ = Vec::new();
    for (name, f, c) in &runs {
        let a = f(c).map_err(|e| e.to_string())?;
        let b = f(c).map_err(|e| e.to_string())?;
        if a != b {
            differ.push(*name);
        }
    }
    check(differ.is_empty(), format!("{} commands run twice, differing: {differ:?}", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("orthonormality", orthonormality),
        ("trigonometric reduction", trig_reduction),
        ("zero accuracy", zero_accuracy),
        ("kernel identity", kernel_identity),
        ("kernel bound stability", kernel_bound_stability),
        ("convergence dichotomy", convergence_dichotomy),
        ("corollary predicate", corollary_grid),
        ("A_p cross-validation", ap_cross_validation),
        ("operator oracles", operator_oracles),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
