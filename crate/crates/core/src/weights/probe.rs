//! Empirical weighted-norm ratios `‖Tf‖_{L^p(u)} / ‖f‖_{L^p(v)}` for the
//! model operators on random localized test functions.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::operators::{calderon_with_breaks, hilbert_with_breaks, operator_j_with_breaks};
use super::power::Weight;
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::quad::ShellRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOperator {
    Calderon,
    Hilbert,
    J,
}

impl ProbeOperator {
    /// Domain of the operator.
    pub fn domain(self) -> (f64, f64) {
        match self {
            ProbeOperator::Calderon => (0.0, 2.0),
            ProbeOperator::Hilbert | ProbeOperator::J => (-1.0, 1.0),
        }
    }

    /// Point at which test functions concentrate.
    pub fn anchor(self) -> f64 {
        match self {
            ProbeOperator::Calderon | ProbeOperator::Hilbert => 0.0,
            ProbeOperator::J => 1.0,
        }
    }

    pub fn apply<F: Fn(f64) -> f64>(self, f: F, breaks: &[f64], x: f64) -> Result<f64> {
        match self {
            ProbeOperator::Calderon => calderon_with_breaks(f, breaks, x),
            ProbeOperator::Hilbert => hilbert_with_breaks(f, breaks, x),
            ProbeOperator::J => operator_j_with_breaks(f, breaks, x),
        }
    }
}

const PIECES: usize = 4;

/// A C¹ piecewise cubic supported on an interval of length `h`, vanishing
/// with its derivative at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpSpline {
    start: f64,
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl BumpSpline {
    /// Random interior knot values and slopes in [-1, 1].
    pub fn random<R: Rng>(rng: &mut R, start: f64, h: f64) -> Self {
        let mut values = vec![0.0; PIECES + 1];
        let mut slopes = vec![0.0; PIECES + 1];
        for i in 1..PIECES {
            values[i] = rng.gen_range(-1.0..1.0);
            slopes[i] = rng.gen_range(-1.0..1.0);
        }
        if values.iter().all(|v| *v == 0.0) {
            values[PIECES / 2] = 1.0;
        }
        BumpSpline { start, h, values, slopes }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.start, self.start + self.h)
    }

    pub fn knots(&self) -> Vec<f64> {
        (0..=PIECES)
            .map(|i| self.start + self.h * i as f64 / PIECES as f64)
            .collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.start) / self.h * PIECES as f64;
        if !(0.0..PIECES as f64).contains(&s) {
            return 0.0;
        }
        let i = (s.floor() as usize).min(PIECES - 1);
        let t = s - i as f64;
        let (p0, p1, m0, m1) = (self.values[i], self.values[i + 1], self.slopes[i], self.slopes[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1
    }
}

/// `‖Tf‖_{L^p(u dx)} / ‖f‖_{L^p(v dx)}` over the operator's domain, `None`
/// when `f` has zero norm and `+∞` when the numerator diverges.
pub fn probe_ratio<F: Fn(f64) -> f64 + Sync>(
    op: ProbeOperator,
    f: F,
    breaks: &[f64],
    u: &dyn Weight,
    v: &dyn Weight,
    p: f64,
) -> Result<Option<f64>> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    let (lo, hi) = op.domain();
    let shells = ShellRule::new();
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.extend(u.singularities());
    pts.extend(v.singularities());
    pts.push(op.anchor());
    let den = shells.integrate(|x| f(x).abs().powf(p) * v.eval(x), lo, hi, &pts);
    if den == 0.0 {
        return Ok(None);
    }
    if !den.is_finite() {
        return Err(Error::InvalidParameter("test function has infinite weighted norm".into()));
    }
    // refine geometrically away from the support so the decay of Tf is resolved
    let (a, b) = (
        breaks.iter().copied().fold(f64::INFINITY, f64::min),
        breaks.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    if a.is_finite() {
        let width = (b - a).max(1e-300);
        let mut d = width;
        while d < hi - lo {
            pts.push(a - d);
            pts.push(b + d);
            d *= 2.0;
        }
    }
    let pts: Vec<f64> = pts.into_iter().filter(|t| *t > lo && *t < hi).collect();
    let err = std::sync::Mutex::new(None);
    let num = shells.integrate(
        |x| match op.apply(&f, breaks, x) {
            Ok(t) => t.abs().powf(p) * u.eval(x),
            Err(e) => {
                err.lock().expect("poisoned").get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        &pts,
    );
    if let Some(e) = err.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(Some((num / den).powf(1.0 / p)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub trial: usize,
    /// Inverse support length of the test function.
    pub freq: f64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    pub max_ratio: f64,
    /// Least-squares slope of `ln ratio` against `ln freq`.
    pub trend: f64,
}

impl ProbeReport {
    /// `trial,freq,ratio`; skipped trials leave `ratio` empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "trial,freq,ratio")?;
        for r in &self.rows {
            let ratio = r.ratio.map(g17).unwrap_or_default();
            writeln!(out, "{},{},{}", r.trial, g17(r.freq), ratio)?;
        }
        Ok(())
    }
}

/// Runs `trials` test functions; trial `k` is a random [`BumpSpline`]
/// of support length `2^{-k}` at the operator's anchor, drawn from a
/// generator seeded with `(seed, k)`.
pub fn boundedness_probe(
    op: ProbeOperator,
    u: &dyn Weight,
    v: &dyn Weight,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let rows = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let h = 0.5f64.powi(k as i32);
            let (lo, hi) = op.domain();
            let start = (op.anchor() - if op.anchor() == hi { h } else { 0.0 }).max(lo);
            let f = BumpSpline::random(&mut rng, start, h);
            let ratio = probe_ratio(op, |x| f.eval(x), &f.knots(), u, v, p)?;
            Ok(ProbeRow { trial: k, freq: 1.0 / h, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_ratio = rows.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.ratio.filter(|v| v.is_finite() && *v > 0.0).map(|v| (r.freq.ln(), v.ln())))
        .collect();
    Ok(ProbeReport { rows, max_ratio, trend: slope(&pts) })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
