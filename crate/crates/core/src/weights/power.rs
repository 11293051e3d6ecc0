use serde::{Deserialize, Serialize};

/// A nonnegative weight on (-1,1) with a known finite set of singular points.
///
/// `eval_near(anchor, offset)` evaluates at `anchor + offset`; implementors
/// whose singularities sit at `anchor` should use `offset` directly so that
/// tiny offsets keep full relative precision.
pub trait Weight: Sync {
    fn eval(&self, x: f64) -> f64;

    fn eval_near(&self, anchor: f64, offset: f64) -> f64 {
        self.eval(anchor + offset)
    }

    fn singularities(&self) -> Vec<f64>;

    fn as_power(&self) -> Option<&PowerWeight> {
        None
    }
}

/// `Π |x - t_i|^{γ_i}` in canonical form (sorted by `t`, equal `t` merged,
/// vanishing exponents dropped).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerWeight {
    factors: Vec<(f64, f64)>,
}

impl PowerWeight {
    /// The constant weight 1.
    pub fn one() -> Self {
        PowerWeight::default()
    }

    pub fn new<I: IntoIterator<Item = (f64, f64)>>(factors: I) -> Self {
        let mut fs: Vec<(f64, f64)> = factors.into_iter().collect();
        fs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(fs.len());
        for (t, g) in fs {
            match merged.last_mut() {
                Some(last) if last.0 == t => last.1 += g,
                _ => merged.push((t, g)),
            }
        }
        merged.retain(|&(_, g)| g != 0.0);
        PowerWeight { factors: merged }
    }

    /// `|x|^γ`
    pub fn abs_power(gamma: f64) -> Self {
        PowerWeight::new([(0.0, gamma)])
    }

    /// `|x|^b (1-x)^A (1+x)^B`
    pub fn jacobi_type(b: f64, a_exp: f64, b_exp: f64) -> Self {
        PowerWeight::new([(0.0, b), (1.0, a_exp), (-1.0, b_exp)])
    }

    pub fn factors(&self) -> &[(f64, f64)] {
        &self.factors
    }

    /// Exponent of the factor located at `t` (0 if absent).
    pub fn exponent_at(&self, t: f64) -> f64 {
        self.factors
            .iter()
            .find(|f| f.0 == t)
            .map_or(0.0, |f| f.1)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &PowerWeight) -> PowerWeight {
        PowerWeight::new(self.factors.iter().chain(other.factors.iter()).copied())
    }

    /// `w^s`
    pub fn pow(&self, s: f64) -> PowerWeight {
        PowerWeight::new(self.factors.iter().map(|&(t, g)| (t, g * s)))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }
}

impl Weight for PowerWeight {
    fn eval(&self, x: f64) -> f64 {
        self.factors
            .iter()
            .map(|&(t, g)| (x - t).abs().powf(g))
            .product()
    }

    fn eval_near(&self, anchor: f64, offset: f64) -> f64 {
        self.factors
            .iter()
            .map(|&(t, g)| {
                let d = if t == anchor { offset } else { anchor + offset - t };
                d.abs().powf(g)
            })
            .product()
    }

    fn singularities(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.0).collect()
    }

    fn as_power(&self) -> Option<&PowerWeight> {
        Some(self)
    }
}

/// A weight given by a closure plus its declared singular points.
pub struct FnWeight<F: Fn(f64) -> f64 + Sync> {
    f: F,
    singular: Vec<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> FnWeight<F> {
    pub fn new(f: F, singular: Vec<f64>) -> Self {
        FnWeight { f, singular }
    }
}

impl<F: Fn(f64) -> f64 + Sync> Weight for FnWeight<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn singularities(&self) -> Vec<f64> {
        self.singular.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_merges_and_sorts() {
        let w = PowerWeight::new([(0.5, 1.0), (-0.2, 2.0), (0.5, -0.25), (0.1, 0.0)]);
        assert_eq!(w.factors(), &[(-0.2, 2.0), (0.5, 0.75)]);
        assert!(PowerWeight::new([(0.3, 1.0), (0.3, -1.0)]).is_one());
    }

    #[test]
    fn jacobi_type_values() {
        let w = PowerWeight::jacobi_type(0.5, 1.0, 2.0);
        let x: f64 = 0.25;
        let expect = x.abs().powf(0.5) * (1.0 - x) * (1.0 + x).powi(2);
        assert!((w.eval(x) - expect).abs() < 1e-15);
        assert_eq!(w.exponent_at(1.0), 1.0);
        assert_eq!(w.exponent_at(0.7), 0.0);
    }

    #[test]
    fn eval_near_keeps_precision() {
        let w = PowerWeight::abs_power(-0.5).mul(&PowerWeight::new([(1.0, -0.5)]));
        let v = w.eval_near(1.0, -1e-30);
        assert!((v - 1e15).abs() < 1e3);
    }

    proptest! {
        #[test]
        fn positive_off_singularities(x in -0.999f64..0.999, g in -2.0f64..2.0, t in -1.0f64..1.0) {
            prop_assume!((x - t).abs() > 1e-6 && x.abs() > 1e-6);
            let w = PowerWeight::new([(t, g), (0.0, 0.3)]);
            let v = w.eval(x);
            prop_assert!(v.is_finite() && v > 0.0);
        }
    }
}
