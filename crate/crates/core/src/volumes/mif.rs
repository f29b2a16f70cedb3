//! Expected number of simple closed geodesics weighted by a test function,
//! through Mirzakhani's integration formula:
//!
//! E_g = ∫ V_{g−1,2}(ℓ,ℓ)/V_g F(ℓ) ℓ dℓ + Σ_{i=1}^{⌊g/2⌋} ∫ V_{i,1}(ℓ)V_{g−i,1}(ℓ)/V_g F(ℓ) ℓ dℓ.

use super::{closed_volume, diagonal_series, series_mul, volume_at, ExactRatio, RATIO_PREC};
use crate::error::{Error, Result};
use crate::intersection::MemoStore;
use crate::quad::{gauss_legendre, integrate, QuadResult};
use crate::scalar::{PiPoly, Rational};

const ABS_TOL: f64 = 1e-12;

/// Numerator of the volume factor as a series in ℓ², before division by V_g.
fn numerator_series(g: u32, store: &MemoStore) -> Result<Vec<PiPoly>> {
    if g < 2 {
        return Err(Error::domain(format!("simple geodesic expectation needs g >= 2, got {g}")));
    }
    let mut acc = diagonal_series(g - 1, 2, store)?;
    for i in 1..=g / 2 {
        let a = diagonal_series(i, 1, store)?;
        let b = diagonal_series(g - i, 1, store)?;
        let p = series_mul(&a, &b);
        if p.len() > acc.len() {
            acc.resize(p.len(), PiPoly::zero());
        }
        for (k, c) in p.iter().enumerate() {
            acc[k] += c;
        }
    }
    Ok(acc)
}

/// Coefficients a_k with [V_{g−1,2}(ℓ,ℓ) + Σᵢ V_{i,1}(ℓ)V_{g−i,1}(ℓ)]/V_g = Σ a_k ℓ^{2k}.
pub fn simple_integrand_series(g: u32, store: &MemoStore) -> Result<Vec<f64>> {
    let vg = closed_volume(g, store)?;
    numerator_series(g, store)?
        .into_iter()
        .map(|c| {
            let r = ExactRatio::new(c, vg.clone())?;
            Ok(r.interval(RATIO_PREC)?.midpoint_f64())
        })
        .collect()
}

/// Exact ℓ·[V_{g−1,2}(ℓ,ℓ) + Σᵢ V_{i,1}(ℓ)V_{g−i,1}(ℓ)]/V_g at a rational length.
pub fn simple_integrand_at(g: u32, l: &Rational, store: &MemoStore) -> Result<ExactRatio> {
    let vg = closed_volume(g, store)?;
    let mut num = volume_at(g - 1, 2, &[l.clone(), l.clone()], store)?;
    for i in 1..=g / 2 {
        let a = volume_at(i, 1, std::slice::from_ref(l), store)?;
        let b = volume_at(g - i, 1, std::slice::from_ref(l), store)?;
        num += &(&a * &b);
    }
    ExactRatio::new(num.scale(l), vg)
}

fn horner_even(a: &[f64], l: f64) -> f64 {
    let t = l * l;
    a.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Composite Gauss–Legendre on `panels` equal panels.
fn composite(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        for (x, w) in rule.0.iter().zip(&rule.1) {
            s += w * f(c + 0.5 * h * x);
        }
    }
    s * 0.5 * h
}

/// A quadrature value with its adaptive error estimate and the change seen
/// when the fixed-rule panel count is doubled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimpleExpectation {
    pub value: f64,
    pub error: f64,
    pub self_error: f64,
}

fn checked_integral(f: &dyn Fn(f64) -> f64, l: f64) -> Result<SimpleExpectation> {
    if !(l >= 0.0 && l.is_finite()) {
        return Err(Error::domain(format!("support length must be finite and >= 0, got {l}")));
    }
    let adaptive: QuadResult = integrate(f, 0.0, l, ABS_TOL, 0.0)?;
    let rule = gauss_legendre(10);
    let coarse = composite(f, 0.0, l, 64, &rule);
    let fine = composite(f, 0.0, l, 128, &rule);
    let self_error = (coarse - fine).abs().max((fine - adaptive.value).abs());
    Ok(SimpleExpectation { value: adaptive.value, error: adaptive.error, self_error })
}

/// E_g[Σ_γ simple F(ℓ_γ)] for F supported in [0, L].
pub fn simple_expectation(
    g: u32,
    f: &dyn Fn(f64) -> f64,
    l: f64,
    store: &MemoStore,
) -> Result<SimpleExpectation> {
    let a = simple_integrand_series(g, store)?;
    checked_integral(&|x| x * f(x) * horner_even(&a, x), l)
}

/// ∫_0^L 4 sinh²(ℓ/2)/ℓ · F(ℓ) dℓ, the g → ∞ limit of [`simple_expectation`].
pub fn leading_simple_integral(f: &dyn Fn(f64) -> f64, l: f64) -> Result<SimpleExpectation> {
    let kernel = |x: f64| {
        if x < 1e-4 {
            // 4sinh²(x/2)/x = x + x³/12 + …
            x + x * x * x / 12.0
        } else {
            4.0 * (0.5 * x).sinh().powi(2) / x
        }
    };
    checked_integral(&|x| kernel(x) * f(x), l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn series_matches_exact_evaluation() {
        let s = MemoStore::new();
        for g in [2, 3, 4] {
            let a = simple_integrand_series(g, &s).unwrap();
            for l in [q(1, 2), q(2, 1), q(7, 3)] {
                let lf = crate::scalar::rational_to_f64(&l);
                let exact = simple_integrand_at(g, &l, &s).unwrap().to_f64();
                let approx = lf * horner_even(&a, lf);
                assert!((exact - approx).abs() <= 1e-13 * exact.abs(), "g={g} l={lf}");
            }
        }
    }

    #[test]
    fn zero_function_integrates_to_zero() {
        let s = MemoStore::new();
        let r = simple_expectation(3, &|_| 0.0, 2.0, &s).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn leading_integral_of_constant() {
        // ∫_0^2 2(cosh x − 1)/x dx = 2 Σ_{k≥1} 2^{2k}/(2k·(2k)!)
        let mut series = 0.0;
        let mut fact = 1.0;
        for k in 1..20 {
            fact *= (2 * k - 1) as f64 * (2 * k) as f64;
            series += 4f64.powi(k) / (2.0 * k as f64 * fact);
        }
        let r = leading_simple_integral(&|_| 1.0, 2.0).unwrap();
        assert!((r.value - 2.0 * series).abs() < 1e-12);
        assert!(r.self_error < 1e-12);
    }

    #[test]
    fn needs_genus_two() {
        let s = MemoStore::new();
        assert!(simple_expectation(1, &|_| 1.0, 1.0, &s).is_err());
    }
}
