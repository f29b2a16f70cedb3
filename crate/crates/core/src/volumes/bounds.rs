//! Checks of the general volume estimates on computed data.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{check_lengths, check_stable, volume, volume_at, w_r, ExactRatio};
use crate::error::{Error, Result};
use crate::intersection::{is_stable, MemoStore};
use crate::scalar::{compare, factorial, PiPoly, Rational};

/// Outcome of 1 ≤ V_{g,n}(x)/V_{g,n} ≤ exp(Σxᵢ/2) at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpBoundCheck {
    pub lower: bool,
    pub upper: bool,
    /// Taylor terms of exp needed to certify the upper bound (0 if it failed).
    pub terms: usize,
    pub ratio: f64,
    pub exp_bound: f64,
}

/// Σ_{k≤N} s^k/k!, a rational lower bound for e^s when s ≥ 0.
fn exp_partial_sum(s: &Rational, terms: usize) -> Rational {
    let mut acc = Rational::zero();
    let mut t = Rational::one();
    for k in 0..=terms {
        acc += &t;
        t = t * s / Rational::from_integer(BigInt::from(k + 1));
    }
    acc
}

/// Certifies both sides exactly: the lower by comparing V(x) with V, the
/// upper by V(x) ≤ T_N(s)·V for a Taylor partial sum T_N(s) ≤ e^s.
pub fn expbound_check(g: u32, n: usize, x: &[Rational], store: &MemoStore) -> Result<ExpBoundCheck> {
    check_stable(g, n)?;
    check_lengths(n, x)?;
    let v = volume(g, n, store)?;
    let vx = volume_at(g, n, x, store)?;
    let lower = compare(&vx, &v)? != Ordering::Less;
    let s = x.iter().fold(Rational::zero(), |a, b| a + b) / Rational::from_integer(2.into());
    let mut terms = 0;
    for n_terms in [8usize, 16, 32, 64, 128, 256] {
        if compare(&v.scale(&exp_partial_sum(&s, n_terms)), &vx)? != Ordering::Less {
            terms = n_terms;
            break;
        }
    }
    Ok(ExpBoundCheck {
        lower,
        upper: terms > 0,
        terms,
        ratio: ExactRatio::new(vx, v)?.to_f64(),
        exp_bound: (crate::scalar::rational_to_f64(&s)).exp(),
    })
}

/// V_{g,n} ≤ V_{g+1,n−2}, decided exactly.
pub fn monotonicity_holds(g: u32, n: usize, store: &MemoStore) -> Result<bool> {
    if n < 2 {
        return Err(Error::domain("monotonicity compares against n - 2 boundaries; need n >= 2"));
    }
    check_stable(g, n)?;
    Ok(compare(&volume(g, n, store)?, &volume(g + 1, n - 2, store)?)? != Ordering::Greater)
}

/// Per-instance (V_{g,n}/(2g+n)!)^{1/(2g+n)} and their maximum, the smallest C
/// with V_{g,n} ≤ C^{2g+n}(2g+n)! on the range.
#[derive(Clone, Debug, PartialEq)]
pub struct GrushevskyFit {
    pub instances: Vec<(u32, usize, f64)>,
    pub c: f64,
}

/// Fits C over all stable (g, n) with 3g − 3 + n ≤ `max_dim`.
pub fn grushevsky_constants(max_dim: i64, store: &MemoStore) -> Result<GrushevskyFit> {
    let mut instances = Vec::new();
    for g in 0..=(max_dim as u32 + 3) / 3 {
        for n in 0..=(max_dim + 3 - 3 * g as i64).max(0) as usize {
            if !is_stable(g, n) || (g == 1 && n == 0) {
                continue;
            }
            let m = 2 * g + n as u32;
            let fact = PiPoly::from_rational(Rational::from_integer(BigInt::from(factorial(m))));
            let r = ExactRatio::new(volume(g, n, store)?, fact)?.to_f64();
            instances.push((g, n, r.powf(1.0 / m as f64)));
        }
    }
    let c = instances.iter().map(|t| t.2).fold(0.0, f64::max);
    Ok(GrushevskyFit { instances, c })
}

/// Σ over (g₁..g_q) with 2gᵢ − 2 + nᵢ ≥ 1 and Σ(2gᵢ − 2 + nᵢ) = r of ∏ V_{gᵢ,nᵢ}.
pub fn euler_split_sum(r: u32, ns: &[usize], store: &MemoStore) -> Result<PiPoly> {
    fn rec(
        i: usize,
        left: i64,
        ns: &[usize],
        acc: &PiPoly,
        store: &MemoStore,
        out: &mut PiPoly,
    ) -> Result<()> {
        if i == ns.len() {
            if left == 0 {
                *out += acc;
            }
            return Ok(());
        }
        let n = ns[i];
        for g in 0.. {
            let e = 2 * g as i64 - 2 + n as i64;
            if e > left {
                break;
            }
            if e < 1 {
                continue;
            }
            let next = acc * &volume(g, n, store)?;
            rec(i + 1, left - e, ns, &next, store, out)?;
        }
        Ok(())
    }
    if ns.is_empty() {
        return Err(Error::domain("need q >= 1 factors"));
    }
    let mut out = PiPoly::zero();
    rec(0, r as i64, ns, &PiPoly::one(), store, &mut out)?;
    Ok(out)
}

/// r^{q−1} · [`euler_split_sum`] / W_r, expected to stay below c·D^{q−1}.
pub fn euler_split_ratio(r: u32, ns: &[usize], store: &MemoStore) -> Result<f64> {
    let s = euler_split_sum(r, ns, store)?;
    let q = ns.len() as i32;
    Ok(ExactRatio::new(s, w_r(r, store)?)?.to_f64() * (r as f64).powi(q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn expbound_at_small_points() {
        let s = MemoStore::new();
        let c = expbound_check(1, 1, &[q(3, 1)], &s).unwrap();
        assert!(c.lower && c.upper);
        let c = expbound_check(0, 4, &vec![q(0, 1); 4], &s).unwrap();
        assert!(c.lower && c.upper);
        assert_eq!(c.ratio, 1.0);
    }

    #[test]
    fn monotonicity_from_four_boundaries() {
        let s = MemoStore::new();
        for (g, n) in [(0, 4), (0, 5), (1, 4), (0, 6), (2, 4)] {
            assert!(monotonicity_holds(g, n, &s).unwrap(), "({g}, {n})");
        }
        // fails below four boundaries: V_{1,3} = 14π⁶/9 > V_{2,1} = 29π⁸/192
        assert!(!monotonicity_holds(1, 3, &s).unwrap());
    }

    #[test]
    fn euler_split_single_factor_is_w() {
        let s = MemoStore::new();
        // q = 1, n₁ = 0: only g₁ = r/2 + 1 contributes
        assert_eq!(euler_split_sum(4, &[0], &s).unwrap(), w_r(4, &s).unwrap());
        assert_eq!(euler_split_sum(3, &[1], &s).unwrap(), w_r(3, &s).unwrap());
        // (g₁, g₂) with n = (1, 1): 2g₁−1 + 2g₂−1 = 4 ⇒ g₁ + g₂ = 3
        let v11 = volume(1, 1, &s).unwrap();
        let v21 = volume(2, 1, &s).unwrap();
        let expect = &(&v11 * &v21) + &(&v21 * &v11);
        assert_eq!(euler_split_sum(4, &[1, 1], &s).unwrap(), expect);
    }

    #[test]
    fn grushevsky_fit_is_finite() {
        let s = MemoStore::new();
        let fit = grushevsky_constants(6, &s).unwrap();
        assert!(fit.c.is_finite() && fit.c > 0.0);
        assert!(fit.instances.iter().all(|t| t.2 <= fit.c));
    }
}
