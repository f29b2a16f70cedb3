//! Weil–Petersson volumes and the quantities built from them.
//!
//! V_{g,n}(x) = Σ_d [∏τ_{dᵢ}]_{g,n} ∏ (xᵢ/2)^{2dᵢ}/(2dᵢ+1)!, so every
//! evaluation at rational lengths stays in ℚ[π²].

mod bounds;
mod mif;
mod splits;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intersection::{coefficient, intersection_number, is_stable, MemoStore, TauIndex};
use crate::scalar::{factorial, Interval, PiPoly, Rational};

pub use bounds::{
    expbound_check, grushevsky_constants, euler_split_ratio, euler_split_sum, monotonicity_holds,
    ExpBoundCheck, GrushevskyFit,
};
pub use mif::{
    leading_simple_integral, simple_expectation, simple_integrand_at, simple_integrand_series,
    SimpleExpectation,
};
pub use splits::{enumerate_splits, phi, SplitIndex};

/// Bits used when a ratio is turned into an enclosure.
const RATIO_PREC: u32 = 256;

fn dim(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

fn check_stable(g: u32, n: usize) -> Result<()> {
    if !is_stable(g, n) {
        return Err(Error::domain(format!(
            "unstable (g, n) = ({g}, {n}): need 2g - 2 + n >= 1"
        )));
    }
    Ok(())
}

/// Multisets of size n (descending) with total at most `max`.
pub(crate) fn multisets(n: usize, max: i64) -> Vec<Vec<u32>> {
    fn rec(n: usize, budget: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in (0..=cap.min(budget)).rev() {
            cur.push(v);
            rec(n, budget - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if max < 0 {
        return out;
    }
    rec(n, max as u32, max as u32, &mut Vec::new(), &mut out);
    out
}

/// (x/2)^{2k}/(2k+1)! for k = 0..=top.
fn length_factors(x: &Rational, top: usize) -> Vec<Rational> {
    let half_sq = {
        let h = x / Rational::from_integer(2.into());
        &h * &h
    };
    let mut out = Vec::with_capacity(top + 1);
    let mut pw = Rational::one();
    for k in 0..=top {
        out.push(&pw / Rational::from_integer(BigInt::from(factorial(2 * k as u32 + 1))));
        pw *= &half_sq;
    }
    out
}

/// Σ over distinct arrangements σ of the multiset m of ∏ᵢ f[i][m_σ(i)].
fn arrangement_sum(m: &[u32], f: &[Vec<Rational>]) -> Rational {
    let mut values: Vec<(u32, u8)> = Vec::new();
    for &v in m {
        match values.last_mut() {
            Some((x, c)) if *x == v => *c += 1,
            _ => values.push((v, 1)),
        }
    }
    let mut states: HashMap<Vec<u8>, Rational> = HashMap::new();
    states.insert(vec![0; values.len()], Rational::one());
    for fi in f {
        let mut next: HashMap<Vec<u8>, Rational> = HashMap::with_capacity(states.len() * 2);
        for (used, w) in &states {
            for (j, &(v, c)) in values.iter().enumerate() {
                if used[j] < c {
                    let mut u = used.clone();
                    u[j] += 1;
                    let term = w * &fi[v as usize];
                    *next.entry(u).or_insert_with(Rational::zero) += term;
                }
            }
        }
        states = next;
    }
    states.into_values().fold(Rational::zero(), |a, b| a + b)
}

/// V_{g,n}(x) as a polynomial in the boundary lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumePolynomial {
    pub g: u32,
    pub n: usize,
    /// Exponent vector d ↦ coefficient of ∏ xᵢ^{2dᵢ}.
    pub coeffs: BTreeMap<Vec<u32>, PiPoly>,
}

impl VolumePolynomial {
    /// Exact value at rational lengths.
    pub fn eval(&self, x: &[Rational]) -> Result<PiPoly> {
        check_lengths(self.n, x)?;
        let mut acc = PiPoly::zero();
        for (d, c) in &self.coeffs {
            let mut m = Rational::one();
            for (xi, &di) in x.iter().zip(d) {
                m *= xi.pow(2 * di as i32);
            }
            acc += &c.scale(&m);
        }
        Ok(acc)
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|d| 2 * d.iter().sum::<u32>()).max().unwrap_or(0)
    }
}

fn check_lengths(n: usize, x: &[Rational]) -> Result<()> {
    if x.len() != n {
        return Err(Error::domain(format!("expected {n} boundary lengths, got {}", x.len())));
    }
    if let Some(bad) = x.iter().find(|v| v.is_negative()) {
        return Err(Error::domain(format!("negative boundary length {bad}")));
    }
    Ok(())
}

/// Coefficient map of V_{g,n}(x) for n ≥ 1.
pub fn volume_polynomial(g: u32, n: usize, store: &MemoStore) -> Result<VolumePolynomial> {
    check_stable(g, n)?;
    if n == 0 {
        return Err(Error::domain("volume polynomial needs at least one boundary"));
    }
    let top = dim(g, n);
    let mut coeffs = BTreeMap::new();
    let mut cur = vec![0u32; n];
    loop {
        let w: i64 = cur.iter().map(|&v| v as i64).sum();
        if w <= top {
            let idx = TauIndex::new(g, cur.clone())?;
            let tau = intersection_number(&idx, store)?;
            let mut den = BigInt::one() << (2 * w as usize);
            for &di in &cur {
                den *= BigInt::from(factorial(2 * di + 1));
            }
            coeffs.insert(cur.clone(), tau.scale(&Rational::new(BigInt::one(), den)));
        }
        // odometer over exponent vectors with each entry ≤ top
        let mut i = 0;
        loop {
            if i == n {
                return Ok(VolumePolynomial { g, n, coeffs });
            }
            cur[i] += 1;
            let w: i64 = cur.iter().map(|&v| v as i64).sum();
            if w <= top {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// V_{g,n}; n = 0 is the closed volume.
pub fn volume(g: u32, n: usize, store: &MemoStore) -> Result<PiPoly> {
    check_stable(g, n)?;
    intersection_number(&TauIndex::volume(g, n)?, store)
}

/// V_g for g ≥ 2.
pub fn closed_volume(g: u32, store: &MemoStore) -> Result<PiPoly> {
    if g < 2 {
        return Err(Error::domain(format!("closed volume needs g >= 2, got {g}")));
    }
    volume(g, 0, store)
}

/// V_{g,n} from the (n+1)-point numbers through
/// (2g−2+n)V_{g,n} = ½ Σ_l (−1)^{l−1} l π^{2l−2}/(2l+1)! [τ_l τ₀ⁿ]_{g,n+1}.
///
/// Independent of the direct lookup of [τ₀ⁿ]_{g,n} and used to cross-check it.
pub fn volume_from_dilaton_sum(g: u32, n: usize, store: &MemoStore) -> Result<PiPoly> {
    check_stable(g, n)?;
    let mut acc = PiPoly::zero();
    let mut d = vec![0u32; n + 1];
    for l in 1..=(dim(g, n) + 1) {
        d[0] = l as u32;
        let tau = intersection_number(&TauIndex::new(g, d.clone())?, store)?;
        let c = Rational::new(BigInt::from(l), BigInt::from(factorial(2 * l as u32 + 1)) * 2);
        let c = if l % 2 == 1 { c } else { -c };
        acc += &(&PiPoly::monomial(c, (l - 1) as usize) * &tau);
    }
    let chi = 2 * g as i64 - 2 + n as i64;
    Ok(acc.scale(&Rational::new(BigInt::one(), BigInt::from(chi))))
}

/// Exact V_{g,n}(x) at non-negative rational lengths.
pub fn volume_at(g: u32, n: usize, x: &[Rational], store: &MemoStore) -> Result<PiPoly> {
    check_stable(g, n)?;
    check_lengths(n, x)?;
    let top = dim(g, n);
    let f: Vec<Vec<Rational>> = x.iter().map(|xi| length_factors(xi, top as usize)).collect();
    let mut by_weight = vec![Rational::zero(); top as usize + 1];
    for m in multisets(n, top) {
        let c = coefficient(store, g, &m)?;
        if c.is_zero() {
            continue;
        }
        let w: u32 = m.iter().sum();
        by_weight[w as usize] += &*c * arrangement_sum(&m, &f);
    }
    // weight w carries π^{2(dim − w)}
    let coeffs: Vec<Rational> = by_weight.into_iter().rev().collect();
    Ok(PiPoly::from_coeffs(coeffs))
}

/// Coefficients of ℓ^{2k} in V_{g,n}(ℓ,…,ℓ).
pub fn diagonal_series(g: u32, n: usize, store: &MemoStore) -> Result<Vec<PiPoly>> {
    check_stable(g, n)?;
    if n == 0 {
        return Err(Error::domain("diagonal series needs at least one boundary"));
    }
    let top = dim(g, n);
    // 1/(2^{2k}(2k+1)!) for every slot
    let factors: Vec<Rational> = (0..=top as usize)
        .map(|k| {
            Rational::new(
                BigInt::one(),
                (BigInt::one() << (2 * k)) * BigInt::from(factorial(2 * k as u32 + 1)),
            )
        })
        .collect();
    let f = vec![factors; n];
    let mut out = vec![PiPoly::zero(); top as usize + 1];
    for m in multisets(n, top) {
        let c = coefficient(store, g, &m)?;
        if c.is_zero() {
            continue;
        }
        let w: u32 = m.iter().sum();
        let r = &*c * arrangement_sum(&m, &f);
        out[w as usize] += &PiPoly::monomial(r, (top - w as i64) as usize);
    }
    Ok(out)
}

/// Product of two polynomials with ℚ[π²] coefficients.
pub(crate) fn series_mul(a: &[PiPoly], b: &[PiPoly]) -> Vec<PiPoly> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![PiPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

/// An exact quotient of two elements of ℚ[π²].
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRatio {
    pub num: PiPoly,
    pub den: PiPoly,
}

impl ExactRatio {
    pub fn new(num: PiPoly, den: PiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::numeric("ratio with zero denominator"));
        }
        Ok(ExactRatio { num, den })
    }

    /// The rational value when the π powers cancel.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        let (a, x) = self.num.as_monomial()?;
        let (b, y) = self.den.as_monomial()?;
        (a == b).then(|| x / y)
    }

    pub fn interval(&self, prec: u32) -> Result<Interval> {
        self.num.eval_interval(prec).div(&self.den.eval_interval(prec))
    }

    pub fn to_f64(&self) -> f64 {
        match self.as_rational() {
            Some(r) => crate::scalar::rational_to_f64(&r),
            None => self
                .interval(RATIO_PREC)
                .map(|i| i.midpoint_f64())
                .unwrap_or(f64::NAN),
        }
    }
}

/// 4π²(2g−2+n)V_{g,n}/V_{g,n+1}.
pub fn mz_ratio(g: u32, n: usize, store: &MemoStore) -> Result<ExactRatio> {
    check_stable(g, n)?;
    let chi = Rational::from_integer(BigInt::from(4 * (2 * g as i64 - 2 + n as i64)));
    let num = (&PiPoly::pi_squared() * &volume(g, n, store)?).scale(&chi);
    ExactRatio::new(num, volume(g, n + 1, store)?)
}

/// V_{g−1,n+2}/V_{g,n}.
pub fn a4_ratio(g: u32, n: usize, store: &MemoStore) -> Result<ExactRatio> {
    if g == 0 {
        return Err(Error::domain("A4 ratio needs g >= 1"));
    }
    check_stable(g, n)?;
    check_stable(g - 1, n + 2)?;
    ExactRatio::new(volume(g - 1, n + 2, store)?, volume(g, n, store)?)
}

/// W_r = V_{r/2+1} for even r and V_{(r+1)/2,1} for odd r.
pub fn w_r(r: u32, store: &MemoStore) -> Result<PiPoly> {
    if r < 2 {
        return Err(Error::domain(format!("W_r needs r >= 2, got {r}")));
    }
    if r % 2 == 0 {
        volume(r / 2 + 1, 0, store)
    } else {
        volume(r.div_ceil(2), 1, store)
    }
}

/// ρ_g = V_g√g / ((2g−3)!(4π²)^{2g−3}).
pub fn rho(g: u32, store: &MemoStore) -> Result<f64> {
    let v = closed_volume(g, store)?;
    let e = 2 * g - 3;
    let den = PiPoly::monomial(
        Rational::from_integer(BigInt::from(factorial(e)) * BigInt::from(4).pow(e)),
        e as usize,
    );
    Ok(ExactRatio::new(v, den)?.to_f64() * (g as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn small_polynomials() {
        let s = MemoStore::new();
        let p = volume_polynomial(0, 3, &s).unwrap();
        assert_eq!(p.coeffs.len(), 1);
        assert_eq!(p.coeffs[&vec![0, 0, 0]], PiPoly::one());
        let p = volume_polynomial(1, 1, &s).unwrap();
        assert_eq!(p.coeffs[&vec![0]], PiPoly::monomial(q(1, 12), 1));
        assert_eq!(p.coeffs[&vec![1]], PiPoly::from_rational(q(1, 48)));
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn evaluation_routes_agree() {
        let s = MemoStore::new();
        let x = vec![q(1, 2), q(3, 1), q(0, 1)];
        let p = volume_polynomial(1, 3, &s).unwrap();
        assert_eq!(p.eval(&x).unwrap(), volume_at(1, 3, &x, &s).unwrap());
        let zero = vec![q(0, 1); 3];
        assert_eq!(volume_at(1, 3, &zero, &s).unwrap(), volume(1, 3, &s).unwrap());
    }

    #[test]
    fn genus_zero_four_points() {
        // V_{0,4}(x) = (4π² + Σxᵢ²)/2
        let s = MemoStore::new();
        let x = vec![q(1, 1), q(2, 1), q(3, 1), q(5, 1)];
        let expect = PiPoly::from_coeffs(vec![q(39, 2), q(2, 1)]);
        assert_eq!(volume_at(0, 4, &x, &s).unwrap(), expect);
    }

    #[test]
    fn closed_volume_two() {
        // V₂ = 43π⁶/2160
        let s = MemoStore::new();
        assert_eq!(closed_volume(2, &s).unwrap(), PiPoly::monomial(q(43, 2160), 3));
        assert!(closed_volume(1, &s).is_err());
    }

    #[test]
    fn dilaton_sum_route() {
        let s = MemoStore::new();
        for (g, n) in [(0, 3), (1, 1), (1, 2), (2, 1), (0, 5)] {
            assert_eq!(volume_from_dilaton_sum(g, n, &s).unwrap(), volume(g, n, &s).unwrap());
        }
    }

    #[test]
    fn diagonal_matches_evaluation() {
        let s = MemoStore::new();
        let ser = diagonal_series(1, 2, &s).unwrap();
        let l = q(3, 2);
        let mut acc = PiPoly::zero();
        for (k, c) in ser.iter().enumerate() {
            acc += &c.scale(&l.pow(2 * k as i32));
        }
        assert_eq!(acc, volume_at(1, 2, &[l.clone(), l], &s).unwrap());
    }

    #[test]
    fn ratios_and_w() {
        let s = MemoStore::new();
        let r = mz_ratio(0, 3, &s).unwrap();
        // 4π²·1·1/(2π²) = 2
        assert_eq!(r.as_rational(), Some(q(2, 1)));
        let r = a4_ratio(1, 1, &s).unwrap();
        assert_eq!(r.as_rational(), None);
        assert!((r.to_f64() - 12.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);
        assert!(a4_ratio(0, 3, &s).is_err());
        assert_eq!(w_r(2, &s).unwrap(), closed_volume(2, &s).unwrap());
        assert_eq!(w_r(3, &s).unwrap(), volume(2, 1, &s).unwrap());
        assert_eq!(w_r(4, &s).unwrap(), closed_volume(3, &s).unwrap());
        assert!(w_r(1, &s).is_err());
    }

    #[test]
    fn negative_lengths_rejected() {
        let s = MemoStore::new();
        assert!(volume_at(1, 1, &[q(-1, 2)], &s).is_err());
        assert!(volume_at(1, 1, &[q(1, 2), q(1, 2)], &s).is_err());
    }
}
