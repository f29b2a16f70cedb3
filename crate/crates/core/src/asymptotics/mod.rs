//! Truncated series in 1/(g−m) with explicit error constants, the algebra
//! that combines them, and empirical checks of the large-genus expansions.
//!
//! An [`Expansion`] promises |A(g) − Σ_{t≤k} c_t/(g−m)^t| ≤ C/(g−m)^{k+1} for
//! every integer g > g_min. Error constants are exact non-negative rationals.

mod basic;
mod fit;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, Rational};

pub use basic::{coeff_product_bound, tail_zeta_bound, CoeffProductBound, TailZeta};
pub use fit::{fit_expansion, verify_suite, FitReport, SeriesReport, Suite, SuiteReport, ENVELOPE_FACTOR};

/// 87/32, a rational upper bound for e.
fn e_upper() -> Rational {
    Rational::new(87.into(), 32.into())
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    /// m, so the series variable is 1/(g − m).
    pub base: i64,
    pub coeffs: Vec<Rational>,
    pub err: Rational,
    pub g_min: Rational,
}

impl Expansion {
    pub fn new(base: i64, coeffs: Vec<Rational>, err: Rational, g_min: Rational) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("an expansion needs at least c0"));
        }
        if err.is_negative() {
            return Err(Error::domain("error constant must be non-negative"));
        }
        if g_min <= int(base) {
            return Err(Error::domain(format!(
                "threshold g_min = {g_min} must exceed the base offset {base}"
            )));
        }
        Ok(Expansion { base, coeffs, err, g_min })
    }

    pub fn k(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// g_min − m, the smallest value of the series variable's reciprocal.
    pub fn h_min(&self) -> Rational {
        &self.g_min - int(self.base)
    }

    pub fn partial_sum(&self, g: &Rational) -> Rational {
        let inv = (g - int(self.base)).recip();
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &inv + c;
        }
        acc
    }

    /// C/(g−m)^{k+1}.
    pub fn error_at(&self, g: &Rational) -> Rational {
        let h = g - int(self.base);
        &self.err / h.pow(self.k() as i32 + 1)
    }

    /// Whether `value` = A(g) is consistent with the promise at g.
    pub fn contract_holds(&self, g: &Rational, value: &Rational) -> bool {
        (value - self.partial_sum(g)).abs() <= self.error_at(g)
    }

    /// The same function to order k' ≤ k; dropped terms join the error via
    /// |a_t|/h^t ≤ |a_t| h_min^{k'+1−t}/h^{k'+1}.
    pub fn truncate(&self, k2: usize) -> Result<Expansion> {
        if k2 > self.k() {
            return Err(Error::domain(format!("cannot extend order {} to {k2}", self.k())));
        }
        let h = self.h_min();
        let mut err = &self.err / h.pow((self.k() - k2) as i32);
        for t in k2 + 1..=self.k() {
            err += self.coeffs[t].abs() / h.pow((t - k2 - 1) as i32);
        }
        Expansion::new(self.base, self.coeffs[..=k2].to_vec(), err, self.g_min.clone())
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn abs_sum(a: &[Rational], h: &Rational) -> Rational {
    let inv = h.recip();
    a.iter().rev().fold(Rational::zero(), |acc, c| acc * &inv + c.abs())
}

/// Product of expansions sharing a base.
///
/// Inputs are brought to the smallest common order k. Coefficients are the
/// Cauchy products up to order k. The error constant is h^{k+1} times the
/// full right-hand side of the product estimate, with every coefficient
/// replaced by its absolute value, at h = g_min − m; each group of that
/// bound times h^{k+1} is non-increasing in h, so the constant is valid for
/// all larger g.
pub fn expansion_product(inputs: &[Expansion]) -> Result<Expansion> {
    let first = inputs.first().ok_or_else(|| Error::domain("empty product"))?;
    if let Some(bad) = inputs.iter().find(|e| e.base != first.base) {
        return Err(Error::domain(format!(
            "mismatched expansion bases {} and {}",
            first.base, bad.base
        )));
    }
    let k = inputs.iter().map(Expansion::k).min().unwrap_or(0);
    let g_min = inputs.iter().map(|e| e.g_min.clone()).max().expect("non-empty");
    let parts: Vec<Expansion> = inputs
        .iter()
        .map(|e| {
            let mut t = e.truncate(k)?;
            if t.g_min < g_min {
                // a larger threshold only shrinks the dropped-term bound
                t.g_min = g_min.clone();
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let h = &g_min - int(first.base);
    let n = parts.len();

    let mut full = vec![Rational::one()];
    let mut full_abs = vec![Rational::one()];
    for p in &parts {
        full = poly_mul(&full, &p.coeffs);
        let a: Vec<Rational> = p.coeffs.iter().map(|c| c.abs()).collect();
        full_abs = poly_mul(&full_abs, &a);
    }

    let hk = h.pow(k as i32 + 1);
    let sums: Vec<Rational> = parts.iter().map(|p| abs_sum(&p.coeffs, &h)).collect();
    let mut bound = Rational::zero();
    // mixed terms: I ⊊ {1..n} keeps the truncations in I, errors elsewhere
    for mask in 0u64..(1u64 << n) - 1 {
        let mut term = Rational::one();
        for (i, p) in parts.iter().enumerate() {
            if mask >> i & 1 == 1 {
                term *= &sums[i];
            } else {
                term *= &p.err / &hk;
            }
        }
        bound += term;
    }
    // orders k+1..nk of the product of truncations
    for (t, c) in full_abs.iter().enumerate().skip(k + 1) {
        bound += c / h.pow(t as i32);
    }
    Expansion::new(first.base, full[..=k].to_vec(), bound * hk, g_min)
}

/// Product where the first factor vanishes to order r: A₁ = Σ_{t=r+1}^{s+r+1} a_t/h^t + O(h^{−(s+r+2)}).
///
/// h^{r+1}A₁ is an order-s expansion with coefficients a_{r+1..s+r+1} and the
/// same error constant; multiplying it with the other factors at order s and
/// dividing by h^{r+1} gives an order s+r+1 result. Requires
/// k − (r+1) ≤ s ≤ k with k the least order among the other factors.
pub fn expansion_product_leading_zeros(
    a1: &Expansion,
    rest: &[Expansion],
    r: usize,
    s: usize,
) -> Result<Expansion> {
    let k = rest.iter().map(Expansion::k).min().unwrap_or(s);
    if s > k || s + r + 1 < k {
        return Err(Error::domain(format!(
            "need k - (r+1) <= s <= k, got k = {k}, r = {r}, s = {s}"
        )));
    }
    if a1.k() < s + r + 1 {
        return Err(Error::domain(format!(
            "first factor has order {}, need {}",
            a1.k(),
            s + r + 1
        )));
    }
    if a1.coeffs[..=r].iter().any(|c| !c.is_zero()) {
        return Err(Error::domain(format!("first factor has a nonzero coefficient of order <= {r}")));
    }
    let a1 = a1.truncate(s + r + 1)?;
    let lifted = Expansion::new(a1.base, a1.coeffs[r + 1..].to_vec(), a1.err.clone(), a1.g_min.clone())?;
    let mut factors = vec![lifted];
    for e in rest {
        factors.push(e.truncate(s)?);
    }
    let p = expansion_product(&factors)?;
    let mut coeffs = vec![Rational::zero(); r + 1];
    coeffs.extend(p.coeffs);
    Expansion::new(p.base, coeffs, p.err, p.g_min)
}

/// Coefficients of Σ a_i/(g−m)^i re-expanded in 1/g to the same order:
/// c₀ = a₀, c_t = Σ_{i=1}^t C(t−1, i−1) m^{t−i} a_i.
///
/// Exact for any integer m, including negative ones.
pub fn shift_coefficients(a: &[Rational], m: i64) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len());
    for t in 0..a.len() {
        if t == 0 {
            out.push(a[0].clone());
            continue;
        }
        let mut c = Rational::zero();
        for i in 1..=t {
            let binom = Rational::from_integer(BigInt::from(binomial(t as u64 - 1, i as u64 - 1)));
            c += binom * int(m).pow((t - i) as i32) * &a[i];
        }
        out.push(c);
    }
    out
}

/// Moves an expansion in 1/(g−m) to base 0.
///
/// Needs m ≤ k+1 and (k+1)³ ≤ g_min. The error is 3C + 3k²e^m·ã_k where
/// ã_i = (i−1)!·max_{j≤i}|a_j|/(j−1)! makes ã_i/(i−1)! non-decreasing, and
/// e is replaced by 87/32. m = 0 is the identity.
pub fn shift_base(e: &Expansion, m: i64) -> Result<Expansion> {
    if e.base != m {
        return Err(Error::domain(format!("expansion has base {}, not {m}", e.base)));
    }
    if m < 0 {
        return Err(Error::domain("shift needs m >= 0"));
    }
    if m == 0 {
        return Ok(e.clone());
    }
    let k = e.k();
    let k1 = k as i64 + 1;
    if m > k1 || e.g_min < int(k1 * k1 * k1) {
        return Err(Error::domain(format!(
            "shift needs m <= k+1 <= g^(1/3): m = {m}, k = {k}, g_min = {}",
            e.g_min
        )));
    }
    let coeffs = shift_coefficients(&e.coeffs, m);
    let mut err = int(3) * &e.err;
    if k >= 1 {
        let mut best = Rational::zero();
        for j in 1..=k {
            let v = e.coeffs[j].abs() / Rational::from_integer(BigInt::from(factorial(j as u32 - 1)));
            if v > best {
                best = v;
            }
        }
        let a_tilde = best * Rational::from_integer(BigInt::from(factorial(k as u32 - 1)));
        err += int(3 * (k * k) as i64) * e_upper().pow(m as i32) * a_tilde;
    }
    Expansion::new(0, coeffs, err, e.g_min.clone())
}

/// Polynomial error bound in n variables, stored by exponent vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorPolynomial {
    pub nvars: usize,
    pub degree_cap: u32,
    pub coeffs: std::collections::BTreeMap<Vec<u32>, f64>,
}

impl ErrorPolynomial {
    pub fn new(nvars: usize, degree_cap: u32) -> Self {
        ErrorPolynomial { nvars, degree_cap, coeffs: Default::default() }
    }

    pub fn insert(&mut self, t: Vec<u32>, c: f64) -> Result<()> {
        if t.len() != self.nvars {
            return Err(Error::domain(format!("expected {} exponents", self.nvars)));
        }
        if t.iter().sum::<u32>() > self.degree_cap {
            return Err(Error::domain(format!("monomial exceeds degree cap {}", self.degree_cap)));
        }
        self.coeffs.insert(t, c);
        Ok(())
    }

    pub fn eval(&self, d: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(t, c)| c * t.iter().zip(d).map(|(&e, x)| x.powi(e as i32)).product::<f64>())
            .sum()
    }

    /// Every coefficient of d^t is at most M/(t₁!⋯tₙ!) in absolute value.
    pub fn within_envelope(&self, m: f64) -> bool {
        self.coeffs.iter().all(|(t, c)| {
            let fact: f64 = t.iter().map(|&e| (1..=e).map(f64::from).product::<f64>()).product();
            c.abs() <= m / fact
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn exp(base: i64, c: &[(i64, i64)], err: (i64, i64), g_min: i64) -> Expansion {
        Expansion::new(base, c.iter().map(|&(n, d)| q(n, d)).collect(), q(err.0, err.1), int(g_min)).unwrap()
    }

    #[test]
    fn identity_factor() {
        let one = exp(0, &[(1, 1), (0, 1), (0, 1)], (0, 1), 2);
        let a = exp(0, &[(3, 1), (-1, 2), (5, 7)], (2, 1), 4);
        let p = expansion_product(&[one, a.clone()]).unwrap();
        assert_eq!(p.coeffs, a.coeffs);
        assert_eq!(p.err, a.err);
    }

    #[test]
    fn one_plus_times_one_minus() {
        let a = exp(0, &[(1, 1), (1, 1), (0, 1)], (0, 1), 2);
        let b = exp(0, &[(1, 1), (-1, 1), (0, 1)], (0, 1), 2);
        let p = expansion_product(&[a, b]).unwrap();
        assert_eq!(p.coeffs, vec![q(1, 1), q(0, 1), q(-1, 1)]);
        // (1 + 1/g)(1 − 1/g) = 1 − 1/g² exactly
        for g in 3..20 {
            let g = int(g);
            let v = (int(1) + g.recip()) * (int(1) - g.recip());
            assert!(p.contract_holds(&g, &v));
        }
    }

    #[test]
    fn mismatched_bases() {
        let a = exp(0, &[(1, 1)], (0, 1), 2);
        let b = exp(1, &[(1, 1)], (0, 1), 2);
        assert!(expansion_product(&[a, b]).is_err());
    }

    #[test]
    fn shift_of_geometric() {
        // 1/(g−m) = Σ_{t≥1} m^{t−1}/g^t
        for m in 1..4i64 {
            let mut a = vec![int(0), int(1)];
            a.extend(std::iter::repeat(int(0)).take(4));
            let c = shift_coefficients(&a, m);
            let expect: Vec<Rational> =
                (0..6).map(|t| if t == 0 { int(0) } else { int(m).pow(t - 1) }).collect();
            assert_eq!(c, expect);
        }
    }

    #[test]
    fn shift_round_trip() {
        let a: Vec<Rational> = vec![q(1, 2), q(-3, 1), q(7, 5), q(0, 1), q(11, 3)];
        for m in [1i64, 2, 5] {
            assert_eq!(shift_coefficients(&shift_coefficients(&a, m), -m), a);
        }
    }

    #[test]
    fn shift_identity_and_constant() {
        let e = exp(0, &[(2, 1), (1, 1)], (1, 1), 8);
        assert_eq!(shift_base(&e, 0).unwrap(), e);
        let c = exp(1, &[(5, 3)], (1, 2), 8);
        let s = shift_base(&c, 1).unwrap();
        assert_eq!(s.coeffs, vec![q(5, 3)]);
        assert_eq!(s.err, q(3, 2));
        // hypothesis m ≤ k+1
        assert!(shift_base(&exp(2, &[(1, 1)], (0, 1), 8), 2).is_err());
        // hypothesis (k+1)³ ≤ g_min
        assert!(shift_base(&exp(1, &[(1, 1), (1, 1)], (0, 1), 7), 1).is_err());
    }

    #[test]
    fn leading_zero_reductions() {
        let a1 = exp(0, &[(0, 1), (2, 1), (-1, 3)], (1, 1), 5);
        let b = exp(0, &[(1, 1), (1, 2), (3, 1)], (2, 1), 5);
        let z = expansion_product_leading_zeros(&a1, &[b.clone()], 0, 1).unwrap();
        let p = expansion_product(&[a1.clone(), b]).unwrap();
        assert_eq!(z.coeffs, p.coeffs);
        let alone = expansion_product_leading_zeros(&a1, &[], 0, 1).unwrap();
        assert_eq!(alone, a1);
        assert!(expansion_product_leading_zeros(&a1, &[], 1, 1).is_err());
    }

    #[test]
    fn truncation_keeps_contract() {
        let e = exp(0, &[(1, 1), (4, 1), (-9, 1)], (3, 1), 3);
        let t = e.truncate(0).unwrap();
        for g in 4..30 {
            let g = int(g);
            // a value at the edge of the original contract
            let v = e.partial_sum(&g) + e.error_at(&g);
            assert!(t.contract_holds(&g, &v));
        }
    }

    #[test]
    fn error_polynomial_envelope() {
        let mut p = ErrorPolynomial::new(2, 4);
        p.insert(vec![2, 1], 0.5).unwrap();
        p.insert(vec![0, 0], 1.0).unwrap();
        assert!(p.insert(vec![3, 2], 1.0).is_err());
        assert!(p.within_envelope(1.0));
        assert!(!p.within_envelope(0.9));
        assert_eq!(p.eval(&[2.0, 3.0]), 1.0 + 0.5 * 4.0 * 3.0);
    }
}
