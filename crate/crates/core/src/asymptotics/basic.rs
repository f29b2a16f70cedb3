use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{a_coeff, binomial, factorial, rational_to_f64, Interval, Rational};

const PREC: u32 = 320;

/// Σ_{i≥1} (a_{i+1} − a_i) i^r split into an enclosed partial sum and a
/// rigorous tail.
#[derive(Clone, Debug, Serialize)]
pub struct TailZeta {
    pub r: u32,
    /// Last index of the partial sum.
    pub terms: u32,
    pub partial_lo: f64,
    pub partial_hi: f64,
    /// Upper bound for Σ_{i>terms} 4^{−i} i^r.
    pub tail: f64,
    /// partial_hi + tail.
    pub upper: f64,
    /// 2·r!.
    pub bound: f64,
    pub holds: bool,
}

/// Enclosure of Σ_{i=1}^{I} (a_{i+1} − a_i) i^r with a tail bounded by the
/// geometric series of 4^{−i} i^r, whose ratio beyond I is at most
/// ((I+2)/(I+1))^r/4.
pub fn tail_zeta_bound(r: u32) -> TailZeta {
    let terms = 40.max(4 * r + 10);
    let mut partial = Interval::exact_zero(PREC);
    let mut prev = a_coeff(1).eval_interval(PREC);
    for i in 1..=terms {
        let next = a_coeff(i as usize + 1).eval_interval(PREC);
        let w = Rational::from_integer(BigInt::from(i).pow(r));
        partial = partial.add(&next.sub(&prev).scale(&w));
        prev = next;
    }
    let first = Rational::new(
        BigInt::from(terms + 1).pow(r),
        BigInt::from(4).pow(terms + 1),
    );
    let ratio = Rational::new(BigInt::from(terms + 2).pow(r), BigInt::from(terms + 1).pow(r))
        / Rational::from_integer(4.into());
    let tail = first / (Rational::one() - ratio);
    let upper = partial.hi() + &tail;
    let bound = Rational::from_integer(BigInt::from(factorial(r)) * 2);
    TailZeta {
        r,
        terms,
        partial_lo: partial.lo_f64(),
        partial_hi: partial.hi_f64(),
        tail: rational_to_f64(&tail),
        upper: rational_to_f64(&upper),
        bound: rational_to_f64(&bound),
        holds: upper <= bound,
    }
}

/// Both sides of Π_q Σ_{p=1}^{t_q} C(t_q−1, p−1) b^{t_q−p} (c t_q)^{c p} ≤ (cΣt + b)^{cΣt}.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffProductBound {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

/// One factor Σ_{p=1}^{t} C(t−1, p−1) b^{t−p} (ct)^{cp}.
pub(crate) fn coeff_factor(t: u32, b: u64, c: u64) -> BigUint {
    let ct = BigUint::from(c * t as u64);
    let mut s = BigUint::zero();
    for p in 1..=t {
        s += binomial(t as u64 - 1, p as u64 - 1)
            * BigUint::from(b).pow(t - p)
            * ct.pow((c as u32) * p);
    }
    s
}

pub fn coeff_product_bound(t: &[u32], b: u64, c: u64) -> Result<CoeffProductBound> {
    if b < 2 || c < 2 {
        return Err(Error::domain(format!("need b, c > 1, got b = {b}, c = {c}")));
    }
    if t.iter().any(|&x| x == 0) {
        return Err(Error::domain("every t must be a positive integer"));
    }
    let lhs = t.iter().fold(BigUint::one(), |acc, &ti| acc * coeff_factor(ti, b, c));
    let total: u64 = t.iter().map(|&x| x as u64).sum();
    let rhs = BigUint::from(c * total + b).pow((c * total) as u32);
    Ok(CoeffProductBound { holds: lhs <= rhs, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_zero_telescopes() {
        let t = tail_zeta_bound(0);
        let expect = 1.0 - std::f64::consts::PI.powi(2) / 12.0;
        assert!((t.partial_hi - expect).abs() < 1e-12);
        assert!(t.holds);
    }

    #[test]
    fn documented_products() {
        let r = coeff_product_bound(&[1], 3, 5).unwrap();
        assert_eq!(r.lhs, BigUint::from(5u32).pow(5));
        assert_eq!(r.rhs, BigUint::from(8u32).pow(5));
        let r = coeff_product_bound(&[1, 1], 2, 2).unwrap();
        assert_eq!(r.lhs, BigUint::from(16u32));
        assert_eq!(r.rhs, BigUint::from(1296u32));
        assert!(r.holds);
        assert!(coeff_product_bound(&[1], 1, 2).is_err());
    }
}
