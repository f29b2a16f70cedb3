use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::pipoly::PiPoly;
use super::rational::{binomial, factorial, Rational};

static BERNOULLI: LazyLock<RwLock<Vec<Rational>>> =
    LazyLock::new(|| RwLock::new(vec![Rational::one()]));

/// The n-th Bernoulli number with B₁ = −1/2.
///
/// Uses Σ_{k=0}^{n} C(n+1,k) B_k = 0, memoized across calls.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(b) = BERNOULLI.read().unwrap().get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().unwrap();
    while table.len() <= n {
        let m = table.len();
        let b = if m > 1 && m % 2 == 1 {
            Rational::zero()
        } else {
            let mut acc = Rational::zero();
            for (k, bk) in table.iter().enumerate() {
                if bk.is_zero() {
                    continue;
                }
                acc += bk * Rational::from_integer(BigInt::from(binomial(m as u64 + 1, k as u64)));
            }
            -acc / Rational::from_integer(BigInt::from(m + 1))
        };
        table.push(b);
    }
    table[n].clone()
}

/// ζ(2i) = (−1)^{i+1} B_{2i} (2π)^{2i} / (2·(2i)!) as a monomial of degree i in π².
pub fn zeta_even(i: usize) -> PiPoly {
    assert!(i >= 1, "zeta_even requires i >= 1");
    let b = bernoulli(2 * i);
    let two_pow = BigInt::one() << (2 * i);
    let fact = BigInt::from(factorial(2 * i as u32));
    let mut c = b * Rational::new(two_pow, fact * 2);
    if i % 2 == 0 {
        c = -c;
    }
    PiPoly::monomial(c, i)
}

/// a_i = (1 − 2^{1−2i}) ζ(2i), with a₀ = 1/2 from ζ(0) = −1/2.
pub fn a_coeff(i: usize) -> PiPoly {
    if i == 0 {
        return PiPoly::from_rational(Rational::new(1.into(), 2.into()));
    }
    let factor = Rational::one() - Rational::new(BigInt::one(), BigInt::one() << (2 * i - 1));
    zeta_even(i).scale(&factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    /// Akiyama–Tanigawa, written independently of the production recurrence.
    fn akiyama_tanigawa(n: usize) -> Rational {
        let mut a = vec![Rational::zero(); n + 1];
        for m in 0..=n {
            a[m] = Rational::new(1.into(), BigInt::from(m + 1));
            for j in (1..=m).rev() {
                a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
            }
        }
        a[0].clone()
    }

    #[test]
    fn bernoulli_known_values() {
        assert_eq!(bernoulli(0), q("1"));
        assert_eq!(bernoulli(1), q("-1/2"));
        assert_eq!(bernoulli(2), q("1/6"));
        assert_eq!(bernoulli(4), q("-1/30"));
        assert_eq!(bernoulli(12), q("-691/2730"));
        assert_eq!(bernoulli(13), q("0"));
        assert_eq!(bernoulli(20), q("-174611/330"));
    }

    #[test]
    fn bernoulli_matches_akiyama_tanigawa() {
        // Akiyama–Tanigawa yields B₁ = +1/2; all other indices agree.
        for n in (0..=40).filter(|&n| n != 1) {
            assert_eq!(bernoulli(n), akiyama_tanigawa(n), "n = {n}");
        }
    }

    #[test]
    fn zeta_even_small() {
        assert_eq!(zeta_even(1), PiPoly::monomial(q("1/6"), 1));
        assert_eq!(zeta_even(2), PiPoly::monomial(q("1/90"), 2));
        assert_eq!(zeta_even(3), PiPoly::monomial(q("1/945"), 3));
        assert_eq!(zeta_even(4), PiPoly::monomial(q("1/9450"), 4));
    }

    #[test]
    fn a_coeff_small() {
        assert_eq!(a_coeff(0), PiPoly::from_rational(q("1/2")));
        assert_eq!(a_coeff(1), PiPoly::monomial(q("1/12"), 1));
        assert_eq!(a_coeff(2), PiPoly::monomial(q("7/720"), 2));
    }
}
