//! Denominators as exponent vectors over small primes.
//!
//! Every denominator met by the recursion divides a product of factorials
//! and Bernoulli denominators, so it factors over primes below 2·dim + 3.
//! Keeping them factored turns lcm into a componentwise max and lets the
//! final reduction be done by trial division instead of a gcd.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

const PRIME_BOUND: u32 = 2000;

static PRIMES: LazyLock<Vec<u32>> = LazyLock::new(|| {
    let n = PRIME_BOUND as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
});

/// Exponents of the first primes; trailing zeros are trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Exps(Vec<u16>);

impl Exps {
    pub fn factor(d: &BigInt) -> Result<Exps> {
        let mut rest = d.clone();
        let mut exps = Vec::new();
        for &p in PRIMES.iter() {
            if rest.is_one() {
                break;
            }
            let mut e = 0u16;
            loop {
                let (q, r) = rest.div_rem(&BigInt::from(p));
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            exps.push(e);
        }
        if !rest.is_one() {
            return Err(Error::numeric(format!(
                "denominator {d} has a prime factor above {PRIME_BOUND}"
            )));
        }
        let mut out = Exps(exps);
        out.trim();
        Ok(out)
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn lcm(&self, other: &Exps) -> Exps {
        let n = self.0.len().max(other.0.len());
        Exps(
            (0..n)
                .map(|i| Ord::max(self.get(i), other.get(i)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Exps) -> Exps {
        let n = self.0.len().max(other.0.len());
        Exps((0..n).map(|i| self.get(i) + other.get(i)).collect())
    }

    fn get(&self, i: usize) -> u16 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn value(&self) -> BigInt {
        self.quotient(&Exps::default())
    }

    /// ∏ p^{self − other}; requires other ≤ self componentwise.
    pub fn quotient(&self, other: &Exps) -> BigInt {
        let mut acc = BigInt::one();
        let mut small: u64 = 1;
        for (i, &p) in PRIMES.iter().enumerate().take(self.0.len()) {
            let e = self.get(i) - other.get(i);
            for _ in 0..e {
                if small > u64::MAX / PRIME_BOUND as u64 {
                    acc *= small;
                    small = 1;
                }
                small *= p as u64;
            }
        }
        acc * small
    }
}

/// Sum of fractions with factored denominators, reduced by trial division.
#[derive(Default)]
pub(crate) struct FracSum {
    terms: Vec<(BigInt, Exps)>,
}

impl FracSum {
    pub fn push(&mut self, num: BigInt, den: &Exps) {
        if !num.is_zero() {
            self.terms.push((num, den.clone()));
        }
    }

    pub fn finish(self) -> Rational {
        let Some(lcm) = self.terms.iter().map(|(_, e)| e).cloned().reduce(|a, b| a.lcm(&b)) else {
            return Rational::zero();
        };
        let mut groups: Vec<(Exps, BigInt)> = Vec::new();
        for (num, e) in self.terms {
            match groups.iter_mut().find(|(ge, _)| *ge == e) {
                Some((_, acc)) => *acc += num,
                None => groups.push((e, num)),
            }
        }
        let mut num = BigInt::zero();
        for (e, acc) in groups {
            num += acc * lcm.quotient(&e);
        }
        reduce(num, lcm)
    }
}

/// num / ∏p^e in lowest terms.
pub(crate) fn reduce(mut num: BigInt, mut den: Exps) -> Rational {
    if num.is_zero() {
        return Rational::zero();
    }
    for (i, &p) in PRIMES.iter().enumerate().take(den.0.len()) {
        let bp = BigInt::from(p);
        while den.0[i] > 0 {
            let (q, r) = num.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            num = q;
            den.0[i] -= 1;
        }
    }
    den.trim();
    Rational::new_raw(num, den.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    #[test]
    fn factor_and_rebuild() {
        let d = BigInt::from(2u64.pow(10) * 3u64.pow(4) * 97);
        let e = Exps::factor(&d).unwrap();
        assert_eq!(e.value(), d);
        assert!(Exps::factor(&BigInt::from(2003u32)).is_err());
    }

    #[test]
    fn frac_sum_matches_rational_sum() {
        let parts = ["1/6", "-1/30", "1/42", "-1/30", "5/66", "-691/2730", "7/6"];
        let mut fs = FracSum::default();
        let mut expected = Rational::zero();
        for s in parts {
            let r = parse_rational(s).unwrap();
            expected += &r;
            fs.push(r.numer().clone(), &Exps::factor(r.denom()).unwrap());
        }
        let got = fs.finish();
        assert_eq!(got, expected);
        assert_eq!(got.denom(), expected.denom());
    }
}
