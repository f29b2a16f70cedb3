use std::cmp::Ordering;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::pipoly::PiPoly;
use super::rational::{rational_to_f64, Rational};
use crate::error::{Error, Result};

/// Precision cap for [`compare`] before a near-tie is reported as an error.
pub const DEFAULT_COMPARE_CAP: u32 = 16384;

/// A closed interval [lo·2^{−p}, hi·2^{−p}] with integer endpoints.
///
/// Every operation rounds outward to the 2^{−p} grid. Since the grid at a
/// higher precision refines the grid at a lower one, and the π enclosure is
/// the canonical pair [⌊π·2^p⌋, ⌈π·2^p⌉], the same expression evaluated at a
/// higher precision always yields a sub-interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn pow2(p: u32) -> BigInt {
    BigInt::one() << p
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Interval {
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lo(&self) -> Rational {
        Rational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn hi(&self) -> Rational {
        Rational::new(self.hi.clone(), pow2(self.prec))
    }

    pub fn width(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, pow2(self.prec))
    }

    /// Largest f64 not exceeding the lower endpoint.
    pub fn lo_f64(&self) -> f64 {
        let r = self.lo();
        let x = rational_to_f64(&r);
        match Rational::from_float(x) {
            Some(xr) if xr > r => x.next_down(),
            _ => x,
        }
    }

    /// Smallest f64 not below the upper endpoint.
    pub fn hi_f64(&self) -> f64 {
        let r = self.hi();
        let x = rational_to_f64(&r);
        match Rational::from_float(x) {
            Some(xr) if xr < r => x.next_up(),
            _ => x,
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational_to_f64(&Rational::new(&self.lo + &self.hi, pow2(self.prec + 1)))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo() <= x && x <= &self.hi()
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo() <= self.lo() && self.hi() <= other.hi()
    }

    /// Strictly positive lower endpoint.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn exact_zero(prec: u32) -> Self {
        Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            prec,
        }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let scaled = r.numer() << prec;
        Interval {
            lo: div_floor(&scaled, r.denom()),
            hi: div_ceil(&scaled, r.denom()),
            prec,
        }
    }

    fn check_prec(&self, other: &Interval) {
        assert_eq!(self.prec, other.prec, "interval precision mismatch");
    }

    pub fn add(&self, other: &Interval) -> Interval {
        self.check_prec(other);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        self.check_prec(other);
        let prods = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = prods.iter().min().unwrap();
        let max = prods.iter().max().unwrap();
        let s = pow2(self.prec);
        Interval {
            lo: div_floor(min, &s),
            hi: div_ceil(max, &s),
            prec: self.prec,
        }
    }

    /// Exact rational scaling followed by outward rounding.
    pub fn scale(&self, c: &Rational) -> Interval {
        let a = &self.lo * c.numer();
        let b = &self.hi * c.numer();
        let (min, max) = if a <= b { (a, b) } else { (b, a) };
        Interval {
            lo: div_floor(&min, c.denom()),
            hi: div_ceil(&max, c.denom()),
            prec: self.prec,
        }
    }

    /// Quotient; the divisor must exclude zero.
    pub fn div(&self, other: &Interval) -> Result<Interval> {
        self.check_prec(other);
        if !(other.is_positive() || other.is_negative()) {
            return Err(Error::numeric("interval division by an enclosure of zero"));
        }
        let s = pow2(self.prec);
        let num = [&self.lo * &s, &self.hi * &s];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in &num {
            for d in [&other.lo, &other.hi] {
                // d > 0 or d < 0 uniformly, so floor/ceil are the outward directions.
                let f = div_floor(n, d);
                let c = div_ceil(n, d);
                lo = Some(lo.map_or(f.clone(), |x| x.min(f)));
                hi = Some(hi.map_or(c.clone(), |x| x.max(c)));
            }
        }
        Ok(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            prec: self.prec,
        })
    }

    pub fn pi(prec: u32) -> Interval {
        let lo = pi_floor(prec);
        let hi = &lo + 1;
        Interval { lo, hi, prec }
    }

    pub fn eval_pipoly(v: &PiPoly, prec: u32) -> Interval {
        if v.is_zero() {
            return Interval::exact_zero(prec);
        }
        let pi = Interval::pi(prec);
        let x = pi.mul(&pi);
        let mut acc = Interval::exact_zero(prec);
        let mut power = Interval::from_rational(&Rational::one(), prec);
        for (j, c) in v.coeffs().iter().enumerate() {
            if j > 0 {
                power = power.mul(&x);
            }
            if !c.is_zero() {
                acc = acc.add(&power.scale(c));
            }
        }
        acc
    }
}

/// Enclosure [⌊π·2^p⌋, ⌈π·2^p⌉]·2^{−p}.
pub fn pi_enclosure(prec: u32) -> Interval {
    Interval::pi(prec)
}

/// Highest precision computed so far and ⌊π·2^W⌋ at that precision.
static PI_CACHE: Mutex<Option<(u32, BigInt)>> = Mutex::new(None);

fn pi_floor(prec: u32) -> BigInt {
    let mut cache = PI_CACHE.lock().unwrap();
    if let Some((w, f)) = cache.as_ref() {
        if *w >= prec {
            return f >> (w - prec);
        }
    }
    let target = prec.max(256);
    let f = machin_floor(target);
    let out = &f >> (target - prec);
    *cache = Some((target, f));
    out
}

/// ⌊π·2^p⌋ from π = 16 arctan(1/5) − 4 arctan(1/239), with guard bits added
/// until both ends of the error bracket share the same floor.
fn machin_floor(prec: u32) -> BigInt {
    let mut guard = 64u32;
    loop {
        let w = prec + guard;
        let (s5, e5) = arctan_inv_scaled(5, w);
        let (s239, e239) = arctan_inv_scaled(239, w);
        let lo = 16 * (&s5 - e5) - 4 * (&s239 + e239);
        let hi = 16 * (&s5 + e5) - 4 * (&s239 - e239);
        let flo = &lo >> guard;
        let fhi = &hi >> guard;
        if flo == fhi {
            return flo;
        }
        guard += 64;
    }
}

/// Returns (S, E) with |arctan(1/x)·2^w − S| ≤ E.
fn arctan_inv_scaled(x: u32, w: u32) -> (BigInt, u64) {
    let one = pow2(w);
    let x2 = BigInt::from(x) * x;
    let mut pw = BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &one / (&pw * (2 * k + 1));
        if term.is_zero() {
            // Each truncated division loses < 1 and the alternating tail is < 1.
            return (sum, k + 1);
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pw *= &x2;
        k += 1;
    }
}

/// Exact ordering of two elements of ℚ[π²].
///
/// Equal inputs are detected symbolically. Otherwise the difference is
/// enclosed at doubling precision until its sign is certain, failing once
/// `cap` bits are exceeded.
pub fn compare(u: &PiPoly, v: &PiPoly) -> Result<Ordering> {
    compare_with_cap(u, v, DEFAULT_COMPARE_CAP)
}

pub fn compare_with_cap(u: &PiPoly, v: &PiPoly, cap: u32) -> Result<Ordering> {
    if u == v {
        return Ok(Ordering::Equal);
    }
    let diff = u - v;
    let mut prec = 64;
    loop {
        let iv = diff.eval_interval(prec);
        if iv.is_positive() {
            return Ok(Ordering::Greater);
        }
        if iv.is_negative() {
            return Ok(Ordering::Less);
        }
        if prec >= cap {
            return Err(Error::numeric(format!(
                "comparison undecided at {cap} bits (near-tie)"
            )));
        }
        prec = (prec * 2).min(cap);
    }
}
