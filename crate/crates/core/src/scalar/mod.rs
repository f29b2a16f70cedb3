//! Exact scalars: rationals, the ring ℚ[π²] and interval enclosures.

mod interval;
mod pipoly;
mod rational;
mod zeta;

pub use interval::{compare, compare_with_cap, pi_enclosure, Interval, DEFAULT_COMPARE_CAP};
pub use pipoly::PiPoly;
pub use rational::{
    binomial, double_factorial, factorial, format_rational, parse_rational, rational_to_f64,
    Rational,
};
pub use zeta::{a_coeff, bernoulli, zeta_even};
