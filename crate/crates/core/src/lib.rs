//! Exact and numeric machinery for Weil–Petersson volumes.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`] holds exact rationals, the ring ℚ[π²] and rigorous interval
//!   evaluation.
//! * [`intersection`] computes the normalized ψ-class intersection numbers
//!   through Mirzakhani's recursion, with a persistent memo store.
//! * [`volumes`] builds volume polynomials, closed volumes and the ratio
//!   quantities used in large-genus asymptotics.
//! * [`asymptotics`] implements truncated 1/(g−m) expansions with explicit
//!   error budgets, plus empirical fitters.
//! * [`spectral`] constructs the trace-formula test function and the
//!   coefficients that appear in the spectral-gap argument.

pub mod asymptotics;
pub mod error;
pub mod intersection;
pub mod quad;
pub mod scalar;
pub mod spectral;
pub mod volumes;

pub use error::{Error, Result};
pub use intersection::{intersection_number, MemoStore, TauIndex};
pub use scalar::{Interval, PiPoly, Rational};
