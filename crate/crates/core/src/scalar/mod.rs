//! Scalar fields used throughout the crate.
//!
//! Two implementations of [`Scalar`] exist:
//!
//! * [`Exact`]: rationals with finitely many adjoined square roots of positive
//!   integers. Arithmetic is exact and equality is decidable.
//! * [`Float`]: binary floating point, where every equality test goes through
//!   one global tolerance (see [`tolerance`]).
//!
//! Every algorithm is generic over the scalar, so the same code runs in
//! exact mode and in the opt-in float mode.

mod float;
mod rat;
mod squares;
mod tower;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_rational::BigRational;
use thiserror::Error;

pub use float::Float;
pub use tower::Exact;

pub(crate) use squares::four_squares;

/// Default float-mode tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

// 0 means "unset": fall back to DEFAULT_TOLERANCE.
static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0);

/// The tolerance used by every float-mode equality test.
pub fn tolerance() -> f64 {
    match TOLERANCE_BITS.load(Ordering::Relaxed) {
        0 => DEFAULT_TOLERANCE,
        bits => f64::from_bits(bits),
    }
}

/// Replace the global float-mode tolerance. Non-positive or non-finite values are ignored.
pub fn set_tolerance(tau: f64) {
    if tau.is_finite() && tau > 0.0 {
        TOLERANCE_BITS.store(tau.to_bits(), Ordering::Relaxed);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar {input:?}: {reason}")]
pub struct ScalarParseError {
    pub input: String,
    pub reason: String,
}

impl ScalarParseError {
    pub(crate) fn new(input: &str, reason: impl Into<String>) -> Self {
        Self {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

/// A field element as seen by the linear algebra and geometry code.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for exact arithmetic, `false` for float mode.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;

    /// The value as a rational number, when it is one.
    fn to_rational(&self) -> Option<BigRational>;

    fn is_zero(&self) -> bool;

    /// Multiplicative inverse; `None` for zero.
    fn recip(&self) -> Option<Self>;

    /// -1, 0 or 1.
    fn signum(&self) -> i32;

    /// Non-negative square root when it is representable.
    fn sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// For a positive rational, an integer `d` with `self = r²·d` for a
    /// rational `r`, with the square factors found by trial division removed.
    /// `None` otherwise and in float mode.
    fn square_class(&self) -> Option<BigUint> {
        None
    }

    /// Turn a floating approximation into a field element, if one is recognizable.
    fn recognize(x: f64) -> Option<Self>;

    fn parse(s: &str) -> Result<Self, ScalarParseError>;

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    fn is_one(&self) -> bool {
        (self.clone() - Self::one()).is_zero()
    }

    /// `self / rhs`, `None` when `rhs` is zero.
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self.clone() * r)
    }

    fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    /// Ordering on values, decided through `signum` of the difference.
    fn cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

/// Simplest rational `p/q` (first continued-fraction convergent) with
/// `q <= max_den` and `|p/q - x| <= tol`.
pub(crate) fn continued_fraction(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if ((h1 as f64) / (k1 as f64) - x).abs() <= tol {
            return Some((h1 as i64, k1 as i64));
        }
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
        if !r.is_finite() {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fraction_recovers_small_rationals() {
        let cf = |x| continued_fraction(x, 1000, 1e-12);
        assert_eq!(cf(0.75), Some((3, 4)));
        assert_eq!(cf(-4.0), Some((-4, 1)));
        assert_eq!(cf(1.0 / 3.0), Some((1, 3)));
        assert_eq!(cf(-2.0 / 7.0 + 1e-14), Some((-2, 7)));
        assert_eq!(cf(std::f64::consts::PI), None);
    }

    #[test]
    fn tolerance_default_and_reset() {
        set_tolerance(-1.0);
        assert!(tolerance() > 0.0);
    }
}
