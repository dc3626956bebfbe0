use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{tolerance, Exact, Scalar, ScalarParseError};

/// Float-mode scalar. Equality and zero tests use the global tolerance.
#[derive(Clone, Copy, Default)]
pub struct Float(pub f64);

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= tolerance()
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // shortest representation that parses back to the same bits
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Add for Float {
    type Output = Float;
    fn add(self, rhs: Float) -> Float {
        Float(self.0 + rhs.0)
    }
}

impl Sub for Float {
    type Output = Float;
    fn sub(self, rhs: Float) -> Float {
        Float(self.0 - rhs.0)
    }
}

impl Mul for Float {
    type Output = Float;
    fn mul(self, rhs: Float) -> Float {
        Float(self.0 * rhs.0)
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn zero() -> Self {
        Float(0.0)
    }

    fn one() -> Self {
        Float(1.0)
    }

    fn from_int(v: i64) -> Self {
        Float(v as f64)
    }

    fn from_rational(q: &BigRational) -> Self {
        Float(q.to_f64().unwrap_or(f64::NAN))
    }

    fn to_rational(&self) -> Option<BigRational> {
        None
    }

    fn is_zero(&self) -> bool {
        self.0.abs() <= tolerance()
    }

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Float(1.0 / self.0))
        }
    }

    fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.0 > 0.0 {
            1
        } else {
            -1
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.signum() < 0 {
            None
        } else {
            Some(Float(self.0.max(0.0).sqrt()))
        }
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn recognize(x: f64) -> Option<Self> {
        x.is_finite().then_some(Float(x))
    }

    fn parse(s: &str) -> Result<Self, ScalarParseError> {
        let t = s.trim();
        if let Ok(v) = t.parse::<f64>() {
            return Ok(Float(v));
        }
        Exact::parse(t).map(|e| Float(e.to_f64()))
    }
}
