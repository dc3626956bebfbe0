//! Rationals with an inline fast path for word-sized values.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// A reduced rational. `Small` holds every value whose reduced numerator and
/// denominator fit in `i64` (numerator above `i64::MIN`), so the
/// representation is canonical and derived equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Rat {
    /// `(numerator, denominator)` with `denominator > 0` and `gcd = 1`.
    Small(i64, i64),
    Big(BigRational),
}

fn fits(v: i128) -> Option<i64> {
    if v > i64::MIN as i128 && v <= i64::MAX as i128 {
        Some(v as i64)
    } else {
        None
    }
}

impl Rat {
    pub fn int(v: i64) -> Self {
        if v == i64::MIN {
            return Rat::Big(BigRational::from_integer(v.into()));
        }
        Rat::Small(v, 1)
    }

    /// From a reduced `n / d` with `d > 0`.
    fn reduced(n: i128, d: i128) -> Self {
        match (fits(n), fits(d)) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Self::reduced(n, d)
    }

    pub fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(q),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw((*n).into(), (*d).into()),
            Rat::Big(q) => q.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n > 0,
            Rat::Big(q) => q.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(q) => q.is_negative(),
        }
    }

    /// # Panics
    ///
    /// Panics on zero.
    pub fn recip(&self) -> Self {
        match self {
            Rat::Small(0, _) => panic!("reciprocal of zero"),
            Rat::Small(n, d) if *n > 0 => Rat::Small(*d, *n),
            Rat::Small(n, d) => Rat::Small(-*d, -*n),
            Rat::Big(q) => Rat::from_big(q.recip()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small(n, d) => *n as f64 / *d as f64,
            Rat::Big(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Add for &Rat {
    type Output = Rat;

    fn add(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    return Rat::from_i128(a + c, b);
                }
                Rat::from_i128(a * d + c * b, b * d)
            }
            _ => Rat::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Add for Rat {
    type Output = Rat;

    fn add(self, rhs: Rat) -> Rat {
        &self + &rhs
    }
}

impl Mul for &Rat {
    type Output = Rat;

    fn mul(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                let g1 = a.gcd(&d).max(1);
                let g2 = c.gcd(&b).max(1);
                Rat::reduced((a / g1) * (c / g2), (b / g2) * (d / g1))
            }
            _ => Rat::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Mul for Rat {
    type Output = Rat;

    fn mul(self, rhs: Rat) -> Rat {
        &self * &rhs
    }
}

impl Neg for Rat {
    type Output = Rat;

    fn neg(self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, d),
            Rat::Big(q) => Rat::from_big(-q),
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;

    fn neg(self) -> Rat {
        -self.clone()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(q) => write!(f, "{q}"),
        }
    }
}
