use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::Rat;
use super::{continued_fraction, Scalar, ScalarParseError};

/// Exact element of a multi-quadratic extension of the rationals.
///
/// The value is `Σ c_d · √d` where every `d` is a square-free positive
/// integer (`d = 1` carries the rational part). Distinct square roots of
/// square-free integers are linearly independent over ℚ, so the sparse
/// representation is canonical and structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exact {
    // sorted by radicand, no zero coefficients
    terms: Vec<(u64, Rat)>,
}

const TRIAL_LIMIT: u32 = 1 << 16;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

/// Trial division: `n = s² · d · rest` with `d` square-free over the small
/// primes and `rest` free of them. The flag is `true` when `rest` may still be
/// composite.
fn split_squares(n: &BigUint) -> (BigUint, BigUint, BigUint, bool) {
    let mut s = BigUint::one();
    let mut d = BigUint::one();
    let mut rest = n.clone();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            // every prime up to √rest was tried: rest is 1 or prime
            return (s, d, rest, false);
        }
        let mut count = 0u32;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            count += 1;
        }
        if count >= 2 {
            s *= pb.pow(count / 2);
        }
        if count % 2 == 1 {
            d *= &pb;
        }
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        return (s * root, d, BigUint::one(), false);
    }
    (s, d, rest, true)
}

/// Write `n = s² · d` with `d` square-free. `None` when `n` has a cofactor
/// that trial division cannot certify square-free, or `d` overflows `u64`.
fn square_free_decompose(n: &BigUint) -> Option<(BigUint, u64)> {
    if n.is_zero() {
        return Some((BigUint::zero(), 1));
    }
    let (s, d, rest, open) = split_squares(n);
    // all prime factors of rest exceed TRIAL_LIMIT, so below 2^48 at most two distinct ones
    if open && rest >= (BigUint::one() << 48u32) {
        return None;
    }
    Some((s, (d * rest).to_u64()?))
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Pairwise coprime numbers whose products generate every input radicand.
fn coprime_base(radicands: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut base: Vec<u64> = Vec::new();
    let mut stack: Vec<u64> = radicands.into_iter().filter(|&d| d > 1).collect();
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        let mut merged = false;
        for idx in 0..base.len() {
            let b = base[idx];
            let g = gcd_u64(b, x);
            if g > 1 {
                if g == b && g == x {
                    merged = true;
                    break;
                }
                base.swap_remove(idx);
                stack.push(g);
                stack.push(b / g);
                stack.push(x / g);
                merged = true;
                break;
            }
        }
        if !merged {
            base.push(x);
        }
    }
    base.sort_unstable();
    base
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = int_part.trim().trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
            || (digits.is_empty() && frac_part.is_empty())
        {
            return None;
        }
        let whole: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().ok()?
        };
        let value = BigRational::new(whole * &scale + frac, scale);
        return Some(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

impl Exact {
    fn from_map(map: BTreeMap<u64, Rat>) -> Self {
        Self {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn rational(q: BigRational) -> Self {
        Self::from_rat(Rat::from_big(q))
    }

    fn from_rat(q: Rat) -> Self {
        if q.is_zero() {
            Self { terms: Vec::new() }
        } else {
            Self {
                terms: vec![(1, q)],
            }
        }
    }

    pub fn integer(v: i64) -> Self {
        Self::from_rat(Rat::int(v))
    }

    /// `√q` for a non-negative rational `q`.
    pub fn sqrt_of_rational(q: &BigRational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(Self::integer(0));
        }
        // √(n/m) = √(n·m) / m
        let n = q.numer().magnitude();
        let m = q.denom().magnitude();
        let (s, d) = square_free_decompose(&(n * m))?;
        let coeff = Rat::from_big(BigRational::new(BigInt::from(s), BigInt::from(m.clone())));
        Some(Self {
            terms: vec![(d, coeff)],
        })
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(d, _)| *d == 1)
    }

    /// Square-free radicands with a nonzero coefficient.
    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|(d, _)| *d)
    }

    fn rational_value(&self) -> Option<BigRational> {
        self.rat_value().map(|q| q.to_big())
    }

    fn rat_value(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::int(0)),
            [(1, c)] => Some(c.clone()),
            _ => None,
        }
    }

    fn scale_radical(&self, p: u64) -> Self {
        // self · √p for p coprime to every radicand
        Self {
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (d * p, c.clone()))
                .collect::<BTreeMap<_, _>>()
                .into_iter()
                .collect(),
        }
    }

    /// Write `self = a + b·√p` where `p` belongs to a coprime base of the radicands.
    fn split(&self, p: u64) -> (Self, Self) {
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (d, c) in &self.terms {
            if d % p == 0 {
                b.insert(d / p, c.clone());
            } else {
                a.insert(*d, c.clone());
            }
        }
        (Self::from_map(a), Self::from_map(b))
    }

    fn splitting_radical(&self) -> Option<u64> {
        coprime_base(self.radicands()).into_iter().next()
    }
}

impl Default for Exact {
    fn default() -> Self {
        Self::integer(0)
    }
}

impl From<i64> for Exact {
    fn from(v: i64) -> Self {
        Self::integer(v)
    }
}

impl Add for Exact {
    type Output = Exact;

    fn add(self, rhs: Exact) -> Exact {
        if rhs.terms.is_empty() {
            return self;
        }
        if self.terms.is_empty() {
            return rhs;
        }
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut left = self.terms.into_iter().peekable();
        let mut right = rhs.terms.into_iter().peekable();
        loop {
            match (left.peek(), right.peek()) {
                (Some((dl, _)), Some((dr, _))) => {
                    if dl < dr {
                        out.push(left.next().unwrap());
                    } else if dr < dl {
                        out.push(right.next().unwrap());
                    } else {
                        let (d, cl) = left.next().unwrap();
                        let (_, cr) = right.next().unwrap();
                        let c = cl + cr;
                        if !c.is_zero() {
                            out.push((d, c));
                        }
                    }
                }
                (Some(_), None) => out.push(left.next().unwrap()),
                (None, Some(_)) => out.push(right.next().unwrap()),
                (None, None) => break,
            }
        }
        Exact { terms: out }
    }
}

impl Neg for Exact {
    type Output = Exact;

    fn neg(self) -> Exact {
        Exact {
            terms: self.terms.into_iter().map(|(d, c)| (d, -c)).collect(),
        }
    }
}

impl Sub for Exact {
    type Output = Exact;

    fn sub(self, rhs: Exact) -> Exact {
        self + (-rhs)
    }
}

impl Mul for Exact {
    type Output = Exact;

    /// # Panics
    ///
    /// Panics if a product radicand overflows `u64`.
    fn mul(self, rhs: Exact) -> Exact {
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return Exact { terms: Vec::new() };
        }
        if let ([(1, a)], [(1, b)]) = (self.terms.as_slice(), rhs.terms.as_slice()) {
            return Exact::from_rat(a * b);
        }
        let mut acc: BTreeMap<u64, Rat> = BTreeMap::new();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &rhs.terms {
                let g = gcd_u64(*d1, *d2);
                let d = (d1 / g)
                    .checked_mul(d2 / g)
                    .expect("radicand overflow in quadratic tower");
                let mut c = c1 * c2;
                if g != 1 {
                    c = &c * &Rat::from_big(BigRational::from_integer(BigInt::from(g)));
                }
                let slot = acc.entry(d).or_insert_with(|| Rat::int(0));
                *slot = &*slot + &c;
            }
        }
        Exact::from_map(acc)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (d, c)) in self.terms.iter().enumerate() {
            let piece = if *d == 1 {
                c.to_string()
            } else if c.is_one() {
                format!("sqrt({d})")
            } else if (-c).is_one() {
                format!("-sqrt({d})")
            } else {
                format!("{c}*sqrt({d})")
            };
            if idx > 0 && !piece.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{piece}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_term(term: &str, whole: &str) -> Result<Exact, ScalarParseError> {
    let term = term.trim();
    let (negative, body) = match term.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, term.strip_prefix('+').unwrap_or(term).trim()),
    };
    let value = if let Some(idx) = body.find("sqrt(") {
        let coeff = body[..idx].trim();
        let coeff = match coeff.strip_suffix('*') {
            Some(c) => parse_rational(c)
                .ok_or_else(|| ScalarParseError::new(whole, "bad coefficient"))?,
            None if coeff.is_empty() => BigRational::one(),
            None => return Err(ScalarParseError::new(whole, "expected '*' before sqrt")),
        };
        let inner = body[idx + 5..]
            .strip_suffix(')')
            .ok_or_else(|| ScalarParseError::new(whole, "unclosed sqrt("))?;
        let radicand = parse_rational(inner)
            .ok_or_else(|| ScalarParseError::new(whole, "bad radicand"))?;
        let root = Exact::sqrt_of_rational(&radicand)
            .ok_or_else(|| ScalarParseError::new(whole, "radicand must be a non-negative rational"))?;
        Exact::rational(coeff) * root
    } else {
        Exact::rational(
            parse_rational(body).ok_or_else(|| ScalarParseError::new(whole, "not a rational"))?,
        )
    };
    Ok(if negative { -value } else { value })
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Exact { terms: Vec::new() }
    }

    fn one() -> Self {
        Exact::integer(1)
    }

    fn from_int(v: i64) -> Self {
        Exact::integer(v)
    }

    fn from_rational(q: &BigRational) -> Self {
        Exact::rational(q.clone())
    }

    fn to_rational(&self) -> Option<BigRational> {
        self.rational_value()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.rat_value() {
            return Some(Exact::from_rat(q.recip()));
        }
        let p = self.splitting_radical()?;
        let (a, b) = self.split(p);
        let conj = a.clone() - b.scale_radical(p);
        let norm = a.square() - b.square() * Exact::integer(p as i64);
        Some(conj * norm.recip()?)
    }

    fn signum(&self) -> i32 {
        if let Some(q) = self.rat_value() {
            return if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            };
        }
        let p = self
            .splitting_radical()
            .expect("irrational element has a radicand");
        let (a, b) = self.split(p);
        let (sa, sb) = (a.signum(), b.signum());
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with p·b²
        let s = (a.square() - b.square() * Exact::integer(p as i64)).signum();
        if s > 0 {
            sa
        } else {
            sb
        }
    }

    fn sqrt(&self) -> Option<Self> {
        let q = self.rational_value()?;
        Exact::sqrt_of_rational(&q)
    }

    fn square_class(&self) -> Option<BigUint> {
        let q = self.rat_value().filter(Rat::is_positive)?.to_big();
        let n = q.numer().magnitude() * q.denom().magnitude();
        let (_, d, rest, _) = split_squares(&n);
        Some(d * rest)
    }

    fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(d, c)| c.to_f64() * (*d as f64).sqrt())
            .sum()
    }

    fn recognize(x: f64) -> Option<Self> {
        let (p, q) = continued_fraction(x, 10_000_000, 1e-10 * x.abs().max(1.0))?;
        Some(Exact::rational(BigRational::new(p.into(), q.into())))
    }

    fn parse(s: &str) -> Result<Self, ScalarParseError> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(ScalarParseError::new(s, "empty"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let mut depth = 0i32;
        for (idx, ch) in trimmed.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && idx > start => {
                    let prev = trimmed[..idx].trim_end();
                    if !prev.ends_with(['*', '/']) {
                        terms.push(&trimmed[start..idx]);
                        start = idx;
                    }
                }
                _ => {}
            }
        }
        terms.push(&trimmed[start..]);
        terms
            .into_iter()
            .try_fold(Exact::zero(), |acc, t| Ok(acc + parse_term(t, s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn root(n: i64) -> Exact {
        Exact::sqrt_of_rational(&BigRational::from_integer(n.into())).unwrap()
    }

    #[test]
    fn square_roots_normalize() {
        assert_eq!(root(8), q(2, 1) * root(2));
        assert_eq!(root(9), q(3, 1));
        assert_eq!(root(2) * root(2), q(2, 1));
        assert_eq!(root(6), root(2) * root(3));
        assert_eq!(
            Exact::sqrt_of_rational(&BigRational::new(1.into(), 2.into())).unwrap(),
            q(1, 2) * root(2)
        );
    }

    #[test]
    fn inverse_in_biquadratic_field() {
        let x = q(1, 1) + root(2) + root(3);
        let inv = x.recip().unwrap();
        assert_eq!(x * inv, Exact::one());
        let y = q(3, 7) * root(5) - q(2, 1) * root(6) + q(1, 3);
        assert_eq!(y.clone() * y.recip().unwrap(), Exact::one());
    }

    #[test]
    fn sign_decisions() {
        assert_eq!((root(2) - q(3, 2)).signum(), -1);
        assert_eq!((root(2) - q(7, 5)).signum(), 1);
        assert_eq!((root(2) + root(3) - root(10)).signum(), -1); // 3.146 vs 3.162
        assert_eq!((root(3) - root(2) - q(3, 10)).signum(), 1); // 0.3178
        assert_eq!(Exact::zero().signum(), 0);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["0", "3/2", "-7", "sqrt(2)", "-sqrt(3)", "1+1/2*sqrt(3)-sqrt(5)", "-2/3*sqrt(6)"] {
            let v = Exact::parse(s).unwrap();
            assert_eq!(v.to_string(), s);
            assert_eq!(Exact::parse(&v.to_string()).unwrap(), v);
        }
        assert_eq!(Exact::parse("0.25").unwrap(), q(1, 4));
        assert_eq!(Exact::parse("-1.5").unwrap(), q(-3, 2));
        assert_eq!(Exact::parse("sqrt(12)").unwrap(), q(2, 1) * root(3));
        assert!(Exact::parse("abc").is_err());
        assert!(Exact::parse("1/0").is_err());
        assert!(Exact::parse("sqrt(-2)").is_err());
    }

    #[test]
    fn decomposition_of_large_cofactors() {
        // 65537 is prime and above the trial limit
        let n = BigUint::from(65537u64 * 65537u64 * 3);
        let (s, d) = square_free_decompose(&n).unwrap();
        assert_eq!(s, BigUint::from(65537u64));
        assert_eq!(d, 3);
    }

    #[test]
    fn recognize_rationals() {
        assert_eq!(Exact::recognize(-0.25), Some(q(-1, 4)));
        assert_eq!(Exact::recognize(-1.0 / 3.0 + 1e-13), Some(q(-1, 3)));
        assert_eq!(Exact::recognize(f64::NAN), None);
    }

    #[test]
    fn coprime_base_refines() {
        assert_eq!(coprime_base([6, 10, 15]), vec![2, 3, 5]);
        assert_eq!(coprime_base([6, 6]), vec![6]);
        assert_eq!(coprime_base([1]), Vec::<u64>::new());
    }
}
