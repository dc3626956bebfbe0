//! Sums of four squares.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Miller–Rabin over the first twelve primes: exact below 3.3·10^24 and a
/// strong probable-prime test above. Callers verify what they derive from it.
fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let one = BigUint::one();
    if n <= &one {
        return false;
    }
    for p in BASES {
        let p = BigUint::from(p);
        if (n % &p).is_zero() {
            return *n == p;
        }
    }
    let m = n - &one;
    let s = m.trailing_zeros().unwrap_or(0);
    let d = &m >> s;
    'witness: for a in BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == m {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == m {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `p = a² + b²` for a prime `p ≡ 1 (mod 4)`, by Euclid on a square root of −1.
fn prime_two_squares(p: &BigUint) -> Option<(BigUint, BigUint)> {
    let m = p - 1u32;
    let e = &m >> 2;
    let mut c = BigUint::from(2u32);
    let root = loop {
        if &c >= p {
            return None;
        }
        let t = c.modpow(&e, p);
        if &t * &t % p == m {
            break t;
        }
        c += 1u32;
    };
    let (mut a, mut b) = (p.clone(), root);
    while &b * &b > *p {
        let r = &a % &b;
        a = b;
        b = r;
    }
    let rest = p - &b * &b;
    let c = rest.sqrt();
    (&c * &c == rest).then_some((b, c))
}

fn two_squares(r: &BigUint) -> Option<(BigUint, BigUint)> {
    let s = r.sqrt();
    if &s * &s == *r {
        return Some((s, BigUint::zero()));
    }
    if let Some(small) = r.to_u32().filter(|&v| v < 1 << 16) {
        return (0..=s.to_u32().unwrap_or(0)).find_map(|c| {
            let rest = small - c * c;
            let d = (rest as f64).sqrt() as u32;
            (d * d == rest).then(|| (BigUint::from(c), BigUint::from(d)))
        });
    }
    if r % 4u32 == BigUint::one() && is_probable_prime(r) {
        return prime_two_squares(r);
    }
    None
}

/// `[a, b, c, d]` with `a² + b² + c² + d² = n`.
pub(crate) fn four_squares(n: &BigUint) -> [BigUint; 4] {
    let mut a = n.sqrt();
    loop {
        let rest = n - &a * &a;
        let mut b = rest.sqrt();
        loop {
            if let Some((c, d)) = two_squares(&(&rest - &b * &b)) {
                debug_assert!(&a * &a + &b * &b + &c * &c + &d * &d == *n);
                return [a, b, c, d];
            }
            if b.is_zero() {
                break;
            }
            b -= 1u32;
        }
        assert!(!a.is_zero(), "every non-negative integer is a sum of four squares");
        a -= 1u32;
    }
}
