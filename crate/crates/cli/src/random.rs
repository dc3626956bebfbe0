//! Seeded random inputs: alternating forms and orthogonal changes of basis.

use aqslie::exterior::{combinations, KForm};
use aqslie::linalg::Matrix;
use aqslie::scalar::Scalar;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A form of the given degree with a few small integer coefficients.
pub fn random_form<S: Scalar>(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> KForm<S> {
    let tuples = combinations(dim, degree);
    let count = rng.gen_range(1..=tuples.len().clamp(1, 6));
    let terms = tuples
        .choose_multiple(rng, count)
        .map(|t| (t.clone(), S::from_int(rng.gen_range(-3..=3))))
        .collect::<Vec<_>>();
    KForm::from_terms(dim, degree, terms)
}

/// A rational orthogonal matrix: a few Givens rotations with Pythagorean
/// cosines and sines on random coordinate planes, composed with a random
/// signed permutation.
pub fn random_orthogonal<S: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> Matrix<S> {
    const TRIPLES: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];
    let mut q = Matrix::<S>::identity(dim);
    if dim >= 2 {
        for _ in 0..dim.div_ceil(2) {
            let i = rng.gen_range(0..dim);
            let j = (i + rng.gen_range(1..dim)) % dim;
            let (a, b, c) = TRIPLES[rng.gen_range(0..TRIPLES.len())];
            let mut r = Matrix::<S>::identity(dim);
            r[(i, i)] = S::from_ratio(a, c);
            r[(j, j)] = S::from_ratio(a, c);
            r[(i, j)] = S::from_ratio(-b, c);
            r[(j, i)] = S::from_ratio(b, c);
            q = r.mul(&q);
        }
    }
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let signed = Matrix::from_fn(dim, dim, |i, j| {
        if perm[j] != i {
            S::zero()
        } else if rng.gen_bool(0.5) {
            S::one()
        } else {
            -S::one()
        }
    });
    signed.mul(&q)
}
