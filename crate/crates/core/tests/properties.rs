use aqslie::acm::classify_structure;
use aqslie::classifier::classify_nilpotent_aqs;
use aqslie::constructors::{su2, su3, weighted_heisenberg_2n1, weighted_heisenberg_4n1};
use aqslie::exterior::{ce_d, combinations, KForm};
use aqslie::lie::LieAlgebra;
use aqslie::linalg::Matrix;
use aqslie::scalar::{Exact, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Exact> {
    v.iter().map(|&x| Exact::from_int(x)).collect()
}

fn algebras() -> Vec<LieAlgebra<Exact>> {
    vec![
        su2(),
        su3(),
        weighted_heisenberg_4n1(&ints(&[1, 2])).unwrap().phi(1).algebra().clone(),
        weighted_heisenberg_2n1(&ints(&[3, 1])).unwrap().algebra().clone(),
    ]
}

/// A form of the given degree from a coefficient pool, cycled over the basis multi-indices.
fn form(dim: usize, degree: usize, coeffs: &[i64]) -> KForm<Exact> {
    let terms = combinations(dim, degree)
        .into_iter()
        .zip(coeffs.iter().cycle())
        .filter(|(_, &c)| c != 0)
        .map(|(idx, &c)| (idx, Exact::from_int(c)));
    KForm::from_terms(dim, degree, terms)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..12)
}

/// Signed permutation composed with one Pythagorean rotation.
fn conjugator(dim: usize, perm: &[usize], signs: &[bool], plane: (usize, usize), triple: usize) -> Matrix<Exact> {
    let (a, b, c) = [(3, 4, 5), (5, 12, 13), (8, 15, 17)][triple];
    let mut r = Matrix::<Exact>::identity(dim);
    let (i, j) = plane;
    r[(i, i)] = Exact::from_ratio(a, c);
    r[(j, j)] = Exact::from_ratio(a, c);
    r[(i, j)] = Exact::from_ratio(-b, c);
    r[(j, i)] = Exact::from_ratio(b, c);
    let p = Matrix::from_fn(dim, dim, |row, col| match (perm[col] == row, signs[col]) {
        (false, _) => Exact::zero(),
        (true, false) => Exact::one(),
        (true, true) => -Exact::one(),
    });
    p.mul(&r)
}

fn permutation(dim: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..dim).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(which in 0usize..4, degree in 0usize..5, c in coeffs()) {
        let l = &algebras()[which];
        let degree = degree.min(l.dim() - 2);
        let f = form(l.dim(), degree, &c);
        let dd = ce_d(l, &ce_d(l, &f).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn d_is_a_graded_derivation(p in 0usize..3, q in 0usize..3, a in coeffs(), b in coeffs()) {
        let l = &algebras()[2];
        let n = l.dim();
        let (alpha, beta) = (form(n, p, &a), form(n, q, &b));
        let lhs = ce_d(l, &alpha.wedge(&beta)).unwrap();
        let sign = Exact::from_int(if p % 2 == 0 { 1 } else { -1 });
        let rhs = ce_d(l, &alpha).unwrap().wedge(&beta)
            .add(&alpha.wedge(&ce_d(l, &beta).unwrap()).scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(p in 0usize..4, q in 0usize..4, a in coeffs(), b in coeffs()) {
        let (alpha, beta) = (form(7, p, &a), form(7, q, &b));
        let sign = Exact::from_int(if (p * q) % 2 == 0 { 1 } else { -1 });
        prop_assert_eq!(alpha.wedge(&beta), beta.wedge(&alpha).scale(&sign));
    }

    #[test]
    fn wedge_is_associative(
        p in 0usize..3, q in 0usize..3, r in 0usize..3,
        a in coeffs(), b in coeffs(), c in coeffs(),
    ) {
        let (x, y, z) = (form(7, p, &a), form(7, q, &b), form(7, r, &c));
        prop_assert_eq!(x.wedge(&y).wedge(&z), x.wedge(&y.wedge(&z)));
    }

    #[test]
    fn exact_field_axioms(
        a in (-20i64..20, 1i64..9, 1u32..30),
        b in (-20i64..20, 1i64..9, 1u32..30),
        c in (-20i64..20, 1i64..9),
    ) {
        let root = |n: i64, d: i64, r: u32| {
            let q = BigRational::new(BigInt::from(r), BigInt::from(1));
            Exact::from_ratio(n, d) * Exact::sqrt_of_rational(&q).unwrap() + Exact::from_ratio(d, 7)
        };
        let (x, y) = (root(a.0, a.1, a.2), root(b.0, b.1, b.2));
        let z = Exact::from_ratio(c.0, c.1);
        prop_assert_eq!((x.clone() + y.clone()) * z.clone(), x.clone() * z.clone() + y.clone() * z.clone());
        prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
        if !x.is_zero() {
            prop_assert!((x.clone() * x.recip().unwrap()).is_one());
        }
        let diff = x.to_f64() - y.to_f64();
        if diff.abs() > 1e-9 {
            prop_assert_eq!((x - y).signum() as f64, diff.signum());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn weights_are_conjugation_invariant(
        perm in permutation(9),
        signs in prop::collection::vec(any::<bool>(), 9),
        i in 0usize..9,
        shift in 1usize..9,
        triple in 0usize..3,
    ) {
        let h = weighted_heisenberg_4n1(&ints(&[1, 2])).unwrap();
        let q = conjugator(9, &perm, &signs, (i, (i + shift) % 9), triple);
        let conj = h.phi(1).change_basis(&q).unwrap();
        let tags = classify_structure(&conj).unwrap().tags;
        prop_assert_eq!(tags, classify_structure(h.phi(1)).unwrap().tags);
        let iso = classify_nilpotent_aqs(&conj).unwrap();
        prop_assert_eq!(iso.weights, ints(&[2, 1]));
    }
}
