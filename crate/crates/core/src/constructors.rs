//! Example algebras and structures: weighted Heisenberg algebras, Kähler Lie
//! algebras with their central extensions, and compact test models.

use crate::acm::{AcmStructure, VectorTwoForm};
use crate::error::{check_len, Error, Result};
use crate::exterior::{ce_d, KForm};
use crate::lie::LieAlgebra;
use crate::linalg::{definiteness, unit_vec, Definiteness, Matrix};
use crate::scalar::Scalar;

/// `(i, j, k)` for `φ_i`, an even permutation of `(1, 2, 3)`.
fn triple(i: usize) -> (usize, usize, usize) {
    match i {
        1 => (1, 2, 3),
        2 => (2, 3, 1),
        3 => (3, 1, 2),
        _ => panic!("phi index must be 1, 2 or 3"),
    }
}

fn heisenberg_names(len: usize) -> Vec<String> {
    std::iter::once("xi".to_string())
        .chain((1..len).map(|r| format!("tau{r}")))
        .collect()
}

/// `φ_i` on `h^{4n+1}` in the basis `{ξ, τ_1, …, τ_{4n}}`:
/// `φ_i τ_r = τ_{in+r}`, `φ_i τ_{in+r} = −τ_r`, `φ_i τ_{jn+r} = τ_{kn+r}`, `φ_i τ_{kn+r} = −τ_{jn+r}`.
pub fn heisenberg_4n1_phi<S: Scalar>(n: usize, i: usize) -> Matrix<S> {
    let (i, j, k) = triple(i);
    let mut phi = Matrix::zeros(4 * n + 1, 4 * n + 1);
    let tau = |block: usize, r: usize| 1 + block * n + r;
    for r in 0..n {
        for (from, to, sign) in [
            (tau(0, r), tau(i, r), 1),
            (tau(i, r), tau(0, r), -1),
            (tau(j, r), tau(k, r), 1),
            (tau(k, r), tau(j, r), -1),
        ] {
            phi[(to, from)] = S::from_int(sign);
        }
    }
    phi
}

/// `h^{4n+1}_λ`: `[τ_r, τ_{3n+r}] = [τ_{n+r}, τ_{2n+r}] = 2λ_r ξ`.
pub fn heisenberg_4n1_algebra<S: Scalar>(weights: &[S]) -> Result<LieAlgebra<S>> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::Format("at least one weight is required".into()));
    }
    let two = S::from_int(2);
    let mut entries = Vec::new();
    for (r, w) in weights.iter().enumerate() {
        let c = two.clone() * w.clone();
        entries.push((1 + r, 1 + 3 * n + r, 0, c.clone()));
        entries.push((1 + n + r, 1 + 2 * n + r, 0, c));
    }
    LieAlgebra::from_entries(4 * n + 1, entries)?.with_names(heisenberg_names(4 * n + 1))
}

/// `h^{4n+1}_λ` with its structures `φ_1, φ_2, φ_3` sharing `ξ`, `η` and `g`.
#[derive(Clone, Debug)]
pub struct Heisenberg4n1<S> {
    pub weights: Vec<S>,
    pub structures: [AcmStructure<S>; 3],
}

impl<S: Scalar> Heisenberg4n1<S> {
    pub fn phi(&self, i: usize) -> &AcmStructure<S> {
        &self.structures[i - 1]
    }
}

pub fn weighted_heisenberg_4n1<S: Scalar>(weights: &[S]) -> Result<Heisenberg4n1<S>> {
    let algebra = heisenberg_4n1_algebra(weights)?;
    let n = weights.len();
    let dim = 4 * n + 1;
    let xi = unit_vec(dim, 0);
    let make = |i| {
        AcmStructure::new(
            algebra.clone(),
            heisenberg_4n1_phi(n, i),
            xi.clone(),
            xi.clone(),
            Matrix::identity(dim),
        )
    };
    Ok(Heisenberg4n1 {
        weights: weights.to_vec(),
        structures: [make(1)?, make(2)?, make(3)?],
    })
}

/// `φ = Σ_r s_r (θ_r ⊗ τ_{n+r} − θ_{n+r} ⊗ τ_r)` on `h^{2n+1}`; `signs` defaults to all `+1`.
pub fn heisenberg_2n1_phi<S: Scalar>(n: usize, signs: Option<&[i64]>) -> Matrix<S> {
    let mut phi = Matrix::zeros(2 * n + 1, 2 * n + 1);
    for r in 0..n {
        let s = signs.map_or(1, |s| s[r]);
        phi[(1 + n + r, 1 + r)] = S::from_int(s);
        phi[(1 + r, 1 + n + r)] = S::from_int(-s);
    }
    phi
}

/// `h^{2n+1}_λ`: `[τ_r, τ_{n+r}] = 2λ_r ξ`.
pub fn heisenberg_2n1_algebra<S: Scalar>(weights: &[S]) -> Result<LieAlgebra<S>> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::Format("at least one weight is required".into()));
    }
    let entries = weights
        .iter()
        .enumerate()
        .map(|(r, w)| (1 + r, 1 + n + r, 0, S::from_int(2) * w.clone()));
    LieAlgebra::from_entries(2 * n + 1, entries)?.with_names(heisenberg_names(2 * n + 1))
}

pub fn weighted_heisenberg_2n1<S: Scalar>(weights: &[S]) -> Result<AcmStructure<S>> {
    let algebra = heisenberg_2n1_algebra(weights)?;
    let n = weights.len();
    let dim = 2 * n + 1;
    let xi = unit_vec(dim, 0);
    AcmStructure::new(
        algebra,
        heisenberg_2n1_phi(n, None),
        xi.clone(),
        xi,
        Matrix::identity(dim),
    )
}

/// A Lie algebra with a complex structure `J` and a `J`-Hermitian metric `k`.
#[derive(Clone, Debug)]
pub struct KahlerLieAlgebra<S> {
    algebra: LieAlgebra<S>,
    j: Matrix<S>,
    k: Matrix<S>,
}

impl<S: Scalar> KahlerLieAlgebra<S> {
    /// Checks `J² = −I`, `N_J = 0`, `k` positive definite and Hermitian, and `dΩ = 0`.
    pub fn new(algebra: LieAlgebra<S>, j: Matrix<S>, k: Matrix<S>) -> Result<Self> {
        let n = algebra.dim();
        for m in [&j, &k] {
            check_len(n, m.rows())?;
            check_len(n, m.cols())?;
        }
        let bad = |msg: &str| Err(Error::InvalidComplexStructure(msg.to_string()));
        if j.mul(&j) != Matrix::identity(n).neg() {
            return bad("J^2 != -I");
        }
        if !k.is_symmetric() || definiteness(&k) != Definiteness::PositiveDefinite {
            return bad("metric is not symmetric positive definite");
        }
        if j.transpose().mul(&k).mul(&j) != k {
            return bad("metric is not Hermitian");
        }
        if !complex_nijenhuis(&algebra, &j).is_zero() {
            return bad("J is not integrable");
        }
        let h = Self { algebra, j, k };
        if !ce_d(&h.algebra, &h.kahler_form())?.is_zero() {
            return bad("Kahler form is not closed");
        }
        Ok(h)
    }

    /// Abelian `R^{2m}` with `J e_{2r-1} = e_{2r}`, `J e_{2r} = −e_{2r-1}` and the flat metric.
    pub fn standard_flat(m: usize) -> Self {
        let n = 2 * m;
        let mut j = Matrix::zeros(n, n);
        for r in 0..m {
            j[(2 * r + 1, 2 * r)] = S::one();
            j[(2 * r, 2 * r + 1)] = -S::one();
        }
        Self::new(LieAlgebra::abelian(n), j, Matrix::identity(n))
            .expect("standard flat Kahler data is valid")
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn complex_structure(&self) -> &Matrix<S> {
        &self.j
    }

    pub fn metric(&self) -> &Matrix<S> {
        &self.k
    }

    /// `Ω = k(·, J·)`.
    pub fn kahler_form(&self) -> KForm<S> {
        KForm::from_antisymmetric(&self.k.mul(&self.j))
    }
}

/// `[JX, JY] − [X, Y] − J[JX, Y] − J[X, JY]` on basis pairs.
pub fn complex_nijenhuis<S: Scalar>(l: &LieAlgebra<S>, j: &Matrix<S>) -> VectorTwoForm<S> {
    let n = l.dim();
    let cols = j.columns();
    VectorTwoForm::from_fn(n, |a, b| {
        let ea = unit_vec(n, a);
        let eb = unit_vec(n, b);
        let t1 = l.br(&cols[a], &cols[b]);
        let t2 = l.basis_bracket(a, b);
        let t3 = j.mul_vec(&l.br(&cols[a], &eb));
        let t4 = j.mul_vec(&l.br(&ea, &cols[b]));
        (0..n)
            .map(|c| t1[c].clone() - t2[c].clone() - t3[c].clone() - t4[c].clone())
            .collect()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariance {
    Invariant,
    AntiInvariant,
    Neither,
}

/// `ω = ω_inv + ω_anti` with `ω_inv(JX, JY) = ω_inv(X, Y)` and `ω_anti(JX, JY) = −ω_anti(X, Y)`.
#[derive(Clone, Debug)]
pub struct InvarianceSplit<S> {
    pub kind: Invariance,
    pub invariant: KForm<S>,
    pub anti_invariant: KForm<S>,
}

/// Invariance type of a 2-form under a complex structure `j`.
pub fn invariance_split<S: Scalar>(j: &Matrix<S>, omega: &KForm<S>) -> Result<InvarianceSplit<S>> {
    check_len(j.rows(), omega.dim())?;
    if omega.degree() != 2 {
        return Err(Error::Format("invariance type needs a 2-form".into()));
    }
    let pulled = omega.pullback(j);
    let half = S::from_ratio(1, 2);
    let invariant = omega.add(&pulled).scale(&half);
    let anti_invariant = omega.sub(&pulled).scale(&half);
    let kind = if anti_invariant.is_zero() {
        Invariance::Invariant
    } else if invariant.is_zero() {
        Invariance::AntiInvariant
    } else {
        Invariance::Neither
    };
    Ok(InvarianceSplit {
        kind,
        invariant,
        anti_invariant,
    })
}

pub fn invariance_type<S: Scalar>(
    h: &KahlerLieAlgebra<S>,
    omega: &KForm<S>,
) -> Result<InvarianceSplit<S>> {
    invariance_split(&h.j, omega)
}

/// A closed 2-form on a Kähler Lie algebra, tagged by its invariance type.
#[derive(Clone, Debug)]
pub struct Cocycle<S> {
    omega: KForm<S>,
    invariance: Invariance,
}

impl<S: Scalar> Cocycle<S> {
    pub fn new(h: &KahlerLieAlgebra<S>, omega: KForm<S>) -> Result<Self> {
        check_len(h.algebra.dim(), omega.dim())?;
        if omega.degree() != 2 {
            return Err(Error::Format("cocycle must be a 2-form".into()));
        }
        if !ce_d(&h.algebra, &omega)?.is_zero() {
            return Err(Error::NotCocycle);
        }
        let invariance = invariance_type(h, &omega)?.kind;
        Ok(Self { omega, invariance })
    }

    pub fn form(&self) -> &KForm<S> {
        &self.omega
    }

    pub fn invariance(&self) -> Invariance {
        self.invariance
    }
}

/// `g = h ⊕ Rξ` with `[X, Y] = [X, Y]_h − ω(X, Y) ξ`, `φ = J ⊕ 0`, `g = k ⊕ 1`,
/// and `η` dual to `ξ`. The basis is that of `h` followed by `ξ`.
pub fn central_extension<S: Scalar>(
    h: &KahlerLieAlgebra<S>,
    omega: &Cocycle<S>,
) -> Result<AcmStructure<S>> {
    let m = h.algebra.dim();
    check_len(m, omega.omega.dim())?;
    let n = m + 1;
    let mut entries = Vec::new();
    for (&(a, b), row) in h.algebra.entries() {
        for (&c, v) in row {
            entries.push((a, b, c, v.clone()));
        }
    }
    for (idx, c) in omega.omega.terms() {
        entries.push((idx[0], idx[1], m, -c.clone()));
    }
    let mut names = h.algebra.basis_names().to_vec();
    names.push("xi".into());
    let algebra = LieAlgebra::from_entries(n, entries)?.with_names(names)?;
    let phi = Matrix::from_fn(n, n, |r, c| {
        if r < m && c < m {
            h.j[(r, c)].clone()
        } else {
            S::zero()
        }
    });
    let g = Matrix::from_fn(n, n, |r, c| {
        if r < m && c < m {
            h.k[(r, c)].clone()
        } else if r == m && c == m {
            S::one()
        } else {
            S::zero()
        }
    });
    let xi = unit_vec(n, m);
    let s = AcmStructure::new(algebra, phi, xi.clone(), xi, g)?;
    let on_h = s.deta().pullback(&Matrix::from_fn(n, m, |r, c| {
        if r == c {
            S::one()
        } else {
            S::zero()
        }
    }));
    if on_h != omega.omega {
        return Err(Error::Internal("d eta does not restrict to the cocycle".into()));
    }
    Ok(s)
}

/// `su(2)` with `[e1, e2] = e3`, `[e2, e3] = e1`, `[e3, e1] = e2`.
pub fn su2<S: Scalar>() -> LieAlgebra<S> {
    LieAlgebra::from_entries(
        3,
        [
            (0, 1, 2, S::one()),
            (1, 2, 0, S::one()),
            (2, 0, 1, S::one()),
        ],
    )
    .expect("valid indices")
    .with_names(vec!["e1".into(), "e2".into(), "e3".into()])
    .expect("three names")
}

/// A complex 3×3 matrix with integer real and imaginary parts.
type Complex3 = [[(i64, i64); 3]; 3];

fn su3_generators() -> Vec<(String, Complex3)> {
    let zero = [[(0, 0); 3]; 3];
    let mut out = Vec::new();
    let mut h1 = zero;
    h1[0][0] = (0, 1);
    h1[1][1] = (0, -1);
    out.push(("h1".to_string(), h1));
    let mut h2 = zero;
    h2[1][1] = (0, 1);
    h2[2][2] = (0, -1);
    out.push(("h2".to_string(), h2));
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut x = zero;
        x[a][b] = (1, 0);
        x[b][a] = (-1, 0);
        out.push((format!("x{}{}", a + 1, b + 1), x));
        let mut y = zero;
        y[a][b] = (0, 1);
        y[b][a] = (0, 1);
        out.push((format!("y{}{}", a + 1, b + 1), y));
    }
    out
}

fn commutator3(x: &Complex3, y: &Complex3) -> Complex3 {
    let mul = |p: &Complex3, q: &Complex3| {
        let mut r = [[(0i64, 0i64); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let (a, b) = p[i][k];
                    let (c, d) = q[k][j];
                    r[i][j].0 += a * c - b * d;
                    r[i][j].1 += a * d + b * c;
                }
            }
        }
        r
    };
    let p = mul(x, y);
    let q = mul(y, x);
    let mut r = p;
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (p[i][j].0 - q[i][j].0, p[i][j].1 - q[i][j].1);
        }
    }
    r
}

/// `su(3)` in the real basis `h1 = i(E11 − E22)`, `h2 = i(E22 − E33)`, and for
/// `j < k`, `x_jk = E_jk − E_kj`, `y_jk = i(E_jk + E_kj)`; brackets are matrix
/// commutators. The diagonal torus is `span{h1, h2}` (indices 0 and 1).
pub fn su3<S: Scalar>() -> LieAlgebra<S> {
    let gens = su3_generators();
    let flatten = |m: &Complex3| -> Vec<S> {
        m.iter()
            .flatten()
            .flat_map(|&(re, im)| [S::from_int(re), S::from_int(im)])
            .collect()
    };
    let columns: Vec<Vec<S>> = gens.iter().map(|(_, m)| flatten(m)).collect();
    let coords = Matrix::from_columns(18, &columns);
    let mut entries = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            let c = commutator3(&gens[a].1, &gens[b].1);
            let x = coords
                .solve(&flatten(&c))
                .expect("su(3) is closed under commutators");
            for (k, v) in x.into_iter().enumerate() {
                if !v.is_zero() {
                    entries.push((a, b, k, v));
                }
            }
        }
    }
    LieAlgebra::from_entries(8, entries)
        .expect("valid indices")
        .with_names(gens.into_iter().map(|(n, _)| n).collect())
        .expect("eight names")
}

/// `ξ = e_5` plus the standard complex structure on `su(2) ⊕ R²`, basis `e1, e2, e3, a, b`
/// with `ξ = b`. Not nilpotent; used as a negative control.
pub fn su2_plus_r2_structure<S: Scalar>() -> AcmStructure<S> {
    let l = su2::<S>().direct_sum(&LieAlgebra::abelian(2));
    let l = l
        .with_names(vec!["e1".into(), "e2".into(), "e3".into(), "a".into(), "b".into()])
        .expect("five names");
    let mut phi = Matrix::zeros(5, 5);
    phi[(1, 0)] = S::one();
    phi[(0, 1)] = -S::one();
    phi[(3, 2)] = S::one();
    phi[(2, 3)] = -S::one();
    let xi = unit_vec(5, 4);
    AcmStructure::new(l, phi, xi.clone(), xi, Matrix::identity(5)).expect("shapes agree")
}

/// Abelian `R^{2m+1}` with `φ` the standard complex structure on the first `2m` vectors and `ξ` last.
pub fn abelian_cokahler<S: Scalar>(m: usize) -> AcmStructure<S> {
    let h = KahlerLieAlgebra::standard_flat(m);
    let zero = Cocycle::new(&h, KForm::zero(2 * m, 2)).expect("zero is a cocycle");
    central_extension(&h, &zero).expect("trivial extension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acm::{classify_structure, classify_triple, validate_acm, StructureTag};
    use crate::exterior::rank_of_eta;
    use crate::scalar::Exact;

    fn e(v: i64) -> Exact {
        Exact::from_int(v)
    }

    #[test]
    fn heisenberg_4n1_tags() {
        let h = weighted_heisenberg_4n1(&[e(1)]).unwrap();
        for s in &h.structures {
            assert!(validate_acm(s).passed());
        }
        assert!(classify_structure(h.phi(1)).unwrap().has(StructureTag::AntiQuasiSasakian));
        assert!(classify_structure(h.phi(2)).unwrap().has(StructureTag::AntiQuasiSasakian));
        assert!(classify_structure(h.phi(3)).unwrap().has(StructureTag::Sasakian));
        assert!(classify_triple(h.phi(1), h.phi(2), h.phi(3))
            .unwrap()
            .double_aqs_sasakian());

        let z = weighted_heisenberg_4n1(&[e(0)]).unwrap();
        assert!(z.phi(1).algebra().is_abelian());
        for s in &z.structures {
            assert!(classify_structure(s).unwrap().has(StructureTag::Cokahler));
        }

        let h9 = weighted_heisenberg_4n1(&[e(1), e(2)]).unwrap();
        let r = rank_of_eta(h9.phi(1).algebra(), &h9.phi(1).eta_form()).unwrap();
        assert_eq!(r.rank, 9);
        let h90 = weighted_heisenberg_4n1(&[e(1), e(0)]).unwrap();
        let r = rank_of_eta(h90.phi(1).algebra(), &h90.phi(1).eta_form()).unwrap();
        assert_eq!(r.rank, 5);
        assert_eq!(h90.phi(1).algebra().center().rank(), 5);
    }

    #[test]
    fn phi_products() {
        let p1 = heisenberg_4n1_phi::<Exact>(2, 1);
        let p2 = heisenberg_4n1_phi::<Exact>(2, 2);
        let p3 = heisenberg_4n1_phi::<Exact>(2, 3);
        assert_eq!(p1.mul(&p2), p3);
        assert_eq!(p2.mul(&p1).neg(), p3);
    }

    #[test]
    fn heisenberg_2n1_tags() {
        let s = weighted_heisenberg_2n1(&[e(1)]).unwrap();
        let c = classify_structure(&s).unwrap();
        assert!(c.has(StructureTag::Sasakian) && c.has(StructureTag::QuasiSasakian));
        let s = weighted_heisenberg_2n1(&[e(0)]).unwrap();
        assert!(classify_structure(&s).unwrap().has(StructureTag::Cokahler));
        let s = weighted_heisenberg_2n1(&[e(1), e(3)]).unwrap();
        let c = classify_structure(&s).unwrap();
        assert!(c.has(StructureTag::QuasiSasakian) && !c.has(StructureTag::Sasakian));
        assert_eq!(
            s.deta(),
            KForm::from_terms(5, 2, [(vec![1, 3], e(-2)), (vec![2, 4], e(-6))])
        );
    }

    #[test]
    fn kahler_validation() {
        let h = KahlerLieAlgebra::<Exact>::standard_flat(2);
        assert_eq!(
            h.kahler_form(),
            KForm::from_terms(4, 2, [(vec![0, 1], e(-1)), (vec![2, 3], e(-1))])
        );
        let bad = KahlerLieAlgebra::<Exact>::new(LieAlgebra::abelian(2), Matrix::identity(2), Matrix::identity(2));
        assert!(matches!(bad, Err(Error::InvalidComplexStructure(_))));
    }

    #[test]
    fn invariance_decomposition() {
        let h = KahlerLieAlgebra::<Exact>::standard_flat(2);
        let omega = h.kahler_form();
        assert_eq!(invariance_type(&h, &omega).unwrap().kind, Invariance::Invariant);
        let anti = KForm::from_terms(4, 2, [(vec![0, 2], e(1)), (vec![1, 3], e(-1))]);
        assert_eq!(invariance_type(&h, &anti).unwrap().kind, Invariance::AntiInvariant);
        let split = invariance_type(&h, &omega.add(&anti)).unwrap();
        assert_eq!(split.kind, Invariance::Neither);
        assert_eq!(split.invariant, omega);
        assert_eq!(split.anti_invariant, anti);
    }

    #[test]
    fn central_extension_trichotomy() {
        let h = KahlerLieAlgebra::<Exact>::standard_flat(2);
        let anti = KForm::from_terms(4, 2, [(vec![0, 2], e(1)), (vec![1, 3], e(-1))]);
        let s = central_extension(&h, &Cocycle::new(&h, anti).unwrap()).unwrap();
        let c = classify_structure(&s).unwrap();
        assert_eq!(c.tags, vec![StructureTag::AntiQuasiSasakian]);
        assert!(rank_of_eta(s.algebra(), &s.eta_form()).unwrap().maximal);

        let zero = Cocycle::new(&h, KForm::zero(4, 2)).unwrap();
        let s = central_extension(&h, &zero).unwrap();
        assert!(classify_structure(&s).unwrap().has(StructureTag::Cokahler));

        // With dη = −η([·,·]) and the Sasakian condition dη = 2Φ, ω = Ω gives
        // dη = Φ: normal with closed Φ, but not contact metric.
        let omega = Cocycle::new(&h, h.kahler_form()).unwrap();
        let c = classify_structure(&central_extension(&h, &omega).unwrap()).unwrap();
        assert!(c.has(StructureTag::QuasiSasakian) && !c.has(StructureTag::Sasakian));
        let two_omega = Cocycle::new(&h, h.kahler_form().scale(&e(2))).unwrap();
        let c = classify_structure(&central_extension(&h, &two_omega).unwrap()).unwrap();
        assert!(c.has(StructureTag::Sasakian));
    }

    #[test]
    fn compact_models() {
        let s2 = su2::<Exact>();
        assert!(s2.jacobi_check().is_empty());
        let s3 = su3::<Exact>();
        assert!(s3.jacobi_check().is_empty());
        let k = s3.killing_form();
        assert_eq!(k.definiteness, Definiteness::NegativeDefinite);
        // B = 6 tr(XY): tr(h1 h1) = −2
        assert_eq!(k.matrix[(0, 0)], e(-12));
        assert!(!su2_plus_r2_structure::<Exact>().algebra().is_nilpotent());
        assert!(validate_acm(&su2_plus_r2_structure::<Exact>()).passed());
    }
}
