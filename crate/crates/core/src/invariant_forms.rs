//! Closed `ad(𝔨)`-invariant 2-forms on the isotropy complement of a compact
//! semisimple Lie algebra split along the centralizer of a torus.

use serde::Serialize;

use crate::constructors::invariance_split;
use crate::error::{check_len, Error, Result};
use crate::exterior::{combinations, KForm};
use crate::lie::{LieAlgebra, Subspace};
use crate::linalg::{Definiteness, Matrix};
use crate::scalar::Scalar;

/// `𝔤 = 𝔨 ⊕ 𝔪` with `𝔪` the Killing-orthogonal complement of `𝔨`.
///
/// Forms and endomorphisms "on 𝔪" are written in the basis of [`Self::m`].
#[derive(Clone, Debug)]
pub struct ReductiveSplit<S> {
    algebra: LieAlgebra<S>,
    k: Subspace<S>,
    m: Subspace<S>,
    killing: Matrix<S>,
    /// Ambient coordinates to `(k coordinates, m coordinates)`.
    split_inv: Matrix<S>,
}

/// `{X : [X, s] = 0 for s in S}` for an abelian subalgebra `S`.
pub fn centralizer_of_torus<S: Scalar>(g: &LieAlgebra<S>, s: &Subspace<S>) -> Result<Subspace<S>> {
    check_len(g.dim(), s.ambient_dim())?;
    for (a, x) in s.basis().iter().enumerate() {
        for y in &s.basis()[a + 1..] {
            if !g.br(x, y).iter().all(S::is_zero) {
                return Err(Error::NotAbelianSubalgebra);
            }
        }
    }
    Ok(centralizer(g, s.basis()))
}

fn centralizer<S: Scalar>(g: &LieAlgebra<S>, vectors: &[Vec<S>]) -> Subspace<S> {
    let n = g.dim();
    let mut rows = Vec::new();
    for v in vectors {
        let ad = g.ad(v);
        rows.extend((0..n).map(|i| ad.row(i)));
    }
    if rows.is_empty() {
        return Subspace::full(n);
    }
    Subspace::span(n, Matrix::from_rows(rows).null_space())
}

/// Split `g` along `k`, after checking that the Killing form is negative
/// definite and that `k` is a subalgebra with `[k, m] ⊆ m`.
pub fn reductive_split<S: Scalar>(g: &LieAlgebra<S>, k: &Subspace<S>) -> Result<ReductiveSplit<S>> {
    check_len(g.dim(), k.ambient_dim())?;
    let killing = g.killing_form();
    if killing.definiteness != Definiteness::NegativeDefinite {
        return Err(Error::NotCompactSemisimple);
    }
    let killing = killing.matrix;
    let m = k.orthogonal_complement(&killing);
    let mut basis = k.basis().to_vec();
    basis.extend(m.basis().iter().cloned());
    let split_inv = Matrix::from_columns(g.dim(), &basis)
        .inverse()
        .ok_or_else(|| Error::Internal("k and its complement do not span g".into()))?;
    for (a, x) in k.basis().iter().enumerate() {
        for y in &k.basis()[a..] {
            if !k.contains(&g.br(x, y)) {
                return Err(Error::InvalidStructure("k is not a subalgebra".into()));
            }
        }
        for y in m.basis() {
            if !m.contains(&g.br(x, y)) {
                return Err(Error::InvalidStructure("[k, m] is not contained in m".into()));
            }
        }
    }
    Ok(ReductiveSplit {
        algebra: g.clone(),
        k: k.clone(),
        m,
        killing,
        split_inv,
    })
}

impl<S: Scalar> ReductiveSplit<S> {
    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn k(&self) -> &Subspace<S> {
        &self.k
    }

    pub fn m(&self) -> &Subspace<S> {
        &self.m
    }

    pub fn killing(&self) -> &Matrix<S> {
        &self.killing
    }

    pub fn m_dim(&self) -> usize {
        self.m.rank()
    }

    fn split(&self, v: &[S]) -> (Vec<S>, Vec<S>) {
        let c = self.split_inv.mul_vec(v);
        let r = self.k.rank();
        (c[..r].to_vec(), c[r..].to_vec())
    }

    /// Coordinates of the `𝔪`-component of `v` in the basis of `𝔪`.
    pub fn m_coordinates(&self, v: &[S]) -> Vec<S> {
        self.split(v).1
    }

    /// The `𝔨`-component of `v`, in ambient coordinates.
    pub fn project_k(&self, v: &[S]) -> Vec<S> {
        let c = self.split(v).0;
        self.k.matrix().mul_vec(&c)
    }

    /// The `𝔪`-component of `v`, in ambient coordinates.
    pub fn project_m(&self, v: &[S]) -> Vec<S> {
        let c = self.split(v).1;
        self.m.matrix().mul_vec(&c)
    }

    /// `[X, Y]_𝔪` for `X, Y` given in `𝔪` coordinates, returned in `𝔪` coordinates.
    pub fn m_bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mm = self.m.matrix();
        self.m_coordinates(&self.algebra.br(&mm.mul_vec(x), &mm.mul_vec(y)))
    }

    fn m_unit(&self, a: usize) -> Vec<S> {
        crate::linalg::unit_vec(self.m_dim(), a)
    }

    /// `ad_U` restricted to `𝔪`, for `U` in ambient coordinates.
    pub fn ad_on_m(&self, u: &[S]) -> Matrix<S> {
        let p = self.m_dim();
        let cols: Vec<Vec<S>> = self
            .m
            .basis()
            .iter()
            .map(|x| self.m_coordinates(&self.algebra.br(u, x)))
            .collect();
        Matrix::from_columns(p, &cols)
    }

    /// The center of `𝔨`.
    pub fn center_of_k(&self) -> Subspace<S> {
        centralizer(&self.algebra, self.k.basis())
            .intersection(&self.k)
            .canonical()
    }

    /// Whether `𝔨` is the centralizer of its own center, i.e. the centralizer of a torus.
    pub fn is_torus_centralizer(&self) -> bool {
        let z = self.center_of_k();
        centralizer(&self.algebra, z.basis()).same_span(&self.k)
    }
}

/// Accumulates `c·ω(a, b)` into a row indexed by increasing pairs.
fn add_term<S: Scalar>(row: &mut [S], index: &[Vec<usize>], a: usize, b: usize, c: &S) {
    if a == b || c.is_zero() {
        return;
    }
    let (lo, hi, c) = if a < b { (a, b, c.clone()) } else { (b, a, -c.clone()) };
    let slot = index[lo][hi];
    row[slot] = row[slot].clone() + c;
}

/// Basis of the closed, `ad(𝔨)`-invariant 2-forms on `𝔪`.
pub fn invariant_closed_2forms<S: Scalar>(r: &ReductiveSplit<S>) -> Vec<KForm<S>> {
    let p = r.m_dim();
    let pairs = combinations(p, 2);
    if pairs.is_empty() {
        return Vec::new();
    }
    let mut index = vec![vec![usize::MAX; p]; p];
    for (v, pair) in pairs.iter().enumerate() {
        index[pair[0]][pair[1]] = v;
    }
    let nvars = pairs.len();
    let mut rows: Vec<Vec<S>> = Vec::new();

    for u in r.k().basis() {
        let ad = r.ad_on_m(u);
        for pair in &pairs {
            let (a, b) = (pair[0], pair[1]);
            let mut row = vec![S::zero(); nvars];
            for c in 0..p {
                add_term(&mut row, &index, c, b, &ad[(c, a)]);
                add_term(&mut row, &index, a, c, &ad[(c, b)]);
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }

    for triple in combinations(p, 3) {
        let (a, b, c) = (triple[0], triple[1], triple[2]);
        let mut row = vec![S::zero(); nvars];
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            let w = r.m_bracket(&r.m_unit(x), &r.m_unit(y));
            for (d, coeff) in w.iter().enumerate() {
                add_term(&mut row, &index, d, z, coeff);
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }

    let solutions = if rows.is_empty() {
        (0..nvars).map(|v| crate::linalg::unit_vec(nvars, v)).collect()
    } else {
        Matrix::from_rows(rows).null_space()
    };
    solutions
        .into_iter()
        .map(|sol| {
            KForm::from_terms(
                p,
                2,
                pairs
                    .iter()
                    .zip(sol)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(pair, c)| (pair.clone(), c)),
            )
        })
        .collect()
}

fn check_m_form<S: Scalar>(r: &ReductiveSplit<S>, omega: &KForm<S>) -> Result<()> {
    check_len(r.m_dim(), omega.dim())?;
    if omega.degree() != 2 {
        return Err(Error::Format("expected a 2-form on m".into()));
    }
    Ok(())
}

/// `Kill([X, Y], Z)` for `X, Y` in `𝔪` coordinates and `Z` ambient.
fn killing_pairing<S: Scalar>(r: &ReductiveSplit<S>, a: usize, b: usize, z: &[S]) -> S {
    let mm = r.m().matrix();
    let br = r.algebra().br(&mm.column(a), &mm.column(b));
    crate::linalg::inner(r.killing(), &br, z)
}

/// The element `Z_ω ∈ 𝔷(𝔨)` with `ω(X, Y) = Kill([X, Y], Z_ω) = Kill([Z_ω, X], Y)`
/// on `𝔪`, in ambient coordinates.
pub fn moment_element<S: Scalar>(r: &ReductiveSplit<S>, omega: &KForm<S>) -> Result<Vec<S>> {
    check_m_form(r, omega)?;
    let p = r.m_dim();
    let n = r.algebra().dim();
    let z = r.center_of_k();
    let pairs = combinations(p, 2);
    let rows: Vec<Vec<S>> = pairs
        .iter()
        .map(|pair| {
            z.basis()
                .iter()
                .map(|zj| killing_pairing(r, pair[0], pair[1], zj))
                .collect()
        })
        .collect();
    let rhs: Vec<S> = pairs.iter().map(|pair| omega.coeff(pair)).collect();
    let zm = z.matrix();
    let moment = if z.is_zero() || pairs.is_empty() {
        if !rhs.iter().all(S::is_zero) {
            return Err(Error::NoSolution("center of k is trivial".into()));
        }
        vec![S::zero(); n]
    } else {
        let y = Matrix::from_rows(rows)
            .solve(&rhs)
            .ok_or_else(|| Error::NoSolution("no Z in z(k) reproduces the form".into()))?;
        zm.mul_vec(&y)
    };

    let mm = r.m().matrix();
    for a in 0..p {
        for b in 0..p {
            let w = omega.coeff(&[a, b]);
            let first = killing_pairing(r, a, b, &moment);
            let zx = r.algebra().br(&moment, &mm.column(a));
            let second = crate::linalg::inner(r.killing(), &zx, &mm.column(b));
            if first != w || second != w {
                return Err(Error::Internal(format!(
                    "moment identity fails on the pair ({}, {})",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    Ok(moment)
}

/// The 2-form `(X, Y) ↦ Kill([X, Y], Z)` on `𝔪`.
pub fn form_from_moment<S: Scalar>(r: &ReductiveSplit<S>, z: &[S]) -> KForm<S> {
    let p = r.m_dim();
    KForm::from_terms(
        p,
        2,
        combinations(p, 2)
            .into_iter()
            .map(|pair| {
                let c = killing_pairing(r, pair[0], pair[1], z);
                (pair, c)
            })
            .filter(|(_, c)| !c.is_zero()),
    )
}

/// Checks `J² = −I`, `ad(𝔨)`-equivariance and integrability of `J` on `𝔪`.
pub fn verify_complex_structure<S: Scalar>(r: &ReductiveSplit<S>, j: &Matrix<S>) -> Result<()> {
    let p = r.m_dim();
    check_len(p, j.rows())?;
    check_len(p, j.cols())?;
    if j.mul(j) != Matrix::identity(p).neg() {
        return Err(Error::InvalidComplexStructure("J^2 != -1".into()));
    }
    for u in r.k().basis() {
        let ad = r.ad_on_m(u);
        if j.mul(&ad) != ad.mul(j) {
            return Err(Error::InvalidComplexStructure(
                "J does not commute with ad(k) on m".into(),
            ));
        }
    }
    let cols = j.columns();
    for a in 0..p {
        for b in a + 1..p {
            let x = r.m_unit(a);
            let y = r.m_unit(b);
            let n1 = r.m_bracket(&cols[a], &cols[b]);
            let n2 = r.m_bracket(&x, &y);
            let n3 = j.mul_vec(&r.m_bracket(&x, &cols[b]));
            let n4 = j.mul_vec(&r.m_bracket(&cols[a], &y));
            let total: Vec<S> = (0..p)
                .map(|i| n1[i].clone() - n2[i].clone() - n3[i].clone() - n4[i].clone())
                .collect();
            if !total.iter().all(S::is_zero) {
                return Err(Error::InvalidComplexStructure(format!(
                    "integrability fails on the pair ({}, {})",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Type11Report<S> {
    /// `ω(JX, JY) = ω(X, Y)` on all basis pairs.
    pub preserved: bool,
    #[serde(skip)]
    pub anti_invariant: KForm<S>,
    /// The `(2,0)+(0,2)` part of `ω` vanishes.
    pub no_20_part: bool,
}

/// Verifies `J`, then whether `ω` is of type `(1,1)` for it.
pub fn type_11_check<S: Scalar>(
    r: &ReductiveSplit<S>,
    omega: &KForm<S>,
    j: &Matrix<S>,
) -> Result<Type11Report<S>> {
    check_m_form(r, omega)?;
    verify_complex_structure(r, j)?;
    let preserved = omega.pullback(j) == *omega;
    let split = invariance_split(j, omega)?;
    Ok(Type11Report {
        preserved,
        no_20_part: split.anti_invariant.is_zero(),
        anti_invariant: split.anti_invariant,
    })
}

/// Dimension of the span of the anti-invariant parts of `forms` under a verified `J`.
pub fn anti_invariant_rank<S: Scalar>(
    r: &ReductiveSplit<S>,
    forms: &[KForm<S>],
    j: &Matrix<S>,
) -> Result<usize> {
    verify_complex_structure(r, j)?;
    let p = r.m_dim();
    let pairs = combinations(p, 2);
    let mut vectors = Vec::new();
    for f in forms {
        check_m_form(r, f)?;
        let anti = invariance_split(j, f)?.anti_invariant;
        vectors.push(pairs.iter().map(|pair| anti.coeff(pair)).collect::<Vec<S>>());
    }
    Ok(Subspace::span(pairs.len(), vectors).rank())
}

/// For `dim 𝔪 = 2`: the two Killing-orthogonal rotations `±J`, kept if they pass
/// [`verify_complex_structure`].
pub fn planar_complex_structures<S: Scalar>(r: &ReductiveSplit<S>) -> Result<Vec<Matrix<S>>> {
    if r.m_dim() != 2 {
        return Err(Error::InvalidStructure(format!(
            "planar enumeration needs dim m = 2, found {}",
            r.m_dim()
        )));
    }
    let mm = r.m().matrix();
    let bm = mm.transpose().mul(r.killing()).mul(&mm);
    let e = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
    let s = bm
        .inverse()
        .ok_or_else(|| Error::Internal("Killing form degenerate on m".into()))?
        .mul(&e);
    let root = s
        .determinant()
        .sqrt()
        .ok_or_else(|| Error::Internal("no square root of det S".into()))?;
    let j = s.scale(&root.recip().ok_or_else(|| Error::Internal("det S = 0".into()))?);
    Ok([j.clone(), j.neg()]
        .into_iter()
        .filter(|c| verify_complex_structure(r, c).is_ok())
        .collect())
}

/// Extends `ω` by zero on `𝔨` and checks that `−Kill⁻¹ ω` is a derivation of `𝔤`.
pub fn extension_is_derivation<S: Scalar>(r: &ReductiveSplit<S>, omega: &KForm<S>) -> Result<bool> {
    check_m_form(r, omega)?;
    let n = r.algebra().dim();
    let proj = Matrix::from_columns(
        r.m_dim(),
        &(0..n)
            .map(|i| r.m_coordinates(&crate::linalg::unit_vec(n, i)))
            .collect::<Vec<_>>(),
    );
    let w = proj.transpose().mul(&omega.to_matrix()).mul(&proj);
    let binv = r
        .killing()
        .inverse()
        .ok_or_else(|| Error::Internal("Killing form degenerate".into()))?;
    Ok(r.algebra().is_derivation(&binv.mul(&w).neg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{su2, su3, weighted_heisenberg_4n1};
    use crate::linalg::unit_vec;
    use crate::scalar::Exact;

    type E = Exact;

    fn torus(n: usize, idx: &[usize]) -> Subspace<E> {
        Subspace::span(n, idx.iter().map(|&i| unit_vec(n, i)))
    }

    #[test]
    fn su2_split() {
        let g = su2::<E>();
        let k = centralizer_of_torus(&g, &torus(3, &[2])).unwrap();
        assert!(k.same_span(&torus(3, &[2])));
        let r = reductive_split(&g, &k).unwrap();
        assert_eq!(r.m_dim(), 2);
        assert!(r.is_torus_centralizer());
        let forms = invariant_closed_2forms(&r);
        assert_eq!(forms.len(), 1);
        // Kill = -2 I, [e1, e2] = e3: Kill([e1,e2], c e3) = -2c
        let z = moment_element(&r, &forms[0]).unwrap();
        let c = forms[0].coeff(&[0, 1]);
        assert_eq!(z, vec![E::zero(), E::zero(), -c * E::from_ratio(1, 2)]);
        assert_eq!(form_from_moment(&r, &z), forms[0]);
        let js = planar_complex_structures(&r).unwrap();
        assert_eq!(js.len(), 2);
        for j in &js {
            let rep = type_11_check(&r, &forms[0], j).unwrap();
            assert!(rep.preserved && rep.no_20_part);
        }
        assert!(extension_is_derivation(&r, &forms[0]).unwrap());
    }

    #[test]
    fn su3_flag() {
        let g = su3::<E>();
        let k = centralizer_of_torus(&g, &torus(8, &[0, 1])).unwrap();
        assert_eq!(k.rank(), 2);
        let r = reductive_split(&g, &k).unwrap();
        assert_eq!(r.m_dim(), 6);
        let forms = invariant_closed_2forms(&r);
        assert_eq!(forms.len(), 2);
        let moments: Vec<Vec<E>> = forms.iter().map(|f| moment_element(&r, f).unwrap()).collect();
        assert_eq!(Subspace::span(8, moments.clone()).rank(), 2);
        for (f, z) in forms.iter().zip(&moments) {
            assert!(r.center_of_k().contains(z));
            assert_eq!(form_from_moment(&r, z), *f);
            assert!(extension_is_derivation(&r, f).unwrap());
        }
        // ± rotations on the three root planes: the integrable ones are the six
        // invariant orderings, the remaining two are not integrable
        let mut integrable = 0;
        for mask in 0..8u32 {
            let mut j = Matrix::<E>::zeros(6, 6);
            for plane in 0..3 {
                let eps = if mask >> plane & 1 == 1 { -1 } else { 1 };
                j[(2 * plane + 1, 2 * plane)] = E::from_int(eps);
                j[(2 * plane, 2 * plane + 1)] = E::from_int(-eps);
            }
            if verify_complex_structure(&r, &j).is_ok() {
                integrable += 1;
                assert_eq!(anti_invariant_rank(&r, &forms, &j).unwrap(), 0);
            }
        }
        assert_eq!(integrable, 6);
    }

    #[test]
    fn preconditions() {
        let g = su2::<E>();
        assert!(matches!(
            centralizer_of_torus(&g, &torus(3, &[0, 1])),
            Err(Error::NotAbelianSubalgebra)
        ));
        let h = weighted_heisenberg_4n1(&[E::one()]).unwrap();
        let l = h.phi(1).algebra();
        assert!(matches!(
            reductive_split(l, &torus(5, &[0])),
            Err(Error::NotCompactSemisimple)
        ));
        let r = reductive_split(&g, &Subspace::full(3)).unwrap();
        assert!(invariant_closed_2forms(&r).is_empty());
        let r = reductive_split(&g, &torus(3, &[2])).unwrap();
        let bad = Matrix::<E>::identity(2);
        assert!(matches!(
            verify_complex_structure(&r, &bad),
            Err(Error::InvalidComplexStructure(_))
        ));
        let zero = KForm::<E>::zero(2, 2);
        assert_eq!(moment_element(&r, &zero).unwrap(), vec![E::zero(); 3]);
    }
}
