//! Finite-dimensional real Lie algebras given by structure constants.

mod subspace;

use std::collections::BTreeMap;

pub use subspace::Subspace;

use crate::error::{check_len, Error, Result};
use crate::linalg::{definiteness, is_zero_vec, Definiteness, Matrix};
use crate::scalar::Scalar;

/// A Lie algebra with basis `b_0..b_{N-1}` and `[b_i, b_j] = Σ_k c_ijk b_k`.
///
/// Only pairs `i < j` are stored, and only nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<S> {
    dim: usize,
    names: Vec<String>,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, S>>,
}

/// The lower central series `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ …`.
#[derive(Clone, Debug)]
pub struct CentralSeries<S> {
    pub terms: Vec<Subspace<S>>,
    pub nilpotent: bool,
    /// Nilpotency step: the number of nonzero terms, when nilpotent.
    pub step: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct KillingForm<S> {
    pub matrix: Matrix<S>,
    pub definiteness: Definiteness,
}

/// `L = D ⊕ Rξ` with `[X,Y] = [X,Y]_D − dη(X,Y) ξ` for `X, Y ∈ D`.
#[derive(Clone, Debug)]
pub struct CenterQuotient<S> {
    /// The algebra `(D, [·,·]_D)` in the coordinates of the given basis of `D`.
    pub algebra: LieAlgebra<S>,
    /// `dη` restricted to `D`, as an antisymmetric matrix.
    pub deta: Matrix<S>,
}

pub(crate) fn default_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("b{i}")).collect()
}

impl<S: Scalar> LieAlgebra<S> {
    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            names: default_names(dim),
            brackets: BTreeMap::new(),
        }
    }

    /// Build from `(i, j, k, c)` entries meaning `[b_i, b_j]` has `c` on `b_k`
    /// (0-indexed). Entries with `i > j` are stored negated; repeated entries add up.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, S)>,
    ) -> Result<Self> {
        let mut l = Self::abelian(dim);
        for (i, j, k, c) in entries {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            if i == j {
                if c.is_zero() {
                    continue;
                }
                return Err(Error::Format(format!("bracket of b{} with itself", i + 1)));
            }
            let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
            let row = l.brackets.entry(key).or_default();
            let v = row.remove(&k).unwrap_or_else(S::zero) + c;
            if !v.is_zero() {
                row.insert(k, v);
            }
            if row.is_empty() {
                l.brackets.remove(&key);
            }
        }
        Ok(l)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        check_len(self.dim, names.len())?;
        self.names = names;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Stored nonzero brackets `(i, j) ↦ {k: c_ijk}` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BTreeMap<usize, S>)> {
        self.brackets.iter()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> S {
        let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
        match self.brackets.get(&key).and_then(|row| row.get(&k)) {
            Some(c) if sign > 0 => c.clone(),
            Some(c) => -c.clone(),
            None => S::zero(),
        }
    }

    /// `[b_i, b_j]` as a dense vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        if i == j {
            return out;
        }
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        if let Some(row) = self.brackets.get(&key) {
            for (&k, c) in row {
                out[k] = if neg { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        check_len(self.dim, x.len())?;
        check_len(self.dim, y.len())?;
        Ok(self.br(x, y))
    }

    pub(crate) fn br(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (&(i, j), row) in &self.brackets {
            // x_i y_j − x_j y_i
            let mut w = S::zero();
            if !x[i].is_zero() && !y[j].is_zero() {
                w = w + x[i].clone() * y[j].clone();
            }
            if !x[j].is_zero() && !y[i].is_zero() {
                w = w - x[j].clone() * y[i].clone();
            }
            if w.is_zero() {
                continue;
            }
            for (&k, c) in row {
                out[k] = out[k].clone() + w.clone() * c.clone();
            }
        }
        out
    }

    /// Matrix of `ad_x = [x, ·]`.
    pub fn ad(&self, x: &[S]) -> Matrix<S> {
        let cols: Vec<Vec<S>> = (0..self.dim)
            .map(|j| self.br(x, &crate::linalg::unit_vec(self.dim, j)))
            .collect();
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn ad_basis(&self, i: usize) -> Matrix<S> {
        let cols: Vec<Vec<S>> = (0..self.dim).map(|j| self.basis_bracket(i, j)).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// Triples `i < j < k` (0-indexed) where the cyclic Jacobi sum is nonzero.
    pub fn jacobi_check(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim;
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let bij = self.basis_bracket(i, j);
                for k in j + 1..n {
                    let bjk = self.basis_bracket(j, k);
                    let bki = self.basis_bracket(k, i);
                    let ek = crate::linalg::unit_vec(n, k);
                    let ei = crate::linalg::unit_vec(n, i);
                    let ej = crate::linalg::unit_vec(n, j);
                    let s = crate::linalg::add_vec(
                        &crate::linalg::add_vec(&self.br(&bij, &ek), &self.br(&bjk, &ei)),
                        &self.br(&bki, &ej),
                    );
                    if !is_zero_vec(&s) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Returns `self` if the Jacobi identity holds, else the violation.
    pub fn validated(self) -> Result<Self> {
        let bad = self.jacobi_check();
        if bad.is_empty() {
            Ok(self)
        } else {
            Err(Error::JacobiViolation(bad))
        }
    }

    /// Common kernel of all `ad_{b_i}`.
    pub fn center(&self) -> Subspace<S> {
        let n = self.dim;
        let mut rows = Vec::new();
        for i in 0..n {
            let ad = self.ad_basis(i);
            for r in 0..n {
                let row = ad.row(r);
                if !is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return Subspace::full(n);
        }
        Subspace::span(n, Matrix::from_rows(rows).null_space())
    }

    /// Span of `[X, Y]` for `X` in `a` and `Y` in `b`.
    pub fn bracket_span(&self, a: &Subspace<S>, b: &Subspace<S>) -> Subspace<S> {
        let mut out = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                let z = self.br(x, y);
                if !is_zero_vec(&z) {
                    out.push(z);
                }
            }
        }
        Subspace::span(self.dim, out)
    }

    pub fn lower_central_series(&self) -> CentralSeries<S> {
        let full = Subspace::full(self.dim);
        let mut terms = vec![full.clone()];
        loop {
            let last = terms.last().expect("series is never empty");
            let next = self.bracket_span(&full, last);
            if next.is_zero() {
                let step = terms.len();
                terms.push(next);
                return CentralSeries {
                    terms,
                    nilpotent: true,
                    step: Some(step),
                };
            }
            if next.rank() == last.rank() {
                terms.push(next);
                return CentralSeries {
                    terms,
                    nilpotent: false,
                    step: None,
                };
            }
            terms.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().nilpotent
    }

    /// `B(X, Y) = tr(ad_X ∘ ad_Y)` with its definiteness.
    pub fn killing_form(&self) -> KillingForm<S> {
        let ads: Vec<Matrix<S>> = (0..self.dim).map(|i| self.ad_basis(i)).collect();
        let mut m = Matrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let t = ads[i].mul(&ads[j]).trace();
                m[(i, j)] = t.clone();
                m[(j, i)] = t;
            }
        }
        let definiteness = definiteness(&m);
        KillingForm {
            matrix: m,
            definiteness,
        }
    }

    /// `D[X,Y] = [DX,Y] + [X,DY]` on basis pairs.
    pub fn is_derivation(&self, d: &Matrix<S>) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                let lhs = d.mul_vec(&self.basis_bracket(i, j));
                let ei = crate::linalg::unit_vec(n, i);
                let ej = crate::linalg::unit_vec(n, j);
                let rhs = crate::linalg::add_vec(
                    &self.br(&d.column(i), &ej),
                    &self.br(&ei, &d.column(j)),
                );
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Basis of the derivation algebra, each derivation as an `N×N` matrix.
    pub fn derivations(&self) -> Vec<Matrix<S>> {
        let n = self.dim;
        // unknown D[a][b] sits at a*n + b
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let cij = self.basis_bracket(i, j);
                for k in 0..n {
                    let mut row = vec![S::zero(); n * n];
                    for (m, c) in cij.iter().enumerate() {
                        if !c.is_zero() {
                            row[k * n + m] = row[k * n + m].clone() + c.clone();
                        }
                    }
                    for a in 0..n {
                        let c1 = self.structure_constant(a, j, k);
                        if !c1.is_zero() {
                            row[a * n + i] = row[a * n + i].clone() - c1;
                        }
                        let c2 = self.structure_constant(i, a, k);
                        if !c2.is_zero() {
                            row[a * n + j] = row[a * n + j].clone() - c2;
                        }
                    }
                    if !is_zero_vec(&row) {
                        rows.push(row);
                    }
                }
            }
        }
        let basis = if rows.is_empty() {
            (0..n * n).map(|t| crate::linalg::unit_vec(n * n, t)).collect()
        } else {
            Matrix::from_rows(rows).null_space()
        };
        basis
            .into_iter()
            .map(|v| Matrix::from_fn(n, n, |a, b| v[a * n + b].clone()))
            .collect()
    }

    /// The same algebra in the basis `f_i = Σ_a p[a][i] b_a` (columns of `p`).
    pub fn change_basis(&self, p: &Matrix<S>) -> Result<Self> {
        check_len(self.dim, p.rows())?;
        check_len(self.dim, p.cols())?;
        let inv = p
            .inverse()
            .ok_or_else(|| Error::Format("change of basis is singular".into()))?;
        let cols = p.columns();
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let z = inv.mul_vec(&self.br(&cols[i], &cols[j]));
                for (k, c) in z.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        Self::from_entries(self.dim, entries)?.with_names(self.names.clone())
    }

    /// `self ⊕ other` with `self`'s basis first.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let shift = self.dim;
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut brackets = self.brackets.clone();
        for (&(i, j), row) in &other.brackets {
            brackets.insert(
                (i + shift, j + shift),
                row.iter().map(|(&k, c)| (k + shift, c.clone())).collect(),
            );
        }
        Self {
            dim: self.dim + other.dim,
            names,
            brackets,
        }
    }

    /// Split along a central line `Rξ` with complement `d`.
    ///
    /// The returned `deta` is `dη` for the 1-form `η` with `η(ξ) = 1`, `η(d) = 0`.
    pub fn quotient_by_center_line(&self, xi: &[S], d: &Subspace<S>) -> Result<CenterQuotient<S>> {
        check_len(self.dim, xi.len())?;
        check_len(self.dim, d.ambient_dim())?;
        if !self.ad(xi).is_zero() {
            return Err(Error::NotCentral);
        }
        if d.rank() + 1 != self.dim || is_zero_vec(xi) || d.contains(xi) {
            return Err(Error::NotComplementary);
        }
        let mut cols = d.basis().to_vec();
        cols.push(xi.to_vec());
        let inv = Matrix::from_columns(self.dim, &cols)
            .inverse()
            .ok_or(Error::NotComplementary)?;
        let m = d.rank();
        let mut entries = Vec::new();
        let mut deta = Matrix::zeros(m, m);
        for a in 0..m {
            for b in a + 1..m {
                let z = inv.mul_vec(&self.br(&cols[a], &cols[b]));
                for (k, c) in z[..m].iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((a, b, k, c.clone()));
                    }
                }
                let mu = z[m].clone();
                deta[(a, b)] = -mu.clone();
                deta[(b, a)] = mu;
            }
        }
        let algebra = Self::from_entries(m, entries)?;
        if !algebra.jacobi_check().is_empty() {
            return Err(Error::Internal("quotient violates the Jacobi identity".into()));
        }
        Ok(CenterQuotient { algebra, deta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn e(v: i64) -> Exact {
        Exact::from_int(v)
    }

    fn su2() -> LieAlgebra<Exact> {
        LieAlgebra::from_entries(3, [(0, 1, 2, e(1)), (1, 2, 0, e(1)), (2, 0, 1, e(1))]).unwrap()
    }

    fn h3() -> LieAlgebra<Exact> {
        LieAlgebra::from_entries(3, [(0, 1, 2, e(1))]).unwrap()
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let l = su2();
        assert_eq!(l.structure_constant(2, 0, 1), e(1));
        assert_eq!(l.structure_constant(0, 2, 1), e(-1));
        let x = vec![e(1), e(2), e(3)];
        let y = vec![e(-1), e(0), e(5)];
        let xy = l.br(&x, &y);
        let yx = l.br(&y, &x);
        assert_eq!(xy, yx.iter().map(|c| -c.clone()).collect::<Vec<_>>());
        assert!(is_zero_vec(&l.br(&x, &x)));
        assert!(l.bracket(&x, &[e(1)]).is_err());
    }

    #[test]
    fn jacobi_detects_violation() {
        assert!(su2().jacobi_check().is_empty());
        let bad = LieAlgebra::from_entries(3, [(0, 1, 2, e(1)), (0, 2, 0, e(1))]).unwrap();
        assert_eq!(bad.jacobi_check(), vec![(0, 1, 2)]);
        assert!(matches!(bad.validated(), Err(Error::JacobiViolation(_))));
    }

    #[test]
    fn diagonal_bracket_rejected() {
        assert!(LieAlgebra::<Exact>::from_entries(2, [(1, 1, 0, e(1))]).is_err());
        assert!(LieAlgebra::<Exact>::from_entries(2, [(0, 1, 2, e(1))]).is_err());
    }

    #[test]
    fn series_and_center() {
        let s = h3().lower_central_series();
        assert!(s.nilpotent);
        assert_eq!(s.step, Some(2));
        assert_eq!(LieAlgebra::<Exact>::abelian(4).lower_central_series().step, Some(1));
        let s = su2().lower_central_series();
        assert!(!s.nilpotent);
        assert_eq!(s.terms.last().unwrap().rank(), 3);
        assert_eq!(h3().center().rank(), 1);
        assert_eq!(su2().center().rank(), 0);
    }

    #[test]
    fn killing_of_su2() {
        let k = su2().killing_form();
        assert_eq!(k.matrix, Matrix::identity(3).scale(&e(-2)));
        assert_eq!(k.definiteness, Definiteness::NegativeDefinite);
        assert_eq!(h3().killing_form().definiteness, Definiteness::Degenerate);
    }

    #[test]
    fn derivation_dimensions() {
        assert_eq!(su2().derivations().len(), 3);
        assert_eq!(LieAlgebra::<Exact>::abelian(2).derivations().len(), 4);
        let ders = h3().derivations();
        assert_eq!(ders.len(), 6);
        assert!(ders.iter().all(|d| h3().is_derivation(d)));
    }

    #[test]
    fn change_basis_preserves_jacobi() {
        let p = Matrix::from_ints(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        let l = su2().change_basis(&p).unwrap();
        assert!(l.jacobi_check().is_empty());
        let back = l.change_basis(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, su2());
    }

    #[test]
    fn quotient_of_heisenberg() {
        let l = h3();
        let d = Subspace::span(3, [vec![e(1), e(0), e(0)], vec![e(0), e(1), e(0)]]);
        let q = l.quotient_by_center_line(&[e(0), e(0), e(1)], &d).unwrap();
        assert!(q.algebra.is_abelian());
        assert_eq!(q.deta[(0, 1)], e(-1));
        assert!(matches!(
            l.quotient_by_center_line(&[e(1), e(0), e(0)], &d),
            Err(Error::NotCentral)
        ));
    }
}
