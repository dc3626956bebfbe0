//! Alternating forms on a Lie algebra and the Chevalley–Eilenberg complex.
//!
//! A `k`-form is stored by its coefficients on strictly increasing index
//! tuples, with `θ_1∧θ_2(b_1, b_2) = 1` (determinant convention). The
//! differential uses `dη(X, Y) = −η([X, Y])`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{check_len, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{Matrix, SparseEchelon};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct KForm<S> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, S>,
}

impl<S: fmt::Debug> fmt::Debug for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm(dim {}, degree {}, {:?})", self.dim, self.degree, self.terms)
    }
}

/// Sort `idx` in place, returning the permutation sign, or `None` on a repeated index.
fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
}

impl<S: Scalar> KForm<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant function 1 as a 0-form.
    pub fn unit(dim: usize) -> Self {
        let mut f = Self::zero(dim, 0);
        f.terms.insert(Vec::new(), S::one());
        f
    }

    /// `θ_{i_1} ∧ … ∧ θ_{i_k}` (0-indexed, any order).
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::from_terms(dim, indices.len(), [(indices.to_vec(), S::one())])
    }

    /// Sum of `c · θ_I`; index tuples may be unsorted or repeat (then they vanish).
    ///
    /// # Panics
    ///
    /// Panics if a tuple has the wrong length or an index is out of range.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, S)>,
    ) -> Self {
        let mut f = Self::zero(dim, degree);
        for (mut idx, c) in terms {
            assert_eq!(idx.len(), degree, "index tuple length");
            assert!(idx.iter().all(|&i| i < dim), "index out of range");
            if let Some(sign) = sort_with_sign(&mut idx) {
                let c = if sign < 0 { -c } else { c };
                f.add_term(idx, c);
            }
        }
        f
    }

    pub fn from_covector(v: &[S]) -> Self {
        let dim = v.len();
        Self::from_terms(
            dim,
            1,
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (vec![i], c.clone())),
        )
    }

    /// 2-form with `ω(b_i, b_j) = m[i][j]`; `m` must be antisymmetric.
    pub fn from_antisymmetric(m: &Matrix<S>) -> Self {
        let n = m.rows();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !m[(i, j)].is_zero() {
                    terms.push((vec![i, j], m[(i, j)].clone()));
                }
            }
        }
        Self::from_terms(n, 2, terms)
    }

    fn add_term(&mut self, idx: Vec<usize>, c: S) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.remove(&idx).unwrap_or_else(S::zero) + c;
        if !v.is_zero() {
            self.terms.insert(idx, v);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero coefficients on increasing tuples.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.terms.iter()
    }

    /// Coefficient on an index tuple in any order.
    pub fn coeff(&self, indices: &[usize]) -> S {
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            None => S::zero(),
            Some(sign) => {
                let c = self.terms.get(&idx).cloned().unwrap_or_else(S::zero);
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// Covector of a 1-form.
    pub fn to_covector(&self) -> Vec<S> {
        assert_eq!(self.degree, 1);
        (0..self.dim).map(|i| self.coeff(&[i])).collect()
    }

    /// Antisymmetric matrix `ω(b_i, b_j)` of a 2-form.
    pub fn to_matrix(&self) -> Matrix<S> {
        assert_eq!(self.degree, 2);
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (idx, c) in &self.terms {
            m[(idx[0], idx[1])] = c.clone();
            m[(idx[1], idx[0])] = -c.clone();
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.clone() * s.clone());
        }
        out
    }

    /// `α ∧ β`; degree overflow gives the zero form of degree `k + l`.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "ambient dimension mismatch");
        let degree = self.degree + other.degree;
        let mut out = Self::zero(self.dim, degree);
        if degree > self.dim {
            return out;
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                if let Some(sign) = sort_with_sign(&mut idx) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(idx, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// `p`-fold wedge power; `α^0 = 1`.
    pub fn power(&self, p: usize) -> Self {
        (0..p).fold(Self::unit(self.dim), |acc, _| acc.wedge(self))
    }

    /// Evaluate on `k` vectors.
    pub fn eval(&self, vectors: &[Vec<S>]) -> S {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let mut acc = S::zero();
        for (idx, c) in &self.terms {
            let m = Matrix::from_fn(self.degree, self.degree, |r, s| vectors[s][idx[r]].clone());
            let det = if self.degree == 0 {
                S::one()
            } else {
                m.determinant()
            };
            if !det.is_zero() {
                acc = acc + c.clone() * det;
            }
        }
        acc
    }

    /// Interior product `ι_x ω = ω(x, …)`.
    pub fn interior(&self, x: &[S]) -> Self {
        assert!(self.degree > 0);
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let v = c.clone() * x[i].clone();
                out.add_term(rest, if pos % 2 == 1 { -v } else { v });
            }
        }
        out
    }

    /// `(p^*ω)(X, …) = ω(pX, …)`.
    pub fn pullback(&self, p: &Matrix<S>) -> Self {
        assert_eq!(p.rows(), self.dim);
        let n = p.cols();
        let cols = p.columns();
        let mut out = Self::zero(n, self.degree);
        for idx in combinations(n, self.degree) {
            let args: Vec<Vec<S>> = idx.iter().map(|&i| cols[i].clone()).collect();
            out.add_term(idx, self.eval(&args));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let mono: Vec<String> = idx.iter().map(|i| format!("t{}", i + 1)).collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c})*{}", mono.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `dθ_l = −Σ_{a<b} c_ab^l θ_a∧θ_b`, as lists `(a, b, coefficient)` per `l`.
fn dual_differentials<S: Scalar>(l: &LieAlgebra<S>) -> Vec<Vec<(usize, usize, S)>> {
    let mut out = vec![Vec::new(); l.dim()];
    for (&(a, b), row) in l.entries() {
        for (&k, c) in row {
            out[k].push((a, b, -c.clone()));
        }
    }
    out
}

fn d_monomial<S: Scalar>(
    dtheta: &[Vec<(usize, usize, S)>],
    idx: &[usize],
    coeff: &S,
    out: &mut KForm<S>,
) {
    for (s, &l) in idx.iter().enumerate() {
        for (a, b, c) in &dtheta[l] {
            let mut new = Vec::with_capacity(idx.len() + 1);
            new.extend_from_slice(&idx[..s]);
            new.push(*a);
            new.push(*b);
            new.extend_from_slice(&idx[s + 1..]);
            if let Some(sign) = sort_with_sign(&mut new) {
                let sign = if s % 2 == 1 { -sign } else { sign };
                let v = coeff.clone() * c.clone();
                out.add_term(new, if sign < 0 { -v } else { v });
            }
        }
    }
}

/// Chevalley–Eilenberg differential.
pub fn ce_d<S: Scalar>(l: &LieAlgebra<S>, omega: &KForm<S>) -> Result<KForm<S>> {
    check_len(l.dim(), omega.dim)?;
    let dtheta = dual_differentials(l);
    let mut out = KForm::zero(omega.dim, omega.degree + 1);
    if omega.degree + 1 > omega.dim {
        return Ok(out);
    }
    for (idx, c) in &omega.terms {
        d_monomial(&dtheta, idx, c, &mut out);
    }
    Ok(out)
}

/// Rank data of a 1-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaRank {
    /// `2q + 1` if `η∧(dη)^q ≠ 0`, otherwise `2q`, where `q` is `max_power`.
    pub rank: usize,
    /// Largest `q` with `(dη)^q ≠ 0`.
    pub max_power: usize,
    pub odd: bool,
    /// `rank == dim`.
    pub maximal: bool,
}

pub fn rank_of_eta<S: Scalar>(l: &LieAlgebra<S>, eta: &KForm<S>) -> Result<EtaRank> {
    check_len(l.dim(), eta.dim)?;
    assert_eq!(eta.degree, 1, "rank_of_eta expects a 1-form");
    let deta = ce_d(l, eta)?;
    let mut q = 0;
    let mut pow = KForm::unit(eta.dim);
    loop {
        let next = pow.wedge(&deta);
        if next.is_zero() {
            break;
        }
        pow = next;
        q += 1;
    }
    let odd = !eta.wedge(&pow).is_zero();
    let rank = if odd { 2 * q + 1 } else { 2 * q };
    Ok(EtaRank {
        rank,
        max_power: q,
        odd,
        maximal: rank == eta.dim,
    })
}

/// Rank of `d : Λ^k → Λ^{k+1}`.
fn d_rank<S: Scalar>(l: &LieAlgebra<S>, dtheta: &[Vec<(usize, usize, S)>], k: usize) -> usize {
    let n = l.dim();
    if k >= n {
        return 0;
    }
    let target: HashMap<Vec<usize>, usize> = combinations(n, k + 1)
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut ech = SparseEchelon::new();
    for idx in combinations(n, k) {
        let mut out = KForm::zero(n, k + 1);
        d_monomial(dtheta, &idx, &S::one(), &mut out);
        if out.is_zero() {
            continue;
        }
        let row: BTreeMap<usize, S> = out
            .terms
            .into_iter()
            .map(|(t, c)| (target[&t], c))
            .collect();
        ech.insert(row);
    }
    ech.rank()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Chevalley–Eilenberg Betti number `b_k`.
pub fn ce_betti<S: Scalar>(l: &LieAlgebra<S>, k: usize) -> usize {
    let n = l.dim();
    if k > n {
        return 0;
    }
    let dtheta = dual_differentials(l);
    let rank_out = d_rank(l, &dtheta, k);
    let rank_in = if k == 0 { 0 } else { d_rank(l, &dtheta, k - 1) };
    binomial(n, k) - rank_out - rank_in
}

/// All Betti numbers `b_0..b_N`.
pub fn ce_betti_all<S: Scalar>(l: &LieAlgebra<S>) -> Vec<usize> {
    let n = l.dim();
    let dtheta = dual_differentials(l);
    let ranks: Vec<usize> = (0..=n).map(|k| d_rank(l, &dtheta, k)).collect();
    (0..=n)
        .map(|k| binomial(n, k) - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn e(v: i64) -> Exact {
        Exact::from_int(v)
    }

    fn h5() -> LieAlgebra<Exact> {
        // ξ = b0; [b1, b4] = [b2, b3] = 2 b0
        LieAlgebra::from_entries(5, [(1, 4, 0, e(2)), (2, 3, 0, e(2))]).unwrap()
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn wedge_pairs_with_dual_basis() {
        let a = KForm::<Exact>::basis(3, &[0]);
        let b = KForm::<Exact>::basis(3, &[1]);
        let ab = a.wedge(&b);
        let e1 = vec![e(1), e(0), e(0)];
        let e2 = vec![e(0), e(1), e(0)];
        assert_eq!(ab.eval(&[e1.clone(), e2.clone()]), e(1));
        assert_eq!(ab.eval(&[e2, e1]), e(-1));
        assert_eq!(b.wedge(&a), ab.neg());
    }

    #[test]
    fn square_of_deta() {
        let deta = KForm::from_terms(4, 2, [(vec![0, 3], e(-2)), (vec![1, 2], e(-2))]);
        let sq = deta.wedge(&deta);
        assert_eq!(sq, KForm::from_terms(4, 4, [(vec![0, 1, 2, 3], e(8))]));
    }

    #[test]
    fn heisenberg_differentials() {
        let l = h5();
        let eta = KForm::basis(5, &[0]);
        let deta = ce_d(&l, &eta).unwrap();
        assert_eq!(
            deta,
            KForm::from_terms(5, 2, [(vec![1, 4], e(-2)), (vec![2, 3], e(-2))])
        );
        for i in 1..5 {
            assert!(ce_d(&l, &KForm::basis(5, &[i])).unwrap().is_zero());
        }
        let r = rank_of_eta(&l, &eta).unwrap();
        assert_eq!((r.rank, r.max_power, r.maximal), (5, 2, true));
    }

    #[test]
    fn interior_and_pullback() {
        let w = KForm::<Exact>::basis(3, &[0, 1]);
        let x = vec![e(0), e(1), e(0)];
        assert_eq!(w.interior(&x), KForm::basis(3, &[0]).neg());
        let swap = Matrix::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(w.pullback(&swap), w.neg());
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(ce_betti(&LieAlgebra::<Exact>::abelian(5), 2), 10);
        assert_eq!(ce_betti(&h5(), 1), 4);
        assert_eq!(ce_betti(&h5(), 2), 5);
        assert_eq!(ce_betti_all(&h5()), vec![1, 4, 5, 5, 4, 1]);
    }
}
