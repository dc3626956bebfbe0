//! Small dense matrices over a [`Scalar`] plus the elimination kernels the
//! rest of the crate leans on: reduced row echelon form, null spaces,
//! inverses, fraction-free ranks and a sparse echelon accumulator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a reduced row echelon computation.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub reduced: Matrix<S>,
    pub pivots: Vec<usize>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// # Panics
    ///
    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// # Panics
    ///
    /// Panics on incompatible shapes.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[S]) -> Vec<S> {
        self.transpose().mul_vec(v)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// First entry of largest magnitude, as `((row, col), value)`; `None` for the zero matrix.
    pub fn max_entry(&self) -> Option<((usize, usize), S)> {
        let mut best: Option<((usize, usize), S)> = None;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = &self[(i, j)];
                if v.is_zero() {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((_, b)) => v.abs().cmp_value(&b.abs()).is_gt(),
                };
                if better {
                    best = Some(((i, j), v.clone()));
                }
            }
        }
        best
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.sub(&self.transpose()).is_zero()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && self.add(&self.transpose()).is_zero()
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Sub-block of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    fn pick_pivot(&self, col: usize, from: usize) -> Option<usize> {
        if S::EXACT {
            (from..self.rows).find(|&r| !self[(r, col)].is_zero())
        } else {
            (from..self.rows)
                .filter(|&r| !self[(r, col)].is_zero())
                .max_by(|&a, &b| {
                    self[(a, col)]
                        .to_f64()
                        .abs()
                        .total_cmp(&self[(b, col)].to_f64().abs())
                })
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form over the field.
    pub fn rref(&self) -> Echelon<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(c, r) else {
                for i in r..m.rows {
                    m[(i, c)] = S::zero();
                }
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            for j in c..m.cols {
                let t = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = t;
            }
            m[(r, c)] = S::one();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, c)].clone();
                if f.is_zero() {
                    m[(i, c)] = S::zero();
                    continue;
                }
                for j in c..m.cols {
                    let rv = &m[(r, j)];
                    if rv.is_zero() {
                        continue;
                    }
                    let t = m[(i, j)].clone() - f.clone() * rv.clone();
                    m[(i, j)] = t;
                }
                m[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// Rank; fraction-free on rational input in exact mode.
    pub fn rank(&self) -> usize {
        if S::EXACT {
            if let Some(r) = rank_fraction_free(self) {
                return r;
            }
        }
        self.rref().pivots.len()
    }

    /// Basis of `{x : self·x = 0}`; one vector per free column, with a 1 in that column.
    pub fn null_space(&self) -> Vec<Vec<S>> {
        let Echelon { reduced, pivots } = self.rref();
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().peekable();
        let mut free = Vec::new();
        for c in 0..self.cols {
            if pivot_iter.peek() == Some(&&c) {
                pivot_iter.next();
            } else {
                free.push(c);
            }
        }
        for &f in &free {
            let mut v = vec![S::zero(); self.cols];
            v[f] = S::one();
            for (row, &pc) in pivots.iter().enumerate() {
                let entry = &reduced[(row, f)];
                if !entry.is_zero() {
                    v[pc] = -entry.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self·x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let augmented = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let Echelon { reduced, pivots } = augmented.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = reduced[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let augmented = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let Echelon { reduced, pivots } = augmented.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(reduced.block(0, n, n, 2 * n))
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = m.pick_pivot(c, c) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            let inv = pivot.recip().expect("pivot is nonzero");
            for i in c + 1..n {
                let f = m[(i, c)].clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = t;
                }
            }
        }
        det
    }

    pub fn leading_principal_minors(&self) -> Vec<S> {
        (1..=self.rows)
            .map(|k| self.block(0, k, 0, k).determinant())
            .collect()
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }

    /// Commutator `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `xᵀ·g·y`.
pub fn inner<S: Scalar>(g: &Matrix<S>, x: &[S], y: &[S]) -> S {
    dot(x, &g.mul_vec(y))
}

pub fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale_vec<S: Scalar>(s: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(Scalar::is_zero)
}

pub fn unit_vec<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

/// Indices of the nonzero entries.
pub fn support<S: Scalar>(a: &[S]) -> Vec<usize> {
    a.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Fraction-free (Bareiss) rank of a matrix with rational entries.
/// `None` if some entry is not rational.
pub fn rank_fraction_free<S: Scalar>(m: &Matrix<S>) -> Option<usize> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let row: Vec<_> = (0..m.cols())
            .map(|j| m[(i, j)].to_rational())
            .collect::<Option<_>>()?;
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        rows.push(
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect(),
        );
    }
    Some(bareiss_rank(rows, m.cols()))
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..n {
            let factor = a[i][c].clone();
            for j in c + 1..cols {
                let v = (&pivot * &a[i][j] - &factor * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Incremental row echelon form for sparse rows.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon<S> {
    pivots: BTreeMap<usize, BTreeMap<usize, S>>,
}

impl<S: Scalar> SparseEchelon<S> {
    pub fn new() -> Self {
        Self {
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the stored pivots; store it if independent.
    pub fn insert(&mut self, mut row: BTreeMap<usize, S>) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                return false;
            };
            let lead_val = lead_val.clone();
            match self.pivots.get(&lead) {
                Some(pivot_row) => {
                    for (&k, pv) in pivot_row {
                        let cur = row.remove(&k).unwrap_or_else(S::zero);
                        let next = cur - lead_val.clone() * pv.clone();
                        if !next.is_zero() {
                            row.insert(k, next);
                        }
                    }
                    row.remove(&lead);
                }
                None => {
                    let inv = lead_val.recip().expect("nonzero lead");
                    for v in row.values_mut() {
                        *v = v.clone() * inv.clone();
                    }
                    row.insert(lead, S::one());
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }
}

/// Sign behaviour of a symmetric bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    /// Singular form (includes the zero form).
    Degenerate,
    Indefinite,
}

/// Definiteness of a symmetric matrix: leading principal minors in exact
/// mode, eigenvalue signs against the tolerance in float mode.
pub fn definiteness<S: Scalar>(m: &Matrix<S>) -> Definiteness {
    assert!(m.is_square());
    if m.rows() == 0 {
        return Definiteness::Degenerate;
    }
    if S::EXACT {
        let minors = m.leading_principal_minors();
        if minors.iter().all(|d| d.signum() > 0) {
            return Definiteness::PositiveDefinite;
        }
        if minors
            .iter()
            .enumerate()
            .all(|(k, d)| d.signum() == if k % 2 == 0 { -1 } else { 1 })
        {
            return Definiteness::NegativeDefinite;
        }
        if minors.last().is_some_and(Scalar::is_zero) {
            Definiteness::Degenerate
        } else {
            Definiteness::Indefinite
        }
    } else {
        let a = m.to_nalgebra();
        let a = (&a + a.transpose()) * 0.5;
        let tau = crate::scalar::tolerance();
        let ev = a.symmetric_eigenvalues();
        if ev.iter().any(|x| x.abs() <= tau) {
            Definiteness::Degenerate
        } else if ev.iter().all(|&x| x > 0.0) {
            Definiteness::PositiveDefinite
        } else if ev.iter().all(|&x| x < 0.0) {
            Definiteness::NegativeDefinite
        } else {
            Definiteness::Indefinite
        }
    }
}

/// Eigenvalue approximations of a `g`-self-adjoint operator `a` (so `g·a` is
/// symmetric), ascending. `None` when `g` is not positive definite numerically.
pub fn self_adjoint_eigenvalues<S: Scalar>(a: &Matrix<S>, g: &Matrix<S>) -> Option<Vec<f64>> {
    let m = g.mul(a).to_nalgebra();
    let m = (&m + m.transpose()) * 0.5;
    let chol = g.to_nalgebra().cholesky()?;
    let l = chol.l();
    let y = l.solve_lower_triangular(&m)?;
    let c = l.solve_lower_triangular(&y.transpose())?;
    let c = (&c + c.transpose()) * 0.5;
    let mut values: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Some(values)
}
