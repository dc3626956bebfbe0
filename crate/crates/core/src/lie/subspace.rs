use crate::linalg::{is_zero_vec, Matrix};
use crate::scalar::Scalar;

/// A linear subspace of `S^n`, held as a list of independent column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Vec<Vec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient)
                .map(|i| crate::linalg::unit_vec(ambient, i))
                .collect(),
        }
    }

    /// Span of `vectors`; dependent vectors are dropped, keeping the first
    /// independent ones in the given order.
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<S>>) -> Self {
        let vectors: Vec<Vec<S>> = vectors.into_iter().collect();
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length mismatch");
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let pivots = Matrix::from_columns(ambient, &vectors).rref().pivots;
        Self {
            ambient,
            basis: pivots.into_iter().map(|p| vectors[p].clone()).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    /// Basis vectors as matrix columns.
    pub fn matrix(&self) -> Matrix<S> {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    /// Coordinates of `v` in the stored basis, `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[S]) -> Option<Vec<S>> {
        if self.basis.is_empty() {
            return is_zero_vec(v).then(Vec::new);
        }
        self.matrix().solve(v)
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn same_span(&self, other: &Self) -> bool {
        self.rank() == other.rank() && self.is_subspace_of(other)
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Self) -> Self {
        Self::span(
            self.ambient,
            self.basis.iter().chain(other.basis.iter()).cloned(),
        )
    }

    pub fn intersection(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient);
        }
        // solve A x = B y
        let a = self.matrix();
        let b = other.matrix();
        let m = Matrix::from_fn(self.ambient, a.cols() + b.cols(), |i, j| {
            if j < a.cols() {
                a[(i, j)].clone()
            } else {
                -b[(i, j - a.cols())].clone()
            }
        });
        let vectors = m
            .null_space()
            .into_iter()
            .map(|sol| a.mul_vec(&sol[..a.cols()]));
        Self::span(self.ambient, vectors)
    }

    /// `{x : xᵀ g v = 0 for every v in self}`.
    pub fn orthogonal_complement(&self, g: &Matrix<S>) -> Self {
        if self.is_zero() {
            return Self::full(self.ambient);
        }
        let rows = Matrix::from_rows(self.basis.iter().map(|v| g.mul_vec(v)).collect());
        Self::span(self.ambient, rows.null_space())
    }

    /// Canonical basis: the nonzero rows of the reduced echelon form.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let e = Matrix::from_rows(self.basis.clone()).rref();
        Self {
            ambient: self.ambient,
            basis: (0..e.pivots.len()).map(|i| e.reduced.row(i)).collect(),
        }
    }
}
