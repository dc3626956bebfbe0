//! Independent floating-point oracle: dense matrices and SVD ranks, sharing no
//! code with the exact library beyond reading structure constants.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use aqslie::lie::LieAlgebra;
use aqslie::scalar::Scalar;
use nalgebra::DMatrix;

pub const RANK_TOL: f64 = 1e-9;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn shipped(subdir: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(data_dir().join(subdir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

/// Dense structure constants `c[i][j][k]` of `[b_i, b_j] = Σ c_ijk b_k`.
pub struct Constants {
    pub n: usize,
    c: Vec<f64>,
}

impl Constants {
    pub fn of<S: Scalar>(l: &LieAlgebra<S>) -> Self {
        let n = l.dim();
        let mut c = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i * n + j) * n + k] = l.structure_constant(i, j, k).to_f64();
                }
            }
        }
        Self { n, c }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let w = x[i] * y[j];
                if w != 0.0 {
                    for (k, o) in out.iter_mut().enumerate() {
                        *o += w * self.get(i, j, k);
                    }
                }
            }
        }
        out
    }

    pub fn killing(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| {
            let mut t = 0.0;
            for a in 0..n {
                for b in 0..n {
                    t += self.get(i, a, b) * self.get(j, b, a);
                }
            }
            t
        })
    }
}

pub fn rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let scale = sv.max().max(1.0);
    sv.iter().filter(|&&s| s > RANK_TOL * scale).count()
}

/// Orthonormal basis of the kernel of `m`, as columns.
pub fn kernel(m: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = m.ncols();
    let mut padded = DMatrix::zeros(m.nrows().max(cols), cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.unwrap();
    let scale = svd.singular_values.max().max(1.0);
    let null: Vec<_> = (0..cols)
        .filter(|&i| svd.singular_values[i] <= RANK_TOL * scale)
        .map(|i| vt.row(i).transpose())
        .collect();
    if null.is_empty() {
        DMatrix::zeros(cols, 0)
    } else {
        DMatrix::from_columns(&null)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sign of the permutation sorting `v`, or 0 on a repeated entry.
fn sort_sign(v: &[usize]) -> f64 {
    let mut sign = 1.0;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            if v[a] == v[b] {
                return 0.0;
            }
            if v[a] > v[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Matrix of `d : Λ^k → Λ^{k+1}` from
/// `dα(x_0, …, x_k) = Σ_{a<b} (−1)^{a+b} α([x_a, x_b], x_0, …, x̂_a, …, x̂_b, …, x_k)`
/// on basis forms, each column the coordinates of `d e^I` in increasing multi-indices.
pub fn ce_matrix(c: &Constants, k: usize) -> DMatrix<f64> {
    let n = c.n;
    let src = subsets(n, k);
    let dst = subsets(n, k + 1);
    let mut m = DMatrix::zeros(dst.len(), src.len());
    for (row, j) in dst.iter().enumerate() {
        for a in 0..j.len() {
            for b in a + 1..j.len() {
                let rest: Vec<usize> = (0..j.len()).filter(|&t| t != a && t != b).map(|t| j[t]).collect();
                let sgn = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                for l in 0..n {
                    let coeff = c.get(j[a], j[b], l);
                    if coeff == 0.0 {
                        continue;
                    }
                    let mut args = vec![l];
                    args.extend(&rest);
                    let s = sort_sign(&args);
                    if s == 0.0 {
                        continue;
                    }
                    let mut sorted = args.clone();
                    sorted.sort_unstable();
                    let col = src.iter().position(|i| *i == sorted).unwrap();
                    m[(row, col)] += sgn * coeff * s;
                }
            }
        }
    }
    m
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn betti(c: &Constants, k: usize) -> usize {
    let outgoing = if k < c.n { rank(&ce_matrix(c, k)) } else { 0 };
    let incoming = if k > 0 { rank(&ce_matrix(c, k - 1)) } else { 0 };
    binomial(c.n, k) - outgoing - incoming
}

/// Dimensions for `g/k`, `k` the centralizer of the torus spanned by the given basis vectors.
pub struct FlagOracle {
    pub k_dim: usize,
    pub center_dim: usize,
    pub closed_invariant_2forms: usize,
}

pub fn flag_oracle(c: &Constants, torus: &[usize]) -> FlagOracle {
    let n = c.n;
    let col = |m: &DMatrix<f64>, j: usize| m.column(j).iter().copied().collect::<Vec<f64>>();

    // k = {X : [t, X] = 0 for all t in the torus}
    let mut rows = Vec::new();
    for &t in torus {
        for l in 0..n {
            rows.push((0..n).map(|j| c.get(t, j, l)).collect::<Vec<_>>());
        }
    }
    let ad = DMatrix::from_fn(rows.len(), n, |r, j| rows[r][j]);
    let k = kernel(&ad);
    let kd = k.ncols();

    // z(k): U in k commuting with k
    let mut zrows = Vec::new();
    for b in 0..kd {
        let v = col(&k, b);
        for l in 0..n {
            zrows.push(
                (0..kd)
                    .map(|a| c.bracket(&col(&k, a), &v)[l])
                    .collect::<Vec<_>>(),
            );
        }
    }
    let zmat = DMatrix::from_fn(zrows.len(), kd, |r, a| zrows[r][a]);
    let center_dim = kernel(&zmat).ncols();

    // m = Killing-orthogonal complement of k
    let b = c.killing();
    let m = kernel(&(k.transpose() * &b));
    let md = m.ncols();
    let mut frame = DMatrix::zeros(n, n);
    frame.view_mut((0, 0), (n, kd)).copy_from(&k);
    frame.view_mut((0, kd), (n, md)).copy_from(&m);
    let inv = frame.try_inverse().expect("k + m spans g");
    let m_coords = |v: &[f64]| -> Vec<f64> {
        let x = &inv * nalgebra::DVector::from_column_slice(v);
        (kd..n).map(|i| x[i]).collect()
    };

    // unknowns w_pq, p < q, with ω(x, y) = Σ w_pq (x_p y_q − x_q y_p)
    let pairs = subsets(md, 2);
    let omega_row = |x: &[f64], y: &[f64]| -> Vec<f64> {
        pairs.iter().map(|p| x[p[0]] * y[p[1]] - x[p[1]] * y[p[0]]).collect()
    };
    let mb = |a: usize, b2: usize| m_coords(&c.bracket(&col(&m, a), &col(&m, b2)));
    let e = |a: usize| (0..md).map(|i| if i == a { 1.0 } else { 0.0 }).collect::<Vec<_>>();
    let mut eqs: Vec<Vec<f64>> = Vec::new();
    for u in 0..kd {
        let um = |a: usize| m_coords(&c.bracket(&col(&k, u), &col(&m, a)));
        for p in &pairs {
            let r1 = omega_row(&um(p[0]), &e(p[1]));
            let r2 = omega_row(&e(p[0]), &um(p[1]));
            eqs.push(r1.iter().zip(&r2).map(|(x, y)| x + y).collect());
        }
    }
    for t in subsets(md, 3) {
        let (a, b2, cc) = (t[0], t[1], t[2]);
        let r1 = omega_row(&mb(a, b2), &e(cc));
        let r2 = omega_row(&mb(a, cc), &e(b2));
        let r3 = omega_row(&mb(b2, cc), &e(a));
        eqs.push((0..pairs.len()).map(|i| r1[i] - r2[i] + r3[i]).collect());
    }
    let sys = DMatrix::from_fn(eqs.len(), pairs.len(), |r, i| eqs[r][i]);
    FlagOracle {
        k_dim: kd,
        center_dim,
        closed_invariant_2forms: pairs.len() - rank(&sys),
    }
}
