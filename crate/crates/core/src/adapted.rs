//! Spectrum of `ψ²` on `𝒟 = Ker η` and the adapted orthonormal frame
//! `{ξ, e_i, e_{n+i}, e_{2n+i}, e_{3n+i}}` of an anti-quasi-Sasakian
//! structure of maximal rank, with `e_{n+i} = Ae_i/λ_i`, `e_{2n+i} = φe_i`,
//! `e_{3n+i} = ψe_i/λ_i` and `ψ²e_i = −λ_i² e_i`.

use crate::acm::{classify_structure, operators_a_psi, AcmStructure, Operators, StructureTag};
use crate::error::{Error, Result};
use crate::exterior::{rank_of_eta, KForm};
use crate::linalg::{inner, is_zero_vec, self_adjoint_eigenvalues, support, Matrix};
use crate::scalar::{four_squares, Scalar};
use num_rational::BigRational;
use num_traits::One;

/// An eigenvalue with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue<S> {
    pub value: S,
    pub multiplicity: usize,
}

/// Eigenvalues of a `g`-self-adjoint operator, certified exactly (or within
/// the tolerance in float mode), in ascending order.
///
/// `expected_zeros` eigenvalues closest to zero are dropped first (the `ξ`
/// direction); any remaining zero eigenvalue is reported as `NotMaximalRank`.
pub(crate) fn certified_spectrum<S: Scalar>(
    op: &Matrix<S>,
    g: &Matrix<S>,
    expected_zeros: usize,
) -> Result<Vec<Eigenvalue<S>>> {
    let n = op.rows();
    let mut approx = self_adjoint_eigenvalues(op, g).ok_or(Error::NotPositiveDefinite)?;
    approx.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    approx.drain(..expected_zeros.min(approx.len()));
    approx.sort_by(f64::total_cmp);
    let scale = approx.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if approx.iter().any(|x| x.abs() <= 1e-8 * scale) {
        let nonzero = approx.iter().filter(|x| x.abs() > 1e-8 * scale).count();
        return Err(Error::NotMaximalRank {
            rank: nonzero + expected_zeros,
            dim: n,
        });
    }
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for x in approx {
        match clusters.last_mut() {
            Some(c) if (x - c[c.len() - 1]).abs() <= 1e-6 * scale => c.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    let mut out = Vec::new();
    for c in clusters {
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        let value = S::recognize(mean)
            .ok_or_else(|| Error::IrrationalSpectrum(format!("eigenvalue near {mean}")))?;
        let shifted = op.sub(&Matrix::identity(n).scale(&value));
        let nullity = shifted.null_space().len();
        if nullity != c.len() {
            let msg = format!(
                "eigenvalue near {mean} has numerical multiplicity {} but {value} has nullity {nullity}",
                c.len()
            );
            return Err(if S::EXACT {
                Error::IrrationalSpectrum(msg)
            } else {
                Error::SpectrumMismatch(msg)
            });
        }
        out.push(Eigenvalue {
            value,
            multiplicity: nullity,
        });
    }
    Ok(out)
}

/// Preconditions shared by the spectrum and the frame: aqS of maximal rank.
fn aqs_operators<S: Scalar>(s: &AcmStructure<S>) -> Result<Operators<S>> {
    let class = classify_structure(s)?;
    if !class.has(StructureTag::AntiQuasiSasakian) {
        return Err(Error::NotAqs);
    }
    let rank = rank_of_eta(s.algebra(), &s.eta_form())?;
    if !rank.maximal {
        return Err(Error::NotMaximalRank {
            rank: rank.rank,
            dim: s.dim(),
        });
    }
    let ops = operators_a_psi(s)?;
    if !ops.all_hold() {
        return Err(Error::Internal(format!(
            "aqS identities fail: {}",
            ops.failures().join(", ")
        )));
    }
    Ok(ops)
}

/// Spectrum of `ψ²|_𝒟`, most negative eigenvalue first.
pub fn psi_squared_spectrum<S: Scalar>(s: &AcmStructure<S>) -> Result<Vec<Eigenvalue<S>>> {
    let ops = aqs_operators(s)?;
    spectrum_from_operators(s, &ops)
}

fn spectrum_from_operators<S: Scalar>(
    s: &AcmStructure<S>,
    ops: &Operators<S>,
) -> Result<Vec<Eigenvalue<S>>> {
    let psi2 = ops.psi.mul(&ops.psi);
    let spec = certified_spectrum(&psi2, s.metric(), 1)?;
    let total: usize = spec.iter().map(|e| e.multiplicity).sum();
    if total + 1 != s.dim() {
        return Err(Error::Internal("spectrum does not fill the horizontal space".into()));
    }
    for e in &spec {
        if e.value.signum() >= 0 {
            return Err(Error::Internal(format!("psi^2 has eigenvalue {} >= 0", e.value)));
        }
        if e.multiplicity % 4 != 0 {
            return Err(Error::Internal(format!(
                "eigenvalue {} has multiplicity {}, not divisible by 4",
                e.value, e.multiplicity
            )));
        }
    }
    Ok(spec)
}

/// Orthonormal frame `{ξ, e_1..e_n, e_{n+1}..e_{2n}, e_{2n+1}..e_{3n}, e_{3n+1}..e_{4n}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedFrame<S> {
    /// Positive weights, descending.
    pub weights: Vec<S>,
    /// Frame vectors in original coordinates, `ξ` first.
    pub vectors: Vec<Vec<S>>,
}

impl<S: Scalar> AdaptedFrame<S> {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Columns are the frame vectors.
    pub fn change_of_basis(&self) -> Matrix<S> {
        Matrix::from_columns(self.vectors.len(), &self.vectors)
    }
}

/// Order `candidates` by lexicographically least support.
fn by_support<S: Scalar>(mut candidates: Vec<Vec<S>>) -> Vec<Vec<S>> {
    candidates.sort_by_key(|v| support(v));
    candidates
}

/// Remove from `v` its `g`-projection onto the pairwise orthogonal `basis`.
pub(crate) fn orthogonalize<S: Scalar>(g: &Matrix<S>, basis: &[Vec<S>], v: &[S]) -> Vec<S> {
    let mut p = v.to_vec();
    for w in basis {
        let c = inner(g, &p, w)
            .checked_div(&inner(g, w, w))
            .expect("basis vectors are nonzero");
        if !c.is_zero() {
            p = p
                .iter()
                .zip(w)
                .map(|(a, b)| a.clone() - c.clone() * b.clone())
                .collect();
        }
    }
    p
}

/// Deterministic choice of the next eigenvector: the candidate of least support
/// whose component orthogonal to `taken` is nonzero.
pub(crate) fn next_vector<S: Scalar>(
    g: &Matrix<S>,
    candidates: &[Vec<S>],
    taken: &[Vec<S>],
) -> Option<Vec<S>> {
    candidates
        .iter()
        .map(|c| orthogonalize(g, taken, c))
        .find(|p| !is_zero_vec(p))
}

pub(crate) fn normalize<S: Scalar>(g: &Matrix<S>, v: &[S]) -> Result<Vec<S>> {
    let norm2 = inner(g, v, v);
    let norm = norm2
        .sqrt()
        .ok_or_else(|| Error::Internal(format!("cannot take the square root of {norm2}")))?;
    let inv = norm
        .recip()
        .ok_or_else(|| Error::Internal("zero vector in frame".into()))?;
    Ok(v.iter().map(|x| x.clone() * inv.clone()).collect())
}

/// A vector of `span{x, Ax, φx, ψx}` whose squared norm is a rational square, so
/// that normalizing it adjoins no square root.
///
/// `A`, `φ`, `ψ` are skew and pairwise anticommuting with `|Ax| = |ψx| = λ|x|`,
/// so `|a x + (b/λ) Ax + c φx + (d/λ) ψx|² = (a² + b² + c² + d²)|x|²`. Taking
/// `a² + b² + c² + d²` equal to the square class of `|x|²` makes the result a square.
fn rational_norm_vector<S: Scalar>(
    g: &Matrix<S>,
    phi: &Matrix<S>,
    ops: &Operators<S>,
    x: &[S],
    lambda: &S,
) -> Vec<S> {
    let Some(d) = inner(g, x, x).square_class().filter(|d| !d.is_one()) else {
        return x.to_vec();
    };
    let Some(inv) = lambda.recip() else {
        return x.to_vec();
    };
    let [a, b, c, e] = four_squares(&d).map(|v| S::from_rational(&BigRational::from_integer(v.into())));
    let parts = [
        (a, x.to_vec()),
        (b * inv.clone(), ops.a.mul_vec(x)),
        (c, phi.mul_vec(x)),
        (e * inv, ops.psi.mul_vec(x)),
    ];
    let mut out = vec![S::zero(); x.len()];
    for (coeff, v) in parts {
        if !coeff.is_zero() {
            for (o, vi) in out.iter_mut().zip(v) {
                *o = o.clone() + coeff.clone() * vi;
            }
        }
    }
    out
}

pub fn adapted_frame<S: Scalar>(s: &AcmStructure<S>) -> Result<AdaptedFrame<S>> {
    let ops = aqs_operators(s)?;
    adapted_frame_from(s, &ops)
}

/// [`adapted_frame`] for a structure already known to be aqS of maximal rank.
pub(crate) fn adapted_frame_from<S: Scalar>(
    s: &AcmStructure<S>,
    ops: &Operators<S>,
) -> Result<AdaptedFrame<S>> {
    let spec = spectrum_from_operators(s, ops)?;
    let g = s.metric();
    let n = s.dim();
    let psi2 = ops.psi.mul(&ops.psi);

    // (unnormalized e_i, λ_i)
    let mut seeds: Vec<(Vec<S>, S)> = Vec::new();
    for eig in &spec {
        let lambda = (-eig.value.clone()).sqrt().ok_or_else(|| {
            Error::IrrationalSpectrum(format!("square root of {}", -eig.value.clone()))
        })?;
        let candidates = by_support(
            psi2.sub(&Matrix::identity(n).scale(&eig.value))
                .null_space(),
        );
        let mut taken: Vec<Vec<S>> = Vec::new();
        while taken.len() < eig.multiplicity {
            let x = next_vector(g, &candidates, &taken)
                .ok_or_else(|| Error::Internal("eigenspace exhausted early".into()))?;
            let x = rational_norm_vector(g, s.phi(), ops, &x, &lambda);
            let images = [
                ops.a.mul_vec(&x),
                s.phi().mul_vec(&x),
                ops.psi.mul_vec(&x),
            ];
            taken.push(x.clone());
            taken.extend(images);
            seeds.push((x, lambda.clone()));
        }
    }

    let count = seeds.len();
    let mut blocks: [Vec<Vec<S>>; 4] = Default::default();
    for (x, lambda) in &seeds {
        let e = normalize(g, x)?;
        let inv = lambda.recip().expect("weights are nonzero");
        let scale = |v: Vec<S>| v.into_iter().map(|c| c * inv.clone()).collect::<Vec<_>>();
        blocks[1].push(scale(ops.a.mul_vec(&e)));
        blocks[2].push(s.phi().mul_vec(&e));
        blocks[3].push(scale(ops.psi.mul_vec(&e)));
        blocks[0].push(e);
    }
    let mut vectors = vec![s.xi().to_vec()];
    for block in blocks {
        vectors.extend(block);
    }
    let frame = AdaptedFrame {
        weights: seeds.into_iter().map(|(_, l)| l).collect(),
        vectors,
    };
    let e = frame.change_of_basis();
    if e.transpose().mul(g).mul(&e) != Matrix::identity(4 * count + 1) {
        return Err(Error::Internal("adapted frame is not orthonormal".into()));
    }
    Ok(frame)
}

/// Expected coframe expansions `(name, form)` of `𝒜`, `Φ`, `Ψ` for the given weights.
pub fn expected_coframe_forms<S: Scalar>(weights: &[S]) -> [(&'static str, KForm<S>); 3] {
    let n = weights.len();
    let dim = 4 * n + 1;
    let e = |block: usize, i: usize| 1 + block * n + i;
    let mut a = Vec::new();
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for (i, l) in weights.iter().enumerate() {
        let neg = -l.clone();
        a.push((vec![e(0, i), e(1, i)], neg.clone()));
        a.push((vec![e(2, i), e(3, i)], neg.clone()));
        phi.push((vec![e(0, i), e(2, i)], -S::one()));
        phi.push((vec![e(3, i), e(1, i)], -S::one()));
        psi.push((vec![e(0, i), e(3, i)], neg.clone()));
        psi.push((vec![e(1, i), e(2, i)], neg));
    }
    [
        ("A", KForm::from_terms(dim, 2, a)),
        ("Phi", KForm::from_terms(dim, 2, phi)),
        ("Psi", KForm::from_terms(dim, 2, psi)),
    ]
}

/// First coefficient where an expansion differs.
#[derive(Clone, Debug, PartialEq)]
pub struct CoframeMismatch<S> {
    pub form: &'static str,
    /// Frame indices (0 = `ξ`).
    pub indices: (usize, usize),
    pub expected: S,
    pub found: S,
}

#[derive(Clone, Debug)]
pub struct CoframeReport<S> {
    pub mismatches: Vec<CoframeMismatch<S>>,
}

impl<S> CoframeReport<S> {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-express `𝒜`, `Φ`, `Ψ` in the coframe dual to `frame` and compare with
/// `𝒜 = −Σλ_i(ε_i∧ε_{n+i} + ε_{2n+i}∧ε_{3n+i})`,
/// `Φ = −Σ(ε_i∧ε_{2n+i} + ε_{3n+i}∧ε_{n+i})`,
/// `Ψ = −Σλ_i(ε_i∧ε_{3n+i} + ε_{n+i}∧ε_{2n+i})`.
pub fn coframe_expansion_check<S: Scalar>(
    s: &AcmStructure<S>,
    frame: &AdaptedFrame<S>,
) -> Result<CoframeReport<S>> {
    let ops = aqs_operators(s)?;
    if frame.vectors.len() != s.dim() || 4 * frame.n() + 1 != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: frame.vectors.len(),
        });
    }
    let e = frame.change_of_basis();
    let actual = [
        ops.a_form.pullback(&e),
        s.phi_form().pullback(&e),
        ops.psi_form.pullback(&e),
    ];
    let mut mismatches = Vec::new();
    for ((name, expected), found) in expected_coframe_forms(&frame.weights).into_iter().zip(actual) {
        let diff = found.sub(&expected);
        for (idx, _) in diff.terms() {
            mismatches.push(CoframeMismatch {
                form: name,
                indices: (idx[0], idx[1]),
                expected: expected.coeff(idx),
                found: found.coeff(idx),
            });
        }
    }
    Ok(CoframeReport { mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{abelian_cokahler, weighted_heisenberg_4n1};
    use crate::scalar::Exact;

    fn e(v: i64) -> Exact {
        Exact::from_int(v)
    }

    fn spectrum_pairs(s: &AcmStructure<Exact>) -> Vec<(Exact, usize)> {
        psi_squared_spectrum(s)
            .unwrap()
            .into_iter()
            .map(|e| (e.value, e.multiplicity))
            .collect()
    }

    #[test]
    fn spectra_of_heisenberg() {
        let h = weighted_heisenberg_4n1(&[e(1)]).unwrap();
        assert_eq!(spectrum_pairs(h.phi(1)), vec![(e(-1), 4)]);
        let h = weighted_heisenberg_4n1(&[e(3)]).unwrap();
        assert_eq!(spectrum_pairs(h.phi(1)), vec![(e(-9), 4)]);
        let h = weighted_heisenberg_4n1(&[e(1), e(2)]).unwrap();
        assert_eq!(spectrum_pairs(h.phi(1)), vec![(e(-4), 4), (e(-1), 4)]);
    }

    #[test]
    fn precondition_failures() {
        let s = abelian_cokahler::<Exact>(2);
        assert!(matches!(psi_squared_spectrum(&s), Err(Error::NotMaximalRank { .. })));
        let h = weighted_heisenberg_4n1(&[e(1)]).unwrap();
        assert!(matches!(psi_squared_spectrum(h.phi(3)), Err(Error::NotAqs)));
        let h = weighted_heisenberg_4n1(&[e(1), e(0)]).unwrap();
        assert!(matches!(
            psi_squared_spectrum(h.phi(1)),
            Err(Error::NotMaximalRank { rank: 5, dim: 9 })
        ));
    }

    #[test]
    fn native_frame_of_h5() {
        let h = weighted_heisenberg_4n1(&[e(1)]).unwrap();
        let f = adapted_frame(h.phi(1)).unwrap();
        assert_eq!(f.weights, vec![e(1)]);
        let unit = |i| crate::linalg::unit_vec::<Exact>(5, i);
        let neg = |v: Vec<Exact>| v.into_iter().map(|c| -c).collect::<Vec<_>>();
        assert_eq!(
            f.vectors,
            vec![unit(0), unit(1), neg(unit(3)), unit(2), unit(4)]
        );
        assert!(coframe_expansion_check(h.phi(1), &f).unwrap().passed());
    }

    #[test]
    fn frame_weights_sorted_and_checked() {
        let h = weighted_heisenberg_4n1(&[e(1), e(2)]).unwrap();
        let f = adapted_frame(h.phi(1)).unwrap();
        assert_eq!(f.weights, vec![e(2), e(1)]);
        assert!(coframe_expansion_check(h.phi(1), &f).unwrap().passed());
        let mut flipped = f.clone();
        let last = 3 * flipped.n() + 1;
        flipped.vectors[last] = flipped.vectors[last].iter().map(|c| -c.clone()).collect();
        let report = coframe_expansion_check(h.phi(1), &flipped).unwrap();
        assert!(report.mismatches.iter().any(|m| m.form == "Psi"));
    }

    #[test]
    fn irrational_normalization_stays_exact() {
        // weight √2: μ = −2 is rational, λ = √2 joins the tower
        let w = Exact::parse("sqrt(2)").unwrap();
        let h = weighted_heisenberg_4n1(&[w.clone()]).unwrap();
        let f = adapted_frame(h.phi(1)).unwrap();
        assert_eq!(f.weights, vec![w]);
        assert!(coframe_expansion_check(h.phi(1), &f).unwrap().passed());
    }
}
