//! Reduction of nilpotent anti-quasi-Sasakian and quasi-Sasakian structures
//! of maximal rank to weighted Heisenberg normal forms, with an explicit and
//! re-verified isomorphism.

use serde::Serialize;

use crate::acm::{
    classify_structure, levi_civita, operators_a_psi, operators_from_connection, xi_killing_check,
    AcmStructure,
    StructureClass, StructureTag,
};
use crate::adapted::{adapted_frame_from, certified_spectrum, next_vector, normalize};
use crate::constructors::{
    heisenberg_2n1_algebra, heisenberg_2n1_phi, heisenberg_4n1_phi, weighted_heisenberg_4n1,
};
use crate::error::{Error, Result};
use crate::exterior::rank_of_eta;
use crate::lie::Subspace;
use crate::linalg::{is_zero_vec, support, unit_vec, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HeisenbergFamily {
    /// `h^{4n+1}_λ` with `φ_1`.
    #[serde(rename = "4n+1")]
    FourNPlusOne,
    /// `h^{2n+1}_λ`.
    #[serde(rename = "2n+1")]
    TwoNPlusOne,
}

/// A certified isomorphism onto a weighted Heisenberg normal form.
#[derive(Clone, Debug)]
pub struct HeisenbergIso<S> {
    pub family: HeisenbergFamily,
    /// Positive, descending.
    pub weights: Vec<S>,
    /// Maps source coordinates to target coordinates.
    pub f: Matrix<S>,
    /// The normal form the source is mapped onto.
    pub target: AcmStructure<S>,
    /// Per-block sign `s_r` of the target `φ` in the `2n+1` family, all `+1` otherwise.
    pub orientation: Vec<i64>,
    /// For the `4n+1` family: `φ_2`, `φ_3` of the normal form pulled back to the source.
    pub companions: Vec<Matrix<S>>,
}

impl<S: Scalar> HeisenbergIso<S> {
    /// Re-check that `f` is a Lie algebra isomorphism carrying `(φ, ξ, η, g)`
    /// to the target tensors.
    pub fn verify(&self, source: &AcmStructure<S>) -> Result<()> {
        let fail = |what: &str| Err(Error::Internal(format!("isomorphism check failed: {what}")));
        let f = &self.f;
        let n = source.dim();
        let t = &self.target;
        let src = source.algebra();
        let cols = f.columns();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = f.mul_vec(&src.basis_bracket(i, j));
                let rhs = t.algebra().br(&cols[i], &cols[j]);
                if lhs != rhs {
                    return fail(&format!("bracket of b{} and b{}", i + 1, j + 1));
                }
            }
        }
        if t.phi().mul(f) != f.mul(source.phi()) {
            return fail("phi");
        }
        if f.mul_vec(source.xi()) != t.xi() {
            return fail("xi");
        }
        if f.vec_mul(t.eta()) != source.eta() {
            return fail("eta");
        }
        if f.transpose().mul(t.metric()).mul(f) != *source.metric() {
            return fail("metric");
        }
        Ok(())
    }

    /// The source structure transported to target coordinates.
    pub fn push_forward(&self, source: &AcmStructure<S>) -> Result<AcmStructure<S>> {
        let inv = self
            .f
            .inverse()
            .ok_or_else(|| Error::Internal("isomorphism is singular".into()))?;
        source.change_basis(&inv)
    }
}

/// Checks shared by both classifiers, in order: nilpotency, class, maximal
/// rank, Killing Reeb field, one-dimensional center, abelian quotient.
fn check_hypotheses<S: Scalar>(
    s: &AcmStructure<S>,
    class: Option<&StructureClass<S>>,
    tag: StructureTag,
) -> Result<()> {
    let l = s.algebra();
    if !l.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let computed;
    let class = match class {
        Some(c) => c,
        None => {
            computed = classify_structure(s)?;
            &computed
        }
    };
    if !class.has(tag) {
        return Err(if tag == StructureTag::AntiQuasiSasakian {
            Error::NotAqs
        } else {
            Error::NotQs
        });
    }
    let rank = rank_of_eta(l, &s.eta_form())?;
    if !rank.maximal {
        return Err(Error::NotMaximalRank {
            rank: rank.rank,
            dim: s.dim(),
        });
    }
    if !xi_killing_check(s)? {
        return Err(Error::XiNotKilling);
    }
    let center = l.center();
    if center.rank() != 1 {
        return Err(Error::CenterTooBig {
            rank: center.rank(),
        });
    }
    if !center.contains(s.xi()) {
        return Err(Error::Internal("center is not spanned by xi".into()));
    }
    let d = Subspace::span(s.dim(), s.horizontal());
    let quotient = l.quotient_by_center_line(s.xi(), &d)?;
    if !quotient.algebra.is_abelian() {
        return Err(Error::NonAbelianQuotient);
    }
    Ok(())
}

fn negate<S: Scalar>(v: &[S]) -> Vec<S> {
    v.iter().map(|c| -c.clone()).collect()
}

/// `F = T·E⁻¹` for an orthonormal frame `E` (columns) and target images `T`.
fn frame_map<S: Scalar>(g: &Matrix<S>, frame: &[Vec<S>], images: &[Vec<S>]) -> Matrix<S> {
    let n = frame.len();
    let e = Matrix::from_columns(n, frame);
    let t = Matrix::from_columns(n, images);
    t.mul(&e.transpose().mul(g))
}

/// Isomorphism onto `(h^{4n+1}_λ, φ_1)` for a nilpotent aqS structure of maximal rank.
pub fn classify_nilpotent_aqs<S: Scalar>(s: &AcmStructure<S>) -> Result<HeisenbergIso<S>> {
    aqs_normal_form(s, None)
}

/// Dispatch on an already computed classification: the `4n+1` family for
/// aqS structures, the `2n+1` family otherwise.
pub fn classify_nilpotent<S: Scalar>(
    s: &AcmStructure<S>,
    class: &StructureClass<S>,
) -> Result<HeisenbergIso<S>> {
    if class.has(StructureTag::AntiQuasiSasakian) {
        aqs_normal_form(s, Some(class))
    } else {
        qs_normal_form(s, Some(class))
    }
}

fn aqs_normal_form<S: Scalar>(
    s: &AcmStructure<S>,
    class: Option<&StructureClass<S>>,
) -> Result<HeisenbergIso<S>> {
    check_hypotheses(s, class, StructureTag::AntiQuasiSasakian)?;
    let ops = operators_a_psi(s)?;
    if !ops.all_hold() {
        return Err(Error::Internal(format!("aqS identities fail: {}", ops.failures().join(", "))));
    }
    let frame = adapted_frame_from(s, &ops)?;
    let n = frame.n();
    let dim = 4 * n + 1;
    let target_h = weighted_heisenberg_4n1(&frame.weights)?;
    let tau = |block: usize, i: usize| unit_vec::<S>(dim, 1 + block * n + i);
    let mut images = vec![unit_vec(dim, 0)];
    images.extend((0..n).map(|i| tau(0, i)));
    images.extend((0..n).map(|i| negate(&tau(2, i))));
    images.extend((0..n).map(|i| tau(1, i)));
    images.extend((0..n).map(|i| tau(3, i)));
    let f = frame_map(s.metric(), &frame.vectors, &images);
    let finv = f
        .inverse()
        .ok_or_else(|| Error::Internal("frame map is singular".into()))?;
    let companions = [2, 3]
        .into_iter()
        .map(|i| finv.mul(&heisenberg_4n1_phi(n, i)).mul(&f))
        .collect();
    let iso = HeisenbergIso {
        family: HeisenbergFamily::FourNPlusOne,
        weights: frame.weights,
        f,
        target: target_h.phi(1).clone(),
        orientation: vec![1; n],
        companions,
    };
    iso.verify(s)?;
    Ok(iso)
}

/// Isomorphism onto `h^{2n+1}_λ` for a nilpotent qS structure of maximal rank.
///
/// `A = φψ` is symmetric; on its `−λ` eigenspace the frame pairs `e_i` with
/// `φe_i`, on its `+λ` eigenspace with `−φe_i`, so that `[e_i, e_{n+i}] = 2λ_i ξ`
/// with `λ_i > 0`. The sign is recorded in [`HeisenbergIso::orientation`].
pub fn classify_nilpotent_qs<S: Scalar>(s: &AcmStructure<S>) -> Result<HeisenbergIso<S>> {
    qs_normal_form(s, None)
}

fn qs_normal_form<S: Scalar>(
    s: &AcmStructure<S>,
    class: Option<&StructureClass<S>>,
) -> Result<HeisenbergIso<S>> {
    check_hypotheses(s, class, StructureTag::QuasiSasakian)?;
    let g = s.metric();
    let dim = s.dim();
    let conn = levi_civita(s)?;
    let ops = operators_from_connection(s, &conn);
    let a = ops.a;
    if !g.mul(&a).is_symmetric() {
        return Err(Error::Internal("A = phi psi is not symmetric".into()));
    }
    let a2 = a.mul(&a);
    let mut spec = certified_spectrum(&a2, g, 1)?;
    spec.reverse();

    // (unnormalized e_i, λ_i, orientation)
    let mut seeds: Vec<(Vec<S>, S, i64)> = Vec::new();
    for eig in &spec {
        let lambda = eig.value.sqrt().ok_or_else(|| {
            Error::IrrationalSpectrum(format!("square root of {}", eig.value))
        })?;
        let mut found = 0;
        for (mu, orientation) in [(-lambda.clone(), 1), (lambda.clone(), -1)] {
            let mut candidates = a.sub(&Matrix::identity(dim).scale(&mu)).null_space();
            candidates.sort_by_key(|v| support(v));
            let mut taken: Vec<Vec<S>> = Vec::new();
            while taken.len() < candidates.len() {
                let x = next_vector(g, &candidates, &taken)
                    .ok_or_else(|| Error::Internal("eigenspace exhausted early".into()))?;
                let y = s.phi().mul_vec(&x);
                if is_zero_vec(&y) {
                    return Err(Error::Internal("phi vanishes on an eigenvector of A".into()));
                }
                taken.push(x.clone());
                taken.push(y);
                seeds.push((x, lambda.clone(), orientation));
            }
            found += taken.len();
        }
        if found != eig.multiplicity {
            return Err(Error::Internal(format!(
                "eigenvalue {} of A^2 does not split into A-eigenspaces",
                eig.value
            )));
        }
    }

    let n = seeds.len();
    if 2 * n + 1 != dim {
        return Err(Error::Internal("frame does not fill the horizontal space".into()));
    }
    let mut firsts = Vec::with_capacity(n);
    let mut seconds = Vec::with_capacity(n);
    for (x, _, orientation) in &seeds {
        let e = normalize(g, x)?;
        let pe = s.phi().mul_vec(&e);
        seconds.push(if *orientation > 0 { pe } else { negate(&pe) });
        firsts.push(e);
    }
    let mut frame = vec![s.xi().to_vec()];
    frame.extend(firsts);
    frame.extend(seconds);
    let images: Vec<Vec<S>> = (0..dim).map(|i| unit_vec(dim, i)).collect();
    let f = frame_map(g, &frame, &images);

    let weights: Vec<S> = seeds.iter().map(|(_, l, _)| l.clone()).collect();
    let orientation: Vec<i64> = seeds.iter().map(|(_, _, o)| *o).collect();
    let xi_t = unit_vec(dim, 0);
    let target = AcmStructure::new(
        heisenberg_2n1_algebra(&weights)?,
        heisenberg_2n1_phi(n, Some(&orientation)),
        xi_t.clone(),
        xi_t,
        Matrix::identity(dim),
    )?;
    let iso = HeisenbergIso {
        family: HeisenbergFamily::TwoNPlusOne,
        weights,
        f,
        target,
        orientation,
        companions: Vec::new(),
    };
    iso.verify(s)?;
    Ok(iso)
}

/// `ξ` is the only vector with `η(ξ) = 1` and `dη(ξ, ·) = 0`.
pub fn reeb_uniqueness_check<S: Scalar>(s: &AcmStructure<S>) -> bool {
    let d = s.deta().to_matrix();
    let mut rows = vec![s.eta().to_vec()];
    rows.extend(d.columns());
    let m = Matrix::from_rows(rows);
    let mut rhs = vec![S::zero(); m.rows()];
    rhs[0] = S::one();
    match m.solve(&rhs) {
        Some(v) => m.null_space().is_empty() && v == s.xi(),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{
        abelian_cokahler, su2_plus_r2_structure, weighted_heisenberg_2n1,
        weighted_heisenberg_4n1,
    };
    use crate::scalar::Exact;

    fn e(v: i64) -> Exact {
        Exact::from_int(v)
    }

    #[test]
    fn aqs_normal_form() {
        let h = weighted_heisenberg_4n1(&[e(2), e(1)]).unwrap();
        let iso = classify_nilpotent_aqs(h.phi(1)).unwrap();
        assert_eq!(iso.weights, vec![e(2), e(1)]);
        assert_eq!(iso.f, Matrix::identity(9));
        assert_eq!(iso.companions[0], *h.phi(2).phi());
        assert_eq!(iso.companions[1], *h.phi(3).phi());

        let h = weighted_heisenberg_4n1(&[e(1), e(2)]).unwrap();
        let iso = classify_nilpotent_aqs(h.phi(1)).unwrap();
        assert_eq!(iso.weights, vec![e(2), e(1)]);
        let pushed = iso.push_forward(h.phi(1)).unwrap();
        assert_eq!(pushed.phi(), iso.target.phi());
        let tags = classify_structure(&pushed).unwrap().tags;
        assert_eq!(tags, classify_structure(h.phi(1)).unwrap().tags);
    }

    #[test]
    fn qs_normal_form() {
        let s = weighted_heisenberg_2n1(&[e(1)]).unwrap();
        let iso = classify_nilpotent_qs(&s).unwrap();
        assert_eq!(iso.weights, vec![e(1)]);
        assert_eq!(iso.f, Matrix::identity(3));
        let s = weighted_heisenberg_2n1(&[e(1), e(3)]).unwrap();
        let iso = classify_nilpotent_qs(&s).unwrap();
        assert_eq!(iso.weights, vec![e(3), e(1)]);
        assert_eq!(iso.orientation, vec![1, 1]);
        // reversed φ flips the orientation
        let r = s.with_phi(s.phi().neg()).unwrap();
        let iso = classify_nilpotent_qs(&r).unwrap();
        assert_eq!(iso.orientation, vec![-1, -1]);
    }

    #[test]
    fn hypothesis_errors() {
        assert!(matches!(
            classify_nilpotent_aqs(&su2_plus_r2_structure::<Exact>()),
            Err(Error::NotNilpotent)
        ));
        assert!(matches!(
            classify_nilpotent_qs(&abelian_cokahler::<Exact>(2)),
            Err(Error::NotMaximalRank { .. })
        ));
        let z = weighted_heisenberg_4n1(&[e(0)]).unwrap();
        assert!(matches!(
            classify_nilpotent_aqs(z.phi(1)),
            Err(Error::NotMaximalRank { .. })
        ));
        let h = weighted_heisenberg_4n1(&[e(1)]).unwrap();
        assert!(matches!(classify_nilpotent_aqs(h.phi(3)), Err(Error::NotAqs)));
    }

    #[test]
    fn reeb_uniqueness() {
        let h = weighted_heisenberg_4n1(&[e(1), e(2)]).unwrap();
        assert!(reeb_uniqueness_check(h.phi(1)));
        assert!(!reeb_uniqueness_check(&abelian_cokahler::<Exact>(2)));
        let h = weighted_heisenberg_4n1(&[e(1), e(0)]).unwrap();
        assert!(!reeb_uniqueness_check(h.phi(1)));
    }
}
