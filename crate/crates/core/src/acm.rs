//! Almost contact metric structures `(φ, ξ, η, g)` on a metric Lie algebra.
//!
//! Conventions: `dη(X, Y) = −η([X, Y])`, `Φ(X, Y) = g(X, φY)`, and
//! `N_φ = [φ, φ] + dη ⊗ ξ` with
//! `[φ, φ](X, Y) = [φX, φY] + φ²[X, Y] − φ[X, φY] − φ[φX, Y]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::exterior::{ce_d, KForm};
use crate::lie::LieAlgebra;
use crate::linalg::{definiteness, dot, inner, is_zero_vec, unit_vec, Definiteness, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct AcmStructure<S> {
    algebra: LieAlgebra<S>,
    phi: Matrix<S>,
    xi: Vec<S>,
    eta: Vec<S>,
    g: Matrix<S>,
}

impl<S: Scalar> AcmStructure<S> {
    /// Only shapes are checked here; see [`validate_acm`] for the defining identities.
    pub fn new(
        algebra: LieAlgebra<S>,
        phi: Matrix<S>,
        xi: Vec<S>,
        eta: Vec<S>,
        g: Matrix<S>,
    ) -> Result<Self> {
        let n = algebra.dim();
        check_len(n, phi.rows())?;
        check_len(n, phi.cols())?;
        check_len(n, xi.len())?;
        check_len(n, eta.len())?;
        check_len(n, g.rows())?;
        check_len(n, g.cols())?;
        Ok(Self {
            algebra,
            phi,
            xi,
            eta,
            g,
        })
    }

    /// Same algebra, `ξ`, `η` and `g` with another `φ`.
    pub fn with_phi(&self, phi: Matrix<S>) -> Result<Self> {
        Self::new(
            self.algebra.clone(),
            phi,
            self.xi.clone(),
            self.eta.clone(),
            self.g.clone(),
        )
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn phi(&self) -> &Matrix<S> {
        &self.phi
    }

    pub fn xi(&self) -> &[S] {
        &self.xi
    }

    pub fn eta(&self) -> &[S] {
        &self.eta
    }

    pub fn metric(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn eta_form(&self) -> KForm<S> {
        KForm::from_covector(&self.eta)
    }

    pub fn deta(&self) -> KForm<S> {
        ce_d(&self.algebra, &self.eta_form()).expect("shapes checked at construction")
    }

    /// `Φ = g(·, φ·)` without validating the structure.
    pub(crate) fn phi_form(&self) -> KForm<S> {
        KForm::from_antisymmetric(&self.g.mul(&self.phi))
    }

    /// `𝒟 = Ker η`, as a basis.
    pub fn horizontal(&self) -> Vec<Vec<S>> {
        Matrix::from_rows(vec![self.eta.clone()]).null_space()
    }

    /// Transport the structure along the basis change whose columns are the new basis.
    pub fn change_basis(&self, p: &Matrix<S>) -> Result<Self> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::Format("change of basis is singular".into()))?;
        Self::new(
            self.algebra.change_basis(p)?,
            inv.mul(&self.phi).mul(p),
            inv.mul_vec(&self.xi),
            p.vec_mul(&self.eta),
            p.transpose().mul(&self.g).mul(p),
        )
    }
}

/// One nonzero entry of a residual tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual<S> {
    pub identity: &'static str,
    pub slot: (usize, usize),
    pub value: S,
}

#[derive(Clone, Debug)]
pub struct AcmReport<S> {
    pub residuals: Vec<Residual<S>>,
    pub metric_positive_definite: bool,
}

impl<S: Scalar> AcmReport<S> {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty() && self.metric_positive_definite
    }

    /// Residual entry of largest magnitude.
    pub fn max_residual(&self) -> Option<&Residual<S>> {
        self.residuals
            .iter()
            .max_by(|a, b| a.value.abs().cmp_value(&b.value.abs()))
    }
}

fn push_residuals<S: Scalar>(out: &mut Vec<Residual<S>>, identity: &'static str, m: &Matrix<S>) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_zero() {
                out.push(Residual {
                    identity,
                    slot: (i, j),
                    value: m[(i, j)].clone(),
                });
            }
        }
    }
}

fn outer<S: Scalar>(a: &[S], b: &[S]) -> Matrix<S> {
    Matrix::from_fn(a.len(), b.len(), |i, j| a[i].clone() * b[j].clone())
}

/// Check `φ² = −I + η⊗ξ`, `η(ξ) = 1`, `g(φX, φY) = g(X, Y) − η(X)η(Y)`,
/// and that `g` is a symmetric positive definite form.
pub fn validate_acm<S: Scalar>(s: &AcmStructure<S>) -> AcmReport<S> {
    let n = s.dim();
    let mut residuals = Vec::new();
    let xi_eta = outer(&s.xi, &s.eta);
    let r1 = s
        .phi
        .mul(&s.phi)
        .add(&Matrix::identity(n))
        .sub(&xi_eta);
    push_residuals(&mut residuals, "phi^2 = -I + eta(x)xi", &r1);
    let r2 = dot(&s.eta, &s.xi) - S::one();
    if !r2.is_zero() {
        residuals.push(Residual {
            identity: "eta(xi) = 1",
            slot: (0, 0),
            value: r2,
        });
    }
    let r3 = s
        .phi
        .transpose()
        .mul(&s.g)
        .mul(&s.phi)
        .sub(&s.g)
        .add(&outer(&s.eta, &s.eta));
    push_residuals(&mut residuals, "g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)", &r3);
    push_residuals(&mut residuals, "g symmetric", &s.g.sub(&s.g.transpose()));
    let metric_positive_definite = definiteness(&s.g) == Definiteness::PositiveDefinite;
    AcmReport {
        residuals,
        metric_positive_definite,
    }
}

fn require_valid<S: Scalar>(s: &AcmStructure<S>) -> Result<()> {
    let report = validate_acm(s);
    if report.passed() {
        return Ok(());
    }
    let msg = match report.max_residual() {
        Some(r) => format!(
            "{} fails at ({}, {}) with residual {}",
            r.identity,
            r.slot.0 + 1,
            r.slot.1 + 1,
            r.value
        ),
        None => "metric is not positive definite".to_string(),
    };
    Err(Error::InvalidStructure(msg))
}

/// `Φ(X, Y) = g(X, φY)`.
pub fn fundamental_form<S: Scalar>(s: &AcmStructure<S>) -> Result<KForm<S>> {
    require_valid(s)?;
    Ok(s.phi_form())
}

/// A vector-valued 2-form, stored on pairs `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorTwoForm<S> {
    dim: usize,
    values: BTreeMap<(usize, usize), Vec<S>>,
}

impl<S: Scalar> VectorTwoForm<S> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Vec<S>) -> Self {
        let mut values = BTreeMap::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let v = f(i, j);
                if !is_zero_vec(&v) {
                    values.insert((i, j), v);
                }
            }
        }
        Self { dim, values }
    }

    /// `ω ⊗ v`.
    pub fn form_times_vector(omega: &KForm<S>, v: &[S]) -> Self {
        Self::from_fn(omega.dim(), |i, j| {
            let c = omega.coeff(&[i, j]);
            v.iter().map(|x| c.clone() * x.clone()).collect()
        })
    }

    pub fn get(&self, i: usize, j: usize) -> Vec<S> {
        let (key, neg) = if i <= j { ((i, j), false) } else { ((j, i), true) };
        match self.values.get(&key) {
            Some(v) if neg => v.iter().map(|x| -x.clone()).collect(),
            Some(v) => v.clone(),
            None => vec![S::zero(); self.dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            crate::linalg::sub_vec(&self.get(i, j), &other.get(i, j))
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            crate::linalg::add_vec(&self.get(i, j), &other.get(i, j))
        })
    }

    /// First nonzero pair, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.values.keys().next().copied()
    }
}

/// `[φ, φ]` on all basis pairs.
pub fn nijenhuis_phi<S: Scalar>(s: &AcmStructure<S>) -> VectorTwoForm<S> {
    let l = &s.algebra;
    let phi = &s.phi;
    let phi2 = phi.mul(phi);
    let cols = phi.columns();
    let n = s.dim();
    VectorTwoForm::from_fn(n, |i, j| {
        let ei = unit_vec(n, i);
        let ej = unit_vec(n, j);
        let t1 = l.br(&cols[i], &cols[j]);
        let t2 = phi2.mul_vec(&l.basis_bracket(i, j));
        let t3 = phi.mul_vec(&l.br(&ei, &cols[j]));
        let t4 = phi.mul_vec(&l.br(&cols[i], &ej));
        (0..n)
            .map(|k| t1[k].clone() + t2[k].clone() - t3[k].clone() - t4[k].clone())
            .collect()
    })
}

/// `N_φ = [φ, φ] + dη ⊗ ξ`.
pub fn nijenhuis_tensor<S: Scalar>(s: &AcmStructure<S>) -> VectorTwoForm<S> {
    nijenhuis_phi(s).add(&VectorTwoForm::form_times_vector(&s.deta(), &s.xi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StructureTag {
    ContactMetric,
    Sasakian,
    Cokahler,
    QuasiSasakian,
    AntiQuasiSasakian,
    DoubleAqsSasakian,
    Unclassified,
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The tensors the classification is decided on.
#[derive(Clone, Debug)]
pub struct Witness<S> {
    pub deta: KForm<S>,
    pub fundamental: KForm<S>,
    pub dphi: KForm<S>,
    pub nijenhuis: VectorTwoForm<S>,
    /// `dη − 2Φ`.
    pub contact_residual: KForm<S>,
    /// `N_φ − 2dη⊗ξ`.
    pub aqs_residual: VectorTwoForm<S>,
}

#[derive(Clone, Debug)]
pub struct StructureClass<S> {
    pub tags: Vec<StructureTag>,
    pub witness: Witness<S>,
}

impl<S> StructureClass<S> {
    pub fn has(&self, tag: StructureTag) -> bool {
        self.tags.contains(&tag)
    }
}

/// Every class whose defining equations hold.
pub fn classify_structure<S: Scalar>(s: &AcmStructure<S>) -> Result<StructureClass<S>> {
    require_valid(s)?;
    let deta = s.deta();
    let fundamental = s.phi_form();
    let dphi = ce_d(&s.algebra, &fundamental)?;
    let nijenhuis = nijenhuis_tensor(s);
    let contact_residual = deta.sub(&fundamental.scale(&S::from_int(2)));
    let two_deta_xi =
        VectorTwoForm::form_times_vector(&deta.scale(&S::from_int(2)), &s.xi);
    let aqs_residual = nijenhuis.sub(&two_deta_xi);

    let contact = contact_residual.is_zero();
    let normal = nijenhuis.is_zero();
    let closed_phi = dphi.is_zero();
    let mut tags = Vec::new();
    if contact {
        tags.push(StructureTag::ContactMetric);
    }
    if contact && normal {
        tags.push(StructureTag::Sasakian);
    }
    if deta.is_zero() && closed_phi && normal {
        tags.push(StructureTag::Cokahler);
    }
    if closed_phi && normal {
        tags.push(StructureTag::QuasiSasakian);
    }
    if closed_phi && aqs_residual.is_zero() {
        tags.push(StructureTag::AntiQuasiSasakian);
    }
    if tags.is_empty() {
        tags.push(StructureTag::Unclassified);
    }
    Ok(StructureClass {
        tags,
        witness: Witness {
            deta,
            fundamental,
            dphi,
            nijenhuis,
            contact_residual,
            aqs_residual,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleReport {
    /// `φ₁φ₂ = φ₃ = −φ₂φ₁`.
    pub quaternionic: bool,
    pub dphi1_closed: bool,
    pub dphi2_closed: bool,
    /// `dη = 2Φ₃`.
    pub deta_is_2phi3: bool,
}

impl TripleReport {
    pub fn double_aqs_sasakian(&self) -> bool {
        self.quaternionic && self.dphi1_closed && self.dphi2_closed && self.deta_is_2phi3
    }
}

/// Check the double aqS-Sasakian equations on three structures sharing `ξ`, `η`, `g`.
pub fn classify_triple<S: Scalar>(
    s1: &AcmStructure<S>,
    s2: &AcmStructure<S>,
    s3: &AcmStructure<S>,
) -> Result<TripleReport> {
    for s in [s1, s2, s3] {
        require_valid(s)?;
    }
    for s in [s2, s3] {
        if s.algebra != s1.algebra || s.xi != s1.xi || s.eta != s1.eta || s.g != s1.g {
            return Err(Error::InvalidStructure(
                "structures in a triple must share algebra, xi, eta and g".into(),
            ));
        }
    }
    let p12 = s1.phi.mul(&s2.phi);
    let p21 = s2.phi.mul(&s1.phi);
    let quaternionic = p12 == s3.phi && p21.neg() == s3.phi;
    let l = &s1.algebra;
    let deta = s1.deta();
    Ok(TripleReport {
        quaternionic,
        dphi1_closed: ce_d(l, &s1.phi_form())?.is_zero(),
        dphi2_closed: ce_d(l, &s2.phi_form())?.is_zero(),
        deta_is_2phi3: deta == s3.phi_form().scale(&S::from_int(2)),
    })
}

/// `g([ξ, X], Y) + g(X, [ξ, Y]) = 0` on all basis pairs.
///
/// When it holds, `dη(ξ, ·) = 0` is also confirmed; a failure of the latter
/// is reported as an internal contradiction.
pub fn xi_killing_check<S: Scalar>(s: &AcmStructure<S>) -> Result<bool> {
    let ad = s.algebra.ad(&s.xi);
    let sym = s.g.mul(&ad).add(&ad.transpose().mul(&s.g));
    if !sym.is_zero() {
        return Ok(false);
    }
    if !s.deta().interior(&s.xi).is_zero() {
        return Err(Error::Internal(
            "xi is Killing but d eta(xi, .) does not vanish".into(),
        ));
    }
    Ok(true)
}

/// Levi-Civita connection of a left-invariant metric: `column j` of
/// `nabla[i]` is `∇_{b_i} b_j`.
#[derive(Clone, Debug)]
pub struct ConnectionTable<S> {
    nabla: Vec<Matrix<S>>,
}

impl<S: Scalar> ConnectionTable<S> {
    /// Coefficient of `b_k` in `∇_{b_i} b_j`.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> S {
        self.nabla[i][(k, j)].clone()
    }

    /// Matrix of `∇_x`.
    pub fn operator(&self, x: &[S]) -> Matrix<S> {
        let n = x.len();
        let mut m = Matrix::zeros(n, n);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.nabla[i].scale(c));
            }
        }
        m
    }

    pub fn nabla(&self, x: &[S], y: &[S]) -> Vec<S> {
        self.operator(x).mul_vec(y)
    }

    pub fn is_zero(&self) -> bool {
        self.nabla.iter().all(Matrix::is_zero)
    }
}

/// Koszul formula `2g(∇_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita<S: Scalar>(s: &AcmStructure<S>) -> Result<ConnectionTable<S>> {
    if definiteness(&s.g) != Definiteness::PositiveDefinite {
        return Err(Error::NotPositiveDefinite);
    }
    let n = s.dim();
    let ginv = s.g.inverse().ok_or(Error::NotPositiveDefinite)?;
    let half = S::from_ratio(1, 2);
    let l = &s.algebra;
    let gb = |v: &[S], k: usize| -> S { dot(v, &s.g.column(k)) };
    let mut nabla = Vec::with_capacity(n);
    for i in 0..n {
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let bij = l.basis_bracket(i, j);
            let w: Vec<S> = (0..n)
                .map(|k| {
                    gb(&bij, k) - gb(&l.basis_bracket(j, k), i) + gb(&l.basis_bracket(k, i), j)
                })
                .collect();
            cols.push(
                ginv.mul_vec(&w)
                    .into_iter()
                    .map(|c| c * half.clone())
                    .collect::<Vec<_>>(),
            );
        }
        nabla.push(Matrix::from_columns(n, &cols));
    }
    Ok(ConnectionTable { nabla })
}

/// The operators `ψ = −∇ξ` and `A = −φ∘∇ξ = φψ` with their 2-forms and the
/// identities they satisfy on anti-quasi-Sasakian structures.
#[derive(Clone, Debug)]
pub struct Operators<S> {
    pub a: Matrix<S>,
    pub psi: Matrix<S>,
    /// `𝒜 = g(·, A·)`.
    pub a_form: KForm<S>,
    /// `Ψ = g(·, ψ·)`.
    pub psi_form: KForm<S>,
    /// `(identity, holds)` pairs.
    pub checks: Vec<(&'static str, bool)>,
}

impl<S> Operators<S> {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect()
    }
}

pub fn operators_a_psi<S: Scalar>(s: &AcmStructure<S>) -> Result<Operators<S>> {
    require_valid(s)?;
    let conn = levi_civita(s)?;
    Ok(operators_from_connection(s, &conn))
}

pub(crate) fn operators_from_connection<S: Scalar>(
    s: &AcmStructure<S>,
    conn: &ConnectionTable<S>,
) -> Operators<S> {
    let n = s.dim();
    let cols: Vec<Vec<S>> = (0..n)
        .map(|i| {
            conn.nabla(&unit_vec(n, i), &s.xi)
                .into_iter()
                .map(|c| -c)
                .collect()
        })
        .collect();
    let psi = Matrix::from_columns(n, &cols);
    let phi = &s.phi;
    let a = phi.mul(&psi);
    let g = &s.g;
    let skew = |m: &Matrix<S>| g.mul(m).add(&m.transpose().mul(g)).is_zero();
    let checks = vec![
        ("A phi = psi", a.mul(phi) == psi),
        ("psi = -phi A", psi == phi.mul(&a).neg()),
        ("A = -psi phi", a == psi.mul(phi).neg()),
        ("psi A = -phi A^2", psi.mul(&a) == phi.mul(&a).mul(&a).neg()),
        ("-phi A^2 = -A psi", phi.mul(&a).mul(&a) == a.mul(&psi)),
        ("A xi = 0", is_zero_vec(&a.mul_vec(&s.xi))),
        ("psi xi = 0", is_zero_vec(&psi.mul_vec(&s.xi))),
        ("A skew-symmetric", skew(&a)),
        ("psi skew-symmetric", skew(&psi)),
    ];
    Operators {
        a_form: KForm::from_antisymmetric(&g.mul(&a)),
        psi_form: KForm::from_antisymmetric(&g.mul(&psi)),
        a,
        psi,
        checks,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosednessReport {
    pub da_closed: bool,
    pub dphi_closed: bool,
    /// `dη = 2Ψ`.
    pub deta_is_2psi: bool,
    /// `dη(φX, φY) = −dη(X, Y)`.
    pub anti_invariant: bool,
    /// `dη(φX, φY) = dη(X, Y)`.
    pub invariant: bool,
    /// First basis pair (0-indexed) where anti-invariance fails.
    pub witness: Option<(usize, usize)>,
}

impl ClosednessReport {
    pub fn passed(&self) -> bool {
        self.da_closed && self.dphi_closed && self.deta_is_2psi && self.anti_invariant
    }
}

/// `d𝒜 = 0`, `dΦ = 0`, `dη = 2Ψ`, and `dη(φX, φY) = −dη(X, Y)`.
pub fn closedness_suite<S: Scalar>(s: &AcmStructure<S>) -> Result<ClosednessReport> {
    let ops = operators_a_psi(s)?;
    let l = &s.algebra;
    let deta = s.deta();
    let dm = deta.to_matrix();
    let pulled = s.phi.transpose().mul(&dm).mul(&s.phi);
    let anti = pulled.add(&dm);
    let n = s.dim();
    let witness = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| !anti[(i, j)].is_zero());
    Ok(ClosednessReport {
        da_closed: ce_d(l, &ops.a_form)?.is_zero(),
        dphi_closed: ce_d(l, &s.phi_form())?.is_zero(),
        deta_is_2psi: deta == ops.psi_form.scale(&S::from_int(2)),
        anti_invariant: witness.is_none(),
        invariant: pulled.sub(&dm).is_zero(),
        witness,
    })
}

/// Riemannian curvature of the left-invariant metric.
#[derive(Clone, Debug)]
pub struct Curvature<S> {
    algebra: LieAlgebra<S>,
    g: Matrix<S>,
    conn: ConnectionTable<S>,
}

pub fn curvature<S: Scalar>(s: &AcmStructure<S>) -> Result<Curvature<S>> {
    let conn = levi_civita(s)?;
    Ok(Curvature {
        algebra: s.algebra.clone(),
        g: s.g.clone(),
        conn,
    })
}

impl<S: Scalar> Curvature<S> {
    pub fn connection(&self) -> &ConnectionTable<S> {
        &self.conn
    }

    /// Matrix of `R(X, Y) = [∇_X, ∇_Y] − ∇_{[X,Y]}`.
    pub fn operator(&self, x: &[S], y: &[S]) -> Matrix<S> {
        let lx = self.conn.operator(x);
        let ly = self.conn.operator(y);
        lx.commutator(&ly)
            .sub(&self.conn.operator(&self.algebra.br(x, y)))
    }

    pub fn riemann(&self, x: &[S], y: &[S], z: &[S]) -> Vec<S> {
        self.operator(x, y).mul_vec(z)
    }

    /// `K(X, Y) = g(R(X,Y)Y, X) / (|X|²|Y|² − g(X,Y)²)`.
    pub fn sectional(&self, x: &[S], y: &[S]) -> Result<S> {
        let n = self.g.rows();
        check_len(n, x.len())?;
        check_len(n, y.len())?;
        let num = inner(&self.g, &self.riemann(x, y, y), x);
        let gxy = inner(&self.g, x, y);
        let den = inner(&self.g, x, x) * inner(&self.g, y, y) - gxy.square();
        num.checked_div(&den).ok_or(Error::DegeneratePlane)
    }

    /// `Ric(Y, Z) = tr(X ↦ R(X, Y)Z)`.
    pub fn ricci(&self) -> Matrix<S> {
        let n = self.g.rows();
        let mut ric: Matrix<S> = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let r = self.operator(&unit_vec(n, i), &unit_vec(n, j));
                for k in 0..n {
                    if !r[(i, k)].is_zero() {
                        ric[(j, k)] = ric[(j, k)].clone() + r[(i, k)].clone();
                    }
                }
            }
        }
        ric
    }

    pub fn scalar(&self) -> S {
        let ginv = self.g.inverse().expect("metric checked positive definite");
        let ric = self.ricci();
        let n = self.g.rows();
        let mut s = S::zero();
        for j in 0..n {
            for k in 0..n {
                if !ginv[(j, k)].is_zero() {
                    s = s + ginv[(j, k)].clone() * ric[(j, k)].clone();
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn e(v: i64) -> Exact {
        Exact::from_int(v)
    }

    /// h⁵ with ξ = b0, [b1,b4] = [b2,b3] = 2λ b0, and φ₁, φ₃.
    fn h5(lambda: i64, which: usize) -> AcmStructure<Exact> {
        let l = LieAlgebra::from_entries(5, [(1, 4, 0, e(2 * lambda)), (2, 3, 0, e(2 * lambda))])
            .unwrap();
        let mut phi = Matrix::zeros(5, 5);
        // φ_i τ1 = τ_{1+i}, φ_i τ_{1+i} = −τ1, φ_i τ_{1+j} = τ_{1+k}, φ_i τ_{1+k} = −τ_{1+j}
        let (i, j, k) = match which {
            1 => (1, 2, 3),
            2 => (2, 3, 1),
            _ => (3, 1, 2),
        };
        let mut set = |from: usize, to: usize, v: i64| phi[(to, from)] = e(v);
        set(1, 1 + i, 1);
        set(1 + i, 1, -1);
        set(1 + j, 1 + k, 1);
        set(1 + k, 1 + j, -1);
        let xi = unit_vec(5, 0);
        AcmStructure::new(l, phi, xi.clone(), xi, Matrix::identity(5)).unwrap()
    }

    fn abelian_canonical() -> AcmStructure<Exact> {
        let mut s = h5(0, 1);
        s.algebra = LieAlgebra::abelian(5);
        s
    }

    #[test]
    fn validation() {
        assert!(validate_acm(&h5(1, 1)).passed());
        let zero_phi = h5(1, 1).with_phi(Matrix::zeros(5, 5)).unwrap();
        assert!(!validate_acm(&zero_phi).passed());
        let mut phi = h5(1, 1).phi.clone();
        phi[(2, 2)] = e(1);
        let report = validate_acm(&h5(1, 1).with_phi(phi).unwrap());
        assert!(report
            .residuals
            .iter()
            .any(|r| r.slot == (2, 2) && r.identity.starts_with("phi^2")));
    }

    #[test]
    fn fundamental_form_of_phi1() {
        let f = fundamental_form(&h5(1, 1)).unwrap();
        assert_eq!(f, KForm::from_terms(5, 2, [(vec![1, 2], e(-1)), (vec![3, 4], e(-1))]));
    }

    #[test]
    fn classification_of_h5() {
        let c = classify_structure(&h5(1, 1)).unwrap();
        assert_eq!(c.tags, vec![StructureTag::AntiQuasiSasakian]);
        let c = classify_structure(&h5(1, 3)).unwrap();
        assert_eq!(
            c.tags,
            vec![StructureTag::ContactMetric, StructureTag::Sasakian, StructureTag::QuasiSasakian]
        );
        let c = classify_structure(&abelian_canonical()).unwrap();
        assert!(c.has(StructureTag::Cokahler));
        assert!(c.has(StructureTag::QuasiSasakian) && c.has(StructureTag::AntiQuasiSasakian));
        let t = classify_triple(&h5(1, 1), &h5(1, 2), &h5(1, 3)).unwrap();
        assert!(t.double_aqs_sasakian());
    }

    #[test]
    fn connection_of_h5() {
        let s = h5(1, 1);
        let conn = levi_civita(&s).unwrap();
        let xi = unit_vec(5, 0);
        let tau1 = unit_vec(5, 1);
        assert_eq!(conn.nabla(&tau1, &xi), unit_vec::<Exact>(5, 4).into_iter().map(|c| -c).collect::<Vec<_>>());
        assert!(is_zero_vec(&conn.nabla(&xi, &xi)));
        assert!(levi_civita(&abelian_canonical()).unwrap().is_zero());
        let ops = operators_a_psi(&s).unwrap();
        assert!(ops.all_hold(), "{:?}", ops.failures());
        let d = closedness_suite(&s).unwrap();
        assert!(d.passed());
        let q = closedness_suite(&h5(1, 3)).unwrap();
        assert!(!q.anti_invariant && q.invariant);
    }

    #[test]
    fn curvature_of_h5() {
        let c = curvature(&h5(1, 1)).unwrap();
        assert_eq!(c.scalar(), e(-4));
        for i in 1..5 {
            assert_eq!(c.sectional(&unit_vec(5, 0), &unit_vec(5, i)).unwrap(), e(1));
        }
        assert!(matches!(
            c.sectional(&unit_vec(5, 1), &unit_vec(5, 1)),
            Err(Error::DegeneratePlane)
        ));
    }

    #[test]
    fn killing_reeb_field() {
        assert!(xi_killing_check(&h5(1, 1)).unwrap());
        let l = LieAlgebra::from_entries(3, [(0, 1, 1, e(1))]).unwrap();
        let phi = Matrix::from_ints(&[&[0, 0, 0], &[0, 0, -1], &[0, 1, 0]]);
        let xi = unit_vec(3, 0);
        let s = AcmStructure::new(l, phi, xi.clone(), xi, Matrix::identity(3)).unwrap();
        assert!(!xi_killing_check(&s).unwrap());
    }
}
