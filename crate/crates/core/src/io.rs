//! JSON file formats for algebras, structures, forms, frames and matrices.
//!
//! Scalars are always strings (`"p/q"`, `"sqrt(2)"` or decimals), bracket and
//! form indices are 1-based, and `mode` selects exact or float arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::acm::AcmStructure;
use crate::adapted::AdaptedFrame;
use crate::constructors::KahlerLieAlgebra;
use crate::error::{check_len, Error, Result};
use crate::exterior::KForm;
use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl Mode {
    pub fn of<S: Scalar>() -> Self {
        if S::EXACT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }
}

type MatrixText = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    /// Output index (1-based, as a string key) to coefficient.
    pub coeffs: BTreeMap<String, String>,
}

/// A Lie algebra, optionally with an almost contact metric structure,
/// companion structures or a Kähler structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    #[serde(default)]
    pub mode: Mode,
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub brackets: Vec<BracketDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<MatrixText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MatrixText>,
    /// Further endomorphisms sharing `ξ`, `η` and the metric (e.g. `φ₂`, `φ₃`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub companions: Option<Vec<MatrixText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_structure: Option<MatrixText>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub indices: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    #[serde(default)]
    pub mode: Mode,
    pub dim: usize,
    pub degree: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    #[serde(default)]
    pub mode: Mode,
    /// Columns are the frame vectors.
    pub change_of_basis: MatrixText,
    pub weights: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    #[serde(default)]
    pub mode: Mode,
    pub matrix: MatrixText,
}

/// Parse any document type from JSON text.
pub fn from_text<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// Serialize with two-space indentation; containers that fit on one line are inlined.
pub fn to_text<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize to JSON");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

const INLINE_WIDTH: usize = 88;

fn inline(value: &Value) -> String {
    match value {
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(map) => {
            if map.is_empty() {
                return "{}".into();
            }
            let parts: Vec<String> = map
                .iter()
                .map(|(k, v)| format!("{}: {}", Value::String(k.clone()), inline(v)))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    let flat = inline(value);
    if flat.len() + indent <= INLINE_WIDTH || !matches!(value, Value::Array(_) | Value::Object(_)) {
        out.push_str(&flat);
        return;
    }
    let pad = " ".repeat(indent + 2);
    match value {
        Value::Array(items) => {
            out.push_str("[\n");
            for (idx, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(item, indent + 2, out);
                out.push_str(if idx + 1 < items.len() { ",\n" } else { "\n" });
            }
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (idx, (k, v)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(v, indent + 2, out);
                out.push_str(if idx + 1 < map.len() { ",\n" } else { "\n" });
            }
        }
        _ => unreachable!(),
    }
    out.push_str(&" ".repeat(indent));
    out.push(if matches!(value, Value::Array(_)) { ']' } else { '}' });
}

fn check_mode<S: Scalar>(mode: Mode) -> Result<()> {
    if mode != Mode::of::<S>() {
        return Err(Error::Format(format!(
            "document is in {mode:?} mode, requested {:?}",
            Mode::of::<S>()
        )));
    }
    Ok(())
}

fn scalar<S: Scalar>(s: &str) -> Result<S> {
    Ok(S::parse(s)?)
}

fn vector<S: Scalar>(v: &[String], n: usize) -> Result<Vec<S>> {
    check_len(n, v.len())?;
    v.iter().map(|s| scalar(s)).collect()
}

fn matrix<S: Scalar>(m: &MatrixText, rows: usize, cols: usize) -> Result<Matrix<S>> {
    check_len(rows, m.len())?;
    let rows: Vec<Vec<S>> = m.iter().map(|r| vector(r, cols)).collect::<Result<_>>()?;
    Ok(Matrix::from_rows(rows))
}

fn vector_text<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn matrix_text<S: Scalar>(m: &Matrix<S>) -> MatrixText {
    (0..m.rows()).map(|i| vector_text(&m.row(i))).collect()
}

fn index(i: usize, dim: usize) -> Result<usize> {
    if i == 0 || i > dim {
        return Err(Error::IndexOutOfRange { index: i, dim });
    }
    Ok(i - 1)
}

impl AlgebraDoc {
    pub fn from_algebra<S: Scalar>(l: &LieAlgebra<S>) -> Self {
        let brackets = l
            .entries()
            .map(|(&(i, j), row)| BracketDoc {
                i: i + 1,
                j: j + 1,
                coeffs: row
                    .iter()
                    .map(|(k, c)| ((k + 1).to_string(), c.to_string()))
                    .collect(),
            })
            .collect();
        Self {
            mode: Mode::of::<S>(),
            dim: l.dim(),
            basis_names: l.basis_names().to_vec(),
            brackets,
            phi: None,
            xi: None,
            eta: None,
            metric: None,
            companions: None,
            complex_structure: None,
        }
    }

    pub fn from_structure<S: Scalar>(s: &AcmStructure<S>) -> Self {
        Self {
            phi: Some(matrix_text(s.phi())),
            xi: Some(vector_text(s.xi())),
            eta: Some(vector_text(s.eta())),
            metric: Some(matrix_text(s.metric())),
            ..Self::from_algebra(s.algebra())
        }
    }

    pub fn from_kahler<S: Scalar>(h: &KahlerLieAlgebra<S>) -> Self {
        Self {
            complex_structure: Some(matrix_text(h.complex_structure())),
            metric: Some(matrix_text(h.metric())),
            ..Self::from_algebra(h.algebra())
        }
    }

    pub fn with_companions<S: Scalar>(mut self, companions: &[Matrix<S>]) -> Self {
        self.companions = Some(companions.iter().map(matrix_text).collect());
        self
    }

    /// The Lie algebra, with duplicate pairs rejected and the Jacobi identity checked.
    pub fn algebra<S: Scalar>(&self) -> Result<LieAlgebra<S>> {
        check_mode::<S>(self.mode)?;
        check_len(self.dim, self.basis_names.len())?;
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for b in &self.brackets {
            let i = index(b.i, self.dim)?;
            let j = index(b.j, self.dim)?;
            if i == j {
                return Err(Error::Format(format!("bracket record with i = j = {}", b.i)));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Format(format!("duplicate bracket record ({}, {})", b.i, b.j)));
            }
            for (k, c) in &b.coeffs {
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad output index {k:?}")))?;
                entries.push((i, j, index(k, self.dim)?, scalar::<S>(c)?));
            }
        }
        LieAlgebra::from_entries(self.dim, entries)?
            .with_names(self.basis_names.clone())?
            .validated()
    }

    fn field<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T> {
        value
            .as_ref()
            .ok_or_else(|| Error::Format(format!("missing field `{name}`")))
    }

    pub fn structure<S: Scalar>(&self) -> Result<AcmStructure<S>> {
        let l = self.algebra::<S>()?;
        let n = self.dim;
        AcmStructure::new(
            l,
            matrix(self.field(&self.phi, "phi")?, n, n)?,
            vector(self.field(&self.xi, "xi")?, n)?,
            vector(self.field(&self.eta, "eta")?, n)?,
            matrix(self.field(&self.metric, "metric")?, n, n)?,
        )
    }

    pub fn companions<S: Scalar>(&self) -> Result<Vec<Matrix<S>>> {
        check_mode::<S>(self.mode)?;
        self.companions
            .iter()
            .flatten()
            .map(|m| matrix(m, self.dim, self.dim))
            .collect()
    }

    pub fn has_structure(&self) -> bool {
        self.phi.is_some()
    }

    pub fn kahler<S: Scalar>(&self) -> Result<KahlerLieAlgebra<S>> {
        let l = self.algebra::<S>()?;
        let n = self.dim;
        KahlerLieAlgebra::new(
            l,
            matrix(self.field(&self.complex_structure, "complex_structure")?, n, n)?,
            matrix(self.field(&self.metric, "metric")?, n, n)?,
        )
    }
}

impl FormDoc {
    pub fn from_form<S: Scalar>(f: &KForm<S>) -> Self {
        Self {
            mode: Mode::of::<S>(),
            dim: f.dim(),
            degree: f.degree(),
            terms: f
                .terms()
                .map(|(idx, c)| TermDoc {
                    indices: idx.iter().map(|i| i + 1).collect(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn form<S: Scalar>(&self) -> Result<KForm<S>> {
        check_mode::<S>(self.mode)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            check_len(self.degree, t.indices.len())?;
            let idx: Vec<usize> = t
                .indices
                .iter()
                .map(|&i| index(i, self.dim))
                .collect::<Result<_>>()?;
            terms.push((idx, scalar::<S>(&t.coeff)?));
        }
        Ok(KForm::from_terms(self.dim, self.degree, terms))
    }
}

impl FrameDoc {
    pub fn from_frame<S: Scalar>(f: &AdaptedFrame<S>) -> Self {
        Self {
            mode: Mode::of::<S>(),
            change_of_basis: matrix_text(&f.change_of_basis()),
            weights: vector_text(&f.weights),
        }
    }

    /// The change-of-basis matrix and weights.
    pub fn frame<S: Scalar>(&self) -> Result<(Matrix<S>, Vec<S>)> {
        check_mode::<S>(self.mode)?;
        let n = self.change_of_basis.len();
        let m = matrix(&self.change_of_basis, n, n)?;
        let w = self.weights.iter().map(|s| scalar(s)).collect::<Result<_>>()?;
        Ok((m, w))
    }
}

impl MatrixDoc {
    pub fn from_matrix<S: Scalar>(m: &Matrix<S>) -> Self {
        Self {
            mode: Mode::of::<S>(),
            matrix: matrix_text(m),
        }
    }

    pub fn matrix<S: Scalar>(&self) -> Result<Matrix<S>> {
        check_mode::<S>(self.mode)?;
        let rows = self.matrix.len();
        let cols = self.matrix.first().map_or(0, Vec::len);
        matrix(&self.matrix, rows, cols)
    }
}
