use thiserror::Error;

use crate::scalar::ScalarParseError;

/// Coarse grouping of errors, used for exit codes and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorFamily {
    /// Malformed or inconsistent input data.
    Parse,
    /// Input is well-formed but violates an operation's hypotheses.
    Precondition,
    /// A check that the mathematics guarantees failed: a bug signal.
    Internal,
}

impl ErrorFamily {
    pub fn name(self) -> &'static str {
        match self {
            ErrorFamily::Parse => "parse",
            ErrorFamily::Precondition => "precondition",
            ErrorFamily::Internal => "internal",
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    /// Violating basis triples, 0-indexed; displayed 1-indexed.
    #[error("Jacobi identity fails on {}", triples(.0))]
    JacobiViolation(Vec<(usize, usize, usize)>),
    #[error("vector is not central")]
    NotCentral,
    #[error("subspace is not complementary to the given line")]
    NotComplementary,
    #[error("subspace is not an abelian subalgebra")]
    NotAbelianSubalgebra,
    #[error("not an almost contact metric structure: {0}")]
    InvalidStructure(String),
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
    #[error("vectors span a degenerate plane")]
    DegeneratePlane,
    #[error("Lie algebra is not nilpotent")]
    NotNilpotent,
    #[error("structure is not anti-quasi-Sasakian")]
    NotAqs,
    #[error("structure is not quasi-Sasakian")]
    NotQs,
    #[error("structure is not of maximal rank (rank {rank}, dimension {dim})")]
    NotMaximalRank { rank: usize, dim: usize },
    #[error("center has rank {rank}, expected 1")]
    CenterTooBig { rank: usize },
    #[error("Reeb vector field is not Killing")]
    XiNotKilling,
    #[error("quotient by the center is not abelian")]
    NonAbelianQuotient,
    #[error("spectrum does not split over the scalar field: {0}")]
    IrrationalSpectrum(String),
    #[error("unexpected spectrum: {0}")]
    SpectrumMismatch(String),
    #[error("Killing form is not negative definite")]
    NotCompactSemisimple,
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),
    #[error("2-form is not a cocycle")]
    NotCocycle,
    #[error("internal contradiction: {0}")]
    Internal(String),
}

impl Error {
    pub fn family(&self) -> ErrorFamily {
        use Error::*;
        match self {
            Scalar(_) | Format(_) | DimensionMismatch { .. } | IndexOutOfRange { .. }
            | JacobiViolation(_) => ErrorFamily::Parse,
            NonAbelianQuotient | Internal(_) => ErrorFamily::Internal,
            _ => ErrorFamily::Precondition,
        }
    }

    /// Stable identifier for machine-readable reports.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            Scalar(_) => "ScalarParse",
            Format(_) => "Format",
            DimensionMismatch { .. } => "DimensionMismatch",
            IndexOutOfRange { .. } => "IndexOutOfRange",
            JacobiViolation(_) => "JacobiViolation",
            NotCentral => "NotCentral",
            NotComplementary => "NotComplementary",
            NotAbelianSubalgebra => "NotAbelianSubalgebra",
            InvalidStructure(_) => "InvalidStructure",
            NotPositiveDefinite => "NotPositiveDefinite",
            DegeneratePlane => "DegeneratePlane",
            NotNilpotent => "NotNilpotent",
            NotAqs => "NotAqs",
            NotQs => "NotQs",
            NotMaximalRank { .. } => "NotMaximalRank",
            CenterTooBig { .. } => "CenterTooBig",
            XiNotKilling => "XiNotKilling",
            NonAbelianQuotient => "NonAbelianQuotient",
            IrrationalSpectrum(_) => "IrrationalSpectrum",
            SpectrumMismatch(_) => "SpectrumMismatch",
            NotCompactSemisimple => "NotCompactSemisimple",
            NoSolution(_) => "NoSolution",
            InvalidComplexStructure(_) => "InvalidComplexStructure",
            NotCocycle => "NotCocycle",
            Internal(_) => "Internal",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn triples(t: &[(usize, usize, usize)]) -> String {
    t.iter()
        .map(|(i, j, k)| format!("({}, {}, {})", i + 1, j + 1, k + 1))
        .collect::<Vec<_>>()
        .join(", ")
}
