use thiserror::Error;

/// Failure modes shared across the crate.
///
/// Shape mismatches (wrong dimension, non-square matrix) are treated as
/// programming errors and panic at the call site; the variants here cover
/// conditions that depend on the numerical content of the inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("term {index} is out of range for a finite sequence of {available} terms")]
    TermOutOfRange { index: usize, available: usize },

    #[error("pair sequences disagree: {detail}")]
    MismatchedPair { detail: String },

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {limit:.3e}")]
    NotHermitian { defect: f64, limit: f64 },

    #[error(
        "matrix has eigenvalue {eigenvalue:.6e} below -{tol:.3e}; not positive semidefinite"
    )]
    NotPositiveSemidefinite { eigenvalue: f64, tol: f64 },

    #[error(
        "operator is singular within tolerance: smallest singular value {smallest:.3e} \
         against limit {limit:.3e}"
    )]
    SingularOperator { smallest: f64, limit: f64 },

    #[error("sequence extension must be periodic for this diagnostic")]
    NotPeriodic,

    #[error("mixed Grammian section is not positive: leading {order}x{order} block fails")]
    GrammianNotPositive { order: usize },

    #[error("first {terms} terms span only {rank} of {dim} dimensions")]
    SpanDeficient { terms: usize, rank: usize, dim: usize },

    #[error(
        "relating operator does not carry the analysis terms onto the synthesis terms: \
         defect {defect:.3e} exceeds {tol:.3e}"
    )]
    MappingDefect { defect: f64, tol: f64 },

    #[error("input fails validation: {detail}")]
    FailsValidation { detail: String },

    #[error(
        "auxiliary identity broke down: worst coefficient gap {defect:.3e} exceeds {limit:.3e}"
    )]
    AuxiliaryIdentityViolated { defect: f64, limit: f64 },

    #[error(
        "auxiliary sequence is not a frame at this section: lower bound {lower:.3e} \
         is within {tol:.3e} of zero"
    )]
    NotAlmostEffective { lower: f64, tol: f64 },

    #[error("spectral verdict disagrees with iteration probe {probe}: {detail}")]
    OracleDisagreement { probe: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
