use thiserror::Error;

/// Failures raised while building or verifying the objects of the theory.
///
/// Variants fall into two camps: input problems (bad parameters, shape or
/// dimension mismatches, parse errors) and mathematical findings (loss of
/// quasi-definiteness, rank deficiency, violated identities or bands).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: expected d = {expected}, found d = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("rank deficient: {context} has rank {rank}, expected {expected}")]
    RankDeficient {
        context: String,
        rank: usize,
        expected: usize,
    },
    #[error("moment functional is not quasi-definite at degree {0}")]
    NotQuasiDefinite(usize),
    #[error("polynomial of degree {degree} exceeds basis degree {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("band violation for n = {n}: nonzero {family} coefficient at index {index}")]
    BandViolation {
        family: &'static str,
        n: usize,
        index: usize,
    },
    #[error("cross-check failure: {0}")]
    CrossCheckFailure(String),
    #[error("no degree-bounded solution: {0}")]
    NoSolution(String),
    #[error("verification failure: {0}")]
    VerificationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Variant name, used as the `kind` field of JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::BadParameter(_) => "BadParameter",
            Error::BadIndex(_) => "BadIndex",
            Error::Inconsistent => "Inconsistent",
            Error::Singular => "Singular",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::NotQuasiDefinite(_) => "NotQuasiDefinite",
            Error::DegreeOverflow { .. } => "DegreeOverflow",
            Error::IdentityViolation(_) => "IdentityViolation",
            Error::BandViolation { .. } => "BandViolation",
            Error::CrossCheckFailure(_) => "CrossCheckFailure",
            Error::NoSolution(_) => "NoSolution",
            Error::VerificationFailure(_) => "VerificationFailure",
            Error::Parse(_) => "Parse",
        }
    }

    /// Input problems, as opposed to mathematical findings.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::ShapeMismatch(_)
                | Error::DimensionMismatch { .. }
                | Error::BadParameter(_)
                | Error::BadIndex(_)
                | Error::DegreeOverflow { .. }
                | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
