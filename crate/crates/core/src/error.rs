use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix has odd size")]
    OddSize,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("field has no primitive cube root of unity")]
    NoCubeRoot,
    #[error("curve is singular")]
    SingularCurve,
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("input is not stable: {0}")]
    NonStableInput(String),
    #[error("fields differ")]
    FieldMismatch,
    #[error("characteristic must be 3")]
    NotCharThree,
    #[error("no degree-0 element matches the derivation")]
    NoSolution,
    #[error("independent computations disagree: {0}")]
    Disagreement(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
