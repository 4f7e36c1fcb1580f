use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("degenerate cut: party subset must be nonempty and proper")]
    DegenerateCut,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code, printed by the command-line tool.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "invalid-dimension",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NotHermitian(_) => "not-hermitian",
            Error::DegenerateCut => "degenerate-cut",
            Error::NoConvergence { .. } => "no-convergence",
            Error::ContractViolation(_) => "contract-violation",
            Error::Construction(_) => "construction",
            Error::Precondition(_) => "precondition",
            Error::UnsupportedShape(_) => "unsupported-shape",
            Error::UnknownPreset(_) => "unknown-preset",
            Error::Malformed(_) => "malformed-input",
            Error::Json(_) => "malformed-json",
            Error::Io(_) => "io",
        }
    }
}
