use thiserror::Error;

/// Failures raised anywhere in the rod pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quaternion norm {norm:e} is below the degeneracy threshold")]
    DegenerateQuaternion { norm: f64 },

    #[error("matrix is not a proper rotation (orthonormality defect {defect:e})")]
    NotARotation { defect: f64 },

    #[error("relative rotation angle {angle} is at or beyond the SE(3) cut locus")]
    CutLocus { angle: f64 },

    #[error("elastic law has constrained directions and no finite stiffness")]
    ConstrainedLaw,

    #[error("invalid elastic law: {0}")]
    InvalidLaw(String),

    #[error("xi = {xi} lies outside element interval [{lo}, {hi}]")]
    OutOfElement { xi: f64, lo: f64, hi: f64 },

    #[error("quadrature order {0} is not supported (1..=5)")]
    UnsupportedOrder(usize),

    #[error("reference tangent length {j:e} is degenerate at xi = {xi}")]
    DegenerateTangent { xi: f64, j: f64 },

    #[error("point load at xi = {0} is not on an element boundary")]
    MisplacedPointLoad(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid discretization: {0}")]
    InvalidDiscretization(String),

    #[error("Newton iteration did not converge in increment {increment} after {iterations} iterations")]
    NonConvergence { increment: usize, iterations: usize },

    #[error("singular Jacobian at pivot {0}")]
    SingularJacobian(usize),

    #[error("convergence rate needs at least three iterates, got {0}")]
    InsufficientHistory(usize),

    #[error("no convergent power-of-two increment count up to {0}")]
    SearchExhausted(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("CSV schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Stable variant name, printed by the CLI on failure.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateQuaternion { .. } => "DegenerateQuaternion",
            Error::NotARotation { .. } => "NotARotation",
            Error::CutLocus { .. } => "CutLocus",
            Error::ConstrainedLaw => "ConstrainedLaw",
            Error::InvalidLaw(_) => "InvalidLaw",
            Error::OutOfElement { .. } => "OutOfElement",
            Error::UnsupportedOrder(_) => "UnsupportedOrder",
            Error::DegenerateTangent { .. } => "DegenerateTangent",
            Error::MisplacedPointLoad(_) => "MisplacedPointLoad",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidDiscretization(_) => "InvalidDiscretization",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::SingularJacobian(_) => "SingularJacobian",
            Error::InsufficientHistory(_) => "InsufficientHistory",
            Error::SearchExhausted(_) => "SearchExhausted",
            Error::Config(_) => "Config",
            Error::SchemaMismatch(_) => "SchemaMismatch",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
