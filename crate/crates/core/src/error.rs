use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum GreyError {
    /// A value is outside its mathematical domain (non-positive observation,
    /// lambda outside [0, 1], ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Fewer observations than the operation requires.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Two sequences that must agree in length do not.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The design matrix is numerically rank deficient
    /// (smallest/largest singular value ratio below the tolerance).
    #[error("rank-deficient design system (singular value ratio {0:.3e})")]
    RankDeficient(f64),

    /// A formula divides by a parameter that is numerically zero.
    #[error("near-singular parameter: {0}")]
    NearSingular(String),

    /// Least squares produced a non-finite solution.
    #[error("fit failed: {0}")]
    FitFailed(String),

    /// A partial sum or power left the finite f64 range.
    #[error("overflow in {0}")]
    Overflow(&'static str),

    /// Unparseable input file.
    #[error("format error: {0}")]
    Format(String),

    /// Unknown bundled dataset or reproduction case.
    #[error("not found: {0}")]
    NotFound(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GreyError>;

impl GreyError {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            GreyError::Domain(_)
            | GreyError::InsufficientData(_)
            | GreyError::Shape(_)
            | GreyError::Format(_)
            | GreyError::NotFound(_) => 2,
            GreyError::RankDeficient(_)
            | GreyError::NearSingular(_)
            | GreyError::FitFailed(_)
            | GreyError::Overflow(_) => 3,
            GreyError::Io(_) => 4,
        }
    }
}
