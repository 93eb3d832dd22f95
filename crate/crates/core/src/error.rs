use thiserror::Error;

/// Errors raised by the linear-algebra kernels, state constructors and bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operand dimensions do not fit the requested operation.
    #[error("shape error: {0}")]
    Shape(String),

    /// Total Hilbert-space dimension would exceed the configured cap.
    #[error("size error: dimension {requested} exceeds cap {cap}")]
    Size { requested: usize, cap: usize },

    /// An input violates a documented invariant (Hermiticity, unit trace, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An iterative kernel failed to converge or produced an out-of-range value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The operation is not defined for the given system (e.g. mixed local dimensions).
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
