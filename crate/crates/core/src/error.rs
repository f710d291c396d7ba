use thiserror::Error;

/// Errors for rejected inputs. All constructors and operations validate dimensions
/// and the exact compatibility preconditions of the fibered additions/pairings.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("{context}: expected dimension {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// Two elements do not live over the point required by the operation
    /// (base points and shared fiber coordinates must match exactly).
    #[error("{context}: {detail}")]
    Incompatible {
        context: &'static str,
        detail: &'static str,
    },
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
