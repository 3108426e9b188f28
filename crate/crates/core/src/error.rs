use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("torus dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported torus dimension {0} (expected 1 or 2)")]
    UnsupportedDimension(usize),
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("symbol is not global (contains q-polynomial terms)")]
    NotGlobal,
    #[error("head is not exponentiable: {0}")]
    NotExponentiable(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("triple ({0}, {1}, {2}): {3}")]
    BadTriple(usize, usize, usize, String),
    #[error("non-rational or non-real charge: {0}")]
    BadCharge(String),
    #[error("matrix is not Hermitian at order {0}")]
    NotHermitian(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
