use thiserror::Error;

pub type Result<T> = std::result::Result<T, FrameError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("spanning set has numerical rank 0")]
    ZeroSubspace,

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is singular (sigma_min {sigma_min:.3e}, sigma_max {sigma_max:.3e})")]
    Singular { sigma_min: f64, sigma_max: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected} members, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("system is not a fusion frame (lower bound {lower:.3e})")]
    NotAFrame { lower: f64 },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("candidate is not an alternative dual (residual {residual:.3e})")]
    NotADual { residual: f64 },

    #[error("weight must be positive and finite, got {0}")]
    InvalidWeight(f64),

    #[error("columns are not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("a fusion system needs at least one member")]
    EmptySystem,

    #[error("coefficient {index} does not lie in its subspace (residual {residual:.3e})")]
    NotInSubspace { index: usize, residual: f64 },

    #[error("bad parameters: {0}")]
    BadParameters(String),
}
