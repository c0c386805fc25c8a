use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("the zero vector has no ray representative")]
    ZeroVector,

    #[error("non-finite amplitude or probability")]
    NonFinite,

    #[error("basis vectors are not orthonormal (max Gram deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("at least one basis is required")]
    EmptyBases,

    #[error("probe and reference are the same ray")]
    CoincidentRays,

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("unsupported spin: 2j = {0} (supported: 1, 2)")]
    UnsupportedSpin(u32),

    #[error("unknown basis family or label `{0}`")]
    UnknownFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
