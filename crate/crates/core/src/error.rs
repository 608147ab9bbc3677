use crate::rotations::Parity;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("cutoff {cutoff} outside 1..={max}")]
    CutoffOutOfRange { cutoff: usize, max: usize },

    #[error("invalid quantum numbers: {0}")]
    QuantumNumbers(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state has no support in the {0} sector")]
    EmptySector(Parity),

    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),

    #[error("probabilities sum to {0}, expected 1")]
    Normalization(f64),

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("eigensolver failed on a {0}x{0} matrix")]
    Eigen(usize),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("at cutoff {cutoff}: {source}")]
    AtCutoff { cutoff: usize, source: Box<Error> },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Eigen(_) | Error::NonFinite(_) | Error::EmptySector(_) => true,
            Error::AtCutoff { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
