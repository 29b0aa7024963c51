use thiserror::Error;

/// Errors raised by state construction, encodings and capacity routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Bloch vector norm {0} exceeds 1")]
    BlochNormExceeded(f64),

    #[error("Bloch vector is zero; no direction to flip")]
    ZeroBlochVector,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid dimension {0} (need d >= 2)")]
    InvalidDimension(usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("frame is not orthonormal (max deviation {0:e})")]
    FrameNotOrthonormal(f64),

    #[error("operator {index} is not unitary (max deviation {deviation:e})")]
    NotUnitary { index: usize, deviation: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidPrior(String),

    #[error("no states supplied")]
    NoStates,

    #[error("decomposition size {terms} is smaller than the state rank {rank}")]
    RankTooLarge { rank: usize, terms: usize },

    #[error("vector of length {len} does not match split {dims:?}")]
    SplitMismatch { len: usize, dims: (usize, usize) },

    #[error("only 2x2 bipartite states are supported, got {0:?}")]
    DimensionUnsupported((usize, usize)),

    #[error("trial count must be at least 1")]
    InvalidTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
