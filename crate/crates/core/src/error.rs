use thiserror::Error;

use crate::pulse::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("operator is not unitary (max |U†U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    #[error("angle expression evaluated to a non-finite value")]
    NonFiniteAngle,

    #[error("likelihood {0} outside [1/2, 1]")]
    LikelihoodOutOfRange(f64),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("fringe fit failed: {0}")]
    FitFailure(&'static str),

    #[error("grid size {0} below the minimum of {1}")]
    GridTooSmall(usize, usize),

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("empty phase grid")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
