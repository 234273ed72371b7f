use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("index out of range: {0}")]
    InvalidIndex(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("subsystem {index} is not well-posed: I - G P is singular")]
    IllPosedSubsystem { index: usize },
    #[error("interconnection is not well-posed: I - Phi A_zv is singular")]
    IllPosedNds,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("factorization rejected: {0}")]
    FactorizationInvalid(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("could not draw a well-posed interconnection after {attempts} attempts")]
    SamplingExhausted { attempts: usize },
    #[error("pole on the imaginary axis near omega = {omega}")]
    PoleOnGrid { omega: f64 },
    #[error("simulation diverged at step {step}")]
    DivergentSimulation { step: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
