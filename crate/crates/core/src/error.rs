use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("inconsistent cone description: {0}")]
    InconsistentCone(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a monoid morphism: {0}")]
    NotMorphism(String),

    #[error("invalid face: {0}")]
    InvalidFace(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("bound {bound} is below the required degree {required}")]
    Bound { bound: usize, required: usize },

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
