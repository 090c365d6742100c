use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the north pole has no planar preimage")]
    NorthPoleNotRepresentable,

    #[error("point is the pole of the Möbius map")]
    PoleOfMap,

    #[error("potential is not finite at point {index}")]
    PoleOfPotential { index: usize },

    #[error("points {i} and {j} coincide")]
    CoincidentPoints { i: usize, j: usize },

    #[error("operation only supports the canonical potential")]
    UnsupportedPotential,

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("lattice basis is degenerate")]
    DegenerateBasis,

    #[error("line search made no progress on any restart (n = {n})")]
    NoProgress { n: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
