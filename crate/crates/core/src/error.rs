use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid exponent pair (p = {p}, q = {q}): need 1 <= q < p < inf or 1 < q = p < inf")]
    InvalidExponents { p: f64, q: f64 },

    #[error("unsupported exponent: {0}")]
    UnsupportedExponent(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("input does not span the ambient dimension: {0}")]
    DimensionDeficiency(String),

    #[error("halfspace system is unbounded")]
    Unbounded,

    #[error("halfspace system is infeasible")]
    Infeasible,

    #[error("unsupported dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
