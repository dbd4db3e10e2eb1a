//! Exact construction of the Verma-module quantizations `A_{λ,h}` and `A_{t,λ,h}` of
//! function algebras on semisimple coadjoint orbits, together with the checks that
//! certify their flatness, semiclassical limits, multiplicities and equivariance.

pub mod exact;
pub mod liealg;
pub mod verma;
pub mod classical;
pub mod quantizer;
pub mod uq;

use thiserror::Error as ThisError;

/// Errors surfaced by constructions in this crate.
#[derive(Debug, ThisError, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported root system or configuration: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("depth budget exhausted: {0}")]
    DepthExhausted(String),
    #[error("non-polynomial entry after rescaling: {0}")]
    NonPolynomial(String),
    #[error(transparent)]
    Specialize(#[from] exact::SpecializeError),
    #[error("{0}")]
    Failed(String),
}
