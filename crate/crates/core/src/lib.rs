//! Exact arithmetic for numbers that are sums (or differences) of two equal
//! odd powers.
//!
//! The library is organized around the median form `(m - h)^n + (m + h)^n = N`:
//! for even `N` every median `m` divides `N`, which turns the representation
//! problem into a bounded divisor scan.  On top of that sit the cubic-multiplier
//! search for many-way representable ("taxicab") numbers, signed-cube
//! ("cabtaxi") counting, and a catalog of exactly verified parameterizations.

pub mod arith;
pub mod cabtaxi;
pub mod cubeform;
pub mod identities;
pub mod registry;
pub mod taxisearch;

use num_bigint::BigUint;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A composite cofactor resisted every factoring stage.
    #[error("factoring too hard: composite cofactor {0} not cracked")]
    TooHard(BigUint),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid seed record: {0}")]
    InvalidSeed(String),
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("unknown registry label: {0}")]
    UnknownLabel(String),
    #[error("unknown identity: {0}")]
    UnknownIdentity(String),
    #[error("malformed checkpoint: {0}")]
    MalformedCheckpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
