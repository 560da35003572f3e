//! Blocking sets of lines in finite projective spaces PG(n,q).
//!
//! The crate is organised in layers:
//!
//! - [`gfq`]: exact arithmetic in F_q for prime powers q, plus subfield
//!   embeddings used by spread constructions.
//! - [`pgspace`]: canonical subspaces, Grassmannian enumeration, lattice
//!   operations and quotient spaces.
//! - [`polarity`]: symmetric non-degenerate bilinear forms, orthogonal
//!   complements and the hyperplane covering used by the improved
//!   construction.
//! - [`constructions`]: spreads, Bose-Burton, Beutelspacher-Ueberberg,
//!   the trivial and recursive (2,1)-constructions, and the general
//!   (s,t)-recursion.
//! - [`verifier`]: exhaustive blocking verification, degree profiles and
//!   double-counting identities.
//! - [`bounds`]: the exact upper/lower bound calculus (f*, f^opt, k*,
//!   Schönheim chains, densities) with arbitrary-precision arithmetic.

pub mod bounds;
pub mod constructions;
pub mod gfq;
pub mod pgspace;
pub mod polarity;
pub mod selftest;
pub mod verifier;

use thiserror::Error;

/// Errors produced by the geometry and construction layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the configured limit {1}")]
    FieldTooLarge(u64, u64),
    #[error("division or inversion by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("vectors have inconsistent lengths")]
    InconsistentVectorLengths,
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("malformed line set file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
