//! Uncurling metrics, normalized uncurling metrics and unital norms of real
//! finite-dimensional unital associative algebras given by rational structure
//! constants, with the isomorphism invariants they produce.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod error;
pub mod euclid;
pub mod exact;
pub mod quadrature;
pub mod uncurl;
pub mod unorm;

pub use algebra::{builtin, Algebra};
pub use error::Error;
