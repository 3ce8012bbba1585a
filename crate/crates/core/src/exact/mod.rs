//! Exact arithmetic: rationals, multivariate polynomials, matrices and inertia.

pub mod matrix;
pub mod poly;
pub mod rational;
pub mod signature;
pub mod univariate;

pub use matrix::{affine_solve, AffineSolution, PolyMatrix, RationalMatrix};
pub use poly::{Monomial, MultiPoly, PolyOp};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use signature::{rational_signature, Signature};
pub use univariate::{determinantal_divisor, UniPoly};
