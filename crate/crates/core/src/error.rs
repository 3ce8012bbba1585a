use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("change of basis matrix is singular")]
    SingularTransform,
    #[error("algebra has no two-sided unit")]
    NoUnit,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("unknown builtin algebra {0:?}")]
    UnknownBuiltin(String),
    #[error("invalid builtin parameters: {0}")]
    InvalidParams(String),
    #[error("point is not a unit (|det R(s)| = {det:e})")]
    NonUnit { det: f64 },
    #[error("metric is not a normalized uncurling metric: {0}")]
    NotNormalized(String),
    #[error("path passes through a non-unit near t = {t} on segment {segment}")]
    PathThroughNonUnit { segment: usize, t: f64 },
    #[error("quadrature did not converge on segment {segment} (last difference {diff:e})")]
    QuadratureNotConverged { segment: usize, diff: f64 },
    #[error("quadratic form is negative at this point ({value:e})")]
    NegativeForm { value: f64 },
    #[error("matrix is not positive semi-definite (eigenvalue {eigenvalue:e})")]
    NotSemidefinite { eigenvalue: f64 },
    #[error("could not sample a unit after {attempts} attempts")]
    SamplingExhausted { attempts: usize },
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Failures of floating-point evaluation as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonUnit { .. }
                | Error::PathThroughNonUnit { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::NegativeForm { .. }
                | Error::SamplingExhausted { .. }
        )
    }
}
