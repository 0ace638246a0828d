use thiserror::Error;

use crate::model::Variant;

/// Library error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The potential specification itself is malformed.
    #[error("invalid potential spec: {0}")]
    InvalidSpec(&'static str),

    /// The simultaneous root iteration did not reach the required accuracy.
    #[error("root finder did not converge in {iterations} iterations (worst relative correction {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// zeta = 0 makes the polynomial substitution singular; use the matrix
    /// eigenvector path instead.
    #[error("zeta = 0: coefficient reconstruction is singular, use the matrix eigenvector path")]
    ZetaZero,

    /// The supplied energy is not a root of R_M.
    #[error("E = {re}{im:+}i is not an eigenvalue (|R_M(E)| = {residual:e} exceeds tolerance)")]
    NotAnEigenvalue { re: f64, im: f64, residual: f64 },

    /// The dense eigensolver exceeded its iteration budget.
    #[error("eigensolver failed to converge")]
    EigensolverFailure,

    /// An operation restricted to one variant was called on the other.
    #[error("operation requires the {required:?} variant")]
    VariantMismatch { required: Variant },

    /// Evaluation outside the function's domain (e.g. z = 0 in the gauge factor).
    #[error("domain error: {0}")]
    DomainError(&'static str),

    /// Closed forms exist only for M = 1..=4.
    #[error("no closed form for M = {0} (closed forms cover M = 1..=4)")]
    UnsupportedM(u32),

    /// No published closed-form wavefunction exists for this case.
    #[error("no closed-form wavefunction for this (variant, M, level) combination")]
    NoClosedFormPsi,

    /// Index outside the spectrum.
    #[error("level index {index} out of range (spectrum has {len} levels)")]
    LevelOutOfRange { index: usize, len: usize },
}
