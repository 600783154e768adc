//! Shared error type for all numerical modules.

use thiserror::Error;

/// Errors produced by constructors, validators, and iterative solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A composite value (distribution, density matrix, POM, plan) failed
    /// an internal consistency check.
    #[error("validation error: {0}")]
    Validation(String),

    /// An operation was called without required configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// An iterative solver did not reach its tolerance within the
    /// iteration budget. Carries the last iterate and a bound on the
    /// remaining gap, both in the result units of the solver.
    #[error("did not converge after {iters} iterations: last value {last}, gap bound {gap}")]
    NonConvergence { last: f64, gap: f64, iters: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
