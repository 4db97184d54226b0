//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by numerics, models, bounds and data loading.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root bracket did not contain the target value.
    #[error("bracket error: target {target} outside [{f_lo}, {f_hi}]")]
    Bracket { target: f64, f_lo: f64, f_hi: f64 },

    /// An iterative scheme ran out of iterations.
    #[error("convergence failure after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    /// A quadrature did not reach the requested tolerance; carries the best estimate.
    #[error("quadrature accuracy {achieved:e} above requested {requested:e}; best estimate {estimate}")]
    Accuracy {
        estimate: f64,
        achieved: f64,
        requested: f64,
    },

    /// Invalid configuration (bad weights, bad parameters, unknown preset, ...).
    #[error("config error: {0}")]
    Config(String),

    /// Malformed or incomplete input data (CSV cells, parameter rows, ...).
    #[error("data error: {0}")]
    Data(String),

    /// A numerical failure inside a bound computation, naming the failing piece.
    #[error("numerical error in {context}: {source}")]
    Numerical {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn in_context(self, context: impl Into<String>) -> Self {
        Error::Numerical {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
