//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the special functions, weight generators, solvers and
/// the convergence harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A pole of the evaluated function was hit.
    #[error("pole of {op} at {at}")]
    Pole { op: &'static str, at: f64 },

    /// An iterative evaluation did not converge.
    #[error("{op} did not converge after {terms} terms")]
    NoConvergence { op: &'static str, terms: usize },

    /// The denominator of the tau8 rational approximant vanished.
    #[error("tau8 denominator vanished at ztau = {re} + {im}i")]
    DenominatorZero { re: f64, im: f64 },

    /// A solver or study configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// The time-stepping system matrix could not be factorized.
    #[error("singular system matrix (|min pivot| / |max pivot| = {pivot_ratio:e})")]
    SingularSystem { pivot_ratio: f64 },

    /// A non-finite value appeared in the solution history.
    #[error(
        "non-finite state at step {step} of {steps}; the scheme is unstable for this configuration"
    )]
    NonFinite { step: usize, steps: usize },

    /// A solve inside a convergence study failed.
    #[error("run k={k}, alpha={alpha}, N={n} failed: {source}")]
    Run {
        k: usize,
        alpha: f64,
        n: usize,
        #[source]
        source: Box<Error>,
    },

    /// Input/output failure in the CLI layer.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
