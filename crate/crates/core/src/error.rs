use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested infinite-lattice quantity does not converge.
    #[error("divergent: {0}")]
    Divergent(String),

    #[error("accuracy: {0}")]
    Accuracy(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Step size collapsed; `last_state` is the last accepted state at `t`.
    #[error("integration failed at t = {t}: {reason}")]
    Integration {
        t: f64,
        reason: String,
        last_state: Vec<f64>,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("eigensolver: {0}")]
    Spectral(String),

    #[error("degenerate unperturbed spectrum: {0}")]
    Degenerate(String),

    #[error("ill-conditioned eigenbasis (condition ~ {cond:.3e}); use the ODE propagator instead")]
    Conditioning { cond: f64 },

    #[error("fit: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
