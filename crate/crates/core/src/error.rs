use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the formula or model.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Liouvillian kernel is not one-dimensional.
    #[error("no unique steady state: kernel dimension {kernel_dim} (smallest singular values {smallest:?})")]
    NoUniqueSteadyState {
        kernel_dim: usize,
        smallest: Vec<f64>,
    },

    #[error("linear system is singular: {0}")]
    Singular(String),

    /// The adaptive integrator could not meet its tolerance.
    #[error("integration failed at z = {z:e} after {steps} steps (h = {step:e}): {reason}")]
    Integration {
        z: f64,
        step: f64,
        steps: usize,
        reason: String,
    },

    #[error("root not bracketed on [{lo:e}, {hi:e}] (f = {f_lo:e}, {f_hi:e})")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// The space-marching fixed point did not settle.
    #[error("self-consistency failed at space step {column} after {} iterations (last change {:e})", .trace.len(), .trace.last().copied().unwrap_or(f64::NAN))]
    NonConvergence { column: usize, trace: Vec<f64> },

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
