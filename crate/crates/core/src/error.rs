use thiserror::Error;

/// Errors raised by model construction, landscape evaluation and the integrators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the region where the model is defined.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Lagrange fields diverge at the boundary of the order-parameter box.
    #[error("singular field at m = ({m_u}, {m_d}): order parameter on the domain boundary")]
    SingularField { m_u: f64, m_d: f64 },

    /// A time integration produced an unphysical state.
    #[error("integrator aborted at t = {t}: {reason}")]
    IntegratorAbort { t: f64, reason: String },

    /// A requested computation exceeds the configured resource limits.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
