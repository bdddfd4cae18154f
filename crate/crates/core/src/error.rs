use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("wave packet not contained in the spatial window: edge amplitude {edge:.3e} exceeds {limit:.3e} of the peak")]
    Containment { edge: f64, limit: f64 },

    #[error("k-quadrature did not converge: residual {residual:.3e} after {panels} panels")]
    QuadratureNotConverged { residual: f64, panels: usize },

    #[error("adaptive integration did not converge: estimate {estimate:.12e}, error {error:.3e}")]
    IntegrationNotConverged { estimate: f64, error: f64 },

    #[error("ODE step size underflow at x = {x}")]
    StepUnderflow { x: f64 },

    #[error("finite-difference estimate is noise dominated (best error {error:.3e})")]
    NoisyDerivative { error: f64 },

    #[error("completed-scattering condition violated: final overlap {overlap:.3e}")]
    NotSeparated { overlap: f64 },

    #[error("centroid never reaches x = {target} within the sampled time window")]
    NoCrossing { target: f64 },

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
