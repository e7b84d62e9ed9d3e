use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value:e} is out of domain: {reason}")]
    Domain { name: &'static str, value: f64, reason: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("Matsubara sum not converged after {terms} terms (partial energy {partial:e} J/m^2)")]
    MatsubaraNotConverged { terms: usize, partial: f64 },

    #[error("quadrature not converged: value {value:e}, error estimate {abs_err:e}")]
    QuadratureNotConverged { value: f64, abs_err: f64 },

    #[error("proximity force approximation needs d < R/100 (d = {d:e} m, R = {radius:e} m)")]
    PfaValidity { d: f64, radius: f64 },

    #[error("layered Yukawa formula needs lambda < R/100 (lambda = {lambda:e} m, R = {radius:e} m)")]
    YukawaValidity { lambda: f64, radius: f64 },

    #[error("singular design matrix: {0}")]
    SingularDesign(String),

    #[error("Yukawa template has vanishing norm at lambda = {lambda:e} m")]
    VanishingTemplate { lambda: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::Domain { name, value, reason: reason.into() }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
