use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("origin is not strictly inside the domain")]
    OriginOutside,

    #[error("domain is not star-shaped about the origin (direction {phi:.6})")]
    NotStarShaped { phi: f64 },

    #[error("no sign change of the secular function for k = {k}, m = {m} below {ceiling}")]
    NoBracket { k: usize, m: usize, ceiling: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("conformal map rejected: analyticity residual {residual:.3e} exceeds {threshold:.1e}")]
    MapRejected { residual: f64, threshold: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
}
