use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("orbit is not elliptic (e = {eccentricity}, a = {semi_major_axis} m)")]
    NotElliptic { eccentricity: f64, semi_major_axis: f64 },
    #[error("state vector is unbound (specific energy {energy} J/kg)")]
    UnboundState { energy: f64 },
    #[error("degenerate state vector: {0}")]
    DegenerateState(&'static str),
    #[error("Gauss equations are singular: {0}")]
    GaussSingularity(String),
    #[error("b-plane undefined: relative velocity {0} m/s is too small")]
    BPlaneUndefined(f64),
    #[error("point lies inside the asteroid ({0})")]
    InsideAsteroid(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("unit error: {0}")]
    Unit(String),
    #[error("optimizer error: {0}")]
    Optimizer(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True when the error comes from invalid input rather than a failure
    /// during the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Scenario(_) | Error::Unit(_) | Error::Json(_))
    }
}
