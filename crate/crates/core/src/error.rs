use thiserror::Error;

use crate::profiles::RigidityViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cavity: {0}")]
    InvalidCavity(String),

    #[error("quantum number must be >= 1 (got {0})")]
    ZeroQuantumNumber(u32),

    #[error("quantum number {n} exceeds truncation n_max = {n_max}")]
    OutsideTruncation { n: u32, n_max: u32 },

    #[error("invalid acceleration profile: {0}")]
    InvalidProfile(String),

    #[error("tau = {tau} lies outside the acceleration interval [{tau0}, {tauf}]")]
    OutsideInterval { tau: f64, tau0: f64, tauf: f64 },

    #[error(transparent)]
    Rigidity(#[from] RigidityViolation),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("eigen-solve failed: {0}")]
    Eigen(String),

    #[error("incompatible maps: {0}")]
    Incompatible(String),

    #[error("invalid Gaussian state: {0}")]
    InvalidState(String),

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),

    #[error("paraxial regime violated: (2/lambda)^2 exceeds transverse load by only {ratio:.3e} (need > 1e4)")]
    Paraxial { ratio: f64 },

    #[error("{path}: {message}")]
    Scenario { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical machinery (quadrature, eigen-solves) as
    /// opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature(_) | Error::Eigen(_))
    }
}
