use thiserror::Error;

/// Errors raised by the statistical and thermodynamic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside the domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("quadrature did not converge (estimated error {estimate:e} > {tolerance:e})")]
    QuadratureNonConvergence { estimate: f64, tolerance: f64 },

    #[error("particle number {n_total} exceeds the capacity {capacity} of the Fermi levels")]
    InfeasibleParticleNumber { n_total: f64, capacity: f64 },

    #[error("Bose level {level} would diverge: chemical potential {mu} is not below its energy {energy}")]
    BoseDivergence { level: usize, mu: f64, energy: f64 },

    #[error("root bracket failure in {0}")]
    BracketFailure(&'static str),

    #[error("singular response: {0}")]
    SingularResponse(&'static str),

    #[error("invalid system: {0}")]
    InvalidSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
