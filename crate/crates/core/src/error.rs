use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("root tracking failed: {0}")]
    Tracking(String),

    #[error("roots collided while tracking near z = {at} (step collapsed to {step:e})")]
    Collision { at: String, step: f64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("{0} is not a member of the divisor lattice")]
    NotInLattice(usize),

    #[error("input outside the supported regime: {0}")]
    Regime(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("integration contour passes too close to a pole: {0}")]
    PoleProximity(String),

    #[error("family invariant violated: {0}")]
    Family(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Input errors map to exit code 2, everything else to 1.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::NotInLattice(_) | Error::Regime(_))
    }
}
