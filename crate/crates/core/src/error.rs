use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShootoutError {
    #[error("invalid scoring probabilities: need 0 <= q <= p <= 1, got p = {p}, q = {q}")]
    InvalidParams { p: f64, q: f64 },

    #[error("sudden death never resolves at p = {p}, q = {q}")]
    DegenerateParameters { p: f64, q: f64 },

    #[error("regular phase length {0} is outside the supported range 1..=16")]
    InvalidRounds(u32),

    #[error("all {trials} simulated shootouts were unresolved")]
    AllUnresolved { trials: u64 },

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(&'static str),

    #[error("cannot parse probability literal {0:?}")]
    BadLiteral(String),
}

pub type Result<T, E = ShootoutError> = std::result::Result<T, E>;
