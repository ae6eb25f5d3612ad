use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid OAM window [{min}, {max}]: {reason}")]
    Window { min: i32, max: i32, reason: String },

    #[error("divergent overlap integral: 2*gamma^2 + 2*eta^2 - a = {denominator} (gamma={gamma}, eta={eta}, a={a}) must be positive")]
    Divergence {
        gamma: f64,
        eta: f64,
        a: f64,
        denominator: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not reach tolerance: {context} (residual estimate {residual:e})")]
    Accuracy { context: String, residual: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("spectrum is not normalized (sum of probabilities = {0})")]
    Normalization(f64),

    #[error("division by zero: {0}")]
    Division(String),

    #[error("ray mapping is singular: target intensity vanishes at {radius} inside the mapped range")]
    MappingSingularity { radius: f64 },

    #[error("sampling too coarse: relative energy leakage {leakage:e} exceeds {limit:e}")]
    Sampling { leakage: f64, limit: f64 },

    #[error("measurement settings are not informationally complete (condition ratio {0:e})")]
    Conditioning(f64),

    #[error("optimizer did not converge after {iterations} iterations (objective {objective:e})")]
    Convergence {
        iterations: usize,
        objective: f64,
        last: Vec<f64>,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
