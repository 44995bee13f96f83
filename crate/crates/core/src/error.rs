use thiserror::Error;

/// Errors raised by the closure algebra, the traveling-wave integrator and the PDE solver.
///
/// Numerical payloads are stored as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} must be positive, got {value}")]
    NonPositive { quantity: &'static str, value: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("speed {speed} does not exceed the Lax bound {bound}")]
    InadmissibleSpeed { speed: f64, bound: f64 },

    #[error("states on both sides of the jump coincide in depth or momentum")]
    DegenerateJump,

    #[error("integration diverged at xi = {xi}: depth {zeta} left ({lower}, {upper})")]
    IntegrationDiverged {
        xi: f64,
        zeta: f64,
        lower: f64,
        upper: f64,
    },

    #[error("step size underflow at xi = {xi}")]
    StepSizeUnderflow { xi: f64 },

    #[error("profile structure violated: {0}")]
    StructureViolation(String),

    #[error("cavitation at t = {time}: minimum depth {min_depth} below floor {floor}")]
    Cavitation {
        time: f64,
        min_depth: f64,
        floor: f64,
    },

    #[error("numerical instability at t = {time}: max |u| = {max_velocity}")]
    Instability { time: f64, max_velocity: f64 },

    #[error("singular elliptic system (pivot {pivot})")]
    SingularSystem { pivot: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
