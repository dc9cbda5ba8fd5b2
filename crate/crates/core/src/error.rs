use thiserror::Error;

/// Invalid physical input to the model, dynamics or closed-form layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must be {requirement}, got {value}")]
    OutOfRange {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("bath uses a direct rate model; a resonator model is required here")]
    NotResonator,
    #[error("linearized thermalization requires Γ_Σ·dt ≤ {limit}, got {value}")]
    LinearMapMisuse { value: f64, limit: f64 },
    #[error("RK4 oracle needs at least {required} steps, got {given}")]
    InsufficientSteps { required: u64, given: u64 },
    #[error("rate pair violates detailed balance: up/down = {ratio}, expected {expected}")]
    DetailedBalance { ratio: f64, expected: f64 },
}

pub(crate) fn check(
    name: &'static str,
    value: f64,
    requirement: &'static str,
    ok: impl FnOnce(f64) -> bool,
) -> Result<f64, ModelError> {
    if value.is_finite() && ok(value) {
        Ok(value)
    } else {
        Err(ModelError::OutOfRange {
            name,
            requirement,
            value,
        })
    }
}

/// Failure while building or solving an Otto cycle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CycleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid cycle: {0}")]
    InvalidSpec(String),
    #[error("cycle map is not contractive: spectral radius {spectral_radius} ≥ 1 − 1e-12")]
    NonContractive { spectral_radius: f64 },
    #[error("(I − M) is numerically singular")]
    SingularSolve,
    #[error("δt → 0 extrapolation did not settle: successive estimates {first} and {second}")]
    NonConvergent { first: f64, second: f64 },
}
