use thiserror::Error;

/// Failures raised by the physics layers and the master-equation solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid hyperfine state |F={f}, mF={m_f}>")]
    InvalidState { f: i32, m_f: i32 },

    #[error("negative Breit-Rabi radicand {0}")]
    NegativeRadicand(f64),

    #[error("atom number must be at least 1")]
    NoAtoms,

    #[error("Rabi frequency is zero, no drive")]
    ZeroRabi,

    #[error("decay rate kappa must be positive")]
    ZeroDecayRate,

    #[error("detuning ratio hbar*delta/mu_c = {x} lies outside the condensate window")]
    DetuningOutsideCondensate { x: f64 },

    #[error("implied Larmor frequency {omega_l} rad/s is not positive (detuning exceeds oscillator frequency)")]
    NonPositiveLarmor { omega_l: f64 },

    #[error("cooling factor is zero, no ground-state threshold exists")]
    NoCoolingChannel,

    #[error("truncation tail mass {tail:.3e} at n_max = {n_max} exceeds 1e-6; increase n_max")]
    Truncation { tail: f64, n_max: usize },

    #[error("explicit step dt = {dt:e} s is unstable (dt * max rate = {product:.3} >= 0.1)")]
    UnstableStep { dt: f64, product: f64 },

    #[error("evolution needs {steps} RK4 steps, more than the limit of {limit}")]
    TooManySteps { steps: f64, limit: usize },

    #[error("master-equation generator is singular (gamma and kappa both zero)")]
    SingularGenerator,

    #[error("full-matrix solver failed: {0}")]
    LinearSolve(&'static str),
}

impl Error {
    /// True for failures of the numerical oracle rather than bad physical input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. }
                | Error::UnstableStep { .. }
                | Error::TooManySteps { .. }
                | Error::SingularGenerator
                | Error::LinearSolve(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative and finite",
        })
    }
}
