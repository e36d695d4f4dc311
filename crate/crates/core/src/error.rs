use thiserror::Error;

/// Errors raised by the oscillator models, integrators and verification helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The configuration left the open domain `1 + λ r² > 0`.
    #[error("state outside the configuration domain: 1 + lambda*r^2 = {metric:e} (lambda = {lambda})")]
    Domain { lambda: f64, metric: f64 },

    #[error("amplitude {amplitude} is not admissible for lambda = {lambda}")]
    Amplitude { amplitude: f64, lambda: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The leading coefficient α(x) of a nonstandard equation of motion vanished.
    #[error("singular coefficient alpha(x) = 0 at x = {x}")]
    SingularCoefficient { x: f64 },

    /// A closed-form solution hit a pole.
    #[error("closed-form solution has a pole at t = {t}")]
    Pole { t: f64 },

    /// The state lies on the zero level set of a reciprocal Lagrangian.
    #[error("state on the singular level set ({what} = {value:e})")]
    SingularLevelSet { what: &'static str, value: f64 },

    #[error("step budget of {max_steps} steps exhausted at t = {t}")]
    Budget { max_steps: usize, t: f64 },

    #[error("polar angle undefined at the origin")]
    AngleUndefined,

    #[error("potential of family {potential} cannot be used with the {requested} chart")]
    FamilyMismatch {
        potential: &'static str,
        requested: &'static str,
    },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("no turning point for energy {energy}: {reason}")]
    EnergyRange { energy: f64, reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
