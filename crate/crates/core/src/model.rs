//! Parameter sets, state containers and trajectories shared by every model.
//!
//! All quantities are dimensionless. States are plain `Copy` records; the
//! validating constructors (`*_checked`) reject configurations outside the
//! open domain `1 + λ r² > 0`, which only restricts anything when `λ < 0`.

use std::fmt;

use crate::error::{Error, Result};
use crate::integrate::IntegratorConfig;

/// Deformation parameter `λ` and oscillator strength `α` of the
/// position-dependent-mass oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformParams {
    lambda: f64,
    alpha: f64,
}

impl DeformParams {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be finite, got {lambda}"),
            });
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be finite and positive, got {alpha}"),
            });
        }
        Ok(Self { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same `α`, different `λ`. Used by negative controls.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda, self.alpha)
    }
}

/// Metric factor `1 + λ r²`.
#[inline]
pub fn metric_factor(lambda: f64, r2: f64) -> f64 {
    1.0 + lambda * r2
}

/// Anything with a configuration point; `radius_sq` is `x²` in 1D and `x²+y²` in 2D.
pub trait Configuration {
    fn radius_sq(&self) -> f64;
}

/// True iff `1 + λ r² > 0` at the state's configuration point.
pub fn validate_domain<S: Configuration + ?Sized>(state: &S, params: &DeformParams) -> bool {
    in_domain(params.lambda(), state.radius_sq())
}

#[inline]
pub(crate) fn in_domain(lambda: f64, r2: f64) -> bool {
    // λ = 0 is unrestricted; avoid 0 * inf for huge radii.
    lambda >= 0.0 || metric_factor(lambda, r2) > 0.0
}

/// Returns the metric factor or a [`Error::Domain`].
pub(crate) fn checked_metric(lambda: f64, r2: f64) -> Result<f64> {
    let m = metric_factor(lambda, r2);
    if in_domain(lambda, r2) && m > 0.0 {
        Ok(m)
    } else {
        Err(Error::Domain { lambda, metric: m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State1D {
    pub x: f64,
    pub v: f64,
}

impl State1D {
    pub fn new(x: f64, v: f64) -> Self {
        Self { x, v }
    }

    pub fn new_checked(x: f64, v: f64, params: &DeformParams) -> Result<Self> {
        let s = Self { x, v };
        checked_metric(params.lambda(), s.radius_sq())?;
        Ok(s)
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.x, self.v]
    }

    pub fn from_array(a: [f64; 2]) -> Self {
        Self { x: a[0], v: a[1] }
    }
}

impl Configuration for State1D {
    fn radius_sq(&self) -> f64 {
        self.x * self.x
    }
}

/// Velocity-space state of a two-dimensional system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State2D {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl State2D {
    pub fn new(x: f64, y: f64, vx: f64, vy: f64) -> Self {
        Self { x, y, vx, vy }
    }

    pub fn new_checked(x: f64, y: f64, vx: f64, vy: f64, params: &DeformParams) -> Result<Self> {
        let s = Self { x, y, vx, vy };
        checked_metric(params.lambda(), s.radius_sq())?;
        Ok(s)
    }

    /// Angular momentum in velocity form, `x vy − y vx`.
    pub fn angular_momentum(&self) -> f64 {
        self.x * self.vy - self.y * self.vx
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.vx, self.vy]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self {
            x: a[0],
            y: a[1],
            vx: a[2],
            vy: a[3],
        }
    }
}

impl Configuration for State2D {
    fn radius_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Momentum-space state of a two-dimensional system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseState2D {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

impl PhaseState2D {
    pub fn new(x: f64, y: f64, px: f64, py: f64) -> Self {
        Self { x, y, px, py }
    }

    pub fn new_checked(x: f64, y: f64, px: f64, py: f64, params: &DeformParams) -> Result<Self> {
        let s = Self { x, y, px, py };
        checked_metric(params.lambda(), s.radius_sq())?;
        Ok(s)
    }

    /// `x py − y px`.
    pub fn angular_momentum(&self) -> f64 {
        self.x * self.py - self.y * self.px
    }

    /// Dilation momentum `x px + y py`.
    pub fn dilation(&self) -> f64 {
        self.x * self.px + self.y * self.py
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.px, self.py]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self {
            x: a[0],
            y: a[1],
            px: a[2],
            py: a[3],
        }
    }
}

impl Configuration for PhaseState2D {
    fn radius_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Frequencies `ω₁ = n₁ω₀`, `ω₂ = n₂ω₀`, stored with `gcd(n₁, n₂) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalFrequencies {
    n1: u32,
    n2: u32,
    omega0: f64,
}

impl RationalFrequencies {
    /// Normalizes to coprime `(n1, n2)`; the common factor is absorbed into `ω₀`
    /// so that `ω₁` and `ω₂` are unchanged.
    pub fn new(n1: u32, n2: u32, omega0: f64) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidParameter {
                name: "n1/n2",
                reason: format!("must be positive integers, got ({n1}, {n2})"),
            });
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega0",
                reason: format!("must be finite and positive, got {omega0}"),
            });
        }
        let g = gcd(n1, n2);
        Ok(Self {
            n1: n1 / g,
            n2: n2 / g,
            omega0: omega0 * g as f64,
        })
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega1(&self) -> f64 {
        self.n1 as f64 * self.omega0
    }

    pub fn omega2(&self) -> f64 {
        self.n2 as f64 * self.omega0
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Couplings of the two-dimensional reciprocal-Lagrangian oscillator with
/// rationally related frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonstdParams {
    pub k1: f64,
    pub k2: f64,
    pub freqs: RationalFrequencies,
}

impl NonstdParams {
    pub fn new(k1: f64, k2: f64, freqs: RationalFrequencies) -> Result<Self> {
        for (name, k) in [("k1", k1), ("k2", k2)] {
            if !k.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {k}"),
                });
            }
        }
        Ok(Self { k1, k2, freqs })
    }
}

/// Identifies which equations of motion produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemTag {
    Harmonic2d,
    Ml1d,
    Ml2dHamiltonian,
    Nonstd1dFree,
    Nonstd1dOmega,
    Nonstd2d,
    IsochronyPiecewise,
    Custom,
}

impl SystemTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SystemTag::Harmonic2d => "harmonic2d",
            SystemTag::Ml1d => "ml1d",
            SystemTag::Ml2dHamiltonian => "ml2d_hamiltonian",
            SystemTag::Nonstd1dFree => "nonstd1d_free",
            SystemTag::Nonstd1dOmega => "nonstd1d_omega",
            SystemTag::Nonstd2d => "nonstd2d",
            SystemTag::IsochronyPiecewise => "isochrony_piecewise",
            SystemTag::Custom => "custom",
        }
    }
}

impl fmt::Display for SystemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    ReachedT1,
    BoundaryEvent,
    StepUnderflow,
}

impl TerminationReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationReason::ReachedT1 => "reached_t1",
            TerminationReason::BoundaryEvent => "boundary_event",
            TerminationReason::StepUnderflow => "step_underflow",
        }
    }
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub system: SystemTag,
    pub parameters: Vec<(String, f64)>,
    pub config: IntegratorConfig,
    pub termination: TerminationReason,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Time-ordered samples of a state vector of dimension `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub meta: TrajectoryMeta,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &[f64; N])> {
        Some((*self.times.last()?, self.states.last()?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64; N])> {
        self.times.iter().copied().zip(self.states.iter())
    }
}
