//! Equations of motion, Legendre maps and closed-form solutions.
//!
//! Two families are covered: the λ-deformed oscillator with effective mass
//! `(1 + λx²)⁻¹` (1D in velocity form, 2D in Hamiltonian form) and the
//! oscillators whose Lagrangian is the reciprocal of a velocity-affine
//! function, `L = 1 / (α(x) v + U(x))`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{
    checked_metric, metric_factor, DeformParams, PhaseState2D, RationalFrequencies, State1D,
    State2D, SystemTag,
};

/// Autonomous vector field on an `N`-dimensional state.
///
/// Guards are scalar functions of the state that must keep the sign they
/// have at the initial state; an integrator stops with a boundary event
/// when a sign-normalized guard drops below its margin.
pub trait SystemRhs<const N: usize>: Send + Sync {
    fn tag(&self) -> SystemTag;

    fn eval(&self, y: &[f64; N]) -> Result<[f64; N]>;

    fn field_names(&self) -> [&'static str; N];

    fn guard_count(&self) -> usize {
        0
    }

    fn guard(&self, _index: usize, _y: &[f64; N]) -> f64 {
        f64::INFINITY
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        Vec::new()
    }
}

// ---------------------------------------------------------------------------
// Potentials for H(λ)

/// Potential `V(x, y)` entering `H(λ) = ½[p² + λ(x·p)²] + (α²/2) V`.
pub trait Potential2D: Send + Sync {
    fn value(&self, x: f64, y: f64) -> f64;

    /// Defaults to fourth-order central differences.
    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        [
            central_derivative(|t| self.value(t, y), x),
            central_derivative(|t| self.value(x, t), y),
        ]
    }

    fn name(&self) -> &'static str {
        "custom"
    }
}

/// Fourth-order central difference with step `eps^(1/5)·max(1, |x|)`.
pub fn central_derivative(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = f64::EPSILON.powf(0.2) * x.abs().max(1.0);
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// `V = r² / (1 + λ r²)`, the potential of the deformed oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlPotential {
    pub lambda: f64,
}

impl Potential2D for MlPotential {
    fn value(&self, x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        r2 / metric_factor(self.lambda, r2)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let m = metric_factor(self.lambda, x * x + y * y);
        let m2 = m * m;
        [2.0 * x / m2, 2.0 * y / m2]
    }

    fn name(&self) -> &'static str {
        "ml"
    }
}

/// `V = r²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IsotropicHarmonic;

impl Potential2D for IsotropicHarmonic {
    fn value(&self, x: f64, y: f64) -> f64 {
        x * x + y * y
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        [2.0 * x, 2.0 * y]
    }

    fn name(&self) -> &'static str {
        "harmonic"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FreePotential;

impl Potential2D for FreePotential {
    fn value(&self, _x: f64, _y: f64) -> f64 {
        0.0
    }

    fn gradient(&self, _x: f64, _y: f64) -> [f64; 2] {
        [0.0, 0.0]
    }

    fn name(&self) -> &'static str {
        "free"
    }
}

/// User potential given as a closure; gradient by central differences.
pub struct FnPotential<F>(pub F);

impl<F> Potential2D for FnPotential<F>
where
    F: Fn(f64, f64) -> f64 + Send + Sync,
{
    fn value(&self, x: f64, y: f64) -> f64 {
        (self.0)(x, y)
    }
}

// ---------------------------------------------------------------------------
// Deformed oscillator, 1D

/// `ẍ = x(λv² − α²)/(1 + λx²)`.
pub fn ml1d_rhs(s: &State1D, p: &DeformParams) -> Result<(f64, f64)> {
    let m = checked_metric(p.lambda(), s.x * s.x)?;
    let a2 = p.alpha() * p.alpha();
    Ok((s.v, s.x * (p.lambda() * s.v * s.v - a2) / m))
}

/// Angular frequency `α / sqrt(1 + λA²)` of the oscillation with amplitude `A`.
pub fn ml1d_frequency(amplitude: f64, p: &DeformParams) -> Result<f64> {
    let m = metric_factor(p.lambda(), amplitude * amplitude);
    if !(m > 0.0 && m.is_finite()) || (p.lambda() < 0.0 && m > 1.0) {
        return Err(Error::Amplitude {
            amplitude,
            lambda: p.lambda(),
        });
    }
    Ok(p.alpha() / m.sqrt())
}

/// `x = A cos(ωt + φ)` with `ω² (1 + λA²) = α²`.
pub fn ml1d_exact(t: f64, amplitude: f64, phase: f64, p: &DeformParams) -> Result<State1D> {
    let omega = ml1d_frequency(amplitude, p)?;
    let theta = omega * t + phase;
    Ok(State1D {
        x: amplitude * theta.cos(),
        v: -amplitude * omega * theta.sin(),
    })
}

/// Conserved energy `½(v² + α²x²)/(1 + λx²)`.
pub fn ml1d_energy(s: &State1D, p: &DeformParams) -> Result<f64> {
    let m = checked_metric(p.lambda(), s.x * s.x)?;
    Ok(0.5 * (s.v * s.v + p.alpha() * p.alpha() * s.x * s.x) / m)
}

/// Harmonic flow `ẍ = −α²x`, the `λ = 0` member of [`ml1d_rhs`].
pub fn harmonic1d_rhs(s: &State1D, alpha: f64) -> (f64, f64) {
    (s.v, -(alpha * alpha) * s.x)
}

// ---------------------------------------------------------------------------
// Deformed oscillator, 2D

/// Velocities to canonical momenta.
pub fn legendre_2d(s: &State2D, lambda: f64) -> Result<PhaseState2D> {
    let r2 = s.x * s.x + s.y * s.y;
    let m = checked_metric(lambda, r2)?;
    let xy = lambda * s.x * s.y;
    Ok(PhaseState2D {
        x: s.x,
        y: s.y,
        px: ((1.0 + lambda * s.y * s.y) * s.vx - xy * s.vy) / m,
        py: ((1.0 + lambda * s.x * s.x) * s.vy - xy * s.vx) / m,
    })
}

/// Canonical momenta to velocities, `v = ∂H/∂p`.
pub fn inverse_legendre_2d(s: &PhaseState2D, lambda: f64) -> Result<State2D> {
    checked_metric(lambda, s.x * s.x + s.y * s.y)?;
    let d = s.dilation();
    Ok(State2D {
        x: s.x,
        y: s.y,
        vx: s.px + lambda * s.x * d,
        vy: s.py + lambda * s.y * d,
    })
}

/// `H(λ) = ½[px² + py² + λ(x px + y py)²] + (α²/2) V(x, y)`.
pub fn ml2d_hamiltonian(s: &PhaseState2D, p: &DeformParams, v: &dyn Potential2D) -> Result<f64> {
    checked_metric(p.lambda(), s.x * s.x + s.y * s.y)?;
    let d = s.dilation();
    let kinetic = 0.5 * (s.px * s.px + s.py * s.py + p.lambda() * d * d);
    Ok(kinetic + 0.5 * p.alpha() * p.alpha() * v.value(s.x, s.y))
}

/// Hamilton's equations of `H(λ)`; returns `(ẋ, ẏ, ṗx, ṗy)`.
pub fn ml2d_hamiltonian_rhs(
    s: &PhaseState2D,
    p: &DeformParams,
    v: &dyn Potential2D,
) -> Result<[f64; 4]> {
    checked_metric(p.lambda(), s.x * s.x + s.y * s.y)?;
    let lambda = p.lambda();
    let d = s.dilation();
    let half_a2 = 0.5 * p.alpha() * p.alpha();
    let [gx, gy] = v.gradient(s.x, s.y);
    Ok([
        s.px + lambda * s.x * d,
        s.py + lambda * s.y * d,
        -lambda * d * s.px - half_a2 * gx,
        -lambda * d * s.py - half_a2 * gy,
    ])
}

/// Anisotropic harmonic oscillator with `ω_i = n_i ω₀`; returns `(ẋ, ẏ, ṗx, ṗy)`.
pub fn harmonic2d_rhs(s: &PhaseState2D, freqs: &RationalFrequencies) -> [f64; 4] {
    let w1 = freqs.omega1();
    let w2 = freqs.omega2();
    [s.px, s.py, -(w1 * w1) * s.x, -(w2 * w2) * s.y]
}

/// Per-axis energies `E_x = ½(px² + ω₁²x²)`, `E_y = ½(py² + ω₂²y²)`.
pub fn harmonic2d_energies(s: &PhaseState2D, freqs: &RationalFrequencies) -> (f64, f64) {
    let w1 = freqs.omega1();
    let w2 = freqs.omega2();
    (
        0.5 * (s.px * s.px + w1 * w1 * s.x * s.x),
        0.5 * (s.py * s.py + w2 * w2 * s.y * s.y),
    )
}

// ---------------------------------------------------------------------------
// Reciprocal Lagrangians L = 1/(α(x) v + U(x))

/// Smooth scalar coefficient with a known derivative.
pub trait Coefficient: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// `c0 + c1 x + c2 x²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Quadratic {
    pub fn new(c0: f64, c1: f64, c2: f64) -> Self {
        Self { c0, c1, c2 }
    }

    pub fn constant(c0: f64) -> Self {
        Self::new(c0, 0.0, 0.0)
    }
}

impl Coefficient for Quadratic {
    fn value(&self, x: f64) -> f64 {
        self.c0 + x * (self.c1 + x * self.c2)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.c1 + 2.0 * self.c2 * x
    }
}

/// `ẍ = −[α α′ v² + (3/2) α U′ v + ½ U U′] / α²`.
pub fn nonstd1d_rhs(
    s: &State1D,
    alpha_fn: &dyn Coefficient,
    u_fn: &dyn Coefficient,
) -> Result<(f64, f64)> {
    let a = alpha_fn.value(s.x);
    if a == 0.0 || !a.is_finite() {
        return Err(Error::SingularCoefficient { x: s.x });
    }
    let da = alpha_fn.derivative(s.x);
    let u = u_fn.value(s.x);
    let du = u_fn.derivative(s.x);
    let num = a * da * s.v * s.v + 1.5 * a * du * s.v + 0.5 * u * du;
    Ok((s.v, -num / (a * a)))
}

/// `E_L = −(2αv + U) / (αv + U)²`.
pub fn energy_nonstd(s: &State1D, alpha_fn: &dyn Coefficient, u_fn: &dyn Coefficient) -> Result<f64> {
    let av = alpha_fn.value(s.x) * s.v;
    let u = u_fn.value(s.x);
    let phi = level_set_value(av, u, "alpha*v + U")?;
    Ok(-(2.0 * av + u) / (phi * phi))
}

/// Checks `a + b` against the zero level set, relative to the size of the terms.
pub(crate) fn level_set_value(a: f64, b: f64, what: &'static str) -> Result<f64> {
    let phi = a + b;
    if !phi.is_finite() || phi.abs() <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) {
        return Err(Error::SingularLevelSet { what, value: phi });
    }
    Ok(phi)
}

/// Coefficients `α = 1`, `U = k x²` of `L = 1/(v + kx²)`.
pub fn free_coefficients(k: f64) -> (Quadratic, Quadratic) {
    (Quadratic::constant(1.0), Quadratic::new(0.0, 0.0, k))
}

/// Coefficients `α = k`, `U = k²x² + ω²` of `L = 1/(k v + k²x² + ω²)`.
pub fn omega_coefficients(k: f64, omega: f64) -> (Quadratic, Quadratic) {
    (Quadratic::constant(k), Quadratic::new(omega * omega, 0.0, k * k))
}

/// `x(t) = 2t / (kt² − E)` for `L = 1/(v + kx²)`.
pub fn nonstd1d_exact_free(t: f64, energy: f64, k: f64) -> Result<State1D> {
    let kt2 = k * t * t;
    let denom = kt2 - energy;
    if denom.abs() <= 4.0 * f64::EPSILON * (kt2.abs() + energy.abs()) {
        return Err(Error::Pole { t });
    }
    Ok(State1D {
        x: 2.0 * t / denom,
        v: -2.0 * (kt2 + energy) / (denom * denom),
    })
}

/// First pole of [`nonstd1d_exact_free`] in `[t0, t1]`, if any.
pub fn nonstd1d_free_pole(t0: f64, t1: f64, energy: f64, k: f64) -> Option<f64> {
    if k == 0.0 {
        return (energy == 0.0).then_some(t0);
    }
    let ratio = energy / k;
    if ratio < 0.0 {
        return None;
    }
    let r = ratio.sqrt();
    [-r, r].into_iter().find(|&tp| tp >= t0 && tp <= t1)
}

/// `x(t) = ω√E sin(ωt+φ) / (1 − k√E cos(ωt+φ))` for `L = 1/(k v + k²x² + ω²)`.
pub fn nonstd1d_exact_omega(
    t: f64,
    energy: f64,
    phase: f64,
    k: f64,
    omega: f64,
) -> Result<State1D> {
    if !(energy > 0.0) {
        return Err(Error::InvalidParameter {
            name: "E",
            reason: format!("must be positive, got {energy}"),
        });
    }
    let s = energy.sqrt();
    let theta = omega * t + phase;
    let (sin, cos) = theta.sin_cos();
    let ksc = k * s * cos;
    let denom = 1.0 - ksc;
    if denom.abs() <= 4.0 * f64::EPSILON * (1.0 + ksc.abs()) {
        return Err(Error::Pole { t });
    }
    Ok(State1D {
        x: omega * s * sin / denom,
        v: omega * omega * s * (cos - k * s) / (denom * denom),
    })
}

/// Whether [`nonstd1d_exact_omega`] has poles at all (it does iff `|k|√E ≥ 1`).
pub fn nonstd1d_omega_has_poles(energy: f64, k: f64) -> bool {
    k.abs() * energy.sqrt() >= 1.0
}

// ---------------------------------------------------------------------------
// SystemRhs implementations

/// 1D deformed oscillator, state `[x, v]`.
#[derive(Debug, Clone, Copy)]
pub struct Ml1dSystem {
    pub params: DeformParams,
}

impl SystemRhs<2> for Ml1dSystem {
    fn tag(&self) -> SystemTag {
        SystemTag::Ml1d
    }

    fn eval(&self, y: &[f64; 2]) -> Result<[f64; 2]> {
        let (dx, dv) = ml1d_rhs(&State1D::from_array(*y), &self.params)?;
        Ok([dx, dv])
    }

    fn field_names(&self) -> [&'static str; 2] {
        ["x", "v"]
    }

    fn guard_count(&self) -> usize {
        usize::from(self.params.lambda() < 0.0)
    }

    fn guard(&self, _index: usize, y: &[f64; 2]) -> f64 {
        metric_factor(self.params.lambda(), y[0] * y[0])
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        vec![
            ("lambda".into(), self.params.lambda()),
            ("alpha".into(), self.params.alpha()),
        ]
    }
}

/// 2D deformed oscillator in phase space, state `[x, y, px, py]`.
#[derive(Clone)]
pub struct Ml2dSystem {
    pub params: DeformParams,
    pub potential: Arc<dyn Potential2D>,
}

impl Ml2dSystem {
    pub fn new(params: DeformParams, potential: Arc<dyn Potential2D>) -> Self {
        Self { params, potential }
    }

    /// The deformed oscillator proper, `V = r²/(1 + λr²)`.
    pub fn oscillator(params: DeformParams) -> Self {
        Self::new(
            params,
            Arc::new(MlPotential {
                lambda: params.lambda(),
            }),
        )
    }
}

impl SystemRhs<4> for Ml2dSystem {
    fn tag(&self) -> SystemTag {
        SystemTag::Ml2dHamiltonian
    }

    fn eval(&self, y: &[f64; 4]) -> Result<[f64; 4]> {
        ml2d_hamiltonian_rhs(&PhaseState2D::from_array(*y), &self.params, &*self.potential)
    }

    fn field_names(&self) -> [&'static str; 4] {
        ["x", "y", "px", "py"]
    }

    fn guard_count(&self) -> usize {
        usize::from(self.params.lambda() < 0.0)
    }

    fn guard(&self, _index: usize, y: &[f64; 4]) -> f64 {
        metric_factor(self.params.lambda(), y[0] * y[0] + y[1] * y[1])
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        vec![
            ("lambda".into(), self.params.lambda()),
            ("alpha".into(), self.params.alpha()),
        ]
    }
}

/// Anisotropic harmonic oscillator, state `[x, y, px, py]`.
#[derive(Debug, Clone, Copy)]
pub struct Harmonic2dSystem {
    pub freqs: RationalFrequencies,
}

impl SystemRhs<4> for Harmonic2dSystem {
    fn tag(&self) -> SystemTag {
        SystemTag::Harmonic2d
    }

    fn eval(&self, y: &[f64; 4]) -> Result<[f64; 4]> {
        Ok(harmonic2d_rhs(&PhaseState2D::from_array(*y), &self.freqs))
    }

    fn field_names(&self) -> [&'static str; 4] {
        ["x", "y", "px", "py"]
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        vec![
            ("n1".into(), self.freqs.n1() as f64),
            ("n2".into(), self.freqs.n2() as f64),
            ("omega0".into(), self.freqs.omega0()),
        ]
    }
}

/// One degree of freedom with `L = 1/(α(x) v + U(x))`, state `[x, v]`.
///
/// Guards: `α(x) v + U(x)` (the singular level set) and `α(x)`.
#[derive(Clone)]
pub struct Nonstd1dSystem {
    pub alpha: Arc<dyn Coefficient>,
    pub u: Arc<dyn Coefficient>,
    tag: SystemTag,
    params: Vec<(String, f64)>,
}

impl Nonstd1dSystem {
    pub fn new(alpha: Arc<dyn Coefficient>, u: Arc<dyn Coefficient>) -> Self {
        Self {
            alpha,
            u,
            tag: SystemTag::Custom,
            params: Vec::new(),
        }
    }

    pub fn free(k: f64) -> Self {
        let (a, u) = free_coefficients(k);
        Self {
            alpha: Arc::new(a),
            u: Arc::new(u),
            tag: SystemTag::Nonstd1dFree,
            params: vec![("k".into(), k)],
        }
    }

    pub fn omega(k: f64, omega: f64) -> Self {
        let (a, u) = omega_coefficients(k, omega);
        Self {
            alpha: Arc::new(a),
            u: Arc::new(u),
            tag: SystemTag::Nonstd1dOmega,
            params: vec![("k".into(), k), ("omega".into(), omega)],
        }
    }

    pub fn energy(&self, s: &State1D) -> Result<f64> {
        energy_nonstd(s, &*self.alpha, &*self.u)
    }

    fn rhs(&self, x: f64, v: f64) -> Result<(f64, f64)> {
        nonstd1d_rhs(&State1D { x, v }, &*self.alpha, &*self.u)
    }

    fn level(&self, x: f64, v: f64) -> f64 {
        self.alpha.value(x) * v + self.u.value(x)
    }
}

impl SystemRhs<2> for Nonstd1dSystem {
    fn tag(&self) -> SystemTag {
        self.tag
    }

    fn eval(&self, y: &[f64; 2]) -> Result<[f64; 2]> {
        let (dx, dv) = self.rhs(y[0], y[1])?;
        Ok([dx, dv])
    }

    fn field_names(&self) -> [&'static str; 2] {
        ["x", "v"]
    }

    fn guard_count(&self) -> usize {
        2
    }

    fn guard(&self, index: usize, y: &[f64; 2]) -> f64 {
        match index {
            0 => self.level(y[0], y[1]),
            _ => self.alpha.value(y[0]),
        }
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        self.params.clone()
    }
}

/// Two uncoupled reciprocal-Lagrangian degrees of freedom, state `[x, y, vx, vy]`.
#[derive(Clone)]
pub struct Nonstd2dSystem {
    pub x_axis: Nonstd1dSystem,
    pub y_axis: Nonstd1dSystem,
}

impl Nonstd2dSystem {
    /// `L = 1/(vx + k1 x²) + 1/(vy + k2 y²)`.
    pub fn free(k1: f64, k2: f64) -> Self {
        Self {
            x_axis: Nonstd1dSystem::free(k1),
            y_axis: Nonstd1dSystem::free(k2),
        }
    }

    /// Sum of two `1/(k_i v + k_i² x² + n_i² ω₀²)` Lagrangians.
    pub fn rational(k1: f64, k2: f64, freqs: &RationalFrequencies) -> Self {
        Self {
            x_axis: Nonstd1dSystem::omega(k1, freqs.omega1()),
            y_axis: Nonstd1dSystem::omega(k2, freqs.omega2()),
        }
    }
}

impl SystemRhs<4> for Nonstd2dSystem {
    fn tag(&self) -> SystemTag {
        SystemTag::Nonstd2d
    }

    fn eval(&self, y: &[f64; 4]) -> Result<[f64; 4]> {
        let (dx, dvx) = self.x_axis.rhs(y[0], y[2])?;
        let (dy, dvy) = self.y_axis.rhs(y[1], y[3])?;
        Ok([dx, dy, dvx, dvy])
    }

    fn field_names(&self) -> [&'static str; 4] {
        ["x", "y", "vx", "vy"]
    }

    fn guard_count(&self) -> usize {
        4
    }

    fn guard(&self, index: usize, y: &[f64; 4]) -> f64 {
        match index {
            0 => self.x_axis.level(y[0], y[2]),
            1 => self.y_axis.level(y[1], y[3]),
            2 => self.x_axis.alpha.value(y[0]),
            _ => self.y_axis.alpha.value(y[1]),
        }
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        let mut out: Vec<_> = self
            .x_axis
            .params
            .iter()
            .map(|(k, v)| (format!("{k}_x"), *v))
            .collect();
        out.extend(self.y_axis.params.iter().map(|(k, v)| (format!("{k}_y"), *v)));
        out
    }
}
