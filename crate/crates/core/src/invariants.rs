//! Constants of motion, drift measurement and the symmetry algebra.

use num_complex::Complex64;

use crate::dynamics::{inverse_legendre_2d, level_set_value};
use crate::error::Result;
use crate::model::{
    checked_metric, DeformParams, NonstdParams, PhaseState2D, RationalFrequencies, State2D,
    Trajectory,
};

/// Floor on the reference magnitude used for relative drift.
pub const REL_DRIFT_FLOOR: f64 = 1e-12;

/// The complex functions `K₁`, `K₂` of the 2D deformed oscillator
/// (velocity-space form). Each evolves as `dK/dt = iα/(1+λr²) K`.
pub fn eval_k(s: &State2D, p: &DeformParams) -> Result<(Complex64, Complex64)> {
    let lambda = p.lambda();
    let m = checked_metric(lambda, s.x * s.x + s.y * s.y)?;
    let root = m.sqrt();
    let j = s.angular_momentum();
    let p1 = (s.vx - lambda * j * s.y) / root;
    let p2 = (s.vy + lambda * j * s.x) / root;
    let a = p.alpha();
    Ok((
        Complex64::new(p1, a * s.x / root),
        Complex64::new(p2, a * s.y / root),
    ))
}

/// [`eval_k`] on a momentum-space state.
pub fn eval_k_phase(s: &PhaseState2D, p: &DeformParams) -> Result<(Complex64, Complex64)> {
    eval_k(&inverse_legendre_2d(s, p.lambda())?, p)
}

/// `I₁ = |K₁|²`, `I₂ = |K₂|²`, `I₃ = α (x vy − y vx)`.
pub fn eval_i123(s: &State2D, p: &DeformParams) -> Result<(f64, f64, f64)> {
    let (k1, k2) = eval_k(s, p)?;
    Ok((k1.norm_sqr(), k2.norm_sqr(), p.alpha() * s.angular_momentum()))
}

pub fn eval_i123_phase(s: &PhaseState2D, p: &DeformParams) -> Result<(f64, f64, f64)> {
    eval_i123(&inverse_legendre_2d(s, p.lambda())?, p)
}

/// `J = K_x^{n₂} (K_y*)^{n₁}` with `K_x = px + i n₁ω₀ x`, `K_y = py + i n₂ω₀ y`.
pub fn eval_harmonic_j(s: &PhaseState2D, freqs: &RationalFrequencies) -> Complex64 {
    let kx = Complex64::new(s.px, freqs.omega1() * s.x);
    let ky = Complex64::new(s.py, freqs.omega2() * s.y);
    kx.powu(freqs.n2()) * ky.conj().powu(freqs.n1())
}

/// First integrals of `L = 1/(vx + k₁x²) + 1/(vy + k₂y²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonstdIntegrals {
    pub e1: f64,
    pub e2: f64,
    pub i3: f64,
    pub i4: f64,
}

pub fn eval_nonstd_integrals(s: &State2D, k1: f64, k2: f64) -> Result<NonstdIntegrals> {
    let ux = k1 * s.x * s.x;
    let uy = k2 * s.y * s.y;
    let a = level_set_value(s.vx, ux, "vx + k1*x^2")?;
    let b = level_set_value(s.vy, uy, "vy + k2*y^2")?;
    Ok(NonstdIntegrals {
        e1: -(2.0 * s.vx + ux) / (a * a),
        e2: -(2.0 * s.vy + uy) / (b * b),
        i3: s.x / a - s.y / b,
        i4: k2 / a + k1 / b - k1 * k2 * s.x * s.y / (a * b),
    })
}

/// The pair `𝕂₁`, `𝕂₂` of the rational-frequency reciprocal-Lagrangian oscillator.
pub fn eval_nonstd_k_pair(s: &State2D, p: &NonstdParams) -> Result<(Complex64, Complex64)> {
    let one = |x: f64, v: f64, k: f64, w: f64, what| -> Result<Complex64> {
        let den = level_set_value(k * v, k * k * x * x + w * w, what)?;
        Ok(Complex64::new(v + k * x * x, w * x) / den)
    };
    Ok((
        one(s.x, s.vx, p.k1, p.freqs.omega1(), "k1*vx + k1^2*x^2 + w1^2")?,
        one(s.y, s.vy, p.k2, p.freqs.omega2(), "k2*vy + k2^2*y^2 + w2^2")?,
    ))
}

/// `𝕂₁^{n₂} (𝕂₂*)^{n₁}`.
pub fn eval_nonstd_k(s: &State2D, p: &NonstdParams) -> Result<Complex64> {
    let (k1, k2) = eval_nonstd_k_pair(s, p)?;
    Ok(k1.powu(p.freqs.n2()) * k2.conj().powu(p.freqs.n1()))
}

// ---------------------------------------------------------------------------
// Drift

/// Scalar or complex invariant value.
pub trait InvariantValue: Copy {
    fn distance(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
    fn real_part(&self) -> f64;
}

impl InvariantValue for f64 {
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn real_part(&self) -> f64 {
        *self
    }
}

impl InvariantValue for Complex64 {
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn real_part(&self) -> f64 {
        self.re
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub name: String,
    /// Value at the first sample that evaluated successfully (real part for complex invariants).
    pub initial: f64,
    pub initial_magnitude: f64,
    pub max_abs_drift: f64,
    /// `max_abs_drift / max(|initial|, REL_DRIFT_FLOOR)`.
    pub max_rel_drift: f64,
    pub samples: usize,
    /// Samples where the evaluator failed, with the error message.
    pub failures: Vec<(usize, String)>,
}

impl InvariantReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty() && self.samples > 0
    }
}

/// Evaluates an invariant along every sample of a trajectory.
pub fn drift_report<V, F, const N: usize>(
    name: impl Into<String>,
    traj: &Trajectory<N>,
    evaluator: F,
) -> InvariantReport
where
    V: InvariantValue,
    F: Fn(&[f64; N]) -> Result<V>,
{
    drift_over(name, traj.states.iter(), evaluator)
}

/// [`drift_report`] over an arbitrary sequence of states.
pub fn drift_over<'a, V, F, I, const N: usize>(
    name: impl Into<String>,
    states: I,
    evaluator: F,
) -> InvariantReport
where
    V: InvariantValue,
    F: Fn(&[f64; N]) -> Result<V>,
    I: IntoIterator<Item = &'a [f64; N]>,
{
    let mut first: Option<V> = None;
    let mut max_abs: f64 = 0.0;
    let mut samples = 0;
    let mut failures = Vec::new();
    for (i, y) in states.into_iter().enumerate() {
        samples += 1;
        match evaluator(y) {
            Ok(v) => match &first {
                None => first = Some(v),
                Some(v0) => {
                    let d = v.distance(v0);
                    max_abs = if d.is_nan() { f64::INFINITY } else { max_abs.max(d) };
                }
            },
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    let (initial, mag) = first
        .map(|v| (v.real_part(), v.magnitude()))
        .unwrap_or((f64::NAN, f64::NAN));
    InvariantReport {
        name: name.into(),
        initial,
        initial_magnitude: mag,
        max_abs_drift: max_abs,
        max_rel_drift: max_abs / mag.max(REL_DRIFT_FLOOR),
        samples,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Vector-field algebra

/// A planar vector field given with its analytic Jacobian `∂_j X^i`.
#[derive(Debug, Clone, Copy)]
pub struct FieldAt {
    pub value: [f64; 2],
    pub jacobian: [[f64; 2]; 2],
}

/// `X₁ = √(1+λr²) ∂x`, `X₂ = √(1+λr²) ∂y`, `X_J = x ∂y − y ∂x` at a point.
pub fn symmetry_fields(lambda: f64, x: f64, y: f64) -> Result<[FieldAt; 3]> {
    let s = checked_metric(lambda, x * x + y * y)?.sqrt();
    let ds = [lambda * x / s, lambda * y / s];
    Ok([
        FieldAt {
            value: [s, 0.0],
            jacobian: [ds, [0.0, 0.0]],
        },
        FieldAt {
            value: [0.0, s],
            jacobian: [[0.0, 0.0], ds],
        },
        FieldAt {
            value: [-y, x],
            jacobian: [[0.0, -1.0], [1.0, 0.0]],
        },
    ])
}

/// `[X, Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i`.
pub fn lie_bracket(a: &FieldAt, b: &FieldAt) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..2 {
            *o += a.value[j] * b.jacobian[i][j] - b.value[j] * a.jacobian[i][j];
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketResiduals {
    /// `[X₁, X₂] − λ X_J`
    pub r12: [f64; 2],
    /// `[X₁, X_J] − X₂`
    pub r1j: [f64; 2],
    /// `[X₂, X_J] + X₁`
    pub r2j: [f64; 2],
}

impl BracketResiduals {
    pub fn norms(&self) -> [f64; 3] {
        let n = |v: [f64; 2]| v[0].hypot(v[1]);
        [n(self.r12), n(self.r1j), n(self.r2j)]
    }

    pub fn max_norm(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }
}

pub fn lie_bracket_residual(lambda: f64, x: f64, y: f64) -> Result<BracketResiduals> {
    let [x1, x2, xj] = symmetry_fields(lambda, x, y)?;
    let b12 = lie_bracket(&x1, &x2);
    let b1j = lie_bracket(&x1, &xj);
    let b2j = lie_bracket(&x2, &xj);
    Ok(BracketResiduals {
        r12: [b12[0] - lambda * xj.value[0], b12[1] - lambda * xj.value[1]],
        r1j: [b1j[0] - x2.value[0], b1j[1] - x2.value[1]],
        r2j: [b2j[0] + x1.value[0], b2j[1] + x1.value[1]],
    })
}

// ---------------------------------------------------------------------------
// Poisson brackets

fn partial<F>(f: &F, s: &PhaseState2D, index: usize, h: f64) -> Result<f64>
where
    F: Fn(&PhaseState2D) -> Result<f64> + ?Sized,
{
    let base = s.to_array();
    let at = |offset: f64| -> Result<f64> {
        let mut a = base;
        a[index] += offset;
        f(&PhaseState2D::from_array(a))
    };
    Ok((at(-2.0 * h)? - 8.0 * at(-h)? + 8.0 * at(h)? - at(2.0 * h)?) / (12.0 * h))
}

/// `{f, g}` on the canonical pairs `(x, px)`, `(y, py)` by fourth-order central
/// differences with step `h`.
pub fn poisson_bracket<F, G>(f: &F, g: &G, s: &PhaseState2D, h: f64) -> Result<f64>
where
    F: Fn(&PhaseState2D) -> Result<f64> + ?Sized,
    G: Fn(&PhaseState2D) -> Result<f64> + ?Sized,
{
    let mut acc = 0.0;
    for (q, p) in [(0, 2), (1, 3)] {
        acc += partial(f, s, q, h)? * partial(g, s, p, h)? - partial(f, s, p, h)? * partial(g, s, q, h)?;
    }
    Ok(acc)
}
