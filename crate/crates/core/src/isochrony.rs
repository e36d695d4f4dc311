//! Oscillation period as a function of energy for `H = ½v² + U(x)`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use crate::dynamics::{central_derivative, SystemRhs};
use crate::error::{Error, Result};
use crate::integrate::{find_crossings, CrossingDirection, IntegratorConfig};
use crate::model::SystemTag;
use crate::quadrature::adaptive_gauss_legendre;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Relative accuracy requested from the period quadrature.
pub const PERIOD_REL_TOL: f64 = 1e-12;

const DEFAULT_SEARCH_BOUND: f64 = 1e8;
const MONOTONE_SAMPLES: usize = 200;

/// `U(x) = U₁(x)` for `x < 0` and `U₂(x)` for `x ≥ 0`, with `U(0) = 0`.
#[derive(Clone)]
pub struct PiecewisePotential {
    u1: ScalarFn,
    u2: ScalarFn,
    du1: Option<ScalarFn>,
    du2: Option<ScalarFn>,
    search_bound: f64,
    label: String,
    frequencies: Option<(f64, f64)>,
}

impl std::fmt::Debug for PiecewisePotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PiecewisePotential")
            .field("label", &self.label)
            .field("search_bound", &self.search_bound)
            .field("frequencies", &self.frequencies)
            .finish()
    }
}

impl PiecewisePotential {
    /// Checks `U(0) = 0` and monotonicity of each branch on a log-spaced
    /// sample of `(0, search_bound]`.
    pub fn new(label: impl Into<String>, u1: ScalarFn, u2: ScalarFn, search_bound: f64) -> Result<Self> {
        if !(search_bound > 0.0 && search_bound.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "search_bound",
                reason: format!("must be finite and positive, got {search_bound}"),
            });
        }
        for (side, f) in [("left", &u1), ("right", &u2)] {
            let at0 = f(0.0);
            if at0.abs() > 1e-14 {
                return Err(Error::InvalidParameter {
                    name: "potential",
                    reason: format!("{side} branch has U(0) = {at0}, expected 0"),
                });
            }
        }
        let lo = (search_bound * 1e-12).ln();
        let hi = search_bound.ln();
        let mut prev = (0.0, 0.0);
        for i in 0..=MONOTONE_SAMPLES {
            let s = (lo + (hi - lo) * i as f64 / MONOTONE_SAMPLES as f64).exp();
            let cur = (u1(-s), u2(s));
            if !(cur.0 >= prev.0 && cur.1 >= prev.1) {
                return Err(Error::InvalidParameter {
                    name: "potential",
                    reason: format!("not monotone away from the origin near |x| = {s:e}"),
                });
            }
            prev = cur;
        }
        Ok(Self {
            u1,
            u2,
            du1: None,
            du2: None,
            search_bound,
            label: label.into(),
            frequencies: None,
        })
    }

    pub fn with_derivatives(mut self, du1: ScalarFn, du2: ScalarFn) -> Self {
        self.du1 = Some(du1);
        self.du2 = Some(du2);
        self
    }

    /// `U₁ = ω₁²x²`, `U₂ = ω₂²x²`.
    pub fn quadratic(omega1: f64, omega2: f64) -> Result<Self> {
        for (name, w) in [("omega1", omega1), ("omega2", omega2)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and positive, got {w}"),
                });
            }
        }
        let (a, b) = (omega1 * omega1, omega2 * omega2);
        let mut pot = Self::new(
            "piecewise_quadratic",
            Arc::new(move |x| a * x * x),
            Arc::new(move |x| b * x * x),
            DEFAULT_SEARCH_BOUND,
        )?
        .with_derivatives(Arc::new(move |x| 2.0 * a * x), Arc::new(move |x| 2.0 * b * x));
        pot.frequencies = Some((omega1, omega2));
        Ok(pot)
    }

    /// The same even function on both sides.
    pub fn symmetric(label: impl Into<String>, u: ScalarFn) -> Result<Self> {
        let left = u.clone();
        Self::new(label, left, u, DEFAULT_SEARCH_BOUND)
    }

    /// `U = c·x^p` on both sides (`|x|^p`).
    pub fn power(c: f64, p: f64) -> Result<Self> {
        if !(c > 0.0 && p > 0.0) {
            return Err(Error::InvalidParameter {
                name: "power",
                reason: format!("coefficient {c} and exponent {p} must be positive"),
            });
        }
        let u: ScalarFn = Arc::new(move |x: f64| c * x.abs().powf(p));
        let du: ScalarFn = Arc::new(move |x: f64| c * p * x.signum() * x.abs().powf(p - 1.0));
        Ok(Self::new(format!("power_{p}"), u.clone(), u, DEFAULT_SEARCH_BOUND)?
            .with_derivatives(du.clone(), du))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `(ω₁, ω₂)` for the piecewise-quadratic family.
    pub fn frequencies(&self) -> Option<(f64, f64)> {
        self.frequencies
    }

    pub fn value(&self, x: f64) -> f64 {
        if x < 0.0 {
            (self.u1)(x)
        } else {
            (self.u2)(x)
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (f, df) = if x < 0.0 {
            (&self.u1, &self.du1)
        } else {
            (&self.u2, &self.du2)
        };
        match df {
            Some(d) => d(x),
            None => central_derivative(|t| f(t), x),
        }
    }
}

fn check_energy(energy: f64) -> Result<()> {
    if energy > 0.0 && energy.is_finite() {
        Ok(())
    } else {
        Err(Error::EnergyRange {
            energy,
            reason: "energy must be finite and positive",
        })
    }
}

/// Outermost point on one side with `U = E`, bisected to full precision.
fn turning_point(f: &ScalarFn, sign: f64, energy: f64, bound: f64) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = 1.0_f64.min(bound);
    while f(sign * hi) < energy {
        if hi >= bound {
            return Err(Error::EnergyRange {
                energy,
                reason: "potential stays below the energy within the search bound",
            });
        }
        lo = hi;
        hi = (2.0 * hi).min(bound);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(sign * mid) < energy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(sign * 0.5 * (lo + hi))
}

pub fn turning_points(pot: &PiecewisePotential, energy: f64) -> Result<(f64, f64)> {
    check_energy(energy)?;
    let left = turning_point(&pot.u1, -1.0, energy, pot.search_bound)?;
    let right = turning_point(&pot.u2, 1.0, energy, pot.search_bound)?;
    Ok((left, right))
}

/// `T(E) = √2 ∫ dx/√(E − U)` between the turning points. Each side uses
/// `x = x_turn ∓ s²`, which makes the integrand bounded.
pub fn period(pot: &PiecewisePotential, energy: f64) -> Result<f64> {
    let (xl, xr) = turning_points(pot, energy)?;
    let side = |f: &ScalarFn, x_turn: f64| -> Result<f64> {
        let dir = x_turn.signum();
        let integrand = |s: f64| {
            let x = x_turn - dir * s * s;
            let gap = energy - f(x);
            if gap > 0.0 {
                2.0 * s / gap.sqrt()
            } else {
                0.0
            }
        };
        adaptive_gauss_legendre(&integrand, 0.0, x_turn.abs().sqrt(), PERIOD_REL_TOL)
    };
    let t = SQRT_2 * (side(&pot.u1, xl)? + side(&pot.u2, xr)?);
    Ok(t)
}

/// `(π/√2)(1/ω₁ + 1/ω₂)`.
pub fn quadratic_period(omega1: f64, omega2: f64) -> f64 {
    PI / SQRT_2 * (1.0 / omega1 + 1.0 / omega2)
}

/// `(max T − min T) / mean T` over the energies.
pub fn isochrony_scan(pot: &PiecewisePotential, energies: &[f64]) -> Result<f64> {
    if energies.is_empty() {
        return Err(Error::Argument("energy list is empty".into()));
    }
    let periods = energies
        .iter()
        .map(|&e| period(pot, e))
        .collect::<Result<Vec<_>>>()?;
    let max = periods.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = periods.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = periods.iter().sum::<f64>() / periods.len() as f64;
    Ok((max - min) / mean)
}

/// `n` energies log-spaced over `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect(),
    }
}

/// Equations of motion `ẋ = v`, `v̇ = −U'(x)` with state `[x, v]`.
#[derive(Debug, Clone)]
pub struct PiecewiseOscillator {
    pub potential: PiecewisePotential,
}

impl SystemRhs<2> for PiecewiseOscillator {
    fn tag(&self) -> SystemTag {
        SystemTag::IsochronyPiecewise
    }

    fn eval(&self, y: &[f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], -self.potential.derivative(y[0])])
    }

    fn field_names(&self) -> [&'static str; 2] {
        ["x", "v"]
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        match self.potential.frequencies {
            Some((w1, w2)) => vec![("omega1".into(), w1), ("omega2".into(), w2)],
            None => Vec::new(),
        }
    }
}

pub fn energy(pot: &PiecewisePotential, y: &[f64; 2]) -> f64 {
    0.5 * y[1] * y[1] + pot.value(y[0])
}

/// Period measured from the trajectory: mean spacing of the rising zero
/// crossings of `x` over `t_span`, starting at rest at the left turning point.
pub fn integrated_period(
    pot: &PiecewisePotential,
    energy: f64,
    t_span: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let (xl, _) = turning_points(pot, energy)?;
    let sys = PiecewiseOscillator {
        potential: pot.clone(),
    };
    let crossings = find_crossings(&sys, 0.0, [xl, 0.0], t_span, cfg, |y| y[0], CrossingDirection::Rising)?;
    if crossings.len() < 2 {
        return Err(Error::Argument(format!(
            "only {} rising crossings within t = {t_span}",
            crossings.len()
        )));
    }
    let n = crossings.len() - 1;
    Ok((crossings[n] - crossings[0]) / n as f64)
}
