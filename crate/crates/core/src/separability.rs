//! Separable coordinate charts of `H(λ)`, their potential families and
//! quadratic first integrals.
//!
//! Charts: `(z_x, y)` with `z_x = x/√(1+λy²)`, `(x, z_y)` with
//! `z_y = y/√(1+λx²)`, and polar `(r, φ)`. A potential separable in a chart
//! yields two integrals `I₁, I₂` with `I₁ + I₂ = 2H(λ)`.

use std::sync::Arc;

use crate::dynamics::{ml2d_hamiltonian, Potential2D};
use crate::error::{Error, Result};
use crate::model::{checked_metric, metric_factor, DeformParams, PhaseState2D};

pub fn to_zx(x: f64, y: f64, lambda: f64) -> Result<(f64, f64)> {
    let m = checked_metric(lambda, y * y)?;
    Ok((x / m.sqrt(), y))
}

pub fn from_zx(zx: f64, y: f64, lambda: f64) -> Result<(f64, f64)> {
    let m = checked_metric(lambda, y * y)?;
    Ok((zx * m.sqrt(), y))
}

pub fn to_zy(x: f64, y: f64, lambda: f64) -> Result<(f64, f64)> {
    let m = checked_metric(lambda, x * x)?;
    Ok((x, y / m.sqrt()))
}

pub fn from_zy(x: f64, zy: f64, lambda: f64) -> Result<(f64, f64)> {
    let m = checked_metric(lambda, x * x)?;
    Ok((x, zy * m.sqrt()))
}

/// `(r, φ)` with `φ ∈ (−π, π]`; the angle is undefined at the origin.
pub fn to_polar(x: f64, y: f64) -> Result<(f64, f64)> {
    let r = x.hypot(y);
    if r == 0.0 {
        return Err(Error::AngleUndefined);
    }
    Ok((r, y.atan2(x)))
}

pub fn from_polar(r: f64, phi: f64) -> (f64, f64) {
    let (s, c) = phi.sin_cos();
    (r * c, r * s)
}

/// `p_r = (x px + y py)/r`, `p_φ = x py − y px`.
pub fn polar_momenta(s: &PhaseState2D) -> Result<(f64, f64)> {
    let r = s.x.hypot(s.y);
    if r == 0.0 {
        return Err(Error::AngleUndefined);
    }
    Ok((s.dilation() / r, s.angular_momentum()))
}

/// Momenta conjugate to `(z_x, y)`.
pub fn zx_momenta(s: &PhaseState2D, lambda: f64) -> Result<(f64, f64)> {
    let m = checked_metric(lambda, s.y * s.y)?;
    Ok((s.px * m.sqrt(), s.py + lambda * s.x * s.y * s.px / m))
}

/// Momenta conjugate to `(x, z_y)`.
pub fn zy_momenta(s: &PhaseState2D, lambda: f64) -> Result<(f64, f64)> {
    let m = checked_metric(lambda, s.x * s.x)?;
    Ok((s.px + lambda * s.x * s.y * s.py / m, s.py * m.sqrt()))
}

/// The potential term `(α²/2) r²/(1 + λr²)` of the deformed oscillator,
/// separable in all three charts.
pub fn superseparable_v(x: f64, y: f64, p: &DeformParams) -> Result<f64> {
    let r2 = x * x + y * y;
    let m = checked_metric(p.lambda(), r2)?;
    Ok(0.5 * p.alpha() * p.alpha() * r2 / m)
}

/// Largest pairwise discrepancy between the `(z_x, y)`, `(x, z_y)` and
/// `(r, φ)` closed forms of [`superseparable_v`].
pub fn superseparable_identity_residual(x: f64, y: f64, p: &DeformParams) -> Result<f64> {
    let lambda = p.lambda();
    let half_a2 = 0.5 * p.alpha() * p.alpha();
    let (zx, _) = to_zx(x, y, lambda)?;
    let (_, zy) = to_zy(x, y, lambda)?;
    let r2 = x * x + y * y;
    checked_metric(lambda, r2)?;
    let lx = metric_factor(lambda, x * x);
    let ly = metric_factor(lambda, y * y);
    let form_zx = half_a2 / ly * (zx * zx / metric_factor(lambda, zx * zx) + y * y);
    let form_zy = half_a2 / lx * (x * x + zy * zy / metric_factor(lambda, zy * zy));
    let form_polar = half_a2 * r2 / metric_factor(lambda, r2);
    Ok((form_zx - form_zy)
        .abs()
        .max((form_zx - form_polar).abs())
        .max((form_zy - form_polar).abs()))
}

/// `(1+λr²)(px²+py²) − λJ² = px² + py² + λ(x px + y py)²`; returns the
/// absolute difference of the two sides.
pub fn lagrange_identity_residual(s: &PhaseState2D, lambda: f64) -> f64 {
    let r2 = s.x * s.x + s.y * s.y;
    let p2 = s.px * s.px + s.py * s.py;
    let j = s.angular_momentum();
    let d = s.dilation();
    let lhs = metric_factor(lambda, r2) * p2 - lambda * j * j;
    let rhs = p2 + lambda * d * d;
    (lhs - rhs).abs()
}

/// Separable chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Zx,
    Zy,
    Polar,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::Zx, Chart::Zy, Chart::Polar];

    pub fn as_str(&self) -> &'static str {
        match self {
            Chart::Zx => "zx",
            Chart::Zy => "zy",
            Chart::Polar => "polar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Zx,
    Zy,
    Polar,
    /// Separable in every chart.
    Superseparable,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Zx => "zx_family",
            Family::Zy => "zy_family",
            Family::Polar => "polar_family",
            Family::Superseparable => "superseparable",
        }
    }
}

pub type ComponentFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A potential `V` in one of the separable forms
///
/// * `zx_family`: `V = W₁(z_x)/(1+λy²) + W₂(y)`
/// * `zy_family`: `V = W₁(x) + W₂(z_y)/(1+λx²)`
/// * `polar_family`: `V = F(r) + G(φ)/r²`
/// * `superseparable`: `V = r²/(1+λr²)`
#[derive(Clone)]
pub struct SeparablePotential {
    family: Family,
    lambda: f64,
    first: ComponentFn,
    second: ComponentFn,
}

impl SeparablePotential {
    pub fn zx(lambda: f64, w1: ComponentFn, w2: ComponentFn) -> Self {
        Self {
            family: Family::Zx,
            lambda,
            first: w1,
            second: w2,
        }
    }

    pub fn zy(lambda: f64, w1: ComponentFn, w2: ComponentFn) -> Self {
        Self {
            family: Family::Zy,
            lambda,
            first: w1,
            second: w2,
        }
    }

    pub fn polar(lambda: f64, f: ComponentFn, g: ComponentFn) -> Self {
        Self {
            family: Family::Polar,
            lambda,
            first: f,
            second: g,
        }
    }

    pub fn superseparable(lambda: f64) -> Self {
        let f: ComponentFn = Arc::new(move |r: f64| r * r / metric_factor(lambda, r * r));
        Self {
            family: Family::Superseparable,
            lambda,
            first: f,
            second: Arc::new(|_| 0.0),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Component functions `(W₁, W₂)` or `(F, G)` for a chart.
    pub fn components(&self, chart: Chart) -> Result<(ComponentFn, ComponentFn)> {
        let lambda = self.lambda;
        match (self.family, chart) {
            (Family::Zx, Chart::Zx) | (Family::Zy, Chart::Zy) | (Family::Polar, Chart::Polar) => {
                Ok((self.first.clone(), self.second.clone()))
            }
            (Family::Superseparable, Chart::Polar) => Ok((self.first.clone(), self.second.clone())),
            (Family::Superseparable, Chart::Zx | Chart::Zy) => {
                let w: ComponentFn = Arc::new(move |u: f64| u * u / metric_factor(lambda, u * u));
                Ok((w.clone(), w))
            }
            (family, chart) => Err(Error::FamilyMismatch {
                potential: family.as_str(),
                requested: chart.as_str(),
            }),
        }
    }
}

impl Potential2D for SeparablePotential {
    fn value(&self, x: f64, y: f64) -> f64 {
        let l = self.lambda;
        match self.family {
            Family::Zx => {
                let m = metric_factor(l, y * y);
                (self.first)(x / m.sqrt()) / m + (self.second)(y)
            }
            Family::Zy => {
                let m = metric_factor(l, x * x);
                (self.first)(x) + (self.second)(y / m.sqrt()) / m
            }
            Family::Polar => {
                let r = x.hypot(y);
                (self.first)(r) + (self.second)(y.atan2(x)) / (r * r)
            }
            Family::Superseparable => {
                let r2 = x * x + y * y;
                r2 / metric_factor(l, r2)
            }
        }
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        if self.family == Family::Superseparable {
            let m = metric_factor(self.lambda, x * x + y * y);
            return [2.0 * x / (m * m), 2.0 * y / (m * m)];
        }
        [
            crate::dynamics::central_derivative(|t| self.value(t, y), x),
            crate::dynamics::central_derivative(|t| self.value(x, t), y),
        ]
    }

    fn name(&self) -> &'static str {
        self.family.as_str()
    }
}

fn require_lambda(pot: &SeparablePotential, p: &DeformParams) -> Result<()> {
    if pot.lambda != p.lambda() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!(
                "potential built for lambda = {} used with lambda = {}",
                pot.lambda,
                p.lambda()
            ),
        });
    }
    Ok(())
}

/// The two quadratic first integrals attached to a separable chart.
pub fn quadratic_integrals(
    chart: Chart,
    s: &PhaseState2D,
    p: &DeformParams,
    pot: &SeparablePotential,
) -> Result<(f64, f64)> {
    require_lambda(pot, p)?;
    let lambda = p.lambda();
    let a2 = p.alpha() * p.alpha();
    let r2 = s.x * s.x + s.y * s.y;
    let m = checked_metric(lambda, r2)?;
    let j = s.angular_momentum();
    let (c1, c2) = pot.components(chart)?;
    match chart {
        Chart::Zx => {
            let (zx, _) = to_zx(s.x, s.y, lambda)?;
            let ly = metric_factor(lambda, s.y * s.y);
            let w1 = c1(zx);
            let i1 = m * s.px * s.px + a2 * w1;
            let i2 = m * s.py * s.py - lambda * j * j
                + a2 * (c2(s.y) - lambda * s.y * s.y / ly * w1);
            Ok((i1, i2))
        }
        Chart::Zy => {
            let (_, zy) = to_zy(s.x, s.y, lambda)?;
            let lx = metric_factor(lambda, s.x * s.x);
            let w2 = c2(zy);
            let i1 = m * s.px * s.px - lambda * j * j
                + a2 * (c1(s.x) - lambda * s.x * s.x / lx * w2);
            let i2 = m * s.py * s.py + a2 * w2;
            Ok((i1, i2))
        }
        Chart::Polar => {
            let (r, phi) = to_polar(s.x, s.y)?;
            let (pr, pphi) = polar_momenta(s)?;
            let g = c2(phi);
            let w = (1.0 - r * r) / (r * r);
            let i1 = m * pr * pr + w * pphi * pphi + a2 * (c1(r) + w * g);
            let i2 = pphi * pphi + a2 * g;
            Ok((i1, i2))
        }
    }
}

/// `|LHS − 2E|` of the Hamilton–Jacobi equation written in the chart, with
/// the chart momenta in place of the derivatives of `S`. The chart equation
/// is divided by its conformal factor so that the residual is comparable
/// across charts.
pub fn hj_residual(
    chart: Chart,
    s: &PhaseState2D,
    p: &DeformParams,
    pot: &SeparablePotential,
    energy: f64,
) -> Result<f64> {
    require_lambda(pot, p)?;
    let lambda = p.lambda();
    let a2 = p.alpha() * p.alpha();
    checked_metric(lambda, s.x * s.x + s.y * s.y)?;
    let v = pot.value(s.x, s.y);
    let lhs = match chart {
        Chart::Zx => {
            let (zx, _) = to_zx(s.x, s.y, lambda)?;
            let (pz, pyc) = zx_momenta(s, lambda)?;
            let ly = metric_factor(lambda, s.y * s.y);
            (metric_factor(lambda, zx * zx) * pz * pz + ly * ly * pyc * pyc) / ly + a2 * v
        }
        Chart::Zy => {
            let (_, zy) = to_zy(s.x, s.y, lambda)?;
            let (pxc, pz) = zy_momenta(s, lambda)?;
            let lx = metric_factor(lambda, s.x * s.x);
            (lx * lx * pxc * pxc + metric_factor(lambda, zy * zy) * pz * pz) / lx + a2 * v
        }
        Chart::Polar => {
            let (r, _) = to_polar(s.x, s.y)?;
            let (pr, pphi) = polar_momenta(s)?;
            metric_factor(lambda, r * r) * pr * pr + pphi * pphi / (r * r) + a2 * v
        }
    };
    Ok((lhs - 2.0 * energy).abs())
}

/// `H(λ)` with a separable potential.
pub fn separable_hamiltonian(s: &PhaseState2D, p: &DeformParams, pot: &SeparablePotential) -> Result<f64> {
    require_lambda(pot, p)?;
    ml2d_hamiltonian(s, p, pot)
}
