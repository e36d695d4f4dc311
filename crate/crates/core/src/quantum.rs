//! One-dimensional quantum deformed oscillator.
//!
//! The Hamiltonian
//! `Ĥ₁ = −½(1+λx²) d²/dx² − ½λx d/dx + ½α²x²/(1+λx²)`
//! is self-adjoint for the measure `dx/√(1+λx²)`. In the adapted coordinate
//! `q` (with `dq = dx/√(1+λx²)`) it becomes the Schrödinger operator
//! `−½ d²/dq² + ½α² x(q)²/(1+λx(q)²)`, which is what gets discretized.
//!
//! With `α² = β(β+λ)` the operator factorizes as `Ĥ₁ − β/2 = A†A` where
//! `A = (d/dq + W)/√2` and `W = βx/√(1+λx²)`. The partner satisfies
//! `AA†(β) = A†A(β−λ) + (β−λ) + λ/2`, which gives the ladder
//! `E_n = nβ − n²λ/2 + β/2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::model::metric_factor;
use crate::tridiag::{eig_lowest, SymTridiagonal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumParams {
    lambda: f64,
    alpha: f64,
    beta: f64,
}

/// Positive root of `β(β+λ) = α²`.
pub fn beta_from_alpha(alpha: f64, lambda: f64) -> f64 {
    let disc = (lambda * lambda + 4.0 * alpha * alpha).sqrt();
    if lambda >= 0.0 {
        2.0 * alpha * alpha / (lambda + disc)
    } else {
        0.5 * (disc - lambda)
    }
}

impl QuantumParams {
    pub fn from_alpha(lambda: f64, alpha: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be finite, got {lambda}"),
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be finite and positive, got {alpha}"),
            });
        }
        Ok(Self {
            lambda,
            alpha,
            beta: beta_from_alpha(alpha, lambda),
        })
    }

    pub fn from_beta(lambda: f64, beta: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be finite, got {lambda}"),
            });
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must be finite and positive, got {beta}"),
            });
        }
        let a2 = beta * (beta + lambda);
        if !(a2 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("beta*(beta+lambda) = {a2} must be positive"),
            });
        }
        Ok(Self {
            lambda,
            alpha: a2.sqrt(),
            beta,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `α²`, computed from `β` to avoid a rounding round-trip through `α`.
    pub fn alpha_sq(&self) -> f64 {
        self.beta * (self.beta + self.lambda)
    }
}

/// `E_n = nβ − n²λ/2 + β/2` for `n = 0..n_levels`.
pub fn ladder_spectrum(p: &QuantumParams, n_levels: usize) -> Vec<f64> {
    (0..n_levels)
        .map(|n| {
            let n = n as f64;
            n * p.beta - 0.5 * n * n * p.lambda + 0.5 * p.beta
        })
        .collect()
}

/// Supremum `α²/(2λ)` of the potential for `λ > 0`.
pub fn continuum_threshold(p: &QuantumParams) -> Option<f64> {
    (p.lambda > 0.0).then(|| p.alpha_sq() / (2.0 * p.lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStates {
    Finite(usize),
    Infinite,
}

/// `λ ≤ 0`: infinitely many. `λ > 0`: the levels with positive ladder
/// increment `β − nλ` that lie strictly below the threshold.
pub fn bound_state_count(p: &QuantumParams) -> BoundStates {
    let Some(threshold) = continuum_threshold(p) else {
        return BoundStates::Infinite;
    };
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        let increment = p.beta - nf * p.lambda;
        let level = nf * p.beta - 0.5 * nf * nf * p.lambda + 0.5 * p.beta;
        if !(increment > 0.0 && level < threshold) {
            return BoundStates::Finite(n);
        }
        n += 1;
    }
}

/// Unnormalized ground state `(1+λx²)^(−β/(2λ))`, or `exp(−βx²/2)` at `λ = 0`.
pub fn groundstate_psi0(x: f64, p: &QuantumParams) -> Result<f64> {
    if p.lambda == 0.0 {
        return Ok((-0.5 * p.beta * x * x).exp());
    }
    let m = metric_factor(p.lambda, x * x);
    if !(m > 0.0) {
        return Err(Error::Domain {
            lambda: p.lambda,
            metric: m,
        });
    }
    Ok(m.powf(-p.beta / (2.0 * p.lambda)))
}

/// Half-width `π/(2√|λ|)` of the `q` interval for `λ < 0`.
pub fn natural_half_width(lambda: f64) -> Option<f64> {
    (lambda < 0.0).then(|| PI / (2.0 * (-lambda).sqrt()))
}

/// `q(x)`: `asinh(√λ x)/√λ`, `asin(√|λ| x)/√|λ|` or `x`. For `λ < 0` the
/// closed interval `|x| ≤ 1/√|λ|` is accepted so that the box endpoints map.
pub fn adapted_coordinate(x: f64, lambda: f64) -> Result<f64> {
    if lambda > 0.0 {
        let s = lambda.sqrt();
        Ok((s * x).asinh() / s)
    } else if lambda < 0.0 {
        let s = (-lambda).sqrt();
        let arg = s * x;
        if arg.abs() > 1.0 {
            return Err(Error::Domain {
                lambda,
                metric: metric_factor(lambda, x * x),
            });
        }
        Ok(arg.asin() / s)
    } else {
        Ok(x)
    }
}

/// Inverse of [`adapted_coordinate`].
pub fn x_of_q(q: f64, lambda: f64) -> Result<f64> {
    if lambda > 0.0 {
        let s = lambda.sqrt();
        Ok((s * q).sinh() / s)
    } else if lambda < 0.0 {
        let s = (-lambda).sqrt();
        if (s * q).abs() > 0.5 * PI {
            return Err(Error::Domain {
                lambda,
                metric: f64::NAN,
            });
        }
        Ok((s * q).sin() / s)
    } else {
        Ok(q)
    }
}

/// Potential `½α² x²/(1+λx²)` expressed in `q`; closed forms avoid overflow
/// of `sinh` for large boxes.
pub fn adapted_potential(q: f64, p: &QuantumParams) -> f64 {
    let l = p.lambda;
    let ratio = if l > 0.0 {
        let t = (l.sqrt() * q).tanh();
        t * t / l
    } else if l < 0.0 {
        let t = ((-l).sqrt() * q).tan();
        -t * t / l
    } else {
        q * q
    };
    0.5 * p.alpha_sq() * ratio
}

/// Superpotential `W = βx/√(1+λx²)` in `q`.
pub fn superpotential(q: f64, beta: f64, lambda: f64) -> f64 {
    if lambda > 0.0 {
        let s = lambda.sqrt();
        beta * (s * q).tanh() / s
    } else if lambda < 0.0 {
        let s = (-lambda).sqrt();
        beta * (s * q).tan() / s
    } else {
        beta * q
    }
}

/// Shape-invariance data `(β₁, R(β₁))` with `β₁ = β − λ` and `R(β₁) = β₁ + λ/2`.
pub fn partner_shift(p: &QuantumParams) -> (f64, f64) {
    let beta1 = p.beta - p.lambda;
    (beta1, beta1 + 0.5 * p.lambda)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Number of interior nodes.
    pub n_points: usize,
    /// Half-width of the box in `q`; `None` picks one automatically. Must be
    /// `None` for `λ < 0`, where the natural interval is used.
    pub q_max: Option<f64>,
}

impl GridSpec {
    pub fn new(n_points: usize) -> Self {
        Self {
            n_points,
            q_max: None,
        }
    }

    pub fn with_q_max(n_points: usize, q_max: f64) -> Self {
        Self {
            n_points,
            q_max: Some(q_max),
        }
    }
}

/// Uniform interior nodes between Dirichlet endpoints `±q_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub q_max: f64,
    pub h: f64,
    pub nodes: Vec<f64>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Discrete `L²` norm of samples on the grid.
    pub fn norm(&self, u: &[f64]) -> f64 {
        (self.h * u.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }
}

/// Box half-width for `λ ≥ 0`: past the point where the potential reaches
/// `min(2E, (E+V∞)/2)` for the highest requested bound level `E`, plus 20
/// decay lengths.
pub fn auto_q_max(p: &QuantumParams, n_levels: usize) -> f64 {
    let n_bound = match bound_state_count(p) {
        BoundStates::Infinite => n_levels,
        BoundStates::Finite(b) => n_levels.min(b),
    }
    .max(1);
    let e_top = ladder_spectrum(p, n_bound)[n_bound - 1];
    let a2 = p.alpha_sq();
    match continuum_threshold(p) {
        None => {
            // ½α²q² = 2E; decay rate √(2(2E − E))
            let q_turn = 2.0 * e_top.sqrt() / a2.sqrt();
            q_turn + 20.0 / (2.0 * e_top).sqrt()
        }
        Some(thr) => {
            let target = (2.0 * e_top).min(0.5 * (e_top + thr));
            let s = p.lambda.sqrt();
            let q_turn = (target / thr).sqrt().atanh() / s;
            let kappa = (2.0 * (thr - e_top)).sqrt();
            q_turn + 20.0 / kappa
        }
    }
}

pub fn resolve_grid(p: &QuantumParams, request: &GridSpec, n_levels: usize) -> Result<Grid> {
    if request.n_points < 3 {
        return Err(Error::Grid(format!("n_points = {} must be at least 3", request.n_points)));
    }
    let q_max = match (natural_half_width(p.lambda), request.q_max) {
        (Some(_), Some(_)) => {
            return Err(Error::Grid(
                "q_max cannot be set for lambda < 0; the natural interval is used".into(),
            ))
        }
        (Some(w), None) => w,
        (None, Some(q)) => {
            if !(q > 0.0 && q.is_finite()) {
                return Err(Error::Grid(format!("q_max = {q} must be positive")));
            }
            q
        }
        (None, None) => auto_q_max(p, n_levels),
    };
    let h = 2.0 * q_max / (request.n_points + 1) as f64;
    let nodes = (1..=request.n_points).map(|i| -q_max + i as f64 * h).collect();
    Ok(Grid { q_max, h, nodes })
}

/// Three-point discretization of the adapted-coordinate Hamiltonian.
pub fn discretize_hamiltonian(p: &QuantumParams, grid: &Grid) -> Result<SymTridiagonal> {
    let inv_h2 = 1.0 / (grid.h * grid.h);
    let diag = grid
        .nodes
        .iter()
        .map(|&q| inv_h2 + adapted_potential(q, p))
        .collect();
    let off = vec![-0.5 * inv_h2; grid.len() - 1];
    SymTridiagonal::new(diag, off).map_err(|e| Error::Grid(e.to_string()))
}

/// `‖Ĥψ₀ − (β/2)ψ₀‖ / ‖ψ₀‖` with the discretized operator.
pub fn groundstate_residual(p: &QuantumParams, grid: &Grid) -> Result<f64> {
    let m = discretize_hamiltonian(p, grid)?;
    let psi: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&q| groundstate_psi0(x_of_q(q, p.lambda)?, p))
        .collect::<Result<_>>()?;
    let hpsi = m.matvec(&psi);
    let r: Vec<f64> = hpsi
        .iter()
        .zip(&psi)
        .map(|(a, b)| a - 0.5 * p.beta * b)
        .collect();
    Ok(grid.norm(&r) / grid.norm(&psi))
}

/// Fourth-order central first derivative with zero values outside the box.
pub fn derivative(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len();
    let at = |i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            u[i as usize]
        }
    };
    (0..n as isize)
        .map(|i| (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h))
        .collect()
}

fn apply_a(u: &[f64], w: &[f64], h: f64, adjoint: bool) -> Vec<f64> {
    let du = derivative(u, h);
    let sign = if adjoint { -1.0 } else { 1.0 };
    du.iter()
        .zip(u.iter().zip(w))
        .map(|(d, (v, wi))| FRAC_1_SQRT_2 * (sign * d + wi * v))
        .collect()
}

/// `A(β) u` on the grid.
pub fn lowering(p: &QuantumParams, grid: &Grid, u: &[f64], beta: f64) -> Vec<f64> {
    let w: Vec<f64> = grid.nodes.iter().map(|&q| superpotential(q, beta, p.lambda)).collect();
    apply_a(u, &w, grid.h, false)
}

/// `max_u ‖A(β)A†(β)u − (A†(β₁)A(β₁) + R(β₁))u‖ / ‖u‖` over the trial functions.
pub fn shape_invariance_residual(
    p: &QuantumParams,
    grid: &Grid,
    trials: &[&dyn Fn(f64) -> f64],
) -> Result<f64> {
    let (beta1, shift) = partner_shift(p);
    let w0: Vec<f64> = grid.nodes.iter().map(|&q| superpotential(q, p.beta, p.lambda)).collect();
    let w1: Vec<f64> = grid.nodes.iter().map(|&q| superpotential(q, beta1, p.lambda)).collect();
    let mut worst: f64 = 0.0;
    for trial in trials {
        let u: Vec<f64> = grid.nodes.iter().map(|&q| trial(q)).collect();
        let scale = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            continue;
        }
        let edge = trial(-grid.q_max).abs().max(trial(grid.q_max).abs());
        if !(edge <= 1e-8 * scale) {
            return Err(Error::Grid(format!(
                "trial function does not vanish at the box edge (|u| = {edge:e})"
            )));
        }
        let lhs = apply_a(&apply_a(&u, &w0, grid.h, true), &w0, grid.h, false);
        let rhs = apply_a(&apply_a(&u, &w1, grid.h, false), &w1, grid.h, true);
        let diff: Vec<f64> = lhs
            .iter()
            .zip(rhs.iter().zip(&u))
            .map(|(l, (r, v))| l - r - shift * v)
            .collect();
        worst = worst.max(grid.norm(&diff) / grid.norm(&u));
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Ladder levels; for `λ > 0` only the bound ones among the requested.
    pub ladder: Vec<f64>,
    /// Lowest eigenvalues of the discretization, one per requested level.
    pub numeric: Vec<f64>,
    /// `|ladder[n] − numeric[n]|`.
    pub abs_diff: Vec<f64>,
    pub bound_states: BoundStates,
    pub threshold: Option<f64>,
    pub n_points: usize,
    pub q_max: f64,
}

impl SpectrumReport {
    pub fn max_abs_diff(&self) -> f64 {
        self.abs_diff.iter().copied().fold(0.0, f64::max)
    }
}

pub fn spectrum_report(p: &QuantumParams, request: &GridSpec, n_levels: usize) -> Result<SpectrumReport> {
    if n_levels == 0 {
        return Err(Error::Argument("n_levels must be at least 1".into()));
    }
    let grid = resolve_grid(p, request, n_levels)?;
    if n_levels > grid.len() {
        return Err(Error::Grid(format!(
            "{n_levels} levels requested from a {}-point grid",
            grid.len()
        )));
    }
    let matrix = discretize_hamiltonian(p, &grid)?;
    let numeric = eig_lowest(&matrix, n_levels)?;
    let bound = bound_state_count(p);
    let n_ladder = match bound {
        BoundStates::Infinite => n_levels,
        BoundStates::Finite(b) => n_levels.min(b),
    };
    let ladder = ladder_spectrum(p, n_ladder);
    let abs_diff = ladder.iter().zip(&numeric).map(|(a, b)| (a - b).abs()).collect();
    Ok(SpectrumReport {
        lambda: p.lambda,
        alpha: p.alpha,
        beta: p.beta,
        ladder,
        numeric,
        abs_diff,
        bound_states: bound,
        threshold: continuum_threshold(p),
        n_points: grid.len(),
        q_max: grid.q_max,
    })
}
