//! Fixed-step RK4 and the Dormand–Prince 5(4) embedded pair.
//!
//! The adaptive driver uses the coefficient set of Dormand & Prince (1980)
//! with the continuous extension of Hairer, Nørsett & Wanner, a PI step
//! controller (safety 0.9, step ratio clamped to [0.2, 5]) and sign-normalized
//! guard functions. A guard dropping to [`BOUNDARY_MARGIN`] ends the run with
//! [`TerminationReason::BoundaryEvent`]; the crossing is bisected on the dense
//! output to [`EVENT_TIME_TOL`] and the last emitted state lies strictly on
//! the safe side.

use crate::dynamics::SystemRhs;
use crate::error::{Error, Result};
use crate::model::{TerminationReason, Trajectory, TrajectoryMeta};

pub const BOUNDARY_MARGIN: f64 = 1e-9;
pub const EVENT_TIME_TOL: f64 = 1e-12;

const SAFETY: f64 = 0.9;
const MIN_RATIO: f64 = 0.2;
const MAX_RATIO: f64 = 5.0;
const PI_BETA: f64 = 0.04;
const PI_EXPONENT: f64 = 0.2 - 0.75 * PI_BETA;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Output spacing; `0` emits every accepted step.
    pub sample_dt: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            h_init: 1e-3,
            h_min: 1e-14,
            h_max: 1.0,
            max_steps: 5_000_000,
            sample_dt: 0.0,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            rel_tol: tol,
            abs_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, reason: &str| {
            Err(Error::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return bad("rel_tol", "must be positive");
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return bad("abs_tol", "must be positive");
        }
        if !(self.h_min > 0.0 && self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return bad("h_init", "requires 0 < h_min <= h_init <= h_max");
        }
        if !self.h_max.is_finite() {
            return bad("h_max", "must be finite");
        }
        if self.max_steps == 0 {
            return bad("max_steps", "must be positive");
        }
        if !(self.sample_dt >= 0.0 && self.sample_dt.is_finite()) {
            return bad("sample_dt", "must be non-negative");
        }
        Ok(())
    }
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += c * k[i];
        }
    }
    out
}

/// One classical fourth-order Runge–Kutta step. `t` is accepted for symmetry
/// with time-dependent solvers; all systems here are autonomous.
pub fn rk4_step<S, const N: usize>(rhs: &S, _t: f64, y: &[f64; N], h: f64) -> Result<[f64; N]>
where
    S: SystemRhs<N> + ?Sized,
{
    let k1 = rhs.eval(y)?;
    let k2 = rhs.eval(&axpy(y, &[(0.5 * h, &k1)]))?;
    let k3 = rhs.eval(&axpy(y, &[(0.5 * h, &k2)]))?;
    let k4 = rhs.eval(&axpy(y, &[(h, &k3)]))?;
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

// Dormand–Prince 5(4); nodes c = (0, 1/5, 3/10, 4/5, 8/9, 1, 1)

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Dense interpolant over one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> [f64; N] {
        self.coeffs[0]
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
        out
    }
}

/// Result of a single attempted Dormand–Prince step.
pub struct DopriStep<const N: usize> {
    pub y: [f64; N],
    /// Derivative at the new point (first stage of the next step).
    pub f_new: [f64; N],
    pub error: [f64; N],
    dense: [[f64; N]; 5],
}

/// One Dormand–Prince step from `(y, f)` where `f = rhs(y)`.
pub fn dopri5_step<S, const N: usize>(
    rhs: &S,
    y: &[f64; N],
    f: &[f64; N],
    h: f64,
) -> Result<DopriStep<N>>
where
    S: SystemRhs<N> + ?Sized,
{
    let k1 = f;
    let k2 = rhs.eval(&axpy(y, &[(h * A21, k1)]))?;
    let k3 = rhs.eval(&axpy(y, &[(h * A31, k1), (h * A32, &k2)]))?;
    let k4 = rhs.eval(&axpy(y, &[(h * A41, k1), (h * A42, &k2), (h * A43, &k3)]))?;
    let k5 = rhs.eval(&axpy(
        y,
        &[(h * A51, k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)],
    ))?;
    let k6 = rhs.eval(&axpy(
        y,
        &[
            (h * A61, k1),
            (h * A62, &k2),
            (h * A63, &k3),
            (h * A64, &k4),
            (h * A65, &k5),
        ],
    ))?;
    let y_new = axpy(
        y,
        &[
            (h * A71, k1),
            (h * A73, &k3),
            (h * A74, &k4),
            (h * A75, &k5),
            (h * A76, &k6),
        ],
    );
    let k7 = rhs.eval(&y_new)?;

    let mut error = [0.0; N];
    let mut dense = [[0.0; N]; 5];
    for i in 0..N {
        error[i] = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let diff = y_new[i] - y[i];
        let bspl = h * k1[i] - diff;
        dense[0][i] = y[i];
        dense[1][i] = diff;
        dense[2][i] = bspl;
        dense[3][i] = diff - h * k7[i] - bspl;
        dense[4][i] = h
            * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    Ok(DopriStep {
        y: y_new,
        f_new: k7,
        error,
        dense,
    })
}

/// What the stepper did on a call to [`Dopri5::advance`].
pub enum Advance<const N: usize> {
    /// An accepted step together with its interpolant.
    Step(DenseSegment<N>),
    /// The end time was reached; no further steps.
    Finished,
    /// The step size fell below `h_min`.
    Underflow,
}

/// Adaptive Dormand–Prince stepper. Yields accepted steps one at a time.
pub struct Dopri5<'a, S: ?Sized, const N: usize> {
    rhs: &'a S,
    cfg: IntegratorConfig,
    t: f64,
    t_end: f64,
    y: [f64; N],
    f: [f64; N],
    h: f64,
    err_old: f64,
    rejected_last: bool,
    pub accepted: usize,
    pub rejected: usize,
}

impl<'a, S, const N: usize> Dopri5<'a, S, N>
where
    S: SystemRhs<N> + ?Sized,
{
    pub fn new(rhs: &'a S, t0: f64, y0: [f64; N], t_end: f64, cfg: IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        if !(t_end > t0) {
            return Err(Error::Argument(format!("t1 = {t_end} must exceed t0 = {t0}")));
        }
        let f = rhs.eval(&y0)?;
        Ok(Self {
            rhs,
            cfg,
            t: t0,
            t_end,
            y: y0,
            f,
            h: cfg.h_init,
            err_old: 1e-4,
            rejected_last: false,
            accepted: 0,
            rejected: 0,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    fn error_norm(&self, y_new: &[f64; N], err: &[f64; N]) -> f64 {
        let mut norm: f64 = 0.0;
        for i in 0..N {
            let scale = self.cfg.abs_tol + self.cfg.rel_tol * self.y[i].abs().max(y_new[i].abs());
            norm = norm.max((err[i] / scale).abs());
        }
        norm
    }

    pub fn advance(&mut self) -> Result<Advance<N>> {
        let remaining = self.t_end - self.t;
        if remaining <= 4.0 * f64::EPSILON * self.t_end.abs().max(1.0) {
            return Ok(Advance::Finished);
        }
        loop {
            if self.accepted + self.rejected >= self.cfg.max_steps {
                return Err(Error::Budget {
                    max_steps: self.cfg.max_steps,
                    t: self.t,
                });
            }
            let remaining = self.t_end - self.t;
            let mut h = self.h.min(self.cfg.h_max);
            let last = h >= remaining * (1.0 - 1e-12);
            if last {
                h = remaining;
            }
            if h < self.cfg.h_min && !last {
                return Ok(Advance::Underflow);
            }

            let step = match dopri5_step(self.rhs, &self.y, &self.f, h) {
                Ok(step) => step,
                Err(Error::Domain { .. }) | Err(Error::SingularCoefficient { .. }) => {
                    // a stage left the domain: shrink and retry
                    self.rejected += 1;
                    self.rejected_last = true;
                    self.h = h * MIN_RATIO;
                    if self.h < self.cfg.h_min {
                        return Ok(Advance::Underflow);
                    }
                    continue;
                }
                Err(e) => return Err(e),
            };
            let err = self.error_norm(&step.y, &step.error);

            if err.is_finite() && err <= 1.0 {
                let fac_err = err.max(1e-16).powf(PI_EXPONENT);
                let fac = fac_err / self.err_old.powf(PI_BETA);
                let mut ratio = (SAFETY / fac).clamp(MIN_RATIO, MAX_RATIO);
                if self.rejected_last {
                    ratio = ratio.min(1.0);
                }
                self.err_old = err.max(1e-4);
                self.rejected_last = false;

                let seg = DenseSegment {
                    t0: self.t,
                    h,
                    coeffs: step.dense,
                };
                self.t = if last { self.t_end } else { self.t + h };
                self.y = step.y;
                self.f = step.f_new;
                self.h = h * ratio;
                self.accepted += 1;
                return Ok(Advance::Step(seg));
            }

            self.rejected += 1;
            self.rejected_last = true;
            let ratio = if err.is_finite() {
                (SAFETY / err.powf(PI_EXPONENT)).clamp(MIN_RATIO, 1.0)
            } else {
                MIN_RATIO
            };
            self.h = h * ratio;
            if self.h < self.cfg.h_min {
                return Ok(Advance::Underflow);
            }
        }
    }
}

struct Guards {
    signs: Vec<f64>,
}

impl Guards {
    fn new<S, const N: usize>(rhs: &S, y0: &[f64; N]) -> Result<Self>
    where
        S: SystemRhs<N> + ?Sized,
    {
        let mut signs = Vec::with_capacity(rhs.guard_count());
        for i in 0..rhs.guard_count() {
            let g = rhs.guard(i, y0);
            if !(g.abs() > BOUNDARY_MARGIN) {
                return Err(Error::SingularLevelSet {
                    what: "guard function at the initial state",
                    value: g,
                });
            }
            signs.push(g.signum());
        }
        Ok(Self { signs })
    }

    fn min_margin<S, const N: usize>(&self, rhs: &S, y: &[f64; N]) -> f64
    where
        S: SystemRhs<N> + ?Sized,
    {
        self.signs
            .iter()
            .enumerate()
            .map(|(i, s)| s * rhs.guard(i, y) - BOUNDARY_MARGIN)
            .fold(f64::INFINITY, f64::min)
    }

    fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// Integrates from `t0` to `t1` and samples the solution.
pub fn integrate_adaptive<S, const N: usize>(
    rhs: &S,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<N>>
where
    S: SystemRhs<N> + ?Sized,
{
    let mut stepper = Dopri5::new(rhs, t0, y0, t1, *cfg)?;
    let guards = Guards::new(rhs, &y0)?;
    let mut times = vec![t0];
    let mut states = vec![y0];
    let mut next_sample = 1usize;

    let push_samples = |seg: &DenseSegment<N>, upto: f64, next: &mut usize, times: &mut Vec<f64>, states: &mut Vec<[f64; N]>| {
        if cfg.sample_dt > 0.0 {
            loop {
                let ts = t0 + *next as f64 * cfg.sample_dt;
                if ts > upto {
                    break;
                }
                times.push(ts);
                states.push(seg.eval(ts));
                *next += 1;
            }
        }
    };

    let termination = loop {
        match stepper.advance()? {
            Advance::Finished => break TerminationReason::ReachedT1,
            Advance::Underflow => break TerminationReason::StepUnderflow,
            Advance::Step(seg) => {
                let t_new = stepper.t();
                let y_new = *stepper.y();
                if !guards.is_empty() && guards.min_margin(rhs, &y_new) <= 0.0 {
                    let (t_ev, y_ev) = locate_event(rhs, &guards, &seg);
                    push_samples(&seg, t_ev, &mut next_sample, &mut times, &mut states);
                    if *times.last().unwrap() < t_ev {
                        times.push(t_ev);
                        states.push(y_ev);
                    }
                    break TerminationReason::BoundaryEvent;
                }
                if cfg.sample_dt > 0.0 {
                    push_samples(&seg, t_new, &mut next_sample, &mut times, &mut states);
                } else {
                    times.push(t_new);
                    states.push(y_new);
                }
            }
        }
    };

    // always end on the final state
    let (t_last, y_last) = (stepper.t(), *stepper.y());
    if termination != TerminationReason::BoundaryEvent && *times.last().unwrap() < t_last {
        times.push(t_last);
        states.push(y_last);
    }

    Ok(Trajectory {
        times,
        states,
        meta: TrajectoryMeta {
            system: rhs.tag(),
            parameters: rhs.parameters(),
            config: *cfg,
            termination,
            accepted_steps: stepper.accepted,
            rejected_steps: stepper.rejected,
        },
    })
}

fn locate_event<S, const N: usize>(rhs: &S, guards: &Guards, seg: &DenseSegment<N>) -> (f64, [f64; N])
where
    S: SystemRhs<N> + ?Sized,
{
    let mut lo = seg.t0;
    let mut hi = seg.t1();
    while hi - lo > EVENT_TIME_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if guards.min_margin(rhs, &seg.eval(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = if lo == seg.t0 { seg.start() } else { seg.eval(lo) };
    (lo, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingDirection {
    Rising,
    Falling,
    Either,
}

/// Times in `(t0, t1]` where `f(y(t))` crosses zero in the given direction,
/// bisected on the dense output to full precision.
pub fn find_crossings<S, F, const N: usize>(
    rhs: &S,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    cfg: &IntegratorConfig,
    f: F,
    direction: CrossingDirection,
) -> Result<Vec<f64>>
where
    S: SystemRhs<N> + ?Sized,
    F: Fn(&[f64; N]) -> f64,
{
    let mut stepper = Dopri5::new(rhs, t0, y0, t1, *cfg)?;
    let mut out = Vec::new();
    let mut f_prev = f(&y0);
    loop {
        match stepper.advance()? {
            Advance::Finished | Advance::Underflow => break,
            Advance::Step(seg) => {
                let f_new = f(stepper.y());
                let rising = f_prev < 0.0 && f_new >= 0.0;
                let falling = f_prev > 0.0 && f_new <= 0.0;
                let hit = match direction {
                    CrossingDirection::Rising => rising,
                    CrossingDirection::Falling => falling,
                    CrossingDirection::Either => rising || falling,
                };
                if hit {
                    let (mut lo, mut hi) = (seg.t0, stepper.t());
                    let f_lo = f_prev;
                    loop {
                        let mid = 0.5 * (lo + hi);
                        if mid <= lo || mid >= hi {
                            break;
                        }
                        let fm = f(&seg.eval(mid));
                        if (fm < 0.0) == (f_lo < 0.0) && fm != 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    out.push(0.5 * (lo + hi));
                }
                f_prev = f_new;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Ml1dSystem;
    use crate::model::{DeformParams, SystemTag};

    struct Harmonic;

    impl SystemRhs<2> for Harmonic {
        fn tag(&self) -> SystemTag {
            SystemTag::Custom
        }
        fn eval(&self, y: &[f64; 2]) -> Result<[f64; 2]> {
            Ok([y[1], -y[0]])
        }
        fn field_names(&self) -> [&'static str; 2] {
            ["x", "v"]
        }
    }

    struct Still;

    impl SystemRhs<2> for Still {
        fn tag(&self) -> SystemTag {
            SystemTag::Custom
        }
        fn eval(&self, _y: &[f64; 2]) -> Result<[f64; 2]> {
            Ok([0.0, 0.0])
        }
        fn field_names(&self) -> [&'static str; 2] {
            ["x", "v"]
        }
    }

    #[test]
    fn rk4_single_step_accuracy() {
        let y = rk4_step(&Harmonic, 0.0, &[1.0, 0.0], 0.1).unwrap();
        assert!((y[0] - 0.1f64.cos()).abs() < 1e-7);
        assert!((y[1] + 0.1f64.sin()).abs() < 1e-7);
        assert_eq!(rk4_step(&Still, 0.0, &[0.3, -2.0], 0.5).unwrap(), [0.3, -2.0]);
    }

    #[test]
    fn rk4_local_error_scales_as_fifth_power() {
        // single-step error is O(h^5): halving h divides it by ~32; two
        // half-steps against one full step gives the global ratio ~16
        let exact = |t: f64| [t.cos(), -t.sin()];
        let err = |h: f64, n: usize| {
            let mut y = [1.0, 0.0];
            for _ in 0..n {
                y = rk4_step(&Harmonic, 0.0, &y, h).unwrap();
            }
            let e = exact(h * n as f64);
            ((y[0] - e[0]).powi(2) + (y[1] - e[1]).powi(2)).sqrt()
        };
        let ratio = err(0.2, 1) / err(0.1, 2);
        assert!((ratio - 16.0).abs() < 2.0, "ratio {ratio}");
    }

    #[test]
    fn dense_output_reproduces_endpoints() {
        let f0 = Harmonic.eval(&[1.0, 0.0]).unwrap();
        let step = dopri5_step(&Harmonic, &[1.0, 0.0], &f0, 0.3).unwrap();
        let seg = DenseSegment {
            t0: 0.0,
            h: 0.3,
            coeffs: step.dense,
        };
        assert_eq!(seg.eval(0.0), [1.0, 0.0]);
        let end = seg.eval(0.3);
        assert!((end[0] - step.y[0]).abs() < 1e-15);
        let mid_err = |h: f64| {
            let step = dopri5_step(&Harmonic, &[1.0, 0.0], &f0, h).unwrap();
            let seg = DenseSegment { t0: 0.0, h, coeffs: step.dense };
            (seg.eval(0.5 * h)[0] - (0.5 * h).cos()).abs()
        };
        assert!(mid_err(0.3) < 1e-6);
        // local interpolation error is O(h^5)
        assert!(mid_err(0.3) / mid_err(0.15) > 20.0);
    }

    #[test]
    fn adaptive_harmonic_ten_periods() {
        let cfg = IntegratorConfig::with_tolerance(1e-10);
        let t1 = 20.0 * std::f64::consts::PI;
        let traj = integrate_adaptive(&Harmonic, 0.0, [1.0, 0.0], t1, &cfg).unwrap();
        let (t, y) = traj.last().unwrap();
        assert_eq!(t, t1);
        assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8, "{y:?}");
        assert_eq!(traj.meta.termination, TerminationReason::ReachedT1);
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sampling_grid_is_respected() {
        let cfg = IntegratorConfig {
            sample_dt: 0.25,
            ..IntegratorConfig::with_tolerance(1e-10)
        };
        let traj = integrate_adaptive(&Harmonic, 0.0, [1.0, 0.0], 2.1, &cfg).unwrap();
        assert_eq!(traj.len(), 10); // 0, 0.25, ..., 2.0, 2.1
        for (t, y) in traj.iter() {
            assert!((y[0] - t.cos()).abs() < 1e-9);
        }
        assert_eq!(*traj.times.last().unwrap(), 2.1);
    }

    #[test]
    fn starting_outside_domain_is_an_error() {
        let sys = Ml1dSystem {
            params: DeformParams::new(-1.0, 1.0).unwrap(),
        };
        let r = integrate_adaptive(&sys, 0.0, [1.2, 0.0], 1.0, &IntegratorConfig::default());
        assert!(matches!(r, Err(Error::Domain { .. })));
    }

    #[test]
    fn budget_exhaustion() {
        let cfg = IntegratorConfig {
            max_steps: 5,
            h_init: 1e-3,
            h_max: 1e-3,
            ..IntegratorConfig::default()
        };
        let r = integrate_adaptive(&Harmonic, 0.0, [1.0, 0.0], 1.0, &cfg);
        assert!(matches!(r, Err(Error::Budget { max_steps: 5, .. })));
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::default().validate().is_ok());
        let bad = IntegratorConfig {
            h_init: 10.0,
            ..IntegratorConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = IntegratorConfig {
            rel_tol: 0.0,
            ..IntegratorConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn rising_crossings_of_cosine() {
        let cfg = IntegratorConfig::with_tolerance(1e-12);
        let c = find_crossings(
            &Harmonic,
            0.0,
            [1.0, 0.0],
            13.0,
            &cfg,
            |y| y[0],
            CrossingDirection::Rising,
        )
        .unwrap();
        let pi = std::f64::consts::PI;
        assert_eq!(c.len(), 2);
        assert!((c[0] - 1.5 * pi).abs() < 1e-10);
        assert!((c[1] - 3.5 * pi).abs() < 1e-10);
    }
}
