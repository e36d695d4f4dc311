//! `oscillab simulate`: build a system from a scenario, integrate it and
//! report invariant drift.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use oscillab_core::dynamics::{
    harmonic2d_energies, ml1d_energy, ml2d_hamiltonian, FreePotential, Harmonic2dSystem,
    IsotropicHarmonic, Ml1dSystem, Ml2dSystem, MlPotential, Nonstd1dSystem, Nonstd2dSystem,
    Potential2D,
};
use oscillab_core::invariants::{
    drift_report, eval_harmonic_j, eval_i123_phase, eval_nonstd_integrals, eval_nonstd_k,
    InvariantReport,
};
use oscillab_core::isochrony::{energy as piecewise_energy, PiecewiseOscillator, PiecewisePotential};
use oscillab_core::{
    integrate_adaptive, DeformParams, IntegratorConfig, NonstdParams, PhaseState2D,
    RationalFrequencies, State1D, State2D, SystemRhs, TerminationReason, Trajectory,
};
use serde::Serialize;

use crate::config::{resolve_output, PotentialKind, ScenarioConfig, SystemConfig, SCHEMA_VERSION};
use crate::error::CliError;
use crate::output::{to_json, trajectory_csv, write_atomic};

type Eval<const N: usize, V> = Box<dyn Fn(&[f64; N]) -> oscillab_core::Result<V> + Send + Sync>;

pub enum Invariant<const N: usize> {
    Real(Eval<N, f64>),
    Complex(Eval<N, Complex64>),
}

pub struct Built<const N: usize> {
    pub system: Box<dyn SystemRhs<N>>,
    pub invariants: Vec<(&'static str, Invariant<N>)>,
}

pub enum BuiltSystem {
    Two(Built<2>),
    Four(Built<4>),
}

fn real<const N: usize>(f: impl Fn(&[f64; N]) -> oscillab_core::Result<f64> + Send + Sync + 'static) -> Invariant<N> {
    Invariant::Real(Box::new(f))
}

fn complex<const N: usize>(
    f: impl Fn(&[f64; N]) -> oscillab_core::Result<Complex64> + Send + Sync + 'static,
) -> Invariant<N> {
    Invariant::Complex(Box::new(f))
}

fn invalid(e: oscillab_core::Error) -> CliError {
    CliError::Validation(e)
}

pub fn build_system(cfg: &SystemConfig) -> Result<BuiltSystem, CliError> {
    Ok(match *cfg {
        SystemConfig::Ml1d { lambda, alpha } => {
            let p = DeformParams::new(lambda, alpha).map_err(invalid)?;
            BuiltSystem::Two(Built {
                system: Box::new(Ml1dSystem { params: p }),
                invariants: vec![("E", real(move |y| ml1d_energy(&State1D::from_array(*y), &p)))],
            })
        }
        SystemConfig::Ml2dHamiltonian {
            lambda,
            alpha,
            potential,
        } => {
            let p = DeformParams::new(lambda, alpha).map_err(invalid)?;
            let pot: Arc<dyn Potential2D> = match potential {
                PotentialKind::Oscillator => Arc::new(MlPotential { lambda }),
                PotentialKind::Free => Arc::new(FreePotential),
                PotentialKind::Harmonic => Arc::new(IsotropicHarmonic),
            };
            let h_pot = pot.clone();
            let mut invariants = vec![(
                "H",
                real(move |y: &[f64; 4]| ml2d_hamiltonian(&PhaseState2D::from_array(*y), &p, &*h_pot)),
            )];
            if potential == PotentialKind::Oscillator {
                invariants.push(("I1", real(move |y| Ok(eval_i123_phase(&PhaseState2D::from_array(*y), &p)?.0))));
                invariants.push(("I2", real(move |y| Ok(eval_i123_phase(&PhaseState2D::from_array(*y), &p)?.1))));
            }
            invariants.push(("I3", real(move |y| Ok(eval_i123_phase(&PhaseState2D::from_array(*y), &p)?.2))));
            BuiltSystem::Four(Built {
                system: Box::new(Ml2dSystem::new(p, pot)),
                invariants,
            })
        }
        SystemConfig::Harmonic2d { n1, n2, omega0 } => {
            let f = RationalFrequencies::new(n1, n2, omega0).map_err(invalid)?;
            BuiltSystem::Four(Built {
                system: Box::new(Harmonic2dSystem { freqs: f }),
                invariants: vec![
                    ("Ex", real(move |y| Ok(harmonic2d_energies(&PhaseState2D::from_array(*y), &f).0))),
                    ("Ey", real(move |y| Ok(harmonic2d_energies(&PhaseState2D::from_array(*y), &f).1))),
                    ("J", complex(move |y| Ok(eval_harmonic_j(&PhaseState2D::from_array(*y), &f)))),
                ],
            })
        }
        SystemConfig::Nonstd1dFree { k } => nonstd1d(Nonstd1dSystem::free(k), &[("k", k)])?,
        SystemConfig::Nonstd1dOmega { k, omega } => {
            nonstd1d(Nonstd1dSystem::omega(k, omega), &[("k", k), ("omega", omega)])?
        }
        SystemConfig::Nonstd2d { k1, k2, frequencies } => {
            finite(&[("k1", k1), ("k2", k2)])?;
            match frequencies {
                None => BuiltSystem::Four(Built {
                    system: Box::new(Nonstd2dSystem::free(k1, k2)),
                    invariants: vec![
                        ("E1", real(move |y| Ok(eval_nonstd_integrals(&State2D::from_array(*y), k1, k2)?.e1))),
                        ("E2", real(move |y| Ok(eval_nonstd_integrals(&State2D::from_array(*y), k1, k2)?.e2))),
                        ("I3", real(move |y| Ok(eval_nonstd_integrals(&State2D::from_array(*y), k1, k2)?.i3))),
                        ("I4", real(move |y| Ok(eval_nonstd_integrals(&State2D::from_array(*y), k1, k2)?.i4))),
                    ],
                }),
                Some(fc) => {
                    let f = RationalFrequencies::new(fc.n1, fc.n2, fc.omega0).map_err(invalid)?;
                    let np = NonstdParams::new(k1, k2, f).map_err(invalid)?;
                    let sys = Nonstd2dSystem::rational(k1, k2, &f);
                    let (ax, ay) = (sys.x_axis.clone(), sys.y_axis.clone());
                    BuiltSystem::Four(Built {
                        system: Box::new(sys),
                        invariants: vec![
                            ("E1", real(move |y| ax.energy(&State1D::new(y[0], y[2])))),
                            ("E2", real(move |y| ay.energy(&State1D::new(y[1], y[3])))),
                            ("K", complex(move |y| eval_nonstd_k(&State2D::from_array(*y), &np))),
                        ],
                    })
                }
            }
        }
        SystemConfig::IsochronyPiecewise { omega1, omega2 } => {
            let pot = PiecewisePotential::quadratic(omega1, omega2).map_err(invalid)?;
            let e_pot = pot.clone();
            BuiltSystem::Two(Built {
                system: Box::new(PiecewiseOscillator { potential: pot }),
                invariants: vec![("H", real(move |y| Ok(piecewise_energy(&e_pot, y))))],
            })
        }
    })
}

fn finite(values: &[(&'static str, f64)]) -> Result<(), CliError> {
    for &(name, v) in values {
        if !v.is_finite() {
            return Err(invalid(oscillab_core::Error::InvalidParameter {
                name,
                reason: format!("must be finite, got {v}"),
            }));
        }
    }
    Ok(())
}

fn nonstd1d(sys: Nonstd1dSystem, params: &[(&'static str, f64)]) -> Result<BuiltSystem, CliError> {
    finite(params)?;
    let e = sys.clone();
    Ok(BuiltSystem::Two(Built {
        system: Box::new(sys),
        invariants: vec![("E_L", real(move |y| e.energy(&State1D::from_array(*y))))],
    }))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InvariantEntry {
    pub invariant: String,
    pub initial: f64,
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
    pub failed_samples: usize,
}

impl From<&InvariantReport> for InvariantEntry {
    fn from(r: &InvariantReport) -> Self {
        Self {
            invariant: r.name.clone(),
            initial: r.initial,
            max_abs_drift: r.max_abs_drift,
            max_rel_drift: r.max_rel_drift,
            failed_samples: r.failures.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub system: String,
    pub parameters: BTreeMap<String, f64>,
    pub t0: f64,
    pub t1: f64,
    pub t_end: f64,
    pub termination: String,
    pub samples: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub invariants: Vec<InvariantEntry>,
}

pub struct Simulation {
    pub csv: String,
    pub report: SimulationReport,
}

fn initial_state<const N: usize>(
    initial: &BTreeMap<String, f64>,
    fields: [&'static str; N],
) -> Result<[f64; N], CliError> {
    if let Some(extra) = initial.keys().find(|k| !fields.contains(&k.as_str())) {
        return Err(CliError::Config(format!(
            "unknown initial field `{extra}`; expected {}",
            fields.join(", ")
        )));
    }
    let mut y = [0.0; N];
    for (slot, name) in y.iter_mut().zip(fields) {
        *slot = *initial
            .get(name)
            .ok_or_else(|| CliError::Config(format!("initial field `{name}` is missing")))?;
        if !slot.is_finite() {
            return Err(CliError::Config(format!("initial field `{name}` must be finite")));
        }
    }
    Ok(y)
}

fn run<const N: usize>(cfg: &ScenarioConfig, built: Built<N>) -> Result<Simulation, CliError> {
    let Built { system, invariants } = built;
    let fields = system.field_names();
    let y0 = initial_state(&cfg.initial, fields)?;

    let selected: Vec<(&'static str, Invariant<N>)> = match &cfg.invariants {
        None => invariants,
        Some(names) => {
            let available: Vec<&str> = invariants.iter().map(|(n, _)| *n).collect();
            if let Some(bad) = names.iter().find(|n| !available.contains(&n.as_str())) {
                return Err(CliError::Config(format!(
                    "invariant `{bad}` is not defined for {}; available: {}",
                    system.tag(),
                    available.join(", ")
                )));
            }
            invariants
                .into_iter()
                .filter(|(n, _)| names.iter().any(|m| m == n))
                .collect()
        }
    };

    let icfg: IntegratorConfig = cfg.integrator.into();
    icfg.validate().map_err(invalid)?;
    if !(cfg.time.t0.is_finite() && cfg.time.t1.is_finite() && cfg.time.t1 > cfg.time.t0) {
        return Err(CliError::Config("time span requires finite t0 < t1".into()));
    }
    // the initial state must be admissible before anything is integrated
    system.eval(&y0).map_err(invalid)?;
    for i in 0..system.guard_count() {
        let g = system.guard(i, &y0);
        if !(g > 0.0) && !(g < 0.0) {
            return Err(invalid(oscillab_core::Error::SingularLevelSet {
                what: "guard function at the initial state",
                value: g,
            }));
        }
    }
    for (name, inv) in &selected {
        let ok = match inv {
            Invariant::Real(f) => f(&y0).map(|_| ()),
            Invariant::Complex(f) => f(&y0).map(|_| ()),
        };
        ok.map_err(|e| CliError::Config(format!("invariant `{name}` undefined at the initial state: {e}")))?;
    }

    let traj: Trajectory<N> = integrate_adaptive(&*system, cfg.time.t0, y0, cfg.time.t1, &icfg)
        .map_err(|e| CliError::Integration(e.to_string()))?;
    if traj.meta.termination == TerminationReason::StepUnderflow {
        return Err(CliError::Integration(format!(
            "step size underflow at t = {}",
            traj.times.last().copied().unwrap_or(cfg.time.t0)
        )));
    }

    let entries = selected
        .iter()
        .map(|(name, inv)| {
            let r = match inv {
                Invariant::Real(f) => drift_report(*name, &traj, f),
                Invariant::Complex(f) => drift_report(*name, &traj, f),
            };
            InvariantEntry::from(&r)
        })
        .collect();

    let report = SimulationReport {
        schema_version: SCHEMA_VERSION,
        system: traj.meta.system.to_string(),
        parameters: traj.meta.parameters.iter().cloned().collect(),
        t0: cfg.time.t0,
        t1: cfg.time.t1,
        t_end: traj.times.last().copied().unwrap_or(cfg.time.t0),
        termination: traj.meta.termination.as_str().to_string(),
        samples: traj.len(),
        accepted_steps: traj.meta.accepted_steps,
        rejected_steps: traj.meta.rejected_steps,
        invariants: entries,
    };
    Ok(Simulation {
        csv: trajectory_csv(&traj, fields),
        report,
    })
}

pub fn simulate(cfg: &ScenarioConfig) -> Result<Simulation, CliError> {
    match build_system(&cfg.system)? {
        BuiltSystem::Two(b) => run(cfg, b),
        BuiltSystem::Four(b) => run(cfg, b),
    }
}

/// Runs the scenario and writes both output files.
pub fn cmd_simulate(config_path: &Path) -> Result<SimulationReport, CliError> {
    let cfg = crate::config::load_scenario(config_path)?;
    let sim = simulate(&cfg)?;
    let report_json = to_json(&sim.report)?;
    write_atomic(&resolve_output(config_path, &cfg.output.trajectory), &sim.csv)?;
    write_atomic(&resolve_output(config_path, &cfg.output.report), &report_json)?;
    Ok(sim.report)
}
