//! Shared fixtures for the benchmarks.

use oscillab_core::dynamics::Ml2dSystem;
use oscillab_core::isochrony::PiecewisePotential;
use oscillab_core::quantum::{GridSpec, QuantumParams};
use oscillab_core::{DeformParams, IntegratorConfig};

pub fn ml2d_fixture() -> (Ml2dSystem, [f64; 4]) {
    let params = DeformParams::new(0.3, 1.0).expect("valid parameters");
    (Ml2dSystem::oscillator(params), [0.6, -0.2, 0.1, 0.5])
}

pub fn integrator_config() -> IntegratorConfig {
    IntegratorConfig::with_tolerance(1e-10)
}

pub fn quantum_fixture(n_points: usize) -> (QuantumParams, GridSpec) {
    (
        QuantumParams::from_beta(1.0, 8.0).expect("valid parameters"),
        GridSpec::with_q_max(n_points, 12.0),
    )
}

pub fn isochrony_fixture() -> PiecewisePotential {
    PiecewisePotential::quadratic(1.0, 2.5).expect("valid frequencies")
}
