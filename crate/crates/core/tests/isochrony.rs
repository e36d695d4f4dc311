use std::sync::Arc;

use oscillab_core::isochrony::{
    energy, integrated_period, isochrony_scan, log_spaced, period, quadratic_period,
    PiecewiseOscillator, PiecewisePotential,
};
use oscillab_core::{integrate_adaptive, IntegratorConfig};

#[test]
fn quadrature_matches_integrator_period() {
    let pot = PiecewisePotential::quadratic(0.8, 2.0).unwrap();
    let cfg = IntegratorConfig::with_tolerance(1e-12);
    for &e in &[0.05, 1.0, 20.0] {
        let quad = period(&pot, e).unwrap();
        let measured = integrated_period(&pot, e, 4.2 * quad, &cfg).unwrap();
        assert!((measured / quad - 1.0).abs() < 1e-6, "E = {e}");
    }
}

#[test]
fn asymmetric_quartic_period_by_both_methods() {
    let pot = PiecewisePotential::new(
        "asym_quartic",
        Arc::new(|x: f64| 2.0 * x.powi(4)),
        Arc::new(|x: f64| x.powi(4)),
        1e6,
    )
    .unwrap();
    let cfg = IntegratorConfig::with_tolerance(1e-12);
    let quad = period(&pot, 3.0).unwrap();
    let measured = integrated_period(&pot, 3.0, 3.5 * quad, &cfg).unwrap();
    assert!((measured / quad - 1.0).abs() < 1e-6);
}

#[test]
fn piecewise_quadratic_is_isochronous() {
    let energies = log_spaced(0.01, 100.0, 25);
    for &(w1, w2) in &[(1.0, 1.0), (0.5, 3.0), (2.0, 0.7)] {
        let pot = PiecewisePotential::quadratic(w1, w2).unwrap();
        assert!(isochrony_scan(&pot, &energies).unwrap() < 1e-9);
        for &e in &[0.01, 1.0, 100.0] {
            assert!((period(&pot, e).unwrap() / quadratic_period(w1, w2) - 1.0).abs() < 1e-8);
        }
    }
    let quartic = PiecewisePotential::power(1.0, 4.0).unwrap();
    assert!(isochrony_scan(&quartic, &energies).unwrap() > 0.5);
}

#[test]
fn harmonic_period_is_two_pi_over_omega() {
    for &w in &[0.3, 1.0, 4.0] {
        let pot = PiecewisePotential::power(0.5 * w * w, 2.0).unwrap();
        for &e in &[0.01, 2.0, 50.0] {
            let t = period(&pot, e).unwrap();
            assert!((t * w / (2.0 * std::f64::consts::PI) - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn oscillator_conserves_energy_across_the_kink() {
    let pot = PiecewisePotential::quadratic(1.0, 3.0).unwrap();
    let sys = PiecewiseOscillator { potential: pot.clone() };
    let mut cfg = IntegratorConfig::with_tolerance(1e-12);
    cfg.sample_dt = 0.05;
    let traj = integrate_adaptive(&sys, 0.0, [0.0, 2.0], 20.0, &cfg).unwrap();
    let e0 = energy(&pot, &traj.states[0]);
    for y in &traj.states {
        let d = (energy(&pot, y) - e0).abs();
        assert!(d < 1e-8, "{d:e}");
    }
}
