use nalgebra::DMatrix;
use oscillab_core::quantum::{
    bound_state_count, discretize_hamiltonian, groundstate_residual, lowering, resolve_grid,
    shape_invariance_residual, spectrum_report, x_of_q, groundstate_psi0, BoundStates, GridSpec,
    QuantumParams,
};
use oscillab_core::tridiag::{eig_lowest, SymTridiagonal};

#[test]
fn sturm_bisection_agrees_with_dense_eigensolver() {
    let p = QuantumParams::from_beta(0.7, 2.0).unwrap();
    let grid = resolve_grid(&p, &GridSpec::with_q_max(50, 6.0), 3).unwrap();
    let m = discretize_hamiltonian(&p, &grid).unwrap();
    let n = m.dim();
    let dense = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            m.diag()[i]
        } else if i + 1 == j {
            m.off_diag()[i]
        } else if j + 1 == i {
            m.off_diag()[j]
        } else {
            0.0
        }
    });
    let mut oracle: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
    oracle.sort_by(f64::total_cmp);
    let ours = eig_lowest(&m, n).unwrap();
    for (a, b) in ours.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn random_tridiagonal_matches_dense() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(2..40);
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let e: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let m = SymTridiagonal::new(d.clone(), e.clone()).unwrap();
        let dense = DMatrix::from_fn(n, n, |i, j| match (i as isize - j as isize).abs() {
            0 => d[i],
            1 => e[i.min(j)],
            _ => 0.0,
        });
        let mut oracle: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
        oracle.sort_by(f64::total_cmp);
        let k = n.min(5);
        let ours = eig_lowest(&m, k).unwrap();
        for i in 0..k {
            assert!((ours[i] - oracle[i]).abs() < 1e-9);
        }
    }
}

fn order(p: &QuantumParams, n_levels: usize) -> (Vec<f64>, Vec<f64>) {
    let coarse = spectrum_report(p, &GridSpec::new(4000), n_levels).unwrap();
    let fine = spectrum_report(p, &GridSpec::new(8000), n_levels).unwrap();
    let h_ratio = (coarse.q_max / 4001.0) / (fine.q_max / 8001.0);
    let orders = coarse
        .abs_diff
        .iter()
        .zip(&fine.abs_diff)
        .map(|(a, b)| (a / b).ln() / h_ratio.ln())
        .collect();
    (coarse.abs_diff, orders)
}

#[test]
fn ladder_matches_diagonalization_with_second_order_convergence() {
    for &(lambda, beta) in &[(0.0, 1.0), (-1.0, 2.0), (1.0, 3.0)] {
        let p = QuantumParams::from_beta(lambda, beta).unwrap();
        let (diffs, orders) = order(&p, 3);
        assert_eq!(diffs.len(), 3);
        for (d, o) in diffs.iter().zip(&orders) {
            assert!(*d < 1e-3, "lambda {lambda}: diff {d:e}");
            assert!(*o > 1.8, "lambda {lambda}: order {o}");
        }
    }
}

#[test]
fn report_limits_ladder_to_bound_states() {
    let p = QuantumParams::from_beta(1.0, 3.0).unwrap();
    let r = spectrum_report(&p, &GridSpec::new(2000), 5).unwrap();
    assert_eq!(r.bound_states, BoundStates::Finite(3));
    assert_eq!(r.threshold, Some(6.0));
    assert_eq!(r.ladder.len(), 3);
    assert_eq!(r.numeric.len(), 5);
    // remaining levels sit above the threshold
    assert!(r.numeric[3] > 6.0);
    assert_eq!(bound_state_count(&QuantumParams::from_beta(1.0, 1.0).unwrap()), BoundStates::Finite(1));
}

#[test]
fn groundstate_is_annihilated() {
    let p = QuantumParams::from_beta(-1.0, 2.0).unwrap();
    let grid = resolve_grid(&p, &GridSpec::new(4000), 1).unwrap();
    assert!(groundstate_residual(&p, &grid).unwrap() < 1e-5);
    let psi: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&q| groundstate_psi0(x_of_q(q, p.lambda()).unwrap(), &p).unwrap())
        .collect();
    let a_psi = lowering(&p, &grid, &psi, p.beta());
    assert!(grid.norm(&a_psi) / grid.norm(&psi) < 1e-5);
}

#[test]
fn shape_invariance_holds_on_trial_functions() {
    let bump = |q: f64| (-q * q).exp();
    let odd = |q: f64| q * (-0.5 * q * q).exp();
    for &(lambda, beta) in &[(0.0, 1.0), (1.0, 3.0)] {
        let p = QuantumParams::from_beta(lambda, beta).unwrap();
        let grid = resolve_grid(&p, &GridSpec::with_q_max(4000, 10.0), 1).unwrap();
        let r = shape_invariance_residual(&p, &grid, &[&bump, &odd]).unwrap();
        assert!(r < 1e-5, "lambda {lambda}: {r:e}");
    }
    let p = QuantumParams::from_beta(-1.0, 2.0).unwrap();
    let grid = resolve_grid(&p, &GridSpec::new(4000), 1).unwrap();
    let c4 = |q: f64| q.cos().powi(4);
    let c4s = |q: f64| q.sin() * q.cos().powi(4);
    let r = shape_invariance_residual(&p, &grid, &[&c4, &c4s]).unwrap();
    assert!(r < 1e-5, "{r:e}");
}

#[test]
fn first_gap_uses_lambda_dependent_shift() {
    let p = QuantumParams::from_beta(2.0, 5.0).unwrap();
    let levels = spectrum_report(&p, &GridSpec::new(4000), 2).unwrap().numeric;
    let gap = levels[1] - levels[0];
    assert!((gap - (p.beta() - 0.5 * p.lambda())).abs() < 1e-3);
    // a fixed shift of 1/2 would give beta - lambda + 1/2
    assert!((gap - (p.beta() - p.lambda() + 0.5)).abs() > 0.1);
}
