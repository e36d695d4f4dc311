use proptest::prelude::*;
use std::f64::consts::TAU;

use oscillab_core::dynamics::{inverse_legendre_2d, legendre_2d};
use oscillab_core::invariants::lie_bracket_residual;
use oscillab_core::model::metric_factor;
use oscillab_core::quantum::{adapted_coordinate, beta_from_alpha, x_of_q};
use oscillab_core::separability::{
    from_polar, from_zx, from_zy, lagrange_identity_residual, superseparable_identity_residual, to_polar,
    to_zx, to_zy,
};
use oscillab_core::{DeformParams, PhaseState2D, RationalFrequencies, State2D};

fn lambda_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), -2.0..-0.01f64, 0.01..3.0f64]
}

/// A point strictly inside the domain of `lambda`.
fn point_in_domain(lambda: f64) -> impl Strategy<Value = (f64, f64)> {
    let r_max = if lambda < 0.0 { 0.95 / (-lambda).sqrt() } else { 3.0 };
    (0.0..r_max, -3.2..3.2f64).prop_map(|(r, phi)| from_polar(r, phi))
}

proptest! {
    #[test]
    fn legendre_round_trip(lambda in lambda_strategy(), seed in (0.0..1f64, 0.0..1f64), v in (-3.0..3.0f64, -3.0..3.0f64)) {
        let r_max = if lambda < 0.0 { 0.95 / (-lambda).sqrt() } else { 3.0 };
        let (x, y) = from_polar(seed.0 * r_max, TAU * seed.1);
        let s = State2D::new(x, y, v.0, v.1);
        let p = legendre_2d(&s, lambda).unwrap();
        let back = inverse_legendre_2d(&p, lambda).unwrap();
        prop_assert!((back.vx - s.vx).abs() < 1e-11 * (1.0 + s.vx.abs()));
        prop_assert!((back.vy - s.vy).abs() < 1e-11 * (1.0 + s.vy.abs()));
    }

    #[test]
    fn superseparable_identity(lambda in lambda_strategy(), seed in (0.0..1f64, 0.0..1f64)) {
        let p = DeformParams::new(lambda, 1.0).unwrap();
        let r_max = if lambda < 0.0 { 0.95 / (-lambda).sqrt() } else { 3.0 };
        let (x, y) = from_polar(seed.0 * r_max, TAU * seed.1);
        let res = superseparable_identity_residual(x, y, &p).unwrap();
        let scale = (x * x + y * y) / metric_factor(lambda, x * x + y * y);
        prop_assert!(res <= 1e-13 * scale.max(1.0), "{}", res);
    }

    #[test]
    fn lagrange_identity(lambda in lambda_strategy(), s in (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)) {
        let st = PhaseState2D::new(s.0, s.1, s.2, s.3);
        prop_assert!(lagrange_identity_residual(&st, lambda) < 1e-12);
    }

    #[test]
    fn lie_algebra(lambda in lambda_strategy(), seed in (0.0..1f64, 0.0..1f64)) {
        let r_max = if lambda < 0.0 { 0.95 / (-lambda).sqrt() } else { 3.0 };
        let (x, y) = from_polar(seed.0 * r_max, TAU * seed.1);
        prop_assert!(lie_bracket_residual(lambda, x, y).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn chart_round_trips((lambda, (x, y)) in lambda_strategy().prop_flat_map(|l| (Just(l), point_in_domain(l)))) {
        let (zx, y1) = to_zx(x, y, lambda).unwrap();
        let (bx, by) = from_zx(zx, y1, lambda).unwrap();
        prop_assert!((bx - x).abs() < 1e-12 && (by - y).abs() < 1e-12);
        let (x2, zy) = to_zy(x, y, lambda).unwrap();
        let (cx, cy) = from_zy(x2, zy, lambda).unwrap();
        prop_assert!((cx - x).abs() < 1e-12 && (cy - y).abs() < 1e-12);
        if x.hypot(y) > 1e-6 {
            let (r, phi) = to_polar(x, y).unwrap();
            let (dx, dy) = from_polar(r, phi);
            prop_assert!((dx - x).abs() < 1e-12 && (dy - y).abs() < 1e-12);
        }
    }

    #[test]
    fn adapted_coordinate_inverts(lambda in lambda_strategy(), u in -0.99..0.99f64) {
        let x = if lambda < 0.0 { u / (-lambda).sqrt() } else { 4.0 * u };
        let q = adapted_coordinate(x, lambda).unwrap();
        prop_assert!((x_of_q(q, lambda).unwrap() - x).abs() < 1e-12 * (1.0 + x.abs()));
    }

    #[test]
    fn beta_root_is_positive(alpha in 0.01..10.0f64, lambda in -5.0..5.0f64) {
        let b = beta_from_alpha(alpha, lambda);
        prop_assert!(b > 0.0);
        prop_assert!((b * (b + lambda) - alpha * alpha).abs() < 1e-12 * (alpha * alpha).max(1.0));
    }

    #[test]
    fn rational_frequencies_are_reduced(n1 in 1u32..20, n2 in 1u32..20, w in 0.1..5.0f64) {
        let f = RationalFrequencies::new(n1, n2, w).unwrap();
        prop_assert!((f.omega1() - n1 as f64 * w).abs() < 1e-12 * w * n1 as f64);
        prop_assert!((f.omega2() - n2 as f64 * w).abs() < 1e-12 * w * n2 as f64);
    }
}
