mod common;

use proptest::prelude::*;
use weierdim_core::curve::{complement_analysis, make_counterexample_curve, PeriodicCurve};
use weierdim_core::Point2;

fn builtins() -> Vec<PeriodicCurve> {
    vec![
        PeriodicCurve::unit_circle(),
        PeriodicCurve::square_loop(1.5).unwrap(),
        make_counterexample_curve(2, 0.8, 64).unwrap(),
        common::sample_polyline(),
    ]
}

proptest! {
    #![proptest_config(common::config(2000))]

    #[test]
    fn lipschitz_bound_holds_on_random_pairs(s in -3.0f64..3.0, d in -1.0f64..=1.0, which in 0usize..4) {
        let curve = &builtins()[which];
        let l = curve.analytic_lipschitz().unwrap();
        let gap = curve.eval(s).dist(curve.eval(s + d));
        prop_assert!(gap <= l * d.abs() + 1e-9, "{curve}: |dphi| = {gap} > {l} * {d}");
    }

    #[test]
    fn curves_are_periodic(s in -5.0f64..5.0, shift in -3i32..3, which in 0usize..4) {
        let curve = &builtins()[which];
        prop_assert!(curve.eval(s).dist(curve.eval(s + shift as f64)) <= 1e-12);
    }
}

#[test]
fn epsilon_is_stable_under_doubled_resolution() {
    for curve in [PeriodicCurve::unit_circle(), PeriodicCurve::square_loop(2.0).unwrap(), common::sample_polyline()] {
        for res in [128, 256, 512] {
            let coarse = complement_analysis(&curve, res).unwrap();
            let fine = complement_analysis(&curve, 2 * res).unwrap();
            assert!(
                (coarse.epsilon - fine.epsilon).abs() <= coarse.resolution_error,
                "{curve} at {res}: {} vs {} (resolution error {})",
                coarse.epsilon,
                fine.epsilon,
                coarse.resolution_error
            );
        }
    }
}

#[test]
fn recentring_on_the_reported_centre_moves_it_to_the_origin() {
    let curves = [
        PeriodicCurve::unit_circle().recenter(Point2::new(0.4, -0.25)),
        PeriodicCurve::square_loop(1.0).unwrap().recenter(Point2::new(-2.0, 3.0)),
        common::sample_polyline(),
    ];
    for curve in curves {
        let before = complement_analysis(&curve, 512).unwrap();
        let z0 = before.center.unwrap();
        let after = complement_analysis(&curve.recenter(z0), 512).unwrap();
        let c = after.center.unwrap();
        assert!(c.norm() <= after.resolution_error, "{curve}: centre moved to ({}, {})", c.x, c.y);
    }
}

#[test]
fn ell_beta_reduces_to_the_curve_where_it_is_locally_constant() {
    // Constant on [0.5, 0.75], which is [beta, beta + 1/b] for beta = 0.5, b = 4.
    let curve = PeriodicCurve::polyline_from_triples(&[
        (0.0, -1.0, -1.0),
        (0.25, 1.0, -1.0),
        (0.5, 1.0, 1.0),
        (0.75, 1.0, 1.0),
    ])
    .unwrap();
    for lambda in [0.5, 0.99, 1.0 - 1e-9] {
        for i in 0..=100 {
            let s = i as f64 / 101.0;
            let d = curve.ell_beta(lambda, 4, 0.5, s).dist(curve.eval(s));
            assert!(d <= 1e-12, "lambda {lambda}, s {s}: {d}");
        }
    }
}
