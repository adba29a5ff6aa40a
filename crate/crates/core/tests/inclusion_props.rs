mod common;

use proptest::prelude::*;
use weierdim_core::curve::{recenter_on_disc, CurveConstants, PeriodicCurve};
use weierdim_core::inclusion::{
    verify_covering_inclusion, verify_disc_in_image, CoveringMode, ImageVariant, InclusionSampling,
};
use weierdim_core::series::WeierstrassParams;

fn circle() -> (PeriodicCurve, CurveConstants) {
    let curve = PeriodicCurve::unit_circle();
    let k = CurveConstants::compute(&curve, 4096, 512).unwrap();
    recenter_on_disc(&curve, &k)
}

proptest! {
    #![proptest_config(common::config(24))]

    #[test]
    fn circle_covering_defect_is_discretisation(lambda in 0.05f64..0.95) {
        let (curve, k) = circle();
        let r = verify_covering_inclusion(&curve, &k, lambda, CoveringMode::Plain, &InclusionSampling::default()).unwrap();
        prop_assert!(r.passed, "{:?}", r);
        prop_assert!(r.max_defect <= 2.0 * r.gap_observed, "{:?}", r);
    }

    #[test]
    fn doubling_rhs_samples_never_increases_the_defect(lambda in 0.1f64..0.9, m in 16usize..200) {
        let (curve, k) = circle();
        let sampling = InclusionSampling { curve_samples: 64, ..InclusionSampling::default() };
        let coarse = verify_covering_inclusion(&curve, &k, lambda, CoveringMode::Plain, &sampling.with_rhs_samples(m)).unwrap();
        let fine = verify_covering_inclusion(&curve, &k, lambda, CoveringMode::Plain, &sampling.with_rhs_samples(2 * m)).unwrap();
        prop_assert!(fine.max_defect <= coarse.max_defect);
    }
}

#[test]
fn image_defect_does_not_grow_with_rhs_density() {
    let (curve, k) = circle();
    let params = WeierstrassParams::new(0.95, 40, 1e-12).unwrap();
    let sampling = InclusionSampling { curve_samples: 64, ..InclusionSampling::default() };
    let coarse =
        verify_disc_in_image(&curve, &k, &params, 1, 5, ImageVariant::Plain, &sampling.with_rhs_samples(1 << 12)).unwrap();
    let fine =
        verify_disc_in_image(&curve, &k, &params, 1, 5, ImageVariant::Plain, &sampling.with_rhs_samples(1 << 13)).unwrap();
    assert!(fine.max_defect <= coarse.max_defect, "{} > {}", fine.max_defect, coarse.max_defect);
}

#[test]
fn ell_and_plain_image_checks_agree_when_both_apply() {
    let (curve, k) = circle();
    let params = WeierstrassParams::new(0.49, 150, 1e-12).unwrap();
    let sampling = InclusionSampling::for_image().with_rhs_samples(1 << 15);
    for kk in [0, 37, 149] {
        let plain = verify_disc_in_image(&curve, &k, &params, 1, kk, ImageVariant::Plain, &sampling).unwrap();
        let ell = verify_disc_in_image(&curve, &k, &params, 1, kk, ImageVariant::Ell, &sampling).unwrap();
        assert_eq!(plain.passed, ell.passed, "k = {kk}: {plain:?} vs {ell:?}");
    }
}

#[test]
fn reports_serialize_every_field_and_replay_identically() {
    let (curve, k) = circle();
    let sampling = InclusionSampling::default();
    let run = || {
        let r = verify_covering_inclusion(&curve, &k, 0.5, CoveringMode::Ell { beta: 0.25, b: 20 }, &sampling).unwrap();
        serde_json::to_value(&r).unwrap()
    };
    let a = run();
    for field in [
        "variant", "points_checked", "max_defect", "tolerance", "margin", "gap_observed", "passed", "lambda", "epsilon",
        "notes",
    ] {
        assert!(a.get(field).is_some(), "missing {field}");
    }
    assert_eq!(a["variant"]["kind"], "covering-ell");
    assert_eq!(a, run());
}
