#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};
use weierdim_core::curve::PeriodicCurve;

pub const SEED: u64 = 0x5eed_2024;

/// Proptest settings with a fixed seed and no failure files.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

/// A star-shaped pentagon-like loop around the origin.
pub fn sample_polyline() -> PeriodicCurve {
    PeriodicCurve::polyline_from_triples(&[
        (0.0, 1.0, 0.0),
        (0.2, 0.3, 0.9),
        (0.45, -0.8, 0.5),
        (0.6, -0.7, -0.6),
        (0.8, 0.2, -0.9),
    ])
    .unwrap()
}
