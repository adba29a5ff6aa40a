mod common;

use proptest::prelude::*;
use weierdim_core::cover::{count_graph_cubes, naive_count_oracle, SamplingPolicy};
use weierdim_core::curve::{make_counterexample_curve, PeriodicCurve};
use weierdim_core::series::WeierstrassParams;

fn curve(which: usize, b: u64, lambda: f64) -> PeriodicCurve {
    match which {
        0 => PeriodicCurve::unit_circle(),
        1 => PeriodicCurve::square_loop(0.8).unwrap(),
        2 => common::sample_polyline(),
        _ => make_counterexample_curve(b, lambda, 64).unwrap(),
    }
}

fn small_config() -> impl Strategy<Value = (usize, u64, f64, u32, usize)> {
    (0usize..4, prop::sample::select(vec![2u64, 3]), 0.55f64..0.95, 0u32..=3, prop::sample::select(vec![16usize, 32, 64]))
}

proptest! {
    #![proptest_config(common::config(24))]

    #[test]
    fn fixed_grid_count_equals_naive_oracle((which, b, lambda, n, m) in small_config()) {
        let params = WeierstrassParams::new(lambda, b, 1e-12).unwrap();
        let phi = curve(which, b, lambda);
        let fast = count_graph_cubes(&phi, &params, n, &SamplingPolicy::fixed(m)).unwrap();
        let naive = naive_count_oracle(&phi, &params, n, m).unwrap();
        prop_assert_eq!(fast.count, naive, "{} b={} lambda={} n={} m={}", phi, b, lambda, n, m);
    }

    #[test]
    fn count_grows_with_the_budget_and_respects_the_cap((which, b, lambda, n, m) in small_config()) {
        let params = WeierstrassParams::new(lambda, b, 1e-12).unwrap();
        let phi = curve(which, b, lambda);
        let mut last = 0;
        for samples in [m, 2 * m, 4 * m] {
            let r = count_graph_cubes(&phi, &params, n, &SamplingPolicy::fixed(samples)).unwrap();
            prop_assert!(r.count >= last);
            last = r.count;
        }
        let delta_w = phi.oscillation(4096).value / (1.0 - lambda);
        let bn = (b as f64).powi(n as i32);
        let side = (delta_w * bn).ceil() + 2.0;
        prop_assert!(last as f64 <= bn * side * side);
    }

    #[test]
    fn per_interval_counts_sum_to_the_total((which, b, lambda, n, m) in small_config()) {
        let params = WeierstrassParams::new(lambda, b, 1e-12).unwrap();
        let phi = curve(which, b, lambda);
        let policy = SamplingPolicy::adaptive(m, 8 * m, 0.01).with_per_interval();
        let r = count_graph_cubes(&phi, &params, n, &policy).unwrap();
        let parts = r.per_interval_counts.clone().unwrap();
        prop_assert_eq!(parts.len() as u64, b.pow(n));
        prop_assert_eq!(parts.iter().sum::<u64>(), r.count);
        prop_assert_eq!(r, count_graph_cubes(&phi, &params, n, &policy).unwrap());
    }
}

#[test]
fn adaptive_counts_never_fall_below_their_starting_grid() {
    let params = WeierstrassParams::new(0.7, 3, 1e-12).unwrap();
    let phi = PeriodicCurve::unit_circle();
    for n in 1..=3 {
        let start = count_graph_cubes(&phi, &params, n, &SamplingPolicy::fixed(64)).unwrap();
        let grown = count_graph_cubes(&phi, &params, n, &SamplingPolicy::adaptive(64, 4096, 0.01)).unwrap();
        assert!(grown.count >= start.count, "level {n}: {} < {}", grown.count, start.count);
        assert!(grown.samples_used >= start.samples_used);
    }
}
