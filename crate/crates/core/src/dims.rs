//! Dimension formulas, threshold constants and empirical dimension fits.

use serde::Serialize;

use crate::cover::BoxCountResult;
use crate::error::{Error, Result};

/// Which branch of the planar dimension formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `bλ² < 1`: `D = log b / log(1/λ)`.
    SubCritical,
    /// `bλ² ≥ 1`: `D = 3 + 2 log_b λ`.
    Critical,
}

fn check_b_lambda(b: u64, lambda: f64) -> Result<()> {
    if b < 2 {
        return Err(Error::invalid(format!("b must be >= 2, got {b}")));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::invalid(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    Ok(())
}

/// Expected box dimension of the graph of a planar Weierstrass-type function.
pub fn theoretical_dimension(b: u64, lambda: f64) -> Result<(Regime, f64)> {
    check_b_lambda(b, lambda)?;
    let b = b as f64;
    if b * lambda * lambda < 1.0 {
        Ok((Regime::SubCritical, b.ln() / (1.0 / lambda).ln()))
    } else {
        Ok((Regime::Critical, 3.0 + 2.0 * lambda.ln() / b.ln()))
    }
}

/// Graph dimension `2 + log_b λ` of the real-valued case.
pub fn real_valued_dimension(b: u64, lambda: f64) -> Result<f64> {
    check_b_lambda(b, lambda)?;
    Ok(2.0 + lambda.ln() / (b as f64).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdConstants {
    /// Root `> 1` of `c = (L/ε)(2 + 1/(c − 1))`.
    pub c0: f64,
    pub c0_residual: f64,
    /// Root `> 1` of `c = (L/ε)(4 + 1/(c − 1))`.
    pub c1: f64,
    pub c1_residual: f64,
    /// `max{c1, 2L/Δ}`.
    pub c2: f64,
    /// `max{2·c0, c1}`.
    pub c: f64,
}

/// Solves `c = r(a + 1/(c − 1))` for its root above 1.
///
/// Multiplying by `c − 1` gives `c² − (1 + a·r)c + (a − 1)r = 0`. For `r > 0`
/// and `a ≥ 2` exactly one root exceeds 1; it is taken from the quadratic
/// formula and polished by Newton steps on the original equation.
fn solve_fixed_point(ratio: f64, a: f64, name: &str) -> Result<(f64, f64)> {
    let p = 1.0 + a * ratio;
    let q = (a - 1.0) * ratio;
    let disc = p * p - 4.0 * q;
    if disc < 0.0 {
        return Err(Error::NoRoot {
            equation: name.to_string(),
            detail: format!("negative discriminant {disc}"),
        });
    }
    let mut c = (p + disc.sqrt()) / 2.0;
    if !(c > 1.0) {
        return Err(Error::NoRoot {
            equation: name.to_string(),
            detail: format!("largest root {c} <= 1 for L/epsilon = {ratio}"),
        });
    }
    let g = |c: f64| c - ratio * (a + 1.0 / (c - 1.0));
    for _ in 0..8 {
        let dg = 1.0 + ratio / ((c - 1.0) * (c - 1.0));
        let next = c - g(c) / dg;
        if !(next > 1.0) || next == c {
            break;
        }
        c = next;
    }
    Ok((c, g(c).abs()))
}

/// Threshold constants from the curve constants `L`, `Δ(φ)` and `ε`. They
/// depend only on the ratios `L/ε` and `L/Δ`.
pub fn solve_threshold_constants(lipschitz: f64, delta: f64, epsilon: f64) -> Result<ThresholdConstants> {
    if epsilon == 0.0 {
        return Err(Error::ComplementConnected);
    }
    if !(lipschitz > 0.0 && lipschitz.is_finite()) {
        return Err(Error::invalid(format!("L must be positive, got {lipschitz}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    let ratio = lipschitz / epsilon;
    let (c0, c0_residual) = solve_fixed_point(ratio, 2.0, "c0 = (L/eps)(2 + 1/(c0 - 1))")?;
    let (c1, c1_residual) = solve_fixed_point(ratio, 4.0, "c1 = (L/eps)(4 + 1/(c1 - 1))")?;
    Ok(ThresholdConstants {
        c0,
        c0_residual,
        c1,
        c1_residual,
        c2: c1.max(2.0 * lipschitz / delta),
        c: (2.0 * c0).max(c1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionEstimate {
    /// Least-squares slope of `log_b N` against `n`.
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub level_range: (u32, u32),
    pub theoretical: f64,
    pub regime: Regime,
}

/// Unweighted least-squares fit of `log_b(count)` against the level `n`.
pub fn fit_box_dimension(results: &[BoxCountResult], lambda: f64) -> Result<DimensionEstimate> {
    if results.len() < 2 {
        return Err(Error::invalid(format!("need at least 2 levels to fit, got {}", results.len())));
    }
    let b = results[0].b;
    if results.iter().any(|r| r.b != b) {
        return Err(Error::invalid("all levels must share the same b"));
    }
    let mut levels: Vec<u32> = results.iter().map(|r| r.n).collect();
    levels.sort_unstable();
    if levels.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("levels must be distinct"));
    }
    if results.iter().any(|r| r.count == 0) {
        return Err(Error::invalid("cannot fit a level with zero occupied cubes"));
    }
    let (regime, theoretical) = theoretical_dimension(b, lambda)?;
    let log_b = (b as f64).ln();
    let pts: Vec<(f64, f64)> = results
        .iter()
        .map(|r| (r.n as f64, (r.count as f64).ln() / log_b))
        .collect();
    let (slope, intercept, residual_rms) = least_squares(&pts);
    Ok(DimensionEstimate {
        slope,
        intercept,
        residual_rms,
        level_range: (levels[0], levels[levels.len() - 1]),
        theoretical,
        regime,
    })
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(n: u32, b: u64, count: u64) -> BoxCountResult {
        BoxCountResult {
            n,
            b,
            count,
            samples_used: count,
            converged: true,
            per_interval_counts: None,
        }
    }

    #[test]
    fn dimension_formula_examples() {
        let (r, d) = theoretical_dimension(4, 0.5).unwrap();
        assert_eq!(r, Regime::Critical);
        assert!((d - 2.0).abs() < 1e-15);
        let sub = 4f64.ln() / 2f64.ln();
        assert!((sub - 2.0).abs() < 1e-15);

        let (_, d) = theoretical_dimension(2, 0.5f64.sqrt()).unwrap();
        assert!((d - 2.0).abs() < 1e-12);
        let (_, d) = theoretical_dimension(3, 0.7).unwrap();
        assert!((d - 2.3506).abs() < 1e-4);
        let (r, d) = theoretical_dimension(2, 0.6).unwrap();
        assert_eq!(r, Regime::SubCritical);
        assert!((d - 1.3569).abs() < 1e-4);

        assert!(theoretical_dimension(1, 0.5).is_err());
        assert!(theoretical_dimension(2, 1.0).is_err());
        assert!((real_valued_dimension(2, 0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_constants_unit_ratio() {
        let t = solve_threshold_constants(1.0, 1.0, 1.0).unwrap();
        assert!((t.c0 - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((t.c1 - (5.0 + 13f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(t.c0_residual <= 1e-10 && t.c1_residual <= 1e-10);
        assert_eq!(t.c2, t.c1.max(2.0));
        assert_eq!(t.c, (2.0 * t.c0).max(t.c1));
    }

    #[test]
    fn threshold_constants_circle() {
        let l = std::f64::consts::TAU;
        let t = solve_threshold_constants(l, 2.0, 1.0).unwrap();
        // Independent check: the roots of c² − (1 + 2r)c + r and
        // c² − (1 + 4r)c + 3r with r = 2π.
        let r = l;
        let c0 = ((1.0 + 2.0 * r) + ((1.0 + 2.0 * r).powi(2) - 4.0 * r).sqrt()) / 2.0;
        let c1 = ((1.0 + 4.0 * r) + ((1.0 + 4.0 * r).powi(2) - 12.0 * r).sqrt()) / 2.0;
        assert!((t.c0 - c0).abs() < 1e-10);
        assert!((t.c1 - c1).abs() < 1e-10);
        assert!((t.c0 - 13.09).abs() < 0.01);
        assert!((t.c1 - 25.39).abs() < 0.01);
        assert!((t.c - 26.17).abs() < 0.02);
        let eight_pi = 8.0 * std::f64::consts::PI;
        assert!((t.c - eight_pi).abs() / eight_pi <= 0.05);
    }

    #[test]
    fn threshold_errors() {
        assert!(matches!(solve_threshold_constants(1.0, 1.0, 0.0), Err(Error::ComplementConnected)));
        assert!(solve_threshold_constants(0.0, 1.0, 1.0).is_err());
        assert!(solve_threshold_constants(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn fit_exact_power_laws() {
        let rs: Vec<_> = (1..=4).map(|n| result(n, 2, 4u64.pow(n))).collect();
        let e = fit_box_dimension(&rs, 0.8).unwrap();
        assert!((e.slope - 2.0).abs() < 1e-12);
        assert!(e.residual_rms < 1e-12);
        assert_eq!(e.level_range, (1, 4));

        let e = fit_box_dimension(&[result(1, 10, 100), result(2, 10, 10_000)], 0.5).unwrap();
        assert!((e.slope - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fit_synthetic_noisy_power_law() {
        let rs: Vec<_> = (3..=7)
            .map(|n| result(n, 3, (7.0 * 3f64.powf(2.35 * n as f64)).round() as u64))
            .collect();
        let e = fit_box_dimension(&rs, 0.7).unwrap();
        assert!((e.slope - 2.35).abs() <= 0.02);
        assert!((e.theoretical - 2.3506).abs() < 1e-4);
    }

    #[test]
    fn fit_errors() {
        assert!(fit_box_dimension(&[result(1, 2, 4)], 0.5).is_err());
        assert!(fit_box_dimension(&[result(1, 2, 4), result(1, 2, 4)], 0.5).is_err());
        assert!(fit_box_dimension(&[result(1, 2, 4), result(2, 3, 4)], 0.5).is_err());
        assert!(fit_box_dimension(&[result(1, 2, 0), result(2, 2, 4)], 0.5).is_err());
    }
}
