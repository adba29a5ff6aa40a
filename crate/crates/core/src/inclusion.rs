//! Sampled checks of the covering and disc-in-image set inclusions.
//!
//! Every check builds a finite sample of the left-hand set, a finite sample of
//! the right-hand set, and reports the largest distance from a left-hand point
//! to its nearest right-hand sample. The acceptance threshold is derived from
//! the observed spacing of the right-hand samples and always reported.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveConstants, PeriodicCurve};
use crate::dims::solve_threshold_constants;
use crate::error::{Error, Result};
use crate::point::Point2;
use crate::series::{w_eval_badic, GraphSampler, WeierstrassParams};
use crate::spatial::PointIndex;

const DELTA_NOTE: &str = "the D(phi) in the hypotheses is read as the oscillation Delta(phi)";

/// Which inclusion a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InclusionVariant {
    CoveringPlain,
    CoveringEll { beta: f64, b: u64 },
    DiscInImagePlain { n: u32, k: u64 },
    DiscInImageEll { n: u32, k: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub variant: InclusionVariant,
    pub points_checked: usize,
    /// Largest distance from a left-hand sample to the nearest right-hand sample.
    pub max_defect: f64,
    pub tolerance: f64,
    /// Depth by which the left-hand disc radius was shrunk.
    pub margin: f64,
    /// Largest distance between adjacent right-hand samples.
    pub gap_observed: f64,
    pub passed: bool,
    pub lambda: f64,
    pub epsilon: f64,
    pub notes: Vec<String>,
}

/// Covering mode: `φ` itself, or the corrected curve `ℓ_β` built with base `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CoveringMode {
    Plain,
    Ell { beta: f64, b: u64 },
}

/// Disc-in-image variant: `φ̂` or `ℓ̂_{k/b}` on the left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImageVariant {
    Plain,
    Ell,
}

/// Sampling densities for one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionSampling {
    /// Parameter samples of the left-hand curve.
    pub curve_samples: usize,
    /// Nonzero disc radii per curve sample.
    pub radii: usize,
    /// Angles per nonzero radius.
    pub angles: usize,
    /// Right-hand samples per parameter: an `m × m` product grid for
    /// covering checks, `m + 1` points of the image interval otherwise.
    pub rhs_samples: usize,
}

impl Default for InclusionSampling {
    fn default() -> Self {
        InclusionSampling {
            curve_samples: 256,
            radii: 6,
            angles: 16,
            rhs_samples: 1024,
        }
    }
}

impl InclusionSampling {
    /// Defaults for disc-in-image checks, whose right-hand side is a single
    /// fractal curve and needs far more samples.
    pub fn for_image() -> Self {
        InclusionSampling {
            rhs_samples: 1 << 18,
            ..Self::default()
        }
    }

    pub fn with_rhs_samples(mut self, rhs_samples: usize) -> Self {
        self.rhs_samples = rhs_samples;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.curve_samples == 0 || self.angles == 0 || self.rhs_samples < 2 {
            return Err(Error::invalid(
                "inclusion sampling needs curve_samples >= 1, angles >= 1 and rhs_samples >= 2",
            ));
        }
        Ok(())
    }
}

/// Checks `ε` is positive and the inscribed disc sits at the origin.
fn require_separating_disc(constants: &CurveConstants) -> Result<()> {
    if constants.epsilon <= 0.0 || constants.complement_connected {
        return Err(Error::ComplementConnected);
    }
    let center = constants.center.ok_or(Error::ComplementConnected)?;
    let slack = constants.resolution_error.max(1e-9);
    if center.norm() > slack {
        return Err(Error::invalid(format!(
            "curve is not recentred: inscribed disc centre ({}, {}) is not at the origin",
            center.x, center.y
        )));
    }
    Ok(())
}

/// `base(s_i) + ρ e^{iθ}` over the sampling grid, for `ρ ∈ [0, radius]`.
fn disc_offsets(sampling: &InclusionSampling, radius: f64) -> Vec<Point2> {
    let mut out = vec![Point2::ORIGIN];
    if radius > 0.0 {
        for r in 1..=sampling.radii {
            let rho = radius * r as f64 / sampling.radii as f64;
            for a in 0..sampling.angles {
                out.push(Point2::unit_turn(a as f64 / sampling.angles as f64) * rho);
            }
        }
    }
    out
}

fn max_adjacent_gap(points: &[Point2]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).fold(0.0, f64::max)
}

/// Largest nearest-neighbour distance from `lhs` to `rhs`.
fn max_defect(lhs: &[Point2], rhs: &[Point2]) -> f64 {
    let (mut lo, mut hi) = (rhs[0], rhs[0]);
    for p in rhs {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    // Nearly collinear samples make the area estimate tiny; the extent floor
    // keeps the grid at most `len` cells across.
    let cell = ((w * h / rhs.len() as f64).sqrt() * 2.0).max(w.max(h) / rhs.len() as f64);
    let index = PointIndex::new(rhs, cell);
    lhs.par_iter().map(|&q| index.nearest_distance(q)).reduce(|| 0.0, f64::max)
}

fn diameter_bound(points: &[Point2]) -> f64 {
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    hi.dist(lo)
}

fn finish(
    variant: InclusionVariant,
    lhs: &[Point2],
    rhs: &[Point2],
    gap_observed: f64,
    margin: f64,
    lambda: f64,
    epsilon: f64,
    mut notes: Vec<String>,
) -> InclusionReport {
    let defect = max_defect(lhs, rhs);
    let tolerance = gap_observed / 2.0 + margin;
    if tolerance >= diameter_bound(lhs) {
        notes.push("tolerance exceeds the extent of the checked set; the verdict carries no information".into());
    }
    InclusionReport {
        variant,
        points_checked: lhs.len(),
        max_defect: defect,
        tolerance,
        margin,
        gap_observed,
        passed: defect <= tolerance,
        lambda,
        epsilon,
        notes,
    }
}

/// Checks `basê + B(0, ελ) ⊂ ⋃_s (base(s) + λφ̂)` where `base` is `φ` or `ℓ_β`.
///
/// The curve must already be recentred on its inscribed disc
/// (see [`crate::curve::recenter_on_disc`]).
pub fn verify_covering_inclusion(
    curve: &PeriodicCurve,
    constants: &CurveConstants,
    lambda: f64,
    mode: CoveringMode,
    sampling: &InclusionSampling,
) -> Result<InclusionReport> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::invalid(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    sampling.validate()?;
    require_separating_disc(constants)?;
    let mut notes = Vec::new();
    let (variant, base): (_, Box<dyn Fn(f64) -> Point2 + Sync>) = match mode {
        CoveringMode::Plain => (InclusionVariant::CoveringPlain, Box::new(|s| curve.eval(s))),
        CoveringMode::Ell { beta, b } => {
            if b < 2 {
                return Err(Error::invalid(format!("b must be >= 2, got {b}")));
            }
            if !(0.0..1.0).contains(&beta) {
                return Err(Error::invalid(format!("beta must lie in [0, 1), got {beta}")));
            }
            let rhs = constants.lipschitz / (constants.delta * (1.0 - lambda));
            if b as f64 * lambda <= rhs {
                return Err(Error::hypothesis(
                    "b*lambda > L/(Delta*(1-lambda))",
                    format!("b*lambda = {} <= {rhs}", b as f64 * lambda),
                ));
            }
            notes.push(DELTA_NOTE.to_string());
            (
                InclusionVariant::CoveringEll { beta, b },
                Box::new(move |s| curve.ell_beta(lambda, b, beta, s)),
            )
        }
    };

    let margin = lambda * constants.resolution_error;
    let offsets = disc_offsets(sampling, constants.epsilon * lambda - margin);
    let lhs: Vec<Point2> = (0..sampling.curve_samples)
        .flat_map(|i| {
            let p = base(i as f64 / sampling.curve_samples as f64);
            offsets.iter().map(move |&o| p + o)
        })
        .collect();

    // s runs over the closed interval so the gap at the seam is measured too.
    let m = sampling.rhs_samples;
    let base_pts: Vec<Point2> = (0..=m).map(|i| base(i as f64 / m as f64)).collect();
    let phi_pts: Vec<Point2> = (0..=m).map(|j| curve.eval(j as f64 / m as f64)).collect();
    let rhs: Vec<Point2> = base_pts
        .iter()
        .flat_map(|&p| phi_pts[..m].iter().map(move |&q| p + q * lambda))
        .collect();
    let gap = max_adjacent_gap(&base_pts) + lambda * max_adjacent_gap(&phi_pts);
    Ok(finish(variant, &lhs, &rhs, gap, margin, lambda, constants.epsilon, notes))
}

/// Checks the variant's parameter hypotheses, naming the inequality that fails.
fn check_image_hypotheses(
    constants: &CurveConstants,
    params: &WeierstrassParams,
    variant: ImageVariant,
) -> Result<()> {
    params.require_fractal_regime()?;
    let t = solve_threshold_constants(constants.lipschitz, constants.delta, constants.epsilon)?;
    let (b, lambda) = (params.b as f64, params.lambda);
    match variant {
        ImageVariant::Plain => {
            if b * lambda.powi(3) <= t.c0 {
                return Err(Error::hypothesis(
                    "b*lambda^3 > c0",
                    format!("b*lambda^3 = {} <= c0 = {}", b * lambda.powi(3), t.c0),
                ));
            }
        }
        ImageVariant::Ell => {
            if lambda >= 0.5 {
                return Err(Error::hypothesis("lambda < 1/2", format!("lambda = {lambda}")));
            }
            if b * lambda * lambda <= t.c2 {
                return Err(Error::hypothesis(
                    "b*lambda^2 > c2",
                    format!("b*lambda^2 = {} <= c2 = {}", b * lambda * lambda, t.c2),
                ));
            }
        }
    }
    Ok(())
}

/// Checks that
/// `W(z_{n,k}) − λⁿ/(1−λ)·φ(0) + λⁿ(basê + B(0, ελ))` lies in the image of
/// `W` on `[k/bⁿ, (k+1)/bⁿ]`, where `base` is `φ` or `ℓ_{k/b}`.
///
/// The curve must already be recentred on its inscribed disc.
pub fn verify_disc_in_image(
    curve: &PeriodicCurve,
    constants: &CurveConstants,
    params: &WeierstrassParams,
    n: u32,
    k: u64,
    variant: ImageVariant,
    sampling: &InclusionSampling,
) -> Result<InclusionReport> {
    sampling.validate()?;
    require_separating_disc(constants)?;
    check_image_hypotheses(constants, params, variant)?;
    let sampler = GraphSampler::new(curve, params, sampling.rhs_samples)?;
    verify_disc_in_image_with(&sampler, constants, n, k, variant, sampling)
}

/// As [`verify_disc_in_image`], reusing a sampler whose grid sets the
/// right-hand sample count. `sampling.rhs_samples` is ignored.
pub fn verify_disc_in_image_with(
    sampler: &GraphSampler,
    constants: &CurveConstants,
    n: u32,
    k: u64,
    variant: ImageVariant,
    sampling: &InclusionSampling,
) -> Result<InclusionReport> {
    sampling.validate()?;
    require_separating_disc(constants)?;
    let params = sampler.params();
    check_image_hypotheses(constants, params, variant)?;
    if n < 1 {
        return Err(Error::invalid("level n must be >= 1"));
    }
    let level = sampler.level(n)?;
    if k >= level.intervals() {
        return Err(Error::invalid(format!("k = {k} must be < b^n = {}", level.intervals())));
    }
    let curve = sampler.curve();
    let lambda = params.lambda;
    let scale = lambda.powi(n as i32);
    let anchor = w_eval_badic(curve, params, n, k)? - curve.eval(0.0) * (scale / (1.0 - lambda));

    let beta = (k % params.b) as f64 / params.b as f64;
    let mut notes = Vec::new();
    let (report_variant, base): (_, Box<dyn Fn(f64) -> Point2 + Sync>) = match variant {
        ImageVariant::Plain => (InclusionVariant::DiscInImagePlain { n, k }, Box::new(|s| curve.eval(s))),
        ImageVariant::Ell => {
            notes.push(DELTA_NOTE.to_string());
            (
                InclusionVariant::DiscInImageEll { n, k },
                Box::new(move |s| curve.ell_beta(lambda, params.b, beta, s)),
            )
        }
    };

    let margin = scale * lambda * constants.resolution_error;
    let offsets = disc_offsets(sampling, constants.epsilon * lambda - lambda * constants.resolution_error);
    let lhs: Vec<Point2> = (0..sampling.curve_samples)
        .flat_map(|i| {
            let p = base(i as f64 / sampling.curve_samples as f64);
            offsets.iter().map(move |&o| anchor + (p + o) * scale)
        })
        .collect();

    // Sample positions may be jittered out of grid order; the image polyline
    // follows the parameter.
    let m = sampler.grid();
    let mut order: Vec<usize> = (0..=m).collect();
    order.sort_by(|&a, &b| level.x(k, a).total_cmp(&level.x(k, b)));
    let rhs: Vec<Point2> = order.par_iter().map(|&i| level.point(k, i)).collect();
    let gap = max_adjacent_gap(&rhs);
    Ok(finish(report_variant, &lhs, &rhs, gap, margin, lambda, constants.epsilon, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::recenter_on_disc;

    fn circle() -> (PeriodicCurve, CurveConstants) {
        let c = PeriodicCurve::unit_circle();
        let k = CurveConstants::compute(&c, 4096, 512).unwrap();
        recenter_on_disc(&c, &k)
    }

    #[test]
    fn defect_search_handles_nearly_collinear_samples() {
        let rhs: Vec<Point2> = (0..6).map(|i| Point2::new(i as f64, 1e-300 * i as f64)).collect();
        let lhs = [Point2::new(2.5, 3.0), Point2::new(-1.0, 0.0)];
        let d = max_defect(&lhs, &rhs);
        assert!((d - (0.25f64 + 9.0).sqrt()).abs() < 1e-12, "{d}");
    }

    #[test]
    fn circle_covering_is_annulus() {
        let (c, k) = circle();
        for lambda in [0.3, 0.5, 0.9] {
            let r = verify_covering_inclusion(&c, &k, lambda, CoveringMode::Plain, &InclusionSampling::default())
                .unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.max_defect <= 2.0 * r.gap_observed);
            assert_eq!(r.max_defect <= r.tolerance, r.passed);
        }
    }

    #[test]
    fn constant_curve_rejected() {
        let c = PeriodicCurve::constant(Point2::new(1.0, 2.0));
        let k = CurveConstants::compute(&c, 256, 128).unwrap();
        let err = verify_covering_inclusion(&c, &k, 0.5, CoveringMode::Plain, &InclusionSampling::default());
        assert!(matches!(err, Err(Error::ComplementConnected)));
    }

    #[test]
    fn ell_precondition_is_checked() {
        let (c, k) = circle();
        let err = verify_covering_inclusion(
            &c,
            &k,
            0.9,
            CoveringMode::Ell { beta: 0.0, b: 33 },
            &InclusionSampling::default(),
        );
        match err {
            Err(Error::Hypothesis { inequality, .. }) => assert_eq!(inequality, "b*lambda > L/(Delta*(1-lambda))"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
        let ok = verify_covering_inclusion(
            &c,
            &k,
            0.5,
            CoveringMode::Ell { beta: 0.0, b: 20 },
            &InclusionSampling::default(),
        )
        .unwrap();
        assert!(ok.notes.iter().any(|n| n.contains("Delta")));
    }

    #[test]
    fn not_recentred_rejected() {
        let c = PeriodicCurve::unit_circle().recenter(Point2::new(0.5, 0.0));
        let k = CurveConstants::compute(&c, 4096, 256).unwrap();
        assert!(verify_covering_inclusion(&c, &k, 0.5, CoveringMode::Plain, &InclusionSampling::default()).is_err());
    }

    #[test]
    fn image_hypothesis_named() {
        let (c, k) = circle();
        let p = WeierstrassParams::new(0.7, 3, 1e-12).unwrap();
        let s = InclusionSampling::for_image().with_rhs_samples(64);
        match verify_disc_in_image(&c, &k, &p, 1, 0, ImageVariant::Plain, &s) {
            Err(Error::Hypothesis { inequality, .. }) => assert_eq!(inequality, "b*lambda^3 > c0"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
        let p = WeierstrassParams::new(0.6, 200, 1e-12).unwrap();
        match verify_disc_in_image(&c, &k, &p, 1, 0, ImageVariant::Ell, &s) {
            Err(Error::Hypothesis { inequality, .. }) => assert_eq!(inequality, "lambda < 1/2"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
        let p = WeierstrassParams::new(0.4, 100, 1e-12).unwrap();
        match verify_disc_in_image(&c, &k, &p, 1, 0, ImageVariant::Ell, &s) {
            Err(Error::Hypothesis { inequality, .. }) => assert_eq!(inequality, "b*lambda^2 > c2"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn image_range_checks() {
        let (c, k) = circle();
        let p = WeierstrassParams::new(0.95, 40, 1e-12).unwrap();
        let sampler = GraphSampler::new(&c, &p, 64).unwrap();
        let s = InclusionSampling::default();
        assert!(verify_disc_in_image_with(&sampler, &k, 0, 0, ImageVariant::Plain, &s).is_err());
        assert!(verify_disc_in_image_with(&sampler, &k, 1, 40, ImageVariant::Plain, &s).is_err());
        let r = verify_disc_in_image_with(&sampler, &k, 1, 39, ImageVariant::Plain, &s).unwrap();
        assert_eq!(r.variant, InclusionVariant::DiscInImagePlain { n: 1, k: 39 });
        assert_eq!(r.points_checked, 256 * (1 + 6 * 16));
    }
}
