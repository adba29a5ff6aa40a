//! ℤ-periodic planar Lipschitz curves.
//!
//! A [`PeriodicCurve`] is one of a few built-in shapes or a closed polyline,
//! optionally translated by a fixed shift (see [`PeriodicCurve::recenter`]).
//! Evaluation reduces the parameter modulo 1 first, so `φ(s + 1) = φ(s)`
//! holds exactly for every kind.

mod complement;

use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point2;

pub use self::complement::{complement_analysis, ComplementAnalysis, MIN_RESOLUTION};

/// A polyline vertex: curve parameter `s ∈ [0, 1)` and the point `φ(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub s: f64,
    pub point: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveKind {
    /// `s ↦ (cos 2πs, sin 2πs)`.
    UnitCircle,
    /// Axis-aligned square of the given side centred at the origin,
    /// traversed at constant speed `4·side` starting from the lower-left
    /// corner.
    SquareLoop { side: f64 },
    /// Linear interpolation through the vertices; the last vertex connects to
    /// the first one shifted by one period.
    Polyline { vertices: Vec<Vertex> },
    /// `φ(s) = W₀(s) − λ W₀(bs)` with `W₀(s) = e^{2πis}`. For this curve the
    /// series telescopes and `W^φ = W₀`. `truncation` is the term count the
    /// curve was requested with and is kept for provenance.
    Counterexample { b: u64, lambda: f64, truncation: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicCurve {
    #[serde(flatten)]
    kind: CurveKind,
    /// Evaluation returns `base(s) − shift`.
    shift: Point2,
}

/// A sampled lower estimate together with the bound on how far below the
/// true supremum it may lie.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

impl PeriodicCurve {
    pub fn unit_circle() -> Self {
        Self::from_kind(CurveKind::UnitCircle)
    }

    pub fn square_loop(side: f64) -> Result<Self> {
        if !(side.is_finite() && side >= 0.0) {
            return Err(Error::invalid(format!("square side must be finite and >= 0, got {side}")));
        }
        Ok(Self::from_kind(CurveKind::SquareLoop { side }))
    }

    /// Builds a closed polyline. Parameters must be strictly increasing in
    /// `[0, 1)`; a single vertex yields a constant curve.
    pub fn polyline(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("polyline needs at least one vertex"));
        }
        for v in &vertices {
            if !(0.0..1.0).contains(&v.s) {
                return Err(Error::invalid(format!("polyline parameter {} outside [0, 1)", v.s)));
            }
            if !v.point.is_finite() {
                return Err(Error::invalid("polyline vertex is not finite"));
            }
        }
        if vertices.windows(2).any(|w| w[1].s <= w[0].s) {
            return Err(Error::invalid("polyline parameters must be strictly increasing"));
        }
        Ok(Self::from_kind(CurveKind::Polyline { vertices }))
    }

    /// Convenience constructor from `(s, x, y)` triples.
    pub fn polyline_from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        Self::polyline(
            triples
                .iter()
                .map(|&(s, x, y)| Vertex { s, point: Point2::new(x, y) })
                .collect(),
        )
    }

    /// A constant curve at `p`.
    pub fn constant(p: Point2) -> Self {
        Self::from_kind(CurveKind::Polyline { vertices: vec![Vertex { s: 0.0, point: p }] })
    }

    /// Parses the polyline text format: one `s x y` triple per line. Blank
    /// lines and lines starting with `#` are ignored.
    pub fn parse_polyline(text: &str) -> Result<Self> {
        let mut triples = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected 3 fields `s x y`, found {}", fields.len()),
                });
            }
            let mut vals = [0.0; 3];
            for (slot, f) in vals.iter_mut().zip(&fields) {
                *slot = f.parse().map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("`{f}`: {e}"),
                })?;
            }
            triples.push((vals[0], vals[1], vals[2]));
        }
        Self::polyline_from_triples(&triples)
    }

    pub fn read_polyline(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_polyline(&text)
    }

    fn from_kind(kind: CurveKind) -> Self {
        PeriodicCurve { kind, shift: Point2::ORIGIN }
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    /// Accumulated translation subtracted from the base curve.
    pub fn shift(&self) -> Point2 {
        self.shift
    }

    /// `φ(s − ⌊s⌋)`.
    #[inline]
    pub fn eval(&self, s: f64) -> Point2 {
        let t = s - s.floor();
        // s - floor(s) can round up to exactly 1.0 for tiny negative s.
        let t = if t >= 1.0 { 0.0 } else { t };
        self.eval_reduced(t) - self.shift
    }

    #[inline]
    fn eval_reduced(&self, t: f64) -> Point2 {
        match &self.kind {
            CurveKind::UnitCircle => Point2::unit_turn(t),
            CurveKind::SquareLoop { side } => eval_square(*side, t),
            CurveKind::Polyline { vertices } => eval_polyline(vertices, t),
            CurveKind::Counterexample { b, lambda, .. } => {
                let bt = *b as f64 * t;
                Point2::unit_turn(t) - Point2::unit_turn(bt - bt.floor()) * *lambda
            }
        }
    }

    /// The Lipschitz constant when it is known in closed form. Every built-in
    /// kind has one; for polylines it is the largest segment speed, which is
    /// exact for piecewise-linear maps.
    pub fn analytic_lipschitz(&self) -> Option<f64> {
        Some(match &self.kind {
            CurveKind::UnitCircle => TAU,
            CurveKind::SquareLoop { side } => 4.0 * side,
            CurveKind::Polyline { vertices } => polyline_segments(vertices)
                .map(|(a, b)| a.point.dist(b.point) / (b.s - a.s))
                .fold(0.0, f64::max),
            CurveKind::Counterexample { b, lambda, .. } => TAU * (1.0 + lambda * *b as f64),
        })
    }

    /// Lipschitz constant `L`: the analytic value when available, otherwise
    /// the multiscale difference-quotient scan of [`Self::lipschitz_scan`].
    pub fn lipschitz_constant(&self, samples: usize) -> f64 {
        self.analytic_lipschitz()
            .unwrap_or_else(|| self.lipschitz_scan(samples))
    }

    /// Lower estimate of `sup |φ(a) − φ(b)| / |a − b|` from difference
    /// quotients on the grid `i / samples` at steps `2^j / samples`, `j ≥ 0`,
    /// up to half a period. Non-decreasing when `samples` is doubled.
    pub fn lipschitz_scan(&self, samples: usize) -> f64 {
        let samples = samples.max(2);
        let pts: Vec<Point2> = (0..samples).map(|i| self.eval(i as f64 / samples as f64)).collect();
        let mut best = 0.0f64;
        let mut step = 1usize;
        while 2 * step <= samples {
            let h = step as f64 / samples as f64;
            for i in 0..samples {
                let j = (i + step) % samples;
                best = best.max(pts[i].dist(pts[j]) / h);
            }
            step *= 2;
        }
        best
    }

    /// Oscillation `Δ(φ)` (image diameter) from `samples` equally spaced
    /// parameters plus any polyline vertices. The estimate is a lower bound;
    /// `error_bound = 2L / samples`.
    pub fn oscillation(&self, samples: usize) -> Estimate {
        let samples = samples.max(2);
        let mut pts: Vec<Point2> = (0..samples).map(|i| self.eval(i as f64 / samples as f64)).collect();
        if let CurveKind::Polyline { vertices } = &self.kind {
            pts.extend(vertices.iter().map(|v| v.point - self.shift));
        }
        Estimate {
            value: diameter(&mut pts),
            error_bound: 2.0 * self.lipschitz_constant(samples) / samples as f64,
        }
    }

    /// Upper bound on `sup_s |φ(s)|`, used to size series truncation.
    pub fn sup_norm_bound(&self) -> f64 {
        let shift = self.shift;
        match &self.kind {
            CurveKind::UnitCircle => 1.0 + shift.norm(),
            CurveKind::SquareLoop { side } => {
                let h = side / 2.0;
                [(-h, -h), (h, -h), (h, h), (-h, h)]
                    .iter()
                    .map(|&(x, y)| (Point2::new(x, y) - shift).norm())
                    .fold(0.0, f64::max)
            }
            // The norm is convex, so its maximum on each segment is at a vertex.
            CurveKind::Polyline { vertices } => vertices
                .iter()
                .map(|v| (v.point - shift).norm())
                .fold(0.0, f64::max),
            CurveKind::Counterexample { lambda, .. } => 1.0 + lambda + shift.norm(),
        }
    }

    /// The translated curve `s ↦ φ(s) − z0`.
    pub fn recenter(&self, z0: Point2) -> Self {
        PeriodicCurve {
            kind: self.kind.clone(),
            shift: self.shift + z0,
        }
    }

    /// `ℓ_β(s) = φ(s) + λ⁻¹ (φ(β + s/b) − φ(β))`.
    ///
    /// `s` is not reduced: `ℓ_β` is defined on `[0, 1)` and is not periodic.
    pub fn ell_beta(&self, lambda: f64, b: u64, beta: f64, s: f64) -> Point2 {
        let correction = self.eval(beta + s / b as f64) - self.eval(beta);
        self.eval(s) + correction * (1.0 / lambda)
    }

    /// Polyline vertex parameters, if any; sampling code adds these so that
    /// corners are never skipped.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            CurveKind::Polyline { vertices } => vertices.iter().map(|v| v.s).collect(),
            CurveKind::SquareLoop { .. } => vec![0.0, 0.25, 0.5, 0.75],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for PeriodicCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CurveKind::UnitCircle => write!(f, "unit-circle")?,
            CurveKind::SquareLoop { side } => write!(f, "square-loop(side={side})")?,
            CurveKind::Polyline { vertices } => write!(f, "polyline({} vertices)", vertices.len())?,
            CurveKind::Counterexample { b, lambda, truncation } => {
                write!(f, "counterexample(b={b}, lambda={lambda}, truncation={truncation})")?
            }
        }
        if self.shift != Point2::ORIGIN {
            write!(f, " - ({}, {})", self.shift.x, self.shift.y)?;
        }
        Ok(())
    }
}

/// The geometric constants of a curve that the dimension thresholds are
/// built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveConstants {
    /// Lipschitz constant `L`.
    pub lipschitz: f64,
    /// Oscillation `Δ(φ)` (sampled lower estimate).
    pub delta: f64,
    pub delta_error: f64,
    /// Inscribed radius `ε` of a bounded complement component (0 if none).
    pub epsilon: f64,
    /// Centre `z0` of the inscribed disc.
    pub center: Option<Point2>,
    pub complement_connected: bool,
    pub resolution_error: f64,
}

impl CurveConstants {
    pub fn compute(curve: &PeriodicCurve, samples: usize, resolution: usize) -> Result<Self> {
        let osc = curve.oscillation(samples);
        let comp = complement_analysis(curve, resolution)?;
        Ok(CurveConstants {
            lipschitz: curve.lipschitz_constant(samples),
            delta: osc.value,
            delta_error: osc.error_bound,
            epsilon: comp.epsilon,
            center: comp.center,
            complement_connected: comp.complement_connected,
            resolution_error: comp.resolution_error,
        })
    }

    /// Constants of `curve.recenter(z0)`: everything is translation
    /// invariant except the disc centre, which moves to the origin.
    pub fn recentered(&self) -> Self {
        CurveConstants {
            center: self.center.map(|_| Point2::ORIGIN),
            ..*self
        }
    }
}

/// Translates `curve` so the inscribed disc found by the complement analysis
/// is centred at the origin. Curves with a connected complement are returned
/// unchanged.
pub fn recenter_on_disc(curve: &PeriodicCurve, constants: &CurveConstants) -> (PeriodicCurve, CurveConstants) {
    match constants.center {
        Some(z0) => (curve.recenter(z0), constants.recentered()),
        None => (curve.clone(), *constants),
    }
}

/// `φ(s) = W₀(s) − λ W₀(bs)` with `W₀(s) = e^{2πis}`.
pub fn make_counterexample_curve(b: u64, lambda: f64, truncation: u32) -> Result<PeriodicCurve> {
    if b < 2 {
        return Err(Error::invalid(format!("b must be >= 2, got {b}")));
    }
    let lower = 1.0 / b as f64;
    if !(lambda > lower && lambda < 1.0) {
        return Err(Error::invalid(format!("lambda must lie in (1/b, 1) = ({lower}, 1), got {lambda}")));
    }
    if truncation < 1 {
        return Err(Error::invalid("truncation must be >= 1"));
    }
    Ok(PeriodicCurve::from_kind(CurveKind::Counterexample { b, lambda, truncation }))
}

fn eval_square(side: f64, t: f64) -> Point2 {
    let h = side / 2.0;
    let u = 4.0 * t;
    let edge = (u.floor() as usize).min(3);
    let f = u - edge as f64;
    let corners = [
        Point2::new(-h, -h),
        Point2::new(h, -h),
        Point2::new(h, h),
        Point2::new(-h, h),
    ];
    let a = corners[edge];
    let b = corners[(edge + 1) % 4];
    a + (b - a) * f
}

fn eval_polyline(vertices: &[Vertex], t: f64) -> Point2 {
    let first = vertices[0];
    let last = vertices[vertices.len() - 1];
    let (a, b) = if t < first.s {
        (Vertex { s: last.s - 1.0, point: last.point }, first)
    } else if t >= last.s {
        (last, Vertex { s: first.s + 1.0, point: first.point })
    } else {
        let i = vertices.partition_point(|v| v.s <= t) - 1;
        (vertices[i], vertices[i + 1])
    };
    let f = (t - a.s) / (b.s - a.s);
    a.point + (b.point - a.point) * f
}

/// Consecutive vertex pairs including the wrap-around segment, whose end
/// parameter is shifted by one period.
fn polyline_segments(vertices: &[Vertex]) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
    let n = vertices.len();
    (0..n).map(move |i| {
        let a = vertices[i];
        let mut b = vertices[(i + 1) % n];
        if i + 1 == n {
            b.s += 1.0;
        }
        (a, b)
    })
}

/// Diameter of a finite point set: rotating calipers over its convex hull.
pub(crate) fn diameter(pts: &mut [Point2]) -> f64 {
    let hull = convex_hull(pts);
    let h = hull.len();
    if h < 3 {
        return if h == 2 { hull[0].dist(hull[1]) } else { 0.0 };
    }
    let area = |a: Point2, b: Point2, c: Point2| ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)).abs();
    let mut best = 0.0f64;
    let mut j = 1;
    for i in 0..h {
        let (a, b) = (hull[i], hull[(i + 1) % h]);
        // Advance to the vertex farthest from edge ab; j only moves forward,
        // so the whole sweep is linear.
        while area(a, b, hull[(j + 1) % h]) > area(a, b, hull[j]) {
            j = (j + 1) % h;
        }
        best = best.max(a.dist(hull[j])).max(b.dist(hull[j]));
    }
    best
}

/// Andrew's monotone chain. Sorts `pts` in place.
fn convex_hull(pts: &mut [Point2]) -> Vec<Point2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    if pts.len() < 3 {
        return pts.to_vec();
    }
    let cross = |o: Point2, a: Point2, b: Point2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Point2, b: Point2, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    #[test]
    fn diameter_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 3, 5, 40, 400] {
            let pts: Vec<Point2> = (0..n)
                .map(|_| Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.3..0.3)))
                .collect();
            let mut brute = 0.0f64;
            for a in &pts {
                for b in &pts {
                    brute = brute.max(a.dist(*b));
                }
            }
            assert!((diameter(&mut pts.clone()) - brute).abs() < 1e-15, "n={n}");
        }
        let mut ring: Vec<Point2> = (0..1000).map(|i| Point2::unit_turn(i as f64 / 1000.0)).collect();
        assert!((diameter(&mut ring) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn circle_evaluation() {
        let c = PeriodicCurve::unit_circle();
        assert!(close(c.eval(0.0), Point2::new(1.0, 0.0), 1e-15));
        assert!(close(c.eval(0.25), Point2::new(0.0, 1.0), 1e-15));
        assert!(close(c.eval(1.25), Point2::new(0.0, 1.0), 1e-15));
        assert!(close(c.eval(-0.75), Point2::new(0.0, 1.0), 1e-15));
    }

    #[test]
    fn tiny_negative_parameter_reduces_to_start() {
        let c = PeriodicCurve::unit_circle();
        assert!(close(c.eval(-1e-20), Point2::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn constant_polyline() {
        let c = PeriodicCurve::constant(Point2::new(2.0, -1.0));
        assert_eq!(c.lipschitz_constant(64), 0.0);
        assert_eq!(c.oscillation(64).value, 0.0);
        assert_eq!(c.eval(0.37), Point2::new(2.0, -1.0));
    }

    #[test]
    fn lipschitz_constants() {
        let c = PeriodicCurve::unit_circle();
        assert!((c.lipschitz_constant(1024) - TAU).abs() < 1e-3);
        let sq = PeriodicCurve::square_loop(1.0).unwrap();
        assert_eq!(sq.lipschitz_constant(1024), 4.0);
        // Independent scan agrees with the analytic values.
        assert!((c.lipschitz_scan(1 << 14) - TAU).abs() < 1e-3);
        assert!((sq.lipschitz_scan(1 << 10) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn oscillations() {
        let c = PeriodicCurve::unit_circle();
        assert!((c.oscillation(4096).value - 2.0).abs() < 1e-6);
        let sq = PeriodicCurve::square_loop(1.0).unwrap();
        assert!((sq.oscillation(4096).value - 2f64.sqrt()).abs() < 1e-6);
        assert!((c.oscillation(4096).error_bound - 2.0 * TAU / 4096.0).abs() < 1e-15);
    }

    #[test]
    fn recenter_shifts_evaluations() {
        let c = PeriodicCurve::unit_circle();
        let same = c.recenter(Point2::ORIGIN);
        for i in 0..16 {
            let s = i as f64 / 16.0;
            assert_eq!(same.eval(s), c.eval(s));
        }
        let moved = c.recenter(Point2::new(1.0, 0.0));
        assert!(close(moved.eval(0.0), Point2::ORIGIN, 1e-15));
        assert!((moved.oscillation(1024).value - c.oscillation(1024).value).abs() < 1e-12);
    }

    #[test]
    fn ell_beta_examples() {
        let c = PeriodicCurve::unit_circle();
        assert!(close(c.ell_beta(0.5, 4, 0.0, 1.0), Point2::new(-1.0, 2.0), 1e-12));
        for beta in [0.0, 0.3, 0.9] {
            assert!(close(c.ell_beta(0.7, 3, beta, 0.0), c.eval(0.0), 1e-12));
        }
        let k = PeriodicCurve::constant(Point2::new(0.5, 0.5));
        assert_eq!(k.ell_beta(0.3, 5, 0.2, 0.7), Point2::new(0.5, 0.5));
    }

    #[test]
    fn ell_beta_reduces_on_locally_constant_curve() {
        // φ is constant on [0.2, 0.5]; with β = 0.2 and b = 4 the correction
        // only sees that flat stretch.
        let c = PeriodicCurve::polyline_from_triples(&[
            (0.0, 0.0, 0.0),
            (0.2, 1.0, 0.0),
            (0.5, 1.0, 0.0),
            (0.7, 0.0, 1.0),
        ])
        .unwrap();
        for s in [0.0, 0.3, 0.6, 0.99] {
            let l = c.ell_beta(0.999_999, 4, 0.2, s);
            assert!(close(l, c.eval(s), 1e-12));
        }
    }

    #[test]
    fn counterexample_values() {
        let c = make_counterexample_curve(2, 0.8, 50).unwrap();
        assert!(close(c.eval(0.0), Point2::new(0.2, 0.0), 1e-15));
        assert!(close(c.eval(0.5), Point2::new(-1.8, 0.0), 1e-12));
        assert!(close(c.eval(1.3), c.eval(0.3), 1e-12));
        assert!(make_counterexample_curve(1, 0.8, 5).is_err());
        assert!(make_counterexample_curve(2, 0.5, 5).is_err());
        assert!(make_counterexample_curve(2, 1.0, 5).is_err());
        assert!(make_counterexample_curve(2, 0.8, 0).is_err());
    }

    #[test]
    fn counterexample_lipschitz_matches_scan() {
        let c = make_counterexample_curve(3, 0.6, 10).unwrap();
        let scan = c.lipschitz_scan(1 << 15);
        let exact = c.analytic_lipschitz().unwrap();
        assert!(scan <= exact + 1e-9);
        assert!((scan - exact) / exact < 1e-3);
    }

    #[test]
    fn polyline_validation_and_wrap() {
        assert!(PeriodicCurve::polyline(vec![]).is_err());
        assert!(PeriodicCurve::polyline_from_triples(&[(0.0, 0.0, 0.0), (0.0, 1.0, 0.0)]).is_err());
        assert!(PeriodicCurve::polyline_from_triples(&[(0.5, 0.0, 0.0), (1.0, 1.0, 0.0)]).is_err());
        let c = PeriodicCurve::polyline_from_triples(&[(0.25, 0.0, 0.0), (0.75, 2.0, 0.0)]).unwrap();
        // Wrap segment runs from s=0.75 to s=1.25.
        assert!(close(c.eval(0.0), Point2::new(1.0, 0.0), 1e-15));
        assert!(close(c.eval(0.95), Point2::new(1.2, 0.0), 1e-12));
        assert_eq!(c.analytic_lipschitz(), Some(4.0));
    }

    #[test]
    fn polyline_text_format() {
        let c = PeriodicCurve::parse_polyline("# square\n0 0 0\n0.25 1 0\n\n0.5 1 1\n0.75 0 1\n").unwrap();
        assert_eq!(c.analytic_lipschitz(), Some(4.0));
        let err = PeriodicCurve::parse_polyline("0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(PeriodicCurve::parse_polyline("0 a 1").is_err());
    }

    #[test]
    fn sup_norm_bounds_dominate_samples() {
        let curves = [
            PeriodicCurve::unit_circle().recenter(Point2::new(0.3, -0.2)),
            PeriodicCurve::square_loop(2.0).unwrap(),
            make_counterexample_curve(3, 0.5, 4).unwrap(),
        ];
        for c in &curves {
            let bound = c.sup_norm_bound();
            for i in 0..1000 {
                assert!(c.eval(i as f64 / 1000.0).norm() <= bound + 1e-12);
            }
        }
    }
}
