//! Raster analysis of the complement of a curve image.
//!
//! The image is rasterized on a square grid, flood-filled from the border to
//! find the unbounded component, and the remaining free cells are ranked by
//! their Euclidean distance to the curve. The best cell seeds a local pattern
//! search on the exact distance to the sampled curve, which gives the
//! inscribed radius to far better than one cell.

use std::collections::VecDeque;

use serde::Serialize;

use super::PeriodicCurve;
use crate::error::{Error, Result};
use crate::point::Point2;

pub const MIN_RESOLUTION: usize = 64;

/// Samples used for the bounding box and the Lipschitz constant.
const COARSE_SAMPLES: usize = 4096;
/// Empty cells kept between the curve's bounding box and the grid border.
const PAD_CELLS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplementAnalysis {
    pub complement_connected: bool,
    /// Radius of the largest disc found inside a bounded complement component.
    pub epsilon: f64,
    /// Centre of that disc; `None` when the complement is connected.
    pub center: Option<Point2>,
    /// Grid cell diagonal.
    pub resolution_error: f64,
    pub bounded_components: usize,
}

impl ComplementAnalysis {
    fn connected(resolution_error: f64) -> Self {
        ComplementAnalysis {
            complement_connected: true,
            epsilon: 0.0,
            center: None,
            resolution_error,
            bounded_components: 0,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    Free,
    Curve,
    Outside,
    Bounded,
}

struct Grid {
    size: usize,
    cell: f64,
    origin: Point2,
    cells: Vec<Cell>,
}

impl Grid {
    fn index_of(&self, p: Point2) -> Option<(usize, usize)> {
        let ix = ((p.x - self.origin.x) / self.cell).floor();
        let iy = ((p.y - self.origin.y) / self.cell).floor();
        let n = self.size as f64;
        (ix >= 0.0 && iy >= 0.0 && ix < n && iy < n).then(|| (ix as usize, iy as usize))
    }

    fn center_of(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(
            self.origin.x + (ix as f64 + 0.5) * self.cell,
            self.origin.y + (iy as f64 + 0.5) * self.cell,
        )
    }

    /// Marks every cell meeting the closed square `[p - r, p + r]²`.
    fn mark_square(&mut self, p: Point2, r: f64) {
        let last = self.size as isize - 1;
        let lo = |v: f64, o: f64| (((v - r - o) / self.cell).floor() as isize).clamp(0, last) as usize;
        let hi = |v: f64, o: f64| (((v + r - o) / self.cell).floor() as isize).clamp(0, last) as usize;
        let (x0, x1) = (lo(p.x, self.origin.x), hi(p.x, self.origin.x));
        let (y0, y1) = (lo(p.y, self.origin.y), hi(p.y, self.origin.y));
        for iy in y0..=y1 {
            let row = iy * self.size;
            for ix in x0..=x1 {
                self.cells[row + ix] = Cell::Curve;
            }
        }
    }

    /// 4-connected fill of `Free` cells starting at `seeds`; returns the
    /// number of cells relabelled.
    fn fill(&mut self, seeds: impl IntoIterator<Item = usize>, label: Cell) -> usize {
        let n = self.size;
        let mut queue = VecDeque::new();
        let mut filled = 0;
        for s in seeds {
            if self.cells[s] == Cell::Free {
                self.cells[s] = label;
                queue.push_back(s);
            }
        }
        while let Some(idx) = queue.pop_front() {
            filled += 1;
            let (x, y) = (idx % n, idx / n);
            let mut visit = |j: usize| {
                if self.cells[j] == Cell::Free {
                    self.cells[j] = label;
                    queue.push_back(j);
                }
            };
            if x > 0 {
                visit(idx - 1);
            }
            if x + 1 < n {
                visit(idx + 1);
            }
            if y > 0 {
                visit(idx - n);
            }
            if y + 1 < n {
                visit(idx + n);
            }
        }
        filled
    }
}

/// Finds the bounded components of `ℝ² \ φ̂` and the largest disc inside
/// one of them.
///
/// The curve is sampled densely enough that the per-sample chord bound
/// `L / samples` stays below a quarter cell, and each sample marks every cell
/// within that bound, so the marked cells contain the whole image. Cells
/// reached from the border are in the unbounded component; the others are
/// treated as bounded.
pub fn complement_analysis(curve: &PeriodicCurve, resolution: usize) -> Result<ComplementAnalysis> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::invalid(format!(
            "resolution must be >= {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let lipschitz = curve.lipschitz_constant(COARSE_SAMPLES);
    let breakpoints = curve.breakpoints();

    let coarse = sample_curve(curve, COARSE_SAMPLES, &breakpoints);
    let slack = lipschitz / (2.0 * COARSE_SAMPLES as f64);
    let (lo, hi) = bounding_box(&coarse);
    let (lo, hi) = (lo - Point2::new(slack, slack), hi + Point2::new(slack, slack));
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    let scale = 1.0 + lo.norm().max(hi.norm());
    if !(extent > 1e-12 * scale) || lipschitz == 0.0 {
        // The image is a point.
        return Ok(ComplementAnalysis::connected(0.0));
    }

    let size = resolution;
    let cell = extent / (size - 2 * PAD_CELLS) as f64;
    let mid = (lo + hi) * 0.5;
    let half = size as f64 * cell / 2.0;
    let mut grid = Grid {
        size,
        cell,
        origin: mid - Point2::new(half, half),
        cells: vec![Cell::Free; size * size],
    };
    let resolution_error = cell * std::f64::consts::SQRT_2;

    let fine_count = ((4.0 * lipschitz / cell).ceil() as usize).max(1024);
    let radius = lipschitz / fine_count as f64;
    let samples = sample_curve(curve, fine_count, &breakpoints);
    for &p in &samples {
        grid.mark_square(p, radius);
    }

    let border = (0..size)
        .flat_map(|i| [i, (size - 1) * size + i, i * size, i * size + size - 1]);
    grid.fill(border, Cell::Outside);

    let mut components = 0;
    for idx in 0..size * size {
        if grid.cells[idx] == Cell::Free {
            grid.fill([idx], Cell::Bounded);
            components += 1;
        }
    }
    if components == 0 {
        return Ok(ComplementAnalysis::connected(resolution_error));
    }

    let dist_sq = squared_distance_to_curve_cells(&grid);
    let mut best: Option<(usize, f64)> = None;
    for (idx, &d) in dist_sq.iter().enumerate() {
        if grid.cells[idx] == Cell::Bounded && best.map_or(true, |(_, b)| d > b) {
            best = Some((idx, d));
        }
    }
    let (best_idx, best_d2) = best.expect("at least one bounded cell");
    let raster_center = grid.center_of(best_idx % size, best_idx / size);
    let raster_radius = best_d2.sqrt() * cell;

    let (center, epsilon) = refine_center(&grid, &samples, raster_center, raster_radius);

    Ok(ComplementAnalysis {
        complement_connected: false,
        epsilon,
        center: Some(center),
        resolution_error,
        bounded_components: components,
    })
}

fn sample_curve(curve: &PeriodicCurve, count: usize, breakpoints: &[f64]) -> Vec<Point2> {
    let mut params: Vec<f64> = (0..count).map(|i| i as f64 / count as f64).collect();
    params.extend_from_slice(breakpoints);
    params.sort_by(f64::total_cmp);
    params.dedup();
    params.into_iter().map(|s| curve.eval(s)).collect()
}

fn bounding_box(pts: &[Point2]) -> (Point2, Point2) {
    pts.iter().fold(
        (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), p| {
            (
                Point2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    )
}

/// Distance from `p` to the closed polyline through `samples`.
fn distance_to_polyline(p: Point2, samples: &[Point2]) -> f64 {
    let n = samples.len();
    (0..n)
        .map(|i| p.dist_to_segment(samples[i], samples[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Compass search maximising the distance to the sampled curve, started at
/// the best raster cell: move to the best of eight neighbours at the current
/// step, halve the step when none improves. The move is kept only if the
/// refined centre still lies in a bounded cell.
fn refine_center(grid: &Grid, samples: &[Point2], start: Point2, raster_radius: f64) -> (Point2, f64) {
    let objective = |p: Point2| distance_to_polyline(p, samples);
    let mut center = start;
    let mut value = objective(start);
    let mut step = grid.cell;
    let min_step = grid.cell * 1e-7;
    let dirs = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
        (-1.0, -1.0),
    ];
    let mut iterations = 0;
    while step > min_step && iterations < 400 {
        iterations += 1;
        let best = dirs
            .iter()
            .map(|&(dx, dy)| {
                let cand = center + Point2::new(dx, dy) * step;
                (cand, objective(cand))
            })
            .fold((center, value), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best.1 > value {
            center = best.0;
            value = best.1;
        } else {
            step /= 2.0;
        }
    }
    let inside = grid
        .index_of(center)
        .is_some_and(|(ix, iy)| grid.cells[iy * grid.size + ix] == Cell::Bounded);
    if inside && value >= raster_radius - grid.cell * std::f64::consts::SQRT_2 {
        (center, value)
    } else {
        (start, raster_radius)
    }
}

/// Exact squared Euclidean distance (in cell units) from every cell centre to
/// the nearest curve cell centre.
fn squared_distance_to_curve_cells(grid: &Grid) -> Vec<f64> {
    let n = grid.size;
    let inf = 1e20;
    let mut d: Vec<f64> = grid
        .cells
        .iter()
        .map(|c| if *c == Cell::Curve { 0.0 } else { inf })
        .collect();
    let mut f = vec![0.0; n];
    let mut out = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    for x in 0..n {
        for y in 0..n {
            f[y] = d[y * n + x];
        }
        edt_1d(&f, &mut out, &mut v, &mut z);
        for y in 0..n {
            d[y * n + x] = out[y];
        }
    }
    for y in 0..n {
        let row = &mut d[y * n..(y + 1) * n];
        f.copy_from_slice(row);
        edt_1d(&f, &mut out, &mut v, &mut z);
        row.copy_from_slice(&out);
    }
    d
}

/// One-dimensional squared distance transform of a sampled function
/// (lower envelope of parabolas).
fn edt_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
                continue;
            }
            if s <= z[k] {
                // k == 0: replace the only parabola.
                v[0] = q;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
            }
            break;
        }
    }
    k = 0;
    for (q, out) in d.iter_mut().enumerate().take(n) {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let diff = q as f64 - p as f64;
        *out = diff * diff + f[p];
    }
}
