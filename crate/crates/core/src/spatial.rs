use std::collections::HashMap;

use crate::point::Point2;

/// Uniform hash grid over a fixed point set, answering exact
/// nearest-neighbour distance queries by expanding square rings.
pub(crate) struct PointIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<Point2>>,
    /// Chebyshev ring radius beyond which no bucket exists.
    max_ring: i64,
    lo: (i64, i64),
    hi: (i64, i64),
}

impl PointIndex {
    /// `cell` should be on the order of the typical point spacing.
    pub(crate) fn new(points: &[Point2], cell: f64) -> Self {
        assert!(!points.is_empty(), "empty point index");
        let cell = if cell > 0.0 && cell.is_finite() { cell } else { 1.0 };
        let mut buckets: HashMap<(i64, i64), Vec<Point2>> = HashMap::new();
        let mut lo = (i64::MAX, i64::MAX);
        let mut hi = (i64::MIN, i64::MIN);
        for &p in points {
            let key = key(p, cell);
            lo = (lo.0.min(key.0), lo.1.min(key.1));
            hi = (hi.0.max(key.0), hi.1.max(key.1));
            buckets.entry(key).or_default().push(p);
        }
        let max_ring = (hi.0 - lo.0).max(hi.1 - lo.1) + 1;
        PointIndex { cell, buckets, max_ring, lo, hi }
    }

    /// Distance from `q` to the nearest indexed point.
    pub(crate) fn nearest_distance(&self, q: Point2) -> f64 {
        let (cx, cy) = key(q, self.cell);
        // Rings needed to reach the populated box from outside it.
        let gap_x = (self.lo.0 - cx).max(cx - self.hi.0).max(0);
        let gap_y = (self.lo.1 - cy).max(cy - self.hi.1).max(0);
        let start = gap_x.max(gap_y);
        let mut best = f64::INFINITY;
        let mut ring = start;
        loop {
            self.scan_ring(cx, cy, ring, q, &mut best);
            // Every point in ring r + 1 or beyond is at least r·cell away.
            if best <= ring as f64 * self.cell || ring > start + self.max_ring + 1 {
                return best;
            }
            ring += 1;
        }
    }

    fn scan_ring(&self, cx: i64, cy: i64, r: i64, q: Point2, best: &mut f64) {
        let mut visit = |x: i64, y: i64| {
            if let Some(pts) = self.buckets.get(&(x, y)) {
                for p in pts {
                    let d = p.dist(q);
                    if d < *best {
                        *best = d;
                    }
                }
            }
        };
        if r == 0 {
            visit(cx, cy);
            return;
        }
        for x in cx - r..=cx + r {
            visit(x, cy - r);
            visit(x, cy + r);
        }
        for y in cy - r + 1..cy + r {
            visit(cx - r, y);
            visit(cx + r, y);
        }
    }
}

fn key(p: Point2, cell: f64) -> (i64, i64) {
    ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
}
