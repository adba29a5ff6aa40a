//! Occupied b-adic cube counts.
//!
//! The level-`n` partition of `ℝ^d` consists of products of half-open
//! intervals `[k/bⁿ, (k+1)/bⁿ)` with `k ∈ ℤ`. For the graph of `W` over
//! `[0, 1)` the `x` index is constant on each interval `[k/bⁿ, (k+1)/bⁿ)`,
//! so the count in `ℝ³` is the sum over `k` of the planar counts of the values.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::PeriodicCurve;
use crate::error::{Error, Result};
use crate::series::{GraphSampler, WeierstrassParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BAdicIndex<const D: usize> {
    pub level: u32,
    pub coords: [i64; D],
}

/// Index of the level-`n` cube containing `p`: `⌊p_i · bⁿ⌋` per coordinate.
/// Points on a cell boundary belong to the cell on their right.
pub fn cube_index<const D: usize>(p: [f64; D], n: u32, b: u64) -> BAdicIndex<D> {
    let scale = (b as f64).powi(n as i32);
    BAdicIndex {
        level: n,
        coords: p.map(|v| (v * scale).floor() as i64),
    }
}

/// Number of distinct level-`n` cubes met by `points`.
pub fn count_occupied<const D: usize>(points: impl IntoIterator<Item = [f64; D]>, n: u32, b: u64) -> usize {
    points
        .into_iter()
        .map(|p| cube_index(p, n, b).coords)
        .collect::<HashSet<_>>()
        .len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Budget {
    /// Exactly `samples` uniform positions `i / samples` per interval.
    Fixed { samples: usize },
    /// Start at `initial` positions and double until the interval count
    /// grows by less than `rel_tol` or `max` would be exceeded.
    Adaptive { initial: usize, max: usize, rel_tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPolicy {
    pub budget: Budget,
    pub record_per_interval: bool,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy {
            budget: Budget::Adaptive {
                initial: 256,
                max: 1 << 16,
                rel_tol: 0.01,
            },
            record_per_interval: false,
        }
    }
}

impl SamplingPolicy {
    pub fn fixed(samples: usize) -> Self {
        SamplingPolicy {
            budget: Budget::Fixed { samples },
            record_per_interval: false,
        }
    }

    pub fn adaptive(initial: usize, max: usize, rel_tol: f64) -> Self {
        SamplingPolicy {
            budget: Budget::Adaptive { initial, max, rel_tol },
            record_per_interval: false,
        }
    }

    pub fn with_per_interval(mut self) -> Self {
        self.record_per_interval = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.budget {
            Budget::Fixed { samples } if samples == 0 => Err(Error::invalid("fixed budget needs samples >= 1")),
            Budget::Adaptive { initial, max, rel_tol } => {
                if initial == 0 || max < initial {
                    Err(Error::invalid(format!("adaptive budget needs 1 <= initial <= max, got {initial}, {max}")))
                } else if !(rel_tol > 0.0) {
                    Err(Error::invalid("rel_tol must be positive"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Size of the sample grid the policy needs: the fixed count, or the
    /// largest `initial · 2^r` not exceeding `max`.
    pub fn grid_size(&self) -> usize {
        match self.budget {
            Budget::Fixed { samples } => samples,
            Budget::Adaptive { initial, max, .. } => {
                let mut m = initial.max(1);
                while m * 2 <= max {
                    m *= 2;
                }
                m
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCountResult {
    pub n: u32,
    pub b: u64,
    /// Occupied cubes; a lower bound on the covering number since every
    /// counted cube contains a sampled graph point.
    pub count: u64,
    pub samples_used: u64,
    /// Every interval reached the plateau criterion (always `false` for
    /// fixed budgets, which make no convergence claim).
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_interval_counts: Option<Vec<u64>>,
}

impl BoxCountResult {
    pub const CSV_HEADER: &'static str = "n,b,count,samples_used,converged";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.n, self.b, self.count, self.samples_used, self.converged)
    }
}

/// Counts the level-`n` cubes of `ℝ³` met by the graph of `W` over `[0, 1)`.
pub fn count_graph_cubes(
    curve: &PeriodicCurve,
    params: &WeierstrassParams,
    n: u32,
    policy: &SamplingPolicy,
) -> Result<BoxCountResult> {
    policy.validate()?;
    let sampler = GraphSampler::new(curve, params, policy.grid_size())?;
    count_graph_cubes_with(&sampler, n, policy)
}

/// As [`count_graph_cubes`], reusing a sampler (and its table of `W`) across
/// levels. The sampler grid must be a multiple of every grid the policy
/// visits.
pub fn count_graph_cubes_with(sampler: &GraphSampler, n: u32, policy: &SamplingPolicy) -> Result<BoxCountResult> {
    policy.validate()?;
    let grid = sampler.grid();
    let levels = sampler.level(n)?;
    let scale = (sampler.params().b as f64).powi(n as i32);
    let cell = |k: u64, i: usize| {
        let p = levels.point(k, i);
        ((p.x * scale).floor() as i64, (p.y * scale).floor() as i64)
    };

    let per_interval: Vec<(u64, u64, bool)> = match policy.budget {
        Budget::Fixed { samples } => {
            if grid % samples != 0 {
                return Err(Error::invalid(format!("sampler grid {grid} is not a multiple of {samples}")));
            }
            let stride = grid / samples;
            (0..levels.intervals())
                .into_par_iter()
                .map(|k| {
                    let set: HashSet<(i64, i64)> = (0..samples).map(|i| cell(k, i * stride)).collect();
                    (set.len() as u64, samples as u64, false)
                })
                .collect()
        }
        Budget::Adaptive { initial, rel_tol, .. } => {
            let top = policy.grid_size();
            if grid % top != 0 {
                return Err(Error::invalid(format!("sampler grid {grid} is not a multiple of {top}")));
            }
            (0..levels.intervals())
                .into_par_iter()
                .map(|k| {
                    let mut m = initial;
                    let mut stride = grid / m;
                    let mut set: HashSet<(i64, i64)> = (0..m).map(|i| cell(k, i * stride)).collect();
                    let mut samples = m as u64;
                    let mut converged = false;
                    while m * 2 <= top {
                        let before = set.len();
                        m *= 2;
                        stride /= 2;
                        // The new positions are the odd multiples of the finer stride.
                        set.extend((1..m).step_by(2).map(|i| cell(k, i * stride)));
                        samples += (m / 2) as u64;
                        let growth = (set.len() - before) as f64 / before as f64;
                        if growth < rel_tol {
                            converged = true;
                            break;
                        }
                    }
                    (set.len() as u64, samples, converged)
                })
                .collect()
        }
    };

    let count = per_interval.iter().map(|r| r.0).sum();
    let samples_used = per_interval.iter().map(|r| r.1).sum();
    let converged = per_interval.iter().all(|r| r.2);
    Ok(BoxCountResult {
        n,
        b: sampler.params().b,
        count,
        samples_used,
        converged,
        per_interval_counts: policy
            .record_per_interval
            .then(|| per_interval.iter().map(|r| r.0).collect()),
    })
}

/// Independent recount on the fixed grid of `samples` positions per interval:
/// all `(x, y, z)` cube indices are collected into one list, sorted and
/// deduplicated.
pub fn naive_count_oracle(curve: &PeriodicCurve, params: &WeierstrassParams, n: u32, samples: usize) -> Result<u64> {
    let sampler = GraphSampler::new(curve, params, samples)?;
    naive_count_oracle_with(&sampler, n)
}

pub fn naive_count_oracle_with(sampler: &GraphSampler, n: u32) -> Result<u64> {
    let levels = sampler.level(n)?;
    let b = sampler.params().b;
    let m = sampler.grid() as u64;
    let mut all: Vec<[i64; 3]> = Vec::new();
    for k in 0..levels.intervals() {
        for i in 0..m {
            let p = levels.point(k, i as usize);
            let [y, z] = cube_index([p.x, p.y], n, b).coords;
            // The x index in integer arithmetic; x·bⁿ in floating point can
            // land just below an interval boundary.
            let x = ((k * m + i) / m) as i64;
            all.push([x, y, z]);
        }
    }
    all.sort_unstable();
    all.dedup();
    Ok(all.len() as u64)
}
