use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Serialize;
use weierdim_core::curve::{make_counterexample_curve, PeriodicCurve};
use weierdim_core::series::WeierstrassParams;
use weierdim_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveName {
    Circle,
    Square,
    Polyline,
    Counterexample,
}

/// Inclusive level range written `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelRange {
    pub min: u32,
    pub max: u32,
}

impl LevelRange {
    pub fn new(min: u32, max: u32) -> Self {
        LevelRange { min, max }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.min..=self.max
    }
}

impl FromStr for LevelRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected a level range like 3..7, got '{s}'"))?;
        let min: u32 = a.trim().parse().map_err(|e| format!("bad level '{a}': {e}"))?;
        let b = b.trim().trim_start_matches('=');
        let max: u32 = b.parse().map_err(|e| format!("bad level '{b}': {e}"))?;
        if min > max {
            return Err(format!("empty level range {min}..{max}"));
        }
        Ok(LevelRange { min, max })
    }
}

impl fmt::Display for LevelRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Built-in curve or polyline file.
    #[arg(long, global = true, value_enum, default_value_t = CurveName::Circle)]
    pub curve: CurveName,
    /// Side length of the square curve.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub side: f64,
    /// Polyline file with one `s x y` vertex per line.
    #[arg(long, global = true)]
    pub polyline: Option<PathBuf>,
    /// Term count recorded for the counterexample curve.
    #[arg(long, global = true, default_value_t = 64)]
    pub truncation: u32,
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub b: Option<u64>,
    /// Bound on the truncated series tail.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tail_tol: f64,
    /// Raster size of the complement analysis.
    #[arg(long, global = true, default_value_t = 2048)]
    pub resolution: usize,
    /// Samples used for the Lipschitz and oscillation estimates.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub curve_estimate_samples: usize,
    /// Inclusive range of levels, e.g. `3..7`.
    #[arg(long, global = true)]
    pub levels: Option<LevelRange>,
    /// Plateau threshold of adaptive sampling.
    #[arg(long, global = true, default_value_t = 0.01)]
    pub rel_tol: f64,
    /// Starting samples per interval for adaptive sampling.
    #[arg(long, global = true, default_value_t = 256)]
    pub initial_samples: usize,
    /// Largest samples per interval for adaptive sampling.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub max_samples: usize,
    /// Use exactly this many samples per interval instead of adaptive sampling.
    #[arg(long, global = true)]
    pub fixed_samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

/// The fully resolved configuration echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub curve: CurveName,
    pub side: Option<f64>,
    pub polyline: Option<PathBuf>,
    pub truncation: Option<u32>,
    pub lambda: Option<f64>,
    pub b: Option<u64>,
    pub tail_tol: f64,
    pub resolution: usize,
    pub curve_estimate_samples: usize,
    pub levels: Option<LevelRange>,
    pub sampling: SamplingConfig,
    pub output: Option<PathBuf>,
    /// Subcommand-specific options.
    pub options: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SamplingConfig {
    pub mode: &'static str,
    pub rel_tol: f64,
    pub initial_samples: usize,
    pub max_samples: usize,
    pub fixed_samples: Option<usize>,
    pub seed: u64,
}

impl RunConfig {
    /// Validates `common` and fills in the defaults that depend on the command.
    pub fn resolve(
        command: &'static str,
        common: &CommonArgs,
        default_levels: Option<LevelRange>,
        options: serde_json::Value,
    ) -> Result<Self> {
        if !(common.tail_tol > 0.0 && common.tail_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tail-tol must be positive, got {}", common.tail_tol)));
        }
        if common.curve_estimate_samples < 2 {
            return Err(Error::InvalidParameter("curve-estimate-samples must be >= 2".into()));
        }
        match common.curve {
            CurveName::Polyline if common.polyline.is_none() => {
                return Err(Error::InvalidParameter("--curve polyline needs --polyline FILE".into()));
            }
            CurveName::Square if !(common.side > 0.0 && common.side.is_finite()) => {
                return Err(Error::InvalidParameter(format!("side must be positive, got {}", common.side)));
            }
            _ => {}
        }
        Ok(RunConfig {
            command,
            curve: common.curve,
            side: (common.curve == CurveName::Square).then_some(common.side),
            polyline: (common.curve == CurveName::Polyline)
                .then(|| common.polyline.clone())
                .flatten(),
            truncation: (common.curve == CurveName::Counterexample).then_some(common.truncation),
            lambda: common.lambda,
            b: common.b,
            tail_tol: common.tail_tol,
            resolution: common.resolution,
            curve_estimate_samples: common.curve_estimate_samples,
            levels: common.levels.or(default_levels),
            sampling: SamplingConfig {
                mode: if common.fixed_samples.is_some() { "fixed" } else { "adaptive" },
                rel_tol: common.rel_tol,
                initial_samples: common.initial_samples,
                max_samples: common.max_samples,
                fixed_samples: common.fixed_samples,
                seed: common.seed,
            },
            output: common.output.clone(),
            options,
        })
    }

    pub fn lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::InvalidParameter(format!("{} needs --lambda", self.command)))
    }

    pub fn b(&self) -> Result<u64> {
        self.b.ok_or_else(|| Error::InvalidParameter(format!("{} needs --b", self.command)))
    }

    pub fn params(&self) -> Result<WeierstrassParams> {
        WeierstrassParams::new(self.lambda()?, self.b()?, self.tail_tol)
    }

    pub fn levels(&self) -> Result<LevelRange> {
        self.levels
            .ok_or_else(|| Error::InvalidParameter(format!("{} needs --levels", self.command)))
    }

    pub fn build_curve(&self) -> Result<PeriodicCurve> {
        match self.curve {
            CurveName::Circle => Ok(PeriodicCurve::unit_circle()),
            CurveName::Square => PeriodicCurve::square_loop(self.side.unwrap_or(1.0)),
            CurveName::Polyline => {
                let path = self.polyline.as_ref().expect("validated in resolve");
                PeriodicCurve::read_polyline(path)
            }
            CurveName::Counterexample => {
                make_counterexample_curve(self.b()?, self.lambda()?, self.truncation.unwrap_or(64))
            }
        }
    }
}
