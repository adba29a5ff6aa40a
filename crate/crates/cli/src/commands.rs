use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use weierdim_core::cover::{count_graph_cubes_with, BoxCountResult, SamplingPolicy};
use weierdim_core::curve::{complement_analysis, recenter_on_disc, CurveConstants, PeriodicCurve};
use weierdim_core::dims::{
    fit_box_dimension, solve_threshold_constants, theoretical_dimension, DimensionEstimate, Regime,
    ThresholdConstants,
};
use weierdim_core::inclusion::{
    verify_covering_inclusion, verify_disc_in_image_with, CoveringMode, ImageVariant, InclusionReport,
    InclusionSampling,
};
use weierdim_core::series::{residual_sweep, w_eval, GraphSampler, ResidualSweep, WeierstrassParams};
use weierdim_core::{Error, Point2, Result};

use crate::config::{CommonArgs, LevelRange, RunConfig};
use crate::{Command, Variant};

/// Rendered report and whether every verification it contains passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn json(value: &impl Serialize, passed: bool) -> Result<Self> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        text.push('\n');
        Ok(Outcome { text, passed })
    }
}

pub fn run(command: Command, common: &CommonArgs) -> Result<Outcome> {
    match command {
        Command::Constants => constants(RunConfig::resolve("constants", common, None, json!({}))?),
        Command::Eval { x } => eval(RunConfig::resolve("eval", common, None, json!({ "x": x }))?, x),
        Command::Boxcount => boxcount(RunConfig::resolve(
            "boxcount",
            common,
            Some(LevelRange::new(1, 4)),
            json!({}),
        )?),
        Command::Dimension => dimension(RunConfig::resolve(
            "dimension",
            common,
            Some(LevelRange::new(3, 6)),
            json!({}),
        )?),
        Command::VerifyResiduals { max_level, k_per_level } => {
            let options = json!({ "max_level": max_level, "k_per_level": k_per_level });
            let cfg = RunConfig::resolve("verify-lemma21", common, None, options)?;
            verify_residuals(cfg, max_level, k_per_level)
        }
        Command::VerifyCovering { variant, beta, curve_samples, rhs_samples } => {
            let options = json!({
                "variant": variant,
                "beta": beta,
                "curve_samples": curve_samples,
                "rhs_samples": rhs_samples,
            });
            let cfg = RunConfig::resolve("verify-covering", common, None, options)?;
            let sampling = InclusionSampling {
                curve_samples,
                rhs_samples,
                ..InclusionSampling::default()
            };
            verify_covering(cfg, variant, beta, &sampling)
        }
        Command::VerifyOpenset { n, k, variant, curve_samples, rhs_samples } => {
            let options = json!({
                "n": n,
                "k": k,
                "variant": variant,
                "curve_samples": curve_samples,
                "rhs_samples": rhs_samples,
            });
            let cfg = RunConfig::resolve("verify-openset", common, None, options)?;
            let sampling = InclusionSampling {
                curve_samples,
                rhs_samples,
                ..InclusionSampling::for_image()
            };
            verify_openset(cfg, n, &k, variant, &sampling)
        }
        Command::Counterexample { samples } => {
            let mut common = common.clone();
            common.lambda = common.lambda.or(Some(0.8));
            common.b = common.b.or(Some(2));
            common.curve = crate::config::CurveName::Counterexample;
            let cfg = RunConfig::resolve(
                "counterexample",
                &common,
                Some(LevelRange::new(4, 10)),
                json!({ "samples": samples }),
            )?;
            counterexample(cfg, samples)
        }
    }
}

fn policy(cfg: &RunConfig) -> SamplingPolicy {
    match cfg.sampling.fixed_samples {
        Some(samples) => SamplingPolicy::fixed(samples),
        None => SamplingPolicy::adaptive(cfg.sampling.initial_samples, cfg.sampling.max_samples, cfg.sampling.rel_tol),
    }
}

fn count_levels(
    curve: &PeriodicCurve,
    params: &WeierstrassParams,
    levels: LevelRange,
    policy: &SamplingPolicy,
) -> Result<Vec<BoxCountResult>> {
    policy.validate()?;
    let sampler = GraphSampler::new(curve, params, policy.grid_size())?;
    levels.iter().map(|n| count_graph_cubes_with(&sampler, n, policy)).collect()
}

#[derive(Serialize)]
struct ConstantsReport {
    config: RunConfig,
    #[serde(rename = "L")]
    lipschitz: f64,
    delta: f64,
    delta_error: f64,
    epsilon: f64,
    resolution_error: f64,
    z0: Option<Point2>,
    connected: bool,
    c0: Option<f64>,
    c0_residual: Option<f64>,
    c1: Option<f64>,
    c1_residual: Option<f64>,
    c2: Option<f64>,
    c: Option<f64>,
    #[serde(rename = "theoretical_D")]
    theoretical_d: Option<f64>,
    regime: Option<Regime>,
}

fn curve_constants(cfg: &RunConfig, curve: &PeriodicCurve) -> Result<CurveConstants> {
    CurveConstants::compute(curve, cfg.curve_estimate_samples, cfg.resolution)
}

fn constants(cfg: RunConfig) -> Result<Outcome> {
    let curve = cfg.build_curve()?;
    let k = curve_constants(&cfg, &curve)?;
    let t: Option<ThresholdConstants> = if k.complement_connected {
        None
    } else {
        Some(solve_threshold_constants(k.lipschitz, k.delta, k.epsilon)?)
    };
    let dim = match (cfg.b, cfg.lambda) {
        (Some(b), Some(lambda)) => Some(theoretical_dimension(b, lambda)?),
        _ => None,
    };
    let report = ConstantsReport {
        lipschitz: k.lipschitz,
        delta: k.delta,
        delta_error: k.delta_error,
        epsilon: k.epsilon,
        resolution_error: k.resolution_error,
        z0: k.center,
        connected: k.complement_connected,
        c0: t.map(|t| t.c0),
        c0_residual: t.map(|t| t.c0_residual),
        c1: t.map(|t| t.c1),
        c1_residual: t.map(|t| t.c1_residual),
        c2: t.map(|t| t.c2),
        c: t.map(|t| t.c),
        theoretical_d: dim.map(|d| d.1),
        regime: dim.map(|d| d.0),
        config: cfg,
    };
    Outcome::json(&report, true)
}

fn eval(cfg: RunConfig, x: f64) -> Result<Outcome> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("x must be finite, got {x}")));
    }
    let curve = cfg.build_curve()?;
    let e = w_eval(&curve, &cfg.params()?, x);
    let report = json!({
        "config": cfg,
        "x": x,
        "value": e.value,
        "tail_bound": e.tail_bound,
        "terms": e.terms,
    });
    Outcome::json(&report, true)
}

fn boxcount(cfg: RunConfig) -> Result<Outcome> {
    let curve = cfg.build_curve()?;
    let results = count_levels(&curve, &cfg.params()?, cfg.levels()?, &policy(&cfg))?;
    let mut text = String::from(BoxCountResult::CSV_HEADER);
    text.push('\n');
    for r in &results {
        text.push_str(&r.csv_row());
        text.push('\n');
    }
    Ok(Outcome { text, passed: true })
}

#[derive(Serialize)]
struct DimensionReport {
    config: RunConfig,
    counts: Vec<BoxCountResult>,
    estimate: DimensionEstimate,
}

fn dimension(cfg: RunConfig) -> Result<Outcome> {
    let curve = cfg.build_curve()?;
    let params = cfg.params()?;
    let counts = count_levels(&curve, &params, cfg.levels()?, &policy(&cfg))?;
    let estimate = fit_box_dimension(&counts, params.lambda)?;
    Outcome::json(&DimensionReport { config: cfg, counts, estimate }, true)
}

#[derive(Serialize)]
struct ResidualReport {
    config: RunConfig,
    #[serde(flatten)]
    summary: ResidualSweep,
}

fn verify_residuals(cfg: RunConfig, max_level: u32, k_per_level: usize) -> Result<Outcome> {
    let curve = cfg.build_curve()?;
    let summary = residual_sweep(&curve, &cfg.params()?, max_level, k_per_level, cfg.sampling.seed)?;
    let passed = summary.pass;
    Outcome::json(&ResidualReport { config: cfg, summary }, passed)
}

#[derive(Serialize)]
struct CurveSummary {
    #[serde(rename = "L")]
    lipschitz: f64,
    delta: f64,
    epsilon: f64,
    resolution_error: f64,
    z0: Option<Point2>,
}

impl CurveSummary {
    fn new(k: &CurveConstants) -> Self {
        CurveSummary {
            lipschitz: k.lipschitz,
            delta: k.delta,
            epsilon: k.epsilon,
            resolution_error: k.resolution_error,
            z0: k.center,
        }
    }
}

#[derive(Serialize)]
struct InclusionOutput {
    config: RunConfig,
    constants: CurveSummary,
    reports: Vec<InclusionReport>,
    passed: bool,
}

/// Computes the constants and moves the inscribed disc to the origin.
fn recentred_curve(cfg: &RunConfig) -> Result<(PeriodicCurve, CurveConstants, CurveConstants)> {
    let curve = cfg.build_curve()?;
    let k = curve_constants(cfg, &curve)?;
    if k.complement_connected {
        return Err(Error::ComplementConnected);
    }
    let (curve, recentred) = recenter_on_disc(&curve, &k);
    Ok((curve, k, recentred))
}

fn verify_covering(cfg: RunConfig, variant: Variant, beta: f64, sampling: &InclusionSampling) -> Result<Outcome> {
    let lambda = cfg.lambda()?;
    let mode = match variant {
        Variant::Plain => CoveringMode::Plain,
        Variant::Ell => CoveringMode::Ell { beta, b: cfg.b()? },
    };
    let (curve, original, k) = recentred_curve(&cfg)?;
    let report = verify_covering_inclusion(&curve, &k, lambda, mode, sampling)?;
    let passed = report.passed;
    let out = InclusionOutput {
        config: cfg,
        constants: CurveSummary::new(&original),
        reports: vec![report],
        passed,
    };
    Outcome::json(&out, passed)
}

fn verify_openset(cfg: RunConfig, n: u32, ks: &[u64], variant: Variant, sampling: &InclusionSampling) -> Result<Outcome> {
    let params = cfg.params()?;
    let variant = match variant {
        Variant::Plain => ImageVariant::Plain,
        Variant::Ell => ImageVariant::Ell,
    };
    let (curve, original, k) = recentred_curve(&cfg)?;
    let sampler = GraphSampler::new(&curve, &params, sampling.rhs_samples)?;
    let reports = ks
        .iter()
        .map(|&kk| verify_disc_in_image_with(&sampler, &k, n, kk, variant, sampling))
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let out = InclusionOutput {
        config: cfg,
        constants: CurveSummary::new(&original),
        reports,
        passed,
    };
    Outcome::json(&out, passed)
}

#[derive(Serialize)]
struct TelescopingCheck {
    samples: usize,
    max_error: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct ComplementCheck {
    epsilon: f64,
    connected: bool,
    resolution_error: f64,
    passed: bool,
}

#[derive(Serialize)]
struct SlopeCheck {
    counts: Vec<BoxCountResult>,
    estimate: DimensionEstimate,
    expected: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct CounterexampleReport {
    config: RunConfig,
    telescoping: TelescopingCheck,
    complement: ComplementCheck,
    dimension: SlopeCheck,
    passed: bool,
}

/// `W^φ = W₀` for the counterexample curve, so its graph is a smooth helix
/// of dimension 1 although its complement is disconnected and `bλ² > 1`.
fn counterexample(cfg: RunConfig, samples: usize) -> Result<Outcome> {
    let curve = cfg.build_curve()?;
    let params = cfg.params()?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.sampling.seed);
    let max_error = (0..samples)
        .map(|_| {
            let x: f64 = rng.gen();
            w_eval(&curve, &params, x).value.dist(Point2::unit_turn(x))
        })
        .fold(0.0, f64::max);
    let tolerance = 3e-12;
    let telescoping = TelescopingCheck {
        samples,
        max_error,
        tolerance,
        passed: max_error <= tolerance,
    };

    let comp = complement_analysis(&curve, cfg.resolution)?;
    let complement = ComplementCheck {
        epsilon: comp.epsilon,
        connected: comp.complement_connected,
        resolution_error: comp.resolution_error,
        passed: comp.epsilon > 0.0,
    };

    let counts = count_levels(&curve, &params, cfg.levels()?, &policy(&cfg))?;
    let estimate = fit_box_dimension(&counts, params.lambda)?;
    let dimension = SlopeCheck {
        passed: (estimate.slope - 1.0).abs() <= 0.1,
        counts,
        estimate,
        expected: 1.0,
        tolerance: 0.1,
    };

    let passed = telescoping.passed && complement.passed && dimension.passed;
    let report = CounterexampleReport {
        config: cfg,
        telescoping,
        complement,
        dimension,
        passed,
    };
    Outcome::json(&report, passed)
}
