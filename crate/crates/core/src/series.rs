//! Evaluation of `W(x) = Σ_{n≥0} λⁿ φ(bⁿx)`.
//!
//! Arguments `bⁿx mod 1` are reduced exactly: a finite double is a dyadic
//! rational, so its fractional part is kept as an integer numerator over a
//! power of two and multiplied by `b` in integer arithmetic. At b-adic points
//! `k/bⁿ` the series is evaluated by digit shifting, with the tail
//! `λⁿ φ(0) / (1 − λ)` summed in closed form.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::PeriodicCurve;
use crate::error::{Error, Result};
use crate::point::Point2;

/// Parameters `(λ, b)` of the series plus the requested truncation accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassParams {
    pub lambda: f64,
    pub b: u64,
    pub tail_tol: f64,
}

impl WeierstrassParams {
    /// Accepts any `0 < λ < 1`; the series converges there. Operations whose
    /// bounds need `γ = 1/(bλ) < 1` check [`Self::require_fractal_regime`].
    pub fn new(lambda: f64, b: u64, tail_tol: f64) -> Result<Self> {
        if b < 2 {
            return Err(Error::invalid(format!("b must be >= 2, got {b}")));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::invalid(format!("lambda must lie in (0, 1), got {lambda}")));
        }
        if !(tail_tol > 0.0 && tail_tol.is_finite()) {
            return Err(Error::invalid(format!("tail_tol must be positive, got {tail_tol}")));
        }
        Ok(WeierstrassParams { lambda, b, tail_tol })
    }

    /// `γ = 1 / (bλ)`.
    pub fn gamma(&self) -> f64 {
        1.0 / (self.b as f64 * self.lambda)
    }

    /// `1/b < λ`, equivalently `γ < 1`.
    pub fn in_fractal_regime(&self) -> bool {
        self.lambda * (self.b as f64) > 1.0
    }

    pub fn require_fractal_regime(&self) -> Result<()> {
        if self.in_fractal_regime() {
            Ok(())
        } else {
            Err(Error::hypothesis(
                "1/b < lambda",
                format!("b*lambda = {} <= 1", self.b as f64 * self.lambda),
            ))
        }
    }

    /// Smallest `N` with `sup|φ| · λ^{N+1} / (1 − λ) ≤ tail_tol`.
    pub fn truncation_index(&self, sup_norm: f64) -> usize {
        if sup_norm <= 0.0 {
            return 0;
        }
        let target = self.tail_tol * (1.0 - self.lambda) / sup_norm;
        if target >= self.lambda {
            return 0;
        }
        // λ^{N+1} ≤ target  ⟺  N + 1 ≥ ln(target) / ln(λ)
        let mut n = ((target.ln() / self.lambda.ln()).ceil() as usize).saturating_sub(1);
        while self.tail_bound(sup_norm, n) > self.tail_tol {
            n += 1;
        }
        while n > 0 && self.tail_bound(sup_norm, n - 1) <= self.tail_tol {
            n -= 1;
        }
        n
    }

    /// `sup|φ| · λ^{N+1} / (1 − λ)`.
    pub fn tail_bound(&self, sup_norm: f64, n: usize) -> f64 {
        sup_norm * self.lambda.powi(n as i32 + 1) / (1.0 - self.lambda)
    }

    /// `bⁿ`, or an error if it does not fit in 64 bits.
    pub fn b_pow(&self, n: u32) -> Result<u64> {
        self.b
            .checked_pow(n)
            .ok_or_else(|| Error::invalid(format!("b^n overflows u64 for b = {}, n = {n}", self.b)))
    }
}

/// A truncated series value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: Point2,
    /// Bound on `|W(x) − value|`.
    pub tail_bound: f64,
    /// Number of series terms summed (`N + 1`).
    pub terms: usize,
}

/// Fractional part of a double held exactly as `numerator / 2^bits`, with the
/// numerator stored little-endian in 64-bit limbs.
#[derive(Debug, Clone)]
struct DyadicFraction {
    limbs: Vec<u64>,
    bits: u32,
}

impl DyadicFraction {
    fn from_f64(x: f64) -> Self {
        debug_assert!(x.is_finite());
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let exp_field = ((bits >> 52) & 0x7ff) as i32;
        let frac_field = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp_field == 0 {
            (frac_field, -1074)
        } else {
            (frac_field | (1u64 << 52), exp_field - 1075)
        };
        if mantissa == 0 || exp >= 0 {
            return DyadicFraction { limbs: vec![0], bits: 0 };
        }
        let q = (-exp) as u32;
        let nlimbs = (q as usize).div_ceil(64);
        let mut limbs = vec![0u64; nlimbs];
        // mantissa mod 2^q
        let m = if q >= 64 { mantissa } else { mantissa & ((1u64 << q) - 1) };
        limbs[0] = m;
        let mut frac = DyadicFraction { limbs, bits: q };
        if negative && m != 0 {
            frac.negate();
        }
        frac.mask();
        frac
    }

    fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// `2^bits − numerator` (two's complement within `bits`).
    fn negate(&mut self) {
        let mut carry = 1u128;
        for limb in &mut self.limbs {
            let v = (!*limb) as u128 + carry;
            *limb = v as u64;
            carry = v >> 64;
        }
        self.mask();
    }

    fn mask(&mut self) {
        let rem = self.bits % 64;
        if rem != 0 {
            if let Some(top) = self.limbs.last_mut() {
                *top &= (1u64 << rem) - 1;
            }
        }
    }

    /// Replaces the fraction `f` by `b·f mod 1`.
    fn mul_mod_one(&mut self, b: u64) {
        let mut carry = 0u128;
        for limb in &mut self.limbs {
            let v = (*limb as u128) * (b as u128) + carry;
            *limb = v as u64;
            carry = v >> 64;
        }
        self.mask();
    }

    fn to_f64(&self) -> f64 {
        if self.bits == 0 {
            return 0.0;
        }
        let mut acc = 0.0;
        // Only the top two limbs influence a 53-bit result.
        let start = self.limbs.len().saturating_sub(2);
        for i in start..self.limbs.len() {
            let scale = 64.0 * i as f64 - self.bits as f64;
            acc += self.limbs[i] as f64 * scale.exp2();
        }
        // Rounding can land exactly on 1.0.
        if acc >= 1.0 {
            0.0
        } else {
            acc
        }
    }
}

/// `W(x)` truncated after `N + 1` terms, `N` chosen from `sup|φ|` and
/// `params.tail_tol`.
pub fn w_eval(curve: &PeriodicCurve, params: &WeierstrassParams, x: f64) -> Evaluation {
    let sup = curve.sup_norm_bound();
    let n = params.truncation_index(sup);
    let mut frac = DyadicFraction::from_f64(x);
    let mut value = Point2::ORIGIN;
    let mut weight = 1.0;
    for _ in 0..=n {
        value += curve.eval(frac.to_f64()) * weight;
        weight *= params.lambda;
        frac.mul_mod_one(params.b);
    }
    Evaluation {
        value,
        tail_bound: params.tail_bound(sup, n),
        terms: n + 1,
    }
}

const TAIL_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// A sample of `W` at a generic point near a requested parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericSample {
    /// The sampled point rounded to a double; lies in `[x, x + b^{−d})`.
    pub position: f64,
    pub evaluation: Evaluation,
    /// Length `d` of the terminating b-adic expansion of `x`, if it ends
    /// within the truncation.
    pub depth: Option<usize>,
}

/// `W` at the point that shares the b-adic digits of `x` and continues them
/// with pseudo-random digits (seeded by the bits of `x`) where the expansion
/// of `x` would end.
///
/// Every double is a dyadic rational, so for even `b` its expansion stops
/// after `d` digits and `W(x)` ends in the constant tail
/// `λ^d φ(0) / (1 − λ)`. Samples on a grid `i/m` then all share that tail and
/// cover only a sliver of the graph. The replacement point stays in the
/// level-`d` b-adic cell `[x, x + b^{−d})` that `x` opens. For odd `b` no
/// double terminates and the result equals [`w_eval`].
pub fn w_eval_generic(curve: &PeriodicCurve, params: &WeierstrassParams, x: f64) -> GenericSample {
    let sup = curve.sup_norm_bound();
    let n = params.truncation_index(sup);
    let b = params.b;
    let bf = b as f64;

    let start = DyadicFraction::from_f64(x);
    let mut probe = start.clone();
    let mut depth = None;
    for t in 0..=n {
        if probe.is_zero() {
            depth = Some(t);
            break;
        }
        probe.mul_mod_one(b);
    }
    let Some(d) = depth else {
        return GenericSample {
            position: x,
            evaluation: w_eval(curve, params, x),
            depth: None,
        };
    };

    // Enough digits to fill a double when read as a fraction.
    let window = (64.0 / bf.log2()).ceil() as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(x.to_bits() ^ TAIL_SALT);
    let digits: Vec<u64> = (0..n + 1 + window).map(|_| rng.gen_range(0..b)).collect();
    // (0.r_s r_{s+1} ...)_b
    let fraction_from = |s: usize| digits[s..s + window].iter().rev().fold(0.0, |acc, &r| (acc + r as f64) / bf);
    let head = fraction_from(0);

    let mut frac = start;
    let mut value = Point2::ORIGIN;
    let mut weight = 1.0;
    for t in 0..=n {
        let s = if t < d {
            // The random digits sit d − t places below the point.
            let s = frac.to_f64() + head * bf.powi(t as i32 - d as i32);
            if s >= 1.0 {
                s - 1.0
            } else {
                s
            }
        } else {
            fraction_from(t - d)
        };
        value += curve.eval(s) * weight;
        weight *= params.lambda;
        frac.mul_mod_one(b);
    }
    GenericSample {
        position: x + head * bf.powi(-(d as i32)),
        evaluation: Evaluation {
            value,
            tail_bound: params.tail_bound(sup, n),
            terms: n + 1,
        },
        depth,
    }
}

/// `z_{n,k} = k / bⁿ`, formed as an exact integer ratio before conversion.
pub fn badic_point(n: u32, k: u64, b: u64) -> Result<f64> {
    if b < 2 {
        return Err(Error::invalid(format!("b must be >= 2, got {b}")));
    }
    let denom = b
        .checked_pow(n)
        .ok_or_else(|| Error::invalid(format!("b^n overflows u64 for b = {b}, n = {n}")))?;
    if k >= denom {
        return Err(Error::invalid(format!("k = {k} outside [0, b^n - 1] = [0, {}]", denom - 1)));
    }
    Ok(k as f64 / denom as f64)
}

/// `W(k/bⁿ)` by digit shifting: the first `n` terms use the exact residues
/// `k·bᵗ mod bⁿ`, the rest equal `φ(0)` and are summed in closed form.
pub fn w_eval_badic(curve: &PeriodicCurve, params: &WeierstrassParams, n: u32, k: u64) -> Result<Point2> {
    let denom = params.b_pow(n)?;
    if k >= denom {
        return Err(Error::invalid(format!("k = {k} outside [0, b^n - 1] = [0, {}]", denom - 1)));
    }
    let lambda = params.lambda;
    let mut value = Point2::ORIGIN;
    let mut weight = 1.0;
    let mut residue = k as u128;
    for _ in 0..n {
        value += curve.eval(residue as f64 / denom as f64) * weight;
        weight *= lambda;
        residue = residue * params.b as u128 % denom as u128;
    }
    Ok(value + curve.eval(0.0) * (weight / (1.0 - lambda)))
}

/// A telescoping residual and its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub residual: Point2,
    /// `Lγ/(1−γ)` (first order) or `Lγ²/(1−γ)` (second order).
    pub bound: f64,
    /// Allowance for truncation, `2·tail_tol·λ⁻ⁿ`.
    pub slack: f64,
}

impl Residual {
    pub fn within_bound(&self) -> bool {
        self.residual.norm() <= self.bound + self.slack
    }
}

fn residual_inputs(
    curve: &PeriodicCurve,
    params: &WeierstrassParams,
    n: u32,
    k: u64,
    j: u64,
) -> Result<(Point2, f64)> {
    params.require_fractal_regime()?;
    if n < 1 {
        return Err(Error::invalid("residuals need n >= 1"));
    }
    if j >= params.b {
        return Err(Error::invalid(format!("digit j = {j} outside [0, b - 1]")));
    }
    let denom = params.b_pow(n)?;
    if k >= denom {
        return Err(Error::invalid(format!("k = {k} outside [0, b^n - 1] = [0, {}]", denom - 1)));
    }
    let fine = w_eval_badic(curve, params, n + 1, k * params.b + j)?;
    let coarse = w_eval_badic(curve, params, n, k)?;
    let scaled = (fine - coarse) * params.lambda.powi(-(n as i32));
    let leading = curve.eval(j as f64 / params.b as f64) - curve.eval(0.0);
    Ok((scaled - leading, 2.0 * params.tail_tol * params.lambda.powi(-(n as i32))))
}

/// `(W(z_{n+1,kb+j}) − W(z_{n,k}))/λⁿ − (φ(j/b) − φ(0))`, bounded by
/// `Lγ/(1−γ)`.
pub fn residual_first_order(
    curve: &PeriodicCurve,
    params: &WeierstrassParams,
    n: u32,
    k: u64,
    j: u64,
) -> Result<Residual> {
    let (residual, slack) = residual_inputs(curve, params, n, k, j)?;
    let gamma = params.gamma();
    let lipschitz = curve.lipschitz_constant(4096);
    Ok(Residual {
        residual,
        bound: lipschitz * gamma / (1.0 - gamma),
        slack,
    })
}

/// The first-order residual minus `λ⁻¹(φ(k/b + j/b²) − φ(k/b))`, bounded by
/// `Lγ²/(1−γ)`.
pub fn residual_second_order(
    curve: &PeriodicCurve,
    params: &WeierstrassParams,
    n: u32,
    k: u64,
    j: u64,
) -> Result<Residual> {
    let (first, slack) = residual_inputs(curve, params, n, k, j)?;
    let b = params.b as f64;
    let base = (k % params.b) as f64 / b;
    let correction = (curve.eval(base + j as f64 / (b * b)) - curve.eval(base)) * (1.0 / params.lambda);
    let gamma = params.gamma();
    let lipschitz = curve.lipschitz_constant(4096);
    Ok(Residual {
        residual: first - correction,
        bound: lipschitz * gamma * gamma / (1.0 - gamma),
        slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderData {
    /// `log_b(1/λ)`.
    pub alpha: f64,
    /// Constant `C` with `|W(x) − W(y)| ≤ C·|x − y|^α` for `|x − y| ≤ 1`.
    /// Infinite when `bλ ≤ 1`.
    pub c_holder: f64,
}

/// Hölder exponent and modulus constant of `W`.
///
/// For `b^{-m-1} < |x−y| ≤ b^{-m}` the terms `n < m` are bounded through the
/// Lipschitz constant and the rest through the oscillation, which gives
/// `C = L/(λb − 1) + Δ/(λ(1 − λ))`.
pub fn holder_data(lipschitz: f64, oscillation: f64, params: &WeierstrassParams) -> HolderData {
    let (lambda, b) = (params.lambda, params.b as f64);
    let alpha = (1.0 / lambda).ln() / b.ln();
    let c_holder = if lambda * b > 1.0 {
        lipschitz / (lambda * b - 1.0) + oscillation / (lambda * (1.0 - lambda))
    } else {
        f64::INFINITY
    };
    HolderData { alpha, c_holder }
}

/// Aggregate of one residual order over a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderSummary {
    pub max_residual: f64,
    pub mean_residual: f64,
    pub bound: f64,
    pub max_slack: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSweep {
    pub triples_checked: usize,
    pub first_order: OrderSummary,
    pub second_order: OrderSummary,
    pub pass: bool,
}

/// Checks both residual bounds for every `n ∈ 1..=max_level`, every digit
/// `j`, and `k_per_level` values of `k` per level (all of them when `bⁿ` is
/// not larger), drawn from a ChaCha stream seeded with `seed`.
pub fn residual_sweep(
    curve: &PeriodicCurve,
    params: &WeierstrassParams,
    max_level: u32,
    k_per_level: usize,
    seed: u64,
) -> Result<ResidualSweep> {
    params.require_fractal_regime()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::new();
    for n in 1..=max_level {
        let denom = params.b_pow(n)?;
        let ks: Vec<u64> = if denom as u128 <= k_per_level as u128 {
            (0..denom).collect()
        } else {
            (0..k_per_level).map(|_| rng.gen_range(0..denom)).collect()
        };
        for k in ks {
            for j in 0..params.b {
                triples.push((n, k, j));
            }
        }
    }
    let results: Vec<(Residual, Residual)> = triples
        .par_iter()
        .map(|&(n, k, j)| {
            Ok((
                residual_first_order(curve, params, n, k, j)?,
                residual_second_order(curve, params, n, k, j)?,
            ))
        })
        .collect::<Result<_>>()?;

    let summarize = |pick: fn(&(Residual, Residual)) -> &Residual| {
        let mut s = OrderSummary {
            max_residual: 0.0,
            mean_residual: 0.0,
            bound: 0.0,
            max_slack: 0.0,
            violations: 0,
        };
        for r in results.iter().map(pick) {
            let norm = r.residual.norm();
            s.max_residual = s.max_residual.max(norm);
            s.mean_residual += norm;
            s.bound = r.bound;
            s.max_slack = s.max_slack.max(r.slack);
            if !r.within_bound() {
                s.violations += 1;
            }
        }
        if !results.is_empty() {
            s.mean_residual /= results.len() as f64;
        }
        s
    };
    let first_order = summarize(|r| &r.0);
    let second_order = summarize(|r| &r.1);
    Ok(ResidualSweep {
        triples_checked: results.len(),
        pass: first_order.violations == 0 && second_order.violations == 0,
        first_order,
        second_order,
    })
}

/// Tabulates `W(u_i)` for `0 ≤ i < m`, where `u_i` is the generic point
/// [`w_eval_generic`] picks for `i/m`, and evaluates the graph of `W` on
/// b-adic intervals through the decomposition
///
/// `W((k + u)/bⁿ) = Σ_{t<n} λᵗ φ(((k mod b^{n−t}) + u)/b^{n−t}) + λⁿ W(u)`,
///
/// so a sample on a level-`n` interval costs `n` curve evaluations.
#[derive(Debug, Clone)]
pub struct GraphSampler {
    curve: PeriodicCurve,
    params: WeierstrassParams,
    grid: usize,
    positions: Vec<f64>,
    table: Vec<Point2>,
    /// `W(0)`, the value at the right end `u = 1`.
    endpoint: Point2,
    tail_bound: f64,
}

impl GraphSampler {
    pub fn new(curve: &PeriodicCurve, params: &WeierstrassParams, grid: usize) -> Result<Self> {
        if grid == 0 {
            return Err(Error::invalid("sample grid must be positive"));
        }
        let samples: Vec<GenericSample> = (0..grid)
            .into_par_iter()
            .map(|i| w_eval_generic(curve, params, i as f64 / grid as f64))
            .collect();
        let sup = curve.sup_norm_bound();
        Ok(GraphSampler {
            curve: curve.clone(),
            params: *params,
            grid,
            positions: samples.iter().map(|s| s.position).collect(),
            table: samples.iter().map(|s| s.evaluation.value).collect(),
            endpoint: w_eval(curve, params, 0.0).value,
            tail_bound: params.tail_bound(sup, params.truncation_index(sup)),
        })
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn params(&self) -> &WeierstrassParams {
        &self.params
    }

    pub fn curve(&self) -> &PeriodicCurve {
        &self.curve
    }

    /// Bound on the truncation error of any sampled value.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Sampling view of the level-`n` intervals.
    pub fn level(&self, n: u32) -> Result<LevelSampler<'_>> {
        let denom = self.params.b_pow(n)?;
        let moduli = (0..n).map(|t| self.params.b.pow(n - t)).collect();
        let weights = (0..n).map(|t| self.params.lambda.powi(t as i32)).collect();
        Ok(LevelSampler {
            sampler: self,
            n,
            denom,
            moduli,
            weights,
            scale: self.params.lambda.powi(n as i32),
        })
    }
}

pub struct LevelSampler<'a> {
    sampler: &'a GraphSampler,
    n: u32,
    denom: u64,
    moduli: Vec<u64>,
    weights: Vec<f64>,
    scale: f64,
}

impl LevelSampler<'_> {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of level-`n` intervals, `bⁿ`.
    pub fn intervals(&self) -> u64 {
        self.denom
    }

    /// `W((k + u_i)/bⁿ)` for `0 ≤ i ≤ m`; `i = m` is the right endpoint
    /// `u = 1`.
    #[inline]
    pub fn point(&self, k: u64, i: usize) -> Point2 {
        let s = self.sampler;
        debug_assert!(i <= s.grid);
        let (u, tail) = if i == s.grid { (1.0, s.endpoint) } else { (s.positions[i], s.table[i]) };
        let mut value = tail * self.scale;
        for (&m, &w) in self.moduli.iter().zip(&self.weights) {
            value += s.curve.eval(((k % m) as f64 + u) / m as f64) * w;
        }
        value
    }

    /// Parameter `x` of sample `(k, i)`, rounded.
    pub fn x(&self, k: u64, i: usize) -> f64 {
        let s = self.sampler;
        let u = if i == s.grid { 1.0 } else { s.positions[i] };
        (k as f64 + u) / self.denom as f64
    }
}
