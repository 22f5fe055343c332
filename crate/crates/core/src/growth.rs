//! Monotonicity of `t ↦ t / Ψ_q⁻¹(Φ(t))` on `[0, k]` for sampled `q`.
//!
//! Ratios are compared as logarithms, `ln t − ln Ψ_q⁻¹(Φ(t))`, so `q` in the
//! thousands does not underflow anything. The open end at `t = 0` is not
//! sampled; instead the ratio's log-slope there, `1 − e_Φ/e_Ψ` with `e` the
//! elasticity `d ln Ψ / d ln t` as `t → 0+`, must be non-negative. A negative
//! slope is confirmed by an explicit decreasing pair found further left.

use crate::error::{Error, Result};
use crate::family::YoungFamily;
use crate::limits::Schedule;
use crate::young::YoungFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthConfig {
    /// Allowed decrease of the ratio, relative.
    pub mono_tol: f64,
    /// Left end of the sampled interval, as a fraction of `k`.
    pub eps_rel: f64,
    /// Points in each of the geometric and the uniform sub-grids.
    pub points: usize,
    /// Relative slack on the elasticity comparison at `t → 0+`.
    pub elasticity_tol: f64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            mono_tol: 1e-9,
            eps_rel: 1e-9,
            points: 256,
            elasticity_tol: 1e-6,
        }
    }
}

/// A decreasing pair, in log coordinates: `x₁ < x₂` but `ratio(x₁) > ratio(x₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub q: f64,
    pub ln_t1: f64,
    pub ln_t2: f64,
    pub ln_ratio1: f64,
    pub ln_ratio2: f64,
}

impl Witness {
    pub fn t1(&self) -> f64 {
        self.ln_t1.exp()
    }

    pub fn t2(&self) -> f64 {
        self.ln_t2.exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSample {
    pub q: f64,
    pub passes: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub non_decreasing: bool,
    pub interval: (f64, f64),
    /// Least sampled `q` from which every later sample passes.
    pub q_threshold: Option<f64>,
    /// Violation at the largest failing `q`.
    pub witness: Option<Witness>,
    pub samples: Vec<GrowthSample>,
}

/// Checks that `t / Ψ_q⁻¹(Φ(t))` is non-decreasing on `[0, k]` along the schedule.
pub fn growth_check(family: &YoungFamily, phi: &YoungFunction, k: f64, schedule: &Schedule) -> Result<MonotonicityReport> {
    growth_check_with(family, phi, k, schedule, &GrowthConfig::default())
}

pub fn growth_check_with(
    family: &YoungFamily,
    phi: &YoungFunction,
    k: f64,
    schedule: &Schedule,
    config: &GrowthConfig,
) -> Result<MonotonicityReport> {
    check_k(k)?;
    let us: Vec<f64> = sample_grid(k, config).iter().map(|t| t.ln()).collect();
    let mut samples = Vec::new();
    for q in schedule.qs() {
        let psi = family.make(q)?;
        let ratio = |u: f64| -> Result<f64> { Ok(u - psi.ln_inverse_at_ln(phi.ln_value_at_ln(u))?) };
        let witness = match scan(q, &us, &ratio, config)? {
            Some(w) => Some(w),
            None => endpoint_witness(q, phi, &psi, us[0], &ratio, config)?,
        };
        samples.push(GrowthSample {
            q,
            passes: witness.is_none(),
            witness,
        });
    }
    Ok(summarise((0.0, k), samples))
}

/// The same test in inverse form: `Φ⁻¹(y) / Ψ_q⁻¹(y)` on `[0, Φ(k)]`, with the
/// `y` grid taken as the image of the `t` grid under `Φ`. Inverses are computed
/// directly rather than in log coordinates, so this is an independent route.
pub fn growth_check_inverse_form(
    family: &YoungFamily,
    phi: &YoungFunction,
    k: f64,
    schedule: &Schedule,
    config: &GrowthConfig,
) -> Result<MonotonicityReport> {
    check_k(k)?;
    let ys: Vec<f64> = sample_grid(k, config)
        .into_iter()
        .map(|t| phi.eval(t))
        .collect::<Result<_>>()?;
    if ys.iter().any(|&y| !(y > 0.0 && y.is_finite())) {
        return Err(Error::domain("Φ leaves (0, ∞) on the sampled interval"));
    }
    let ln_ys: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mut samples = Vec::new();
    for q in schedule.qs() {
        let psi = family.make(q)?;
        let ratio = |ell: f64| -> Result<f64> {
            let y = ell.exp();
            Ok(phi.inverse(y)?.ln() - psi.inverse(y)?.ln())
        };
        let mut witness = scan(q, &ln_ys, &ratio, config)?;
        if witness.is_none() && steeper_at_zero(phi, &psi, config) {
            // Same slope test, carried over to y = Φ(t); the pair comes from the log route.
            let log_ratio = |u: f64| -> Result<f64> { Ok(u - psi.ln_inverse_at_ln(phi.ln_value_at_ln(u))?) };
            witness = endpoint_witness(q, phi, &psi, (config.eps_rel * k).ln(), &log_ratio, config)?;
        }
        samples.push(GrowthSample {
            q,
            passes: witness.is_none(),
            witness,
        });
    }
    let phik = phi.eval(k)?;
    Ok(summarise((0.0, phik), samples))
}

fn check_k(k: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::domain(format!("k must be finite and > 0, got {k}")));
    }
    Ok(())
}

/// Geometric and uniform points on `[ε, k]`, merged.
fn sample_grid(k: f64, config: &GrowthConfig) -> Vec<f64> {
    let n = config.points.max(2);
    let eps = config.eps_rel * k;
    let (a, b) = (eps.ln(), k.ln());
    let mut ts: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .chain((0..n).map(|i| eps + (k - eps) * i as f64 / (n - 1) as f64))
        .collect();
    ts[n - 1] = k;
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// First adjacent pair on which the log-ratio drops by more than `mono_tol`.
fn scan(q: f64, xs: &[f64], ratio: &dyn Fn(f64) -> Result<f64>, config: &GrowthConfig) -> Result<Option<Witness>> {
    let mut prev = ratio(xs[0])?;
    for w in xs.windows(2) {
        let next = ratio(w[1])?;
        if prev > next + config.mono_tol {
            return Ok(Some(Witness {
                q,
                ln_t1: w[0],
                ln_t2: w[1],
                ln_ratio1: prev,
                ln_ratio2: next,
            }));
        }
        prev = next;
    }
    Ok(None)
}

fn steeper_at_zero(phi: &YoungFunction, psi: &YoungFunction, config: &GrowthConfig) -> bool {
    phi.elasticity_at_zero() > psi.elasticity_at_zero() * (1.0 + config.elasticity_tol)
}

/// When `Φ` is steeper than `Ψ_q` at the origin, walks left from `u0` in
/// doubling steps until a unit step in `ln t` shows the ratio decreasing.
fn endpoint_witness(
    q: f64,
    phi: &YoungFunction,
    psi: &YoungFunction,
    u0: f64,
    ratio: &dyn Fn(f64) -> Result<f64>,
    config: &GrowthConfig,
) -> Result<Option<Witness>> {
    if !steeper_at_zero(phi, psi, config) {
        return Ok(None);
    }
    for m in 0..=10 {
        let u = u0 - f64::from(1u32 << m);
        let (r1, r2) = (ratio(u - 1.0)?, ratio(u)?);
        if r1 > r2 + config.mono_tol {
            return Ok(Some(Witness {
                q,
                ln_t1: u - 1.0,
                ln_t2: u,
                ln_ratio1: r1,
                ln_ratio2: r2,
            }));
        }
    }
    Ok(None)
}

fn summarise(interval: (f64, f64), samples: Vec<GrowthSample>) -> MonotonicityReport {
    let first_pass_tail = samples.iter().rposition(|s| !s.passes).map_or(0, |i| i + 1);
    let q_threshold = samples.get(first_pass_tail).map(|s| s.q);
    let witness = samples.iter().rev().find_map(|s| s.witness);
    MonotonicityReport {
        non_decreasing: q_threshold.is_some(),
        interval,
        q_threshold,
        witness,
        samples,
    }
}
