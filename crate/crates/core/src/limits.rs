//! Tail classification of `q ↦ Ψ_q(t)` and `q ↦ Ψ_q⁻¹(y)` as `q → ∞`.
//!
//! A sampled sequence is read from its last few points. In order, the rules are:
//!
//! 1. Saturation: every tail value above `inf_tol` and non-decreasing gives
//!    `Infinite`; every tail value below `zero_tol` and non-increasing gives `Zero`.
//! 2. Extrapolation: quadratic extrapolation to `h = 1/q = 0` over the two
//!    trailing three-point windows. Agreement within `osc_tol` (relative) gives
//!    `Finite`.
//! 3. Power-law drift: a strictly monotone tail whose log-log slope stays at
//!    least `slope_min` in magnitude, without flattening, gives `Zero` or `Infinite`.
//! 4. Oscillation: spread above `osc_tol`, and the tail reverses direction by
//!    more than `osc_tol` in total.
//! 5. Anything else is `Undetermined`.
//!
//! An explicit schedule whose tail is strictly monotone but unclassified is
//! extended, continuing its last ratio, up to `max_extensions` extra points.
//!
//! Phase-locked schedules are split by the parity of `k` and each subsequence
//! is classified on its own before the two verdicts are merged.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::family::YoungFamily;

/// A q-schedule.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// Explicit strictly increasing sample points.
    Points(Vec<f64>),
    /// `q = π/2 + kπ` for `k = k_min..=k_max`, analysed per parity of `k`.
    PhaseLocked { k_min: u32, k_max: u32 },
}

impl Schedule {
    /// `start·ratio^j` for `j = 0..count`.
    pub fn geometric(start: f64, ratio: f64, count: usize) -> Self {
        Schedule::Points((0..count).map(|j| start * ratio.powi(j as i32)).collect())
    }

    /// `steps` geometrically spaced points from `q_min` to `q_max` inclusive.
    pub fn geometric_range(q_min: f64, q_max: f64, steps: usize) -> Result<Self> {
        if !(q_min.is_finite() && q_max.is_finite() && q_min > 0.0 && q_max > q_min) {
            return Err(Error::domain(format!("need 0 < q_min < q_max, got {q_min} and {q_max}")));
        }
        if steps < 2 {
            return Err(Error::domain("a q range needs at least 2 steps"));
        }
        let ratio = (q_max / q_min).ln() / (steps - 1) as f64;
        let mut qs: Vec<f64> = (0..steps).map(|j| q_min * (ratio * j as f64).exp()).collect();
        qs[0] = q_min;
        qs[steps - 1] = q_max;
        Self::points(qs)
    }

    pub fn points(qs: Vec<f64>) -> Result<Self> {
        if qs.is_empty() {
            return Err(Error::domain("empty q schedule"));
        }
        if qs.iter().any(|q| !(q.is_finite() && *q > 0.0)) {
            return Err(Error::domain("q schedule entries must be finite and > 0"));
        }
        if qs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("q schedule must be strictly increasing"));
        }
        Ok(Schedule::Points(qs))
    }

    pub fn phase_locked(k_min: u32, k_max: u32) -> Self {
        Schedule::PhaseLocked { k_min, k_max }
    }

    /// The phase-locked points with `q_min ≤ π/2 + kπ ≤ q_max`.
    pub fn phase_locked_range(q_min: f64, q_max: f64) -> Result<Self> {
        let k_min = ((q_min - PI / 2.0) / PI).ceil().max(0.0);
        let k_max = ((q_max - PI / 2.0) / PI).floor();
        if !(k_max >= k_min) || k_max > u32::MAX as f64 {
            return Err(Error::domain(format!("no phase-locked point π/2 + kπ lies in [{q_min}, {q_max}]")));
        }
        Ok(Schedule::PhaseLocked {
            k_min: k_min as u32,
            k_max: k_max as u32,
        })
    }

    /// All sample points in increasing order.
    pub fn qs(&self) -> Vec<f64> {
        match self {
            Schedule::Points(qs) => qs.clone(),
            Schedule::PhaseLocked { k_min, k_max } => (*k_min..=*k_max).map(phase_locked_q).collect(),
        }
    }

    pub fn is_phase_locked(&self) -> bool {
        matches!(self, Schedule::PhaseLocked { .. })
    }
}

/// `π/2 + kπ`.
pub fn phase_locked_q(k: u32) -> f64 {
    PI / 2.0 + k as f64 * PI
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitKind {
    Zero,
    Finite,
    Infinite,
    Oscillating,
    Undetermined,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::Zero => "zero",
            LimitKind::Finite => "finite",
            LimitKind::Infinite => "infinite",
            LimitKind::Oscillating => "oscillating",
            LimitKind::Undetermined => "undetermined",
        })
    }
}

/// A classified limit with the samples behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    pub kind: LimitKind,
    /// The limit for `Finite`; `0` for `Zero`; `∞` for `Infinite`.
    pub value: Option<f64>,
    /// Sampled `(q, value)` pairs in increasing `q`.
    pub evidence: Vec<(f64, f64)>,
    pub liminf_est: f64,
    pub limsup_est: f64,
}

impl LimitEstimate {
    /// `Some(v)` when the limit exists in `[0, ∞]`.
    pub fn limit(&self) -> Option<f64> {
        match self.kind {
            LimitKind::Zero | LimitKind::Finite | LimitKind::Infinite => self.value,
            _ => None,
        }
    }
}

/// Thresholds of the tail classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitConfig {
    pub osc_tol: f64,
    pub zero_tol: f64,
    pub inf_tol: f64,
    /// Number of trailing points inspected.
    pub tail: usize,
    /// Minimum log-log slope magnitude for the drift rule.
    pub slope_min: f64,
    /// Extra points appended to an explicit schedule, continuing its last
    /// ratio, while the tail is strictly monotone but unclassified.
    pub max_extensions: usize,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            osc_tol: 1e-3,
            zero_tol: 1e-12,
            inf_tol: 1e12,
            tail: 5,
            slope_min: 0.25,
            max_extensions: 8,
        }
    }
}

/// Classifies the tail of a sampled sequence. `qs` must be increasing.
pub fn classify_tail(qs: &[f64], values: &[f64], config: &LimitConfig) -> LimitEstimate {
    assert_eq!(qs.len(), values.len(), "one value per q");
    let evidence: Vec<(f64, f64)> = qs.iter().copied().zip(values.iter().copied()).collect();
    let n = values.len();
    let tail_len = config.tail.max(4).min(n);
    let (tq, tv) = (&qs[n - tail_len..], &values[n - tail_len..]);
    let (lo, hi) = min_max(tv);
    let estimate = |kind, value, liminf_est, limsup_est| LimitEstimate {
        kind,
        value,
        evidence: evidence.clone(),
        liminf_est,
        limsup_est,
    };

    if n < 4 || tv.iter().any(|v| v.is_nan()) {
        return estimate(LimitKind::Undetermined, None, lo, hi);
    }

    let non_decreasing = tv.windows(2).all(|w| w[1] >= w[0]);
    let non_increasing = tv.windows(2).all(|w| w[1] <= w[0]);
    if non_decreasing && tv.iter().all(|&v| v > config.inf_tol) {
        return estimate(LimitKind::Infinite, Some(f64::INFINITY), f64::INFINITY, f64::INFINITY);
    }
    if non_increasing && tv.iter().all(|&v| v.abs() < config.zero_tol) {
        return estimate(LimitKind::Zero, Some(0.0), 0.0, 0.0);
    }
    if tv.iter().any(|v| !v.is_finite()) {
        return estimate(LimitKind::Undetermined, None, lo, hi);
    }

    let e1 = extrapolate_to_zero(&inverse_q(&tq[tail_len - 4..tail_len - 1]), &tv[tail_len - 4..tail_len - 1]);
    let e2 = extrapolate_to_zero(&inverse_q(&tq[tail_len - 3..]), &tv[tail_len - 3..]);
    if e1.is_finite() && e2.is_finite() && (e1 - e2).abs() <= config.osc_tol * e1.abs().max(e2.abs()) {
        return estimate(LimitKind::Finite, Some(e2), e1.min(e2), e1.max(e2));
    }

    let strictly_up = tv.windows(2).all(|w| w[1] > w[0]);
    let strictly_down = tv.windows(2).all(|w| w[1] < w[0]);
    if (strictly_up || strictly_down) && tv.iter().all(|&v| v > 0.0) {
        let slope = |i: usize| (tv[i + 1] / tv[i]).ln() / (tq[i + 1] / tq[i]).ln();
        let (s_prev, s_last) = (slope(tail_len - 3), slope(tail_len - 2));
        if s_prev.abs() >= config.slope_min && s_last.abs() >= config.slope_min && s_last.abs() >= s_prev.abs() {
            return if strictly_up {
                estimate(LimitKind::Infinite, Some(f64::INFINITY), f64::INFINITY, f64::INFINITY)
            } else {
                estimate(LimitKind::Zero, Some(0.0), 0.0, 0.0)
            };
        }
    }

    // Variation in excess of the net change: zero for monotone tails.
    let variation: f64 = tv.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let reversal = variation - (tv[tail_len - 1] - tv[0]).abs();
    if hi - lo > config.osc_tol && reversal > config.osc_tol {
        return estimate(LimitKind::Oscillating, None, lo, hi);
    }
    estimate(LimitKind::Undetermined, None, lo, hi)
}

/// Merges the estimates of two interleaved subsequences.
pub fn merge_subsequences(a: &LimitEstimate, b: &LimitEstimate, config: &LimitConfig) -> LimitEstimate {
    let mut evidence: Vec<(f64, f64)> = a.evidence.iter().chain(&b.evidence).copied().collect();
    evidence.sort_by(|x, y| x.0.total_cmp(&y.0));
    let liminf_est = a.liminf_est.min(b.liminf_est);
    let limsup_est = a.limsup_est.max(b.limsup_est);
    let build = |kind, value| LimitEstimate {
        kind,
        value,
        evidence: evidence.clone(),
        liminf_est,
        limsup_est,
    };
    if a.kind == LimitKind::Undetermined || b.kind == LimitKind::Undetermined {
        return build(LimitKind::Undetermined, None);
    }
    match (a.limit(), b.limit()) {
        (Some(x), Some(_)) if a.kind == b.kind && a.kind != LimitKind::Finite => build(a.kind, Some(x)),
        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => {
            if (x - y).abs() <= config.osc_tol * x.abs().max(y.abs()).max(1.0) {
                let mean = 0.5 * (x + y);
                if mean.abs() < config.zero_tol {
                    build(LimitKind::Zero, Some(0.0))
                } else {
                    build(LimitKind::Finite, Some(mean))
                }
            } else {
                build(LimitKind::Oscillating, None)
            }
        }
        _ => build(LimitKind::Oscillating, None),
    }
}

/// Classifies `values(q)` sampled on `schedule`.
pub fn estimate_limit(
    schedule: &Schedule,
    config: &LimitConfig,
    mut values: impl FnMut(f64) -> Result<f64>,
) -> Result<LimitEstimate> {
    match schedule {
        Schedule::Points(qs) => {
            let mut qs = qs.clone();
            let mut vs = qs.iter().map(|&q| values(q)).collect::<Result<Vec<_>>>()?;
            let mut extensions = 0;
            loop {
                let est = classify_tail(&qs, &vs, config);
                let n = qs.len();
                if est.kind != LimitKind::Undetermined
                    || extensions == config.max_extensions
                    || n < 2
                    || !strictly_monotone(&vs[n.saturating_sub(config.tail)..])
                {
                    return Ok(est);
                }
                let next = qs[n - 1] * (qs[n - 1] / qs[n - 2]);
                qs.push(next);
                vs.push(values(next)?);
                extensions += 1;
            }
        }
        Schedule::PhaseLocked { k_min, k_max } => {
            let mut parts = [(Vec::new(), Vec::new()), (Vec::new(), Vec::new())];
            for k in *k_min..=*k_max {
                let q = phase_locked_q(k);
                let part = &mut parts[(k % 2) as usize];
                part.0.push(q);
                part.1.push(values(q)?);
            }
            let even = classify_tail(&parts[0].0, &parts[0].1, config);
            let odd = classify_tail(&parts[1].0, &parts[1].1, config);
            Ok(merge_subsequences(&odd, &even, config))
        }
    }
}

/// `lim_q Ψ_q(t)`.
pub fn limit_of_values(family: &YoungFamily, t: f64, schedule: &Schedule) -> Result<LimitEstimate> {
    limit_of_values_with(family, t, schedule, &LimitConfig::default())
}

pub fn limit_of_values_with(
    family: &YoungFamily,
    t: f64,
    schedule: &Schedule,
    config: &LimitConfig,
) -> Result<LimitEstimate> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("t must be finite and > 0, got {t}")));
    }
    estimate_limit(schedule, config, |q| family.make(q)?.eval(t))
}

/// `lim_q Ψ_q⁻¹(y)`.
pub fn limit_of_inverses(family: &YoungFamily, y: f64, schedule: &Schedule) -> Result<LimitEstimate> {
    limit_of_inverses_with(family, y, schedule, &LimitConfig::default())
}

pub fn limit_of_inverses_with(
    family: &YoungFamily,
    y: f64,
    schedule: &Schedule,
    config: &LimitConfig,
) -> Result<LimitEstimate> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::domain(format!("y must be finite and > 0, got {y}")));
    }
    estimate_limit(schedule, config, |q| family.make(q)?.inverse(y))
}

/// Combines the verdicts of several schedules for one probe: the first
/// schedule decides, unless a later one exposes an oscillation.
pub fn combine_schedules(estimates: Vec<LimitEstimate>) -> LimitEstimate {
    let mut iter = estimates.into_iter();
    let primary = iter.next().expect("at least one schedule");
    iter.find(|e| e.kind == LimitKind::Oscillating).unwrap_or(primary)
}

fn strictly_monotone(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0]) || v.windows(2).all(|w| w[1] < w[0])
}

fn inverse_q(qs: &[f64]) -> Vec<f64> {
    qs.iter().map(|q| 1.0 / q).collect()
}

/// Value at `0` of the polynomial through `(h_i, v_i)` (Neville's scheme).
fn extrapolate_to_zero(h: &[f64], v: &[f64]) -> f64 {
    let mut p = v.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn geo() -> Schedule {
        Schedule::geometric(1.0, 2.0, 13)
    }

    #[test]
    fn neville_recovers_quadratics() {
        let h = [0.5, 0.25, 0.125];
        let v: Vec<f64> = h.iter().map(|x| 3.0 + 2.0 * x - x * x).collect();
        assert_relative_eq!(extrapolate_to_zero(&h, &v), 3.0, max_relative = 1e-14);
    }

    #[test]
    fn power_family_values() {
        let fam = YoungFamily::parse("power").unwrap();
        assert_eq!(limit_of_values(&fam, 2.0, &geo()).unwrap().kind, LimitKind::Infinite);
        assert_eq!(limit_of_values(&fam, 0.5, &geo()).unwrap().kind, LimitKind::Zero);
        let one = limit_of_values(&fam, 1.0, &geo()).unwrap();
        assert_eq!(one.kind, LimitKind::Finite);
        assert_eq!(one.value, Some(1.0));
    }

    #[test]
    fn sinpiecewise_values_oscillate() {
        let fam = YoungFamily::parse("sinpiecewise").unwrap();
        let est = limit_of_values(&fam, 0.75, &geo()).unwrap();
        assert_eq!(est.kind, LimitKind::Oscillating, "{est:?}");
        let est = limit_of_values(&fam, 0.75, &Schedule::phase_locked(1, 64)).unwrap();
        assert_eq!(est.kind, LimitKind::Oscillating);
        assert_relative_eq!(est.liminf_est, 0.0625, max_relative = 1e-9);
        assert_relative_eq!(est.limsup_est, 0.25, max_relative = 1e-9);
    }

    #[test]
    fn inverse_limits() {
        let power = YoungFamily::parse("power").unwrap();
        let est = limit_of_inverses(&power, 7.0, &geo()).unwrap();
        assert_eq!(est.kind, LimitKind::Finite);
        assert!((est.value.unwrap() - 1.0).abs() <= 1e-3);

        let lb = YoungFamily::parse("logbump:p=2").unwrap();
        let est = limit_of_inverses(&lb, 3.0, &geo()).unwrap();
        assert_eq!(est.kind, LimitKind::Finite);
        assert!((est.value.unwrap() - 1.0).abs() <= 1e-2, "{est:?}");

        let ple = YoungFamily::parse("powerlog_e:p=1").unwrap();
        assert_eq!(limit_of_inverses(&ple, 1.0, &geo()).unwrap().kind, LimitKind::Zero);
    }

    #[test]
    fn evidence_is_sorted_by_q() {
        let fam = YoungFamily::parse("sinpiecewise").unwrap();
        let est = limit_of_inverses(&fam, 0.25, &Schedule::phase_locked(1, 20)).unwrap();
        assert_eq!(est.evidence.len(), 20);
        assert!(est.evidence.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn short_or_nan_sequences_are_undetermined() {
        let cfg = LimitConfig::default();
        assert_eq!(classify_tail(&[1.0, 2.0], &[1.0, 1.0], &cfg).kind, LimitKind::Undetermined);
        let qs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(
            classify_tail(&qs, &[1.0, 2.0, f64::NAN, 1.0, 1.0], &cfg).kind,
            LimitKind::Undetermined
        );
    }

    #[test]
    fn finite_estimates_respect_spread_invariant() {
        let cfg = LimitConfig::default();
        let qs: Vec<f64> = (0..13).map(|j| 2f64.powi(j)).collect();
        let vs: Vec<f64> = qs.iter().map(|q| 5.0 + 1.0 / q + (q.ln() / q)).collect();
        let est = classify_tail(&qs, &vs, &cfg);
        if est.kind == LimitKind::Finite {
            let v = est.value.unwrap();
            assert!(est.limsup_est - est.liminf_est <= cfg.osc_tol * v.abs().max(1.0));
        }
    }

    #[test]
    fn schedule_constructors() {
        assert_eq!(geo().qs().len(), 13);
        assert_eq!(geo().qs()[12], 4096.0);
        let s = Schedule::phase_locked_range(2.0, 20.0).unwrap();
        assert_eq!(s, Schedule::PhaseLocked { k_min: 1, k_max: 5 });
        assert!(Schedule::phase_locked_range(2.0, 3.0).is_err());
        let g = Schedule::geometric_range(1.0, 4096.0, 13).unwrap();
        for (a, b) in g.qs().iter().zip(geo().qs()) {
            assert_relative_eq!(*a, b, max_relative = 1e-12);
        }
        assert!(Schedule::points(vec![1.0, 1.0]).is_err());
        assert!(Schedule::geometric_range(2.0, 1.0, 5).is_err());
    }
}
