//! δ- and (α,β)-admissibility of a family, judged from sampled limits.
//!
//! The inverse side decides first: `Ψ_q⁻¹(y)` is probed on a grid of `y`. A
//! common finite limit `δ` at every probe gives δ-admissibility, provided the
//! value side agrees (`Ψ_q(t) → ∞` above `δ`, small below). Limits that vanish
//! everywhere mean the norms blow up; limits that escape to infinity mean they
//! collapse. Otherwise `α` and `β` are located on the value side by bisection
//! over `t` and checked against the inverse probes.

use std::fmt;

use crate::error::Result;
use crate::family::YoungFamily;
use crate::limits::{
    combine_schedules, limit_of_inverses_with, limit_of_values_with, LimitConfig, LimitEstimate, LimitKind,
    Schedule,
};
use crate::measure::MeasureSpace;

/// Bisection steps used to locate `α` and `β` between grid points.
const EDGE_BISECTION_STEPS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    DeltaAdmissible { delta: f64 },
    AlphaBetaAdmissible { alpha: f64, beta: f64 },
    /// `Ψ_q⁻¹ → 0`: norms of non-zero functions diverge.
    InadmissibleDivergent,
    /// `Ψ_q⁻¹ → ∞`: norms of bounded functions vanish.
    InadmissibleVanishing,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::DeltaAdmissible { delta } => write!(f, "delta-admissible delta={delta:.3}"),
            Verdict::AlphaBetaAdmissible { alpha, beta } => {
                write!(f, "alpha-beta-admissible alpha={alpha:.3} beta={beta:.3}")
            }
            Verdict::InadmissibleDivergent => write!(f, "inadmissible: divergent"),
            Verdict::InadmissibleVanishing => write!(f, "inadmissible: vanishing"),
            Verdict::Undetermined => write!(f, "undetermined"),
        }
    }
}

impl Verdict {
    pub fn delta(&self) -> Option<f64> {
        match self {
            Verdict::DeltaAdmissible { delta } => Some(*delta),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyConfig {
    pub limits: LimitConfig,
    /// Tolerance on inverse-limit verdicts.
    pub class_tol: f64,
    /// Relative margin making `limsup Ψ_q(t) < μ(X)⁻¹` decidable.
    pub strict_margin: f64,
    /// Overrides the family's default schedules.
    pub schedules: Option<Vec<Schedule>>,
    pub t_grid: Option<Vec<f64>>,
    pub y_grid: Option<Vec<f64>>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            limits: LimitConfig::default(),
            class_tol: 1e-2,
            strict_margin: 1e-6,
            schedules: None,
            t_grid: None,
            y_grid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub verdict: Verdict,
    /// Total mass the verdict refers to.
    pub context_mass: f64,
    /// `(t, lim Ψ_q(t))` probes, in the order evaluated.
    pub value_evidence: Vec<(f64, LimitEstimate)>,
    /// `(y, lim Ψ_q⁻¹(y))` probes.
    pub inverse_evidence: Vec<(f64, LimitEstimate)>,
    /// Why the verdict fell back to `Undetermined`, or how it was reached.
    pub notes: Vec<String>,
}

/// Decades `10^-2 .. 10^2`.
fn decades() -> Vec<f64> {
    (-2..=2).map(|e| 10f64.powi(e)).collect()
}

/// Default inverse probes: decades for infinite mass; for finite `μ(X)`, the
/// points `μ⁻¹, 10μ⁻¹, 100μ⁻¹` plus every decade at or above `μ⁻¹`.
pub fn default_y_grid(space: &MeasureSpace) -> Vec<f64> {
    if !space.is_finite() {
        return decades();
    }
    let floor = 1.0 / space.total_mass();
    let mut ys: Vec<f64> = [floor, 10.0 * floor, 100.0 * floor]
        .into_iter()
        .chain(decades().into_iter().filter(|&y| y >= floor))
        .collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    ys
}

/// Default value probes: 17 geometric points from `10^-2` to `10^2`.
pub fn default_t_grid() -> Vec<f64> {
    (0..=16).map(|i| 10f64.powf(-2.0 + 0.25 * i as f64)).collect()
}

struct Probe<'a> {
    family: &'a YoungFamily,
    schedules: Vec<Schedule>,
    config: &'a ClassifyConfig,
}

impl Probe<'_> {
    fn value(&self, t: f64) -> Result<LimitEstimate> {
        let ests = self
            .schedules
            .iter()
            .map(|s| limit_of_values_with(self.family, t, s, &self.config.limits))
            .collect::<Result<Vec<_>>>()?;
        Ok(combine_schedules(ests))
    }

    fn inverse(&self, y: f64) -> Result<LimitEstimate> {
        let ests = self
            .schedules
            .iter()
            .map(|s| limit_of_inverses_with(self.family, y, s, &self.config.limits))
            .collect::<Result<Vec<_>>>()?;
        Ok(combine_schedules(ests))
    }
}

/// Classifies `family` on `space` with the default configuration.
pub fn classify(family: &YoungFamily, space: &MeasureSpace) -> Result<AdmissibilityReport> {
    classify_with(family, space, &ClassifyConfig::default())
}

pub fn classify_with(family: &YoungFamily, space: &MeasureSpace, config: &ClassifyConfig) -> Result<AdmissibilityReport> {
    let probe = Probe {
        family,
        schedules: config.schedules.clone().unwrap_or_else(|| family.default_schedules()),
        config,
    };
    let mass = space.total_mass();
    let small_threshold = if space.is_finite() {
        Some((1.0 - config.strict_margin) / mass)
    } else {
        None
    };
    let y_grid = config.y_grid.clone().unwrap_or_else(|| default_y_grid(space));
    let t_grid = config.t_grid.clone().unwrap_or_else(default_t_grid);

    let mut report = AdmissibilityReport {
        verdict: Verdict::Undetermined,
        context_mass: mass,
        value_evidence: Vec::new(),
        inverse_evidence: Vec::new(),
        notes: Vec::new(),
    };

    for &y in &y_grid {
        if space.is_finite() && y < 1.0 / mass * (1.0 - 1e-12) {
            report.notes.push(format!("probe y={y} skipped: below 1/total_mass"));
            continue;
        }
        report.inverse_evidence.push((y, probe.inverse(y)?));
    }
    if report.inverse_evidence.is_empty() {
        report.notes.push("no inverse probe in the valid domain".into());
        return Ok(report);
    }

    let inv = &report.inverse_evidence;
    let tail_falls = |e: &LimitEstimate| monotone_tail(e, config.limits.tail, |a, b| b < a);
    let tail_rises = |e: &LimitEstimate| monotone_tail(e, config.limits.tail, |a, b| b > a);
    let all_zero = inv
        .iter()
        .all(|(_, e)| e.kind == LimitKind::Zero || (e.kind == LimitKind::Undetermined && tail_falls(e)));
    let all_inf = inv
        .iter()
        .all(|(_, e)| e.kind == LimitKind::Infinite || (e.kind == LimitKind::Undetermined && tail_rises(e)));
    if all_zero && inv.iter().any(|(_, e)| e.kind == LimitKind::Zero) {
        report.verdict = Verdict::InadmissibleDivergent;
        return Ok(report);
    }
    if all_inf && inv.iter().any(|(_, e)| e.kind == LimitKind::Infinite) {
        report.verdict = Verdict::InadmissibleVanishing;
        return Ok(report);
    }
    if let Some((y, _)) = inv.iter().find(|(_, e)| e.kind == LimitKind::Undetermined) {
        report.notes.push(format!("inverse limit at y={y} undetermined"));
        return Ok(report);
    }

    let finite_values: Option<Vec<f64>> = inv
        .iter()
        .map(|(_, e)| (e.kind == LimitKind::Finite).then(|| e.value.expect("finite estimates carry a value")))
        .collect();
    if let Some(values) = finite_values {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo <= config.class_tol {
            let delta = median(values);
            if delta > 0.0 && delta.is_finite() {
                if delta_consistent(&probe, &mut report, delta, &t_grid, small_threshold)? {
                    report.verdict = Verdict::DeltaAdmissible { delta };
                } else {
                    report.notes.push(format!("value side disagrees with delta={delta}"));
                }
                return Ok(report);
            }
        }
    }

    // Two thresholds: α from below, β from above.
    let is_small = |e: &LimitEstimate| match small_threshold {
        None => e.kind == LimitKind::Zero,
        Some(thr) => {
            e.kind == LimitKind::Zero
                || (matches!(e.kind, LimitKind::Finite | LimitKind::Oscillating) && e.limsup_est <= thr)
        }
    };
    let is_infinite = |e: &LimitEstimate| e.kind == LimitKind::Infinite;

    let mut grid_est = Vec::with_capacity(t_grid.len());
    for &t in &t_grid {
        grid_est.push(probe.value(t)?);
    }
    report
        .value_evidence
        .extend(t_grid.iter().copied().zip(grid_est.iter().cloned()));

    let first_not_small = grid_est.iter().position(|e| !is_small(e));
    let alpha = match first_not_small {
        None => {
            report.notes.push("every value probe stays small; no upper threshold".into());
            return Ok(report);
        }
        Some(0) => 0.0,
        Some(i) => locate_edge(&probe, &mut report, t_grid[i - 1], t_grid[i], &is_small)?,
    };
    let last_finite = grid_est.iter().rposition(|e| !is_infinite(e));
    let beta = match last_finite {
        None => 0.0,
        Some(j) if j + 1 == t_grid.len() => {
            report.notes.push("no value probe diverges; no lower threshold".into());
            return Ok(report);
        }
        Some(j) => locate_edge(&probe, &mut report, t_grid[j], t_grid[j + 1], &|e| !is_infinite(e))?,
    };
    if alpha > beta {
        report.notes.push(format!("alpha={alpha} exceeds beta={beta}"));
        return Ok(report);
    }
    for (y, e) in &report.inverse_evidence {
        if e.liminf_est < alpha - config.class_tol || e.limsup_est > beta + config.class_tol {
            report.notes.push(format!(
                "inverse limits at y={y} in [{}, {}] escape [alpha, beta] = [{alpha}, {beta}]",
                e.liminf_est, e.limsup_est
            ));
            return Ok(report);
        }
    }
    report.verdict = if beta - alpha <= config.class_tol && alpha > 0.0 {
        Verdict::DeltaAdmissible {
            delta: 0.5 * (alpha + beta),
        }
    } else {
        Verdict::AlphaBetaAdmissible { alpha, beta }
    };
    Ok(report)
}

/// Checks that `Ψ_q(t)` diverges above `δ` and stays small below it on the grid.
fn delta_consistent(
    probe: &Probe,
    report: &mut AdmissibilityReport,
    delta: f64,
    t_grid: &[f64],
    small_threshold: Option<f64>,
) -> Result<bool> {
    let tol = probe.config.class_tol;
    let mut ok = true;
    for &t in t_grid {
        let above = t > delta * (1.0 + tol);
        let below = t < delta * (1.0 - tol);
        if !(above || below) {
            continue;
        }
        let e = probe.value(t)?;
        let fine = if above {
            e.kind == LimitKind::Infinite
        } else {
            match small_threshold {
                None => e.kind == LimitKind::Zero,
                Some(thr) => e.kind == LimitKind::Zero || (e.kind == LimitKind::Finite && e.limsup_est <= thr),
            }
        };
        if !fine {
            report.notes.push(format!("value limit at t={t} is {}", e.kind));
            ok = false;
        }
        report.value_evidence.push((t, e));
    }
    Ok(ok)
}

/// Bisects in `ln t` for the edge of `pred`, which holds at `lo` and fails at `hi`.
fn locate_edge(
    probe: &Probe,
    report: &mut AdmissibilityReport,
    mut lo: f64,
    mut hi: f64,
    pred: &dyn Fn(&LimitEstimate) -> bool,
) -> Result<f64> {
    for _ in 0..EDGE_BISECTION_STEPS {
        let mid = (0.5 * (lo.ln() + hi.ln())).exp();
        if !(mid > lo && mid < hi) {
            break;
        }
        let e = probe.value(mid)?;
        if pred(&e) {
            lo = mid;
        } else {
            hi = mid;
        }
        report.value_evidence.push((mid, e));
    }
    Ok(0.5 * (lo + hi))
}

fn monotone_tail(e: &LimitEstimate, tail: usize, step: impl Fn(f64, f64) -> bool) -> bool {
    let n = e.evidence.len();
    n >= 2 && e.evidence[n.saturating_sub(tail)..].windows(2).all(|w| step(w[0].1, w[1].1))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
