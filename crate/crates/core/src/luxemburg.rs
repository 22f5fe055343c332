//! Modulars, Luxemburg norms, indicator norms and the Chebyshev-type lower bound.

use crate::error::{Error, Result};
use crate::measure::SimpleFunction;
use crate::solve::{bisect, closer_endpoint, MAX_BISECTION_STEPS};
use crate::young::YoungFunction;

/// Geometric expansion steps allowed when a seed bracket needs widening.
const MAX_EXPANSION_STEPS: usize = 2100;

/// Outcome of a norm computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub norm: f64,
    /// `∫ Ψ(|f| / norm) dμ`; `0` for the zero function.
    pub modular_at_norm: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// `Σ massᵢ Ψ(valueᵢ / λ)`.
pub fn modular(psi: &YoungFunction, f: &SimpleFunction, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(modular_unchecked(psi, f, lambda))
}

fn modular_unchecked(psi: &YoungFunction, f: &SimpleFunction, lambda: f64) -> f64 {
    f.atoms()
        .iter()
        .map(|a| {
            let t = a.value / lambda;
            if t.is_finite() {
                a.mass * psi.value(t)
            } else {
                f64::INFINITY
            }
        })
        .sum()
}

/// `‖f‖_Ψ = inf{λ > 0 : ∫Ψ(|f|/λ) ≤ 1}`, computed as the root of `modular(λ) = 1`.
///
/// Since `a_max χ_{S_max} ≤ f ≤ a_max χ_{supp f}`, the root lies between the
/// two corresponding indicator norms; that bracket is checked, widened if
/// rounding put it on the wrong side, and bisected to adjacent floats.
pub fn luxemburg_norm(psi: &YoungFunction, f: &SimpleFunction) -> Result<NormResult> {
    let Some(top) = f.atoms().first() else {
        return Ok(NormResult {
            norm: 0.0,
            modular_at_norm: 0.0,
            iterations: 0,
            bracket: (0.0, 0.0),
        });
    };
    let sup = top.value;
    let m = |lambda: f64| modular_unchecked(psi, f, lambda);

    let mut lo = sup * indicator_norm(psi, top.mass).unwrap_or(0.0);
    let mut hi = sup * indicator_norm(psi, f.support_mass()).unwrap_or(f64::INFINITY);
    if !(lo > 0.0 && lo.is_finite()) {
        lo = f64::MIN_POSITIVE;
    }
    if !(hi > 0.0 && hi.is_finite()) {
        hi = f64::MAX;
    }
    let mut steps = 0;
    while !(m(lo) > 1.0) {
        lo *= 0.5;
        steps += 1;
        if steps > MAX_EXPANSION_STEPS || lo == 0.0 {
            return Err(Error::Bracket {
                what: "Luxemburg norm (lower end)",
                target: 1.0,
                lo,
                hi,
            });
        }
    }
    while m(hi) > 1.0 {
        hi *= 2.0;
        steps += 1;
        if steps > MAX_EXPANSION_STEPS || !hi.is_finite() {
            return Err(Error::Bracket {
                what: "Luxemburg norm (upper end)",
                target: 1.0,
                lo,
                hi,
            });
        }
    }

    let bracket = bisect(lo, hi, MAX_BISECTION_STEPS, |lambda| m(lambda) > 1.0);
    let norm = closer_endpoint(&bracket, 1.0, m);
    Ok(NormResult {
        norm,
        modular_at_norm: m(norm),
        iterations: bracket.iterations,
        bracket: (bracket.lo, bracket.hi),
    })
}

/// `‖χ_S‖_Ψ = 1 / Ψ⁻¹(1/μ(S))`.
pub fn indicator_norm(psi: &YoungFunction, mass: f64) -> Result<f64> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::domain(format!("indicator mass must be finite and > 0, got {mass}")));
    }
    Ok(1.0 / psi.inverse(1.0 / mass)?)
}

/// `α / Ψ⁻¹(1/μ{|f| ≥ α})`, a lower bound for `‖f‖_Ψ`.
///
/// Returns `0` when the superlevel set is empty.
pub fn chebyshev_bound(psi: &YoungFunction, f: &SimpleFunction, alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be finite and > 0, got {alpha}")));
    }
    let mass = f.distribution(alpha)?.mass;
    if mass == 0.0 {
        return Ok(0.0);
    }
    if !mass.is_finite() {
        return Err(Error::domain("superlevel set has infinite measure"));
    }
    Ok(alpha * indicator_norm(psi, mass)?)
}
