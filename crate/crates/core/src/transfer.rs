//! The log-bump transfer function `F(t) = t / Ψ_q⁻¹(Ψ_{q0}(t))`, its fixed-point
//! map `T_c`, and the concavity test for `T_c`.
//!
//! Here `Ψ_q(t) = t^p log(e−1+t)^q`, and `F` solves
//! `F(t)^p log(e−1+t)^{q0} = log(e−1+t/F(t))^q`.

use crate::error::{Error, Result};
use crate::family::{FamilyName, FamilySpec, YoungFamily};

/// Absolute tolerance on the fixed-point residual, scaled by `max(1, t₁)`.
pub const FIXED_POINT_TOL: f64 = 1e-8;

/// `log(e − 1 + t)`.
pub fn ln_bump(t: f64) -> f64 {
    (t / (std::f64::consts::E - 1.0)).ln_1p() + (std::f64::consts::E - 1.0).ln()
}

fn check_params(p: f64, q0: f64, q: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::domain(format!("p must be finite and >= 1, got {p}")));
    }
    if !(q0.is_finite() && q0 > 0.0 && q.is_finite() && q > q0) {
        return Err(Error::domain(format!("need q > q0 > 0, got q0 = {q0}, q = {q}")));
    }
    Ok(())
}

fn log_bump_family(p: f64) -> Result<YoungFamily> {
    YoungFamily::from_spec(&FamilySpec::new(FamilyName::LogBump).with_p(p))
}

/// `F(0) = log(e−1)^{(q−q0)/p}`.
pub fn transfer_at_zero(p: f64, q0: f64, q: f64) -> Result<f64> {
    check_params(p, q0, q)?;
    Ok(((q - q0) / p * ln_bump(0.0).ln()).exp())
}

/// `F(t)`, computed through logarithms.
pub fn logbump_transfer(p: f64, q0: f64, q: f64, t: f64) -> Result<f64> {
    check_params(p, q0, q)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("t must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return transfer_at_zero(p, q0, q);
    }
    let fam = log_bump_family(p)?;
    let (base, target) = (fam.make(q0)?, fam.make(q)?);
    let u = t.ln();
    Ok((u - target.ln_inverse_at_ln(base.ln_value_at_ln(u))?).exp())
}

/// `|F(t)^p log(e−1+t)^{q0} − log(e−1+t/F(t))^q|`.
pub fn transfer_residual(p: f64, q0: f64, q: f64, t: f64) -> Result<f64> {
    let f = logbump_transfer(p, q0, q, t)?;
    Ok((f.powf(p) * ln_bump(t).powf(q0) - ln_bump(t / f).powf(q)).abs())
}

/// `T_c(t) = c·exp(c^{p/q} log(e−1+t)^{q0/q}) − c(e−1)`.
pub fn tc_map(p: f64, q0: f64, q: f64, c: f64, t: f64) -> f64 {
    c * (c.powf(p / q) * ln_bump(t).powf(q0 / q)).exp() - c * (std::f64::consts::E - 1.0)
}

/// Concavity test for `T_c` at `t`:
/// `q0 c^{p/q} log(e−1+t)^{q0/q} < q log(e−1+t) + q − q0`.
pub fn concavity_predicate(p: f64, q0: f64, q: f64, c: f64, t: f64) -> bool {
    let l = ln_bump(t);
    q0 * c.powf(p / q) * l.powf(q0 / q) < q * l + q - q0
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcCheck {
    /// `|T_c(t₁) − t₁| ≤ 1e-8·max(1, t₁)`.
    pub fixed_point: bool,
    pub residual: f64,
    /// Concavity predicate at each `t` of a uniform grid on `[0, k]`.
    pub concavity: Vec<(f64, bool)>,
}

impl TcCheck {
    pub fn concave_on_grid(&self) -> bool {
        self.concavity.iter().all(|&(_, ok)| ok)
    }
}

/// Whether `t₁` is a fixed point of `T_c`, plus the concavity predicate on `[0, k]`.
pub fn tc_fixed_point_check(p: f64, q0: f64, q: f64, c: f64, t1: f64, k: f64) -> Result<TcCheck> {
    check_params(p, q0, q)?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain(format!("c must be finite and > 0, got {c}")));
    }
    if !(t1.is_finite() && t1 > 0.0 && k.is_finite() && k > 0.0) {
        return Err(Error::domain(format!("need finite t1 > 0 and k > 0, got t1 = {t1}, k = {k}")));
    }
    let residual = (tc_map(p, q0, q, c, t1) - t1).abs();
    let concavity = (0..=100)
        .map(|i| {
            let t = k * i as f64 / 100.0;
            (t, concavity_predicate(p, q0, q, c, t))
        })
        .collect();
    Ok(TcCheck {
        fixed_point: residual <= FIXED_POINT_TOL * t1.max(1.0),
        residual,
        concavity,
    })
}

/// `sup F` over a 201-point uniform grid of `[0, k]`.
pub fn transfer_sup(p: f64, q0: f64, q: f64, k: f64) -> Result<f64> {
    (0..=200).try_fold(0.0_f64, |m, i| Ok(m.max(logbump_transfer(p, q0, q, k * i as f64 / 200.0)?)))
}

/// Whether `q` meets `M^p ≤ (q/q0)^q log(e−1)^{q−q0}` with `M = sup_{[0,k]} F`,
/// which makes the concavity predicate hold for every `c ∈ [0, M]`.
pub fn concavity_threshold_met(p: f64, q0: f64, q: f64, k: f64) -> Result<bool> {
    let m = transfer_sup(p, q0, q, k)?;
    Ok(p * m.ln() <= q * (q / q0).ln() + (q - q0) * ln_bump(0.0).ln())
}
