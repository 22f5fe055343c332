//! Young functions: evaluation, numeric inversion and axiom checks.
//!
//! Every built-in is evaluated through its logarithm, `ln Ψ(e^u)`, which stays
//! finite long after `Ψ(t)` itself has under- or overflowed for large `q`.
//! Iterated logarithms are evaluated relative to their anchor point `t = 1`
//! with `ln_1p`/`exp_m1`, so the normalisation `Ψ_q(1) = 1` holds exactly.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::solve::{bisect, closer_endpoint, MAX_BISECTION_STEPS};

/// Upper end of the exponential bracket search in [`YoungFunction::inverse`].
pub const INVERSE_BRACKET_CAP: f64 = 1.606_938_044_258_990_3e60; // 2^200

/// Points `u` beyond which `e^u` is handled asymptotically.
const LARGE_LOG_ARG: f64 = 30.0;

/// Log-argument used to probe the behaviour of `Ψ` as `t -> 0+`.
const NEAR_ZERO_LOG_ARG: f64 = -700.0;

pub(crate) type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub(crate) enum Shape {
    Identity,
    Power {
        q: f64,
    },
    /// `t^p L_N(c+t)^q`, anchors `[L_0(c+1), .., L_{N-1}(c+1)]` with `L_0(x) = x`.
    IteratedLog {
        p: f64,
        q: f64,
        anchors: Arc<[f64]>,
    },
    /// `(t ∏_j L_j(c_j+t))^p L_N(c_N+t)^q`; one anchor list per order `j = 1..N`.
    LogProduct {
        p: f64,
        q: f64,
        anchors: Arc<[Arc<[f64]>]>,
    },
    /// `t^p log(e+t)^q`.
    PowerLogE {
        p: f64,
        q: f64,
    },
    /// `½t^q` below `½`, `½(t^q + (2t-1)^(2+sin q))` on `(½,1)`, `½(t^q + (2t-1)^3)` above.
    SinPiecewise {
        q: f64,
    },
    Custom(RealFn),
}

/// An evaluatable Young function with its metadata.
#[derive(Clone)]
pub struct YoungFunction {
    label: String,
    params: Vec<(String, f64)>,
    shape: Shape,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFunction")
            .field("label", &self.label)
            .field("params", &self.params)
            .finish()
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{}={}", if i == 0 { "(" } else { "," }, k, v)?;
        }
        if !self.params.is_empty() {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl YoungFunction {
    pub(crate) fn from_shape(label: &str, params: Vec<(String, f64)>, shape: Shape) -> Self {
        YoungFunction {
            label: label.to_string(),
            params,
            shape,
        }
    }

    /// `Ψ(t) = t`. Not a Young function in the strict sense, but usable as one.
    pub fn identity() -> Self {
        Self::from_shape("identity", Vec::new(), Shape::Identity)
    }

    /// `Ψ(t) = t^q`, `q ≥ 1`.
    pub fn power(q: f64) -> Result<Self> {
        if !(q.is_finite() && q >= 1.0) {
            return Err(Error::domain(format!("power exponent must be finite and >= 1, got {q}")));
        }
        Ok(Self::from_shape("power", vec![("q".into(), q)], Shape::Power { q }))
    }

    /// Wraps an arbitrary closure, for test fixtures and probes.
    ///
    /// No axiom is assumed; run [`YoungFunction::validate`] to find out.
    pub fn custom(label: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::from_shape(label, Vec::new(), Shape::Custom(Arc::new(f)))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    /// True for the linear pseudo-Young functions (`t` and `t^1`), whose density
    /// does not blow up at infinity.
    pub fn is_pseudo(&self) -> bool {
        match self.shape {
            Shape::Identity => true,
            Shape::Power { q } => q == 1.0,
            _ => false,
        }
    }

    /// `Ψ(t)` for `t ≥ 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::domain(format!("Young function argument must be finite and >= 0, got {t}")));
        }
        Ok(self.value(t))
    }

    /// Unchecked evaluation; `t` must be non-negative.
    pub(crate) fn value(&self, t: f64) -> f64 {
        if let Shape::Custom(f) = &self.shape {
            return f(t);
        }
        if t == 0.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Identity => t,
            Shape::Power { q } => t.powf(*q),
            Shape::SinPiecewise { q } => {
                let tq = t.powf(*q);
                if t <= 0.5 {
                    0.5 * tq
                } else if t < 1.0 {
                    0.5 * (tq + (2.0 * t - 1.0).powf(2.0 + q.sin()))
                } else {
                    0.5 * (tq + (2.0 * t - 1.0).powi(3))
                }
            }
            Shape::Custom(f) => f(t),
            _ => self.ln_value_at_ln(t.ln()).exp(),
        }
    }

    /// `ln Ψ(e^u)`; `-∞` at `u = -∞`.
    pub fn ln_value_at_ln(&self, u: f64) -> f64 {
        if u == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        match &self.shape {
            Shape::Identity => u,
            Shape::Power { q } => q * u,
            Shape::IteratedLog { p, q, anchors } => p * u + q * ln_iterated_log(anchors, u),
            Shape::LogProduct { p, q, anchors } => {
                let factors: f64 = anchors.iter().map(|a| ln_iterated_log(a, u)).sum();
                let last = ln_iterated_log(anchors.last().expect("at least one order"), u);
                p * (u + factors) + q * last
            }
            Shape::PowerLogE { p, q } => {
                // ln log(e + t) = ln(1 + ln(1 + t/e))
                let ln_log = if u > LARGE_LOG_ARG {
                    (u + (std::f64::consts::E * (-u).exp()).ln_1p()).ln()
                } else {
                    (u.exp() / std::f64::consts::E).ln_1p().ln_1p()
                };
                p * u + q * ln_log
            }
            Shape::SinPiecewise { q } => ln_sin_piecewise(*q, u),
            Shape::Custom(f) => f(u.exp()).ln(),
        }
    }

    /// Limit of `d ln Ψ / d ln t` as `t -> 0+`, estimated deep in the left tail.
    pub fn elasticity_at_zero(&self) -> f64 {
        self.ln_value_at_ln(NEAR_ZERO_LOG_ARG) - self.ln_value_at_ln(NEAR_ZERO_LOG_ARG - 1.0)
    }

    /// `Ψ⁻¹(y)` for `y ≥ 0`.
    ///
    /// The bracket starts at `[0, 1]`; the upper end doubles until `Ψ(hi) ≥ y`
    /// (capped at `2^200`) and the lower end halves until `Ψ(lo) ≤ y`. Bisection
    /// then runs until the endpoints are adjacent floats.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y.is_finite() && y >= 0.0) {
            return Err(Error::domain(format!("inverse argument must be finite and >= 0, got {y}")));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let mut hi = 1.0_f64;
        while self.value(hi) < y {
            if hi >= INVERSE_BRACKET_CAP {
                return Err(Error::Bracket {
                    what: "Young function inverse",
                    target: y,
                    lo: hi / 2.0,
                    hi,
                });
            }
            hi *= 2.0;
        }
        let mut lo = hi / 2.0;
        while lo > 0.0 && self.value(lo) > y {
            hi = lo;
            lo /= 2.0;
        }
        let bracket = bisect(lo, hi, MAX_BISECTION_STEPS, |t| self.value(t) < y);
        Ok(closer_endpoint(&bracket, y, |t| self.value(t)))
    }

    /// Log-domain inverse: returns `v` with `ln Ψ(e^v) = ell`.
    ///
    /// Works where `Ψ⁻¹` would leave the floating-point range.
    pub fn ln_inverse_at_ln(&self, ell: f64) -> Result<f64> {
        if ell.is_nan() || ell == f64::INFINITY {
            return Err(Error::domain(format!("log-domain inverse argument must be < +inf, got {ell}")));
        }
        if ell == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let g = |v: f64| self.ln_value_at_ln(v);
        let mut hi = 1.0_f64;
        while g(hi) < ell {
            if hi > 1e6 {
                return Err(Error::Bracket {
                    what: "log-domain inverse",
                    target: ell,
                    lo: hi / 2.0,
                    hi,
                });
            }
            hi *= 2.0;
        }
        let mut lo = -1.0_f64;
        while g(lo) > ell {
            if lo < -1e12 {
                return Err(Error::Bracket {
                    what: "log-domain inverse",
                    target: ell,
                    lo,
                    hi,
                });
            }
            lo *= 2.0;
        }
        let bracket = bisect(lo, hi, MAX_BISECTION_STEPS, |v| g(v) < ell);
        Ok(closer_endpoint(&bracket, ell, g))
    }

    /// Checks the Young-function axioms on `grid` with the default configuration.
    pub fn validate(&self, grid: &[f64]) -> Result<ValidationReport> {
        self.validate_with(grid, &ValidationConfig::default())
    }

    pub fn validate_with(&self, grid: &[f64], config: &ValidationConfig) -> Result<ValidationReport> {
        if grid.len() < 3 {
            return Err(Error::domain("validation grid needs at least 3 points"));
        }
        if grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::domain("validation grid must be finite and non-negative"));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("validation grid must be strictly increasing"));
        }

        let mut violations = Vec::new();
        let at_zero = self.value(0.0);
        if at_zero != 0.0 {
            violations.push(Violation::NonzeroAtOrigin { value: at_zero });
        }

        // Log values keep strictness visible after Ψ underflows.
        let logs: Vec<f64> = grid.iter().map(|&t| self.ln_at(t)).collect();
        for i in 0..grid.len() - 1 {
            if !(logs[i] < logs[i + 1]) {
                violations.push(Violation::NotIncreasing {
                    t1: grid[i],
                    t2: grid[i + 1],
                    psi1: self.value(grid[i]),
                    psi2: self.value(grid[i + 1]),
                });
            }
        }

        // Midpoint convexity, compared as ln Ψ(m) <= ln((Ψ(s) + Ψ(t)) / 2).
        for i in 0..grid.len() {
            for j in i + 1..grid.len() {
                let mid = 0.5 * (grid[i] + grid[j]);
                let lhs = self.ln_at(mid);
                let rhs = log_add_exp(logs[i], logs[j]) - std::f64::consts::LN_2;
                let slack = config.convexity_tol * rhs.abs().max(1.0);
                if lhs.is_nan() || lhs > rhs + slack {
                    violations.push(Violation::NotConvex {
                        s: grid[i],
                        t: grid[j],
                        ln_mid: lhs,
                        ln_chord: rhs,
                    });
                }
            }
        }

        let big = self.value(config.t_big);
        if !(big > config.y_big) {
            violations.push(Violation::NoGrowth {
                t_big: config.t_big,
                value: big,
            });
        }

        Ok(ValidationReport {
            violations,
            strict: !self.is_pseudo(),
        })
    }

    fn ln_at(&self, t: f64) -> f64 {
        if t == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.ln_value_at_ln(t.ln())
        }
    }
}

/// Default axiom-check grid: `0` plus 256 geometric points from `1e-6` to `1e3`.
pub fn default_validation_grid() -> Vec<f64> {
    let n = 256;
    let (lo, hi) = (1e-6_f64.ln(), 1e3_f64.ln());
    std::iter::once(0.0)
        .chain((0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    /// Relative slack on the log-domain midpoint-convexity test.
    pub convexity_tol: f64,
    pub t_big: f64,
    pub y_big: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            convexity_tol: 1e-9,
            t_big: 1e8,
            y_big: 1e6,
        }
    }
}

/// A failed axiom together with the grid points that witness it.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonzeroAtOrigin { value: f64 },
    NotIncreasing { t1: f64, t2: f64, psi1: f64, psi2: f64 },
    NotConvex { s: f64, t: f64, ln_mid: f64, ln_chord: f64 },
    NoGrowth { t_big: f64, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// False for pseudo-Young functions such as the identity.
    pub strict: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_convexity_violation(&self) -> bool {
        self.violations.iter().any(|v| matches!(v, Violation::NotConvex { .. }))
    }
}

pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if hi == f64::INFINITY {
        return f64::INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln L_N(c + e^u)` where `anchors[j] = L_j(c+1)` and `L_N(c+1) = 1`.
pub(crate) fn ln_iterated_log(anchors: &[f64], u: f64) -> f64 {
    let a0 = anchors[0];
    // s = ln(c + t) - ln(c + 1)
    let mut s = if u > LARGE_LOG_ARG {
        u + ((a0 - 1.0) * (-u).exp()).ln_1p() - a0.ln()
    } else {
        (u.exp_m1() / a0).ln_1p()
    };
    // Invariant: L_j(c + t) = anchors[j] + s.
    for &a in &anchors[1..] {
        s = (s / a).ln_1p();
    }
    s.ln_1p()
}

fn ln_sin_piecewise(q: f64, u: f64) -> f64 {
    let half = -std::f64::consts::LN_2;
    let qu = q * u;
    if u <= half {
        return half + qu;
    }
    // ln(2t - 1)
    let ln_bump = if u > LARGE_LOG_ARG {
        u + std::f64::consts::LN_2 + (-0.5 * (-u).exp()).ln_1p()
    } else {
        (u + std::f64::consts::LN_2).exp_m1().ln()
    };
    let exponent = if u < 0.0 { 2.0 + q.sin() } else { 3.0 };
    half + log_add_exp(qu, exponent * ln_bump)
}
