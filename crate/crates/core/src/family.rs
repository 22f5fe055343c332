//! One-parameter families `q ↦ Ψ_q` and the textual family descriptor.
//!
//! Descriptor grammar: `name` or `name:key=value,key=value`, with names
//! `power | logbump | iterlog | addie | sinpiecewise | powerlog_e | identity`
//! and keys `p` (real, `>= 1`) and `N` (integer, `>= 1`). The sweep parameter
//! `q` never appears in a descriptor.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Schedule;
use crate::solve::{bisect, MAX_BISECTION_STEPS};
use crate::young::{Shape, YoungFunction};

/// Largest iterated-log order whose anchor constant fits in an `f64`
/// (`N = 4` would need `c = e^(e^(e^e)) - 1`).
pub const MAX_LOG_ORDER: u32 = 3;

/// Names accepted by the family descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyName {
    Power,
    LogBump,
    IterLog,
    Addie,
    SinPiecewise,
    PowerLogE,
    Identity,
}

impl FamilyName {
    pub const ALL: [FamilyName; 7] = [
        FamilyName::Power,
        FamilyName::LogBump,
        FamilyName::IterLog,
        FamilyName::Addie,
        FamilyName::SinPiecewise,
        FamilyName::PowerLogE,
        FamilyName::Identity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Power => "power",
            FamilyName::LogBump => "logbump",
            FamilyName::IterLog => "iterlog",
            FamilyName::Addie => "addie",
            FamilyName::SinPiecewise => "sinpiecewise",
            FamilyName::PowerLogE => "powerlog_e",
            FamilyName::Identity => "identity",
        }
    }

    fn accepts_p(self) -> bool {
        matches!(
            self,
            FamilyName::LogBump | FamilyName::IterLog | FamilyName::Addie | FamilyName::PowerLogE
        )
    }

    fn accepts_n(self) -> bool {
        matches!(self, FamilyName::IterLog | FamilyName::Addie)
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                Error::parse(format!(
                    "unknown family `{s}` (expected one of power, logbump, iterlog, addie, sinpiecewise, powerlog_e, identity)"
                ))
            })
    }
}

/// Parsed family descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub p: Option<f64>,
    pub n: Option<u32>,
}

impl FamilySpec {
    pub fn new(name: FamilyName) -> Self {
        FamilySpec { name, p: None, n: None }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((name, rest)) => (name, Some(rest)),
            None => (s, None),
        };
        let mut spec = FamilySpec::new(name.parse()?);
        let Some(rest) = rest else {
            return Ok(spec);
        };
        if rest.is_empty() {
            return Err(Error::parse(format!("`{s}`: empty parameter list after `:`")));
        }
        for pair in rest.split(',') {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("`{s}`: expected key=value, got `{pair}`")))?;
            match key {
                "p" => {
                    if !spec.name.accepts_p() {
                        return Err(Error::parse(format!("family `{}` takes no `p`", spec.name.as_str())));
                    }
                    if spec.p.is_some() {
                        return Err(Error::parse(format!("`{s}`: duplicate key `p`")));
                    }
                    let p: f64 = value
                        .parse()
                        .map_err(|_| Error::parse(format!("`{s}`: `p` must be a real number, got `{value}`")))?;
                    spec.p = Some(p);
                }
                "N" => {
                    if !spec.name.accepts_n() {
                        return Err(Error::parse(format!("family `{}` takes no `N`", spec.name.as_str())));
                    }
                    if spec.n.is_some() {
                        return Err(Error::parse(format!("`{s}`: duplicate key `N`")));
                    }
                    let n: u32 = value
                        .parse()
                        .map_err(|_| Error::parse(format!("`{s}`: `N` must be a positive integer, got `{value}`")))?;
                    spec.n = Some(n);
                }
                other => return Err(Error::parse(format!("`{s}`: unknown key `{other}`"))),
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name.as_str())?;
        let mut sep = ':';
        if let Some(n) = self.n {
            write!(f, "{sep}N={n}")?;
            sep = ',';
        }
        if let Some(p) = self.p {
            write!(f, "{sep}p={p}")?;
        }
        Ok(())
    }
}

#[derive(Clone)]
enum Kind {
    Identity,
    Power,
    IteratedLog { p: f64, anchors: Arc<[f64]> },
    LogProduct { p: f64, anchors: Arc<[Arc<[f64]>]> },
    SinPiecewise,
    PowerLogE { p: f64 },
    Custom(Arc<dyn Fn(f64) -> YoungFunction + Send + Sync>),
}

/// A one-parameter family of Young functions.
#[derive(Clone)]
pub struct YoungFamily {
    label: String,
    params: Vec<(String, f64)>,
    kind: Kind,
    q_min: f64,
    q_min_inclusive: bool,
}

impl fmt::Debug for YoungFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFamily")
            .field("label", &self.label)
            .field("params", &self.params)
            .field("q_min", &self.q_min)
            .finish()
    }
}

impl YoungFamily {
    /// Builds a catalog family from its descriptor.
    pub fn from_spec(spec: &FamilySpec) -> Result<Self> {
        let p = spec.p.unwrap_or(1.0);
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::domain(format!("`p` must be finite and >= 1, got {p}")));
        }
        let n = spec.n.unwrap_or(1);
        if !(1..=MAX_LOG_ORDER).contains(&n) {
            return Err(Error::domain(format!(
                "`N` must lie in 1..={MAX_LOG_ORDER} (the anchor constant overflows beyond), got {n}"
            )));
        }
        let label = spec.name.as_str().to_string();
        let family = match spec.name {
            FamilyName::Identity => YoungFamily {
                label,
                params: Vec::new(),
                kind: Kind::Identity,
                q_min: 0.0,
                q_min_inclusive: false,
            },
            FamilyName::Power => YoungFamily {
                label,
                params: Vec::new(),
                kind: Kind::Power,
                q_min: 1.0,
                q_min_inclusive: true,
            },
            FamilyName::LogBump => YoungFamily {
                label,
                params: vec![("p".into(), p)],
                kind: Kind::IteratedLog {
                    p,
                    anchors: Arc::from(vec![std::f64::consts::E]),
                },
                q_min: 0.0,
                q_min_inclusive: false,
            },
            FamilyName::IterLog => {
                let anchors = iterated_log_anchors(n)?;
                YoungFamily {
                    label,
                    params: vec![("N".into(), n as f64), ("p".into(), p), ("c".into(), anchors[0] - 1.0)],
                    kind: Kind::IteratedLog {
                        p,
                        anchors: Arc::from(anchors),
                    },
                    q_min: 0.0,
                    q_min_inclusive: false,
                }
            }
            FamilyName::Addie => {
                let mut params = vec![("N".into(), n as f64), ("p".into(), p)];
                let mut all = Vec::new();
                for j in 1..=n {
                    let anchors = iterated_log_anchors(j)?;
                    params.push((format!("c{j}"), anchors[0] - 1.0));
                    all.push(Arc::from(anchors));
                }
                YoungFamily {
                    label,
                    params,
                    kind: Kind::LogProduct {
                        p,
                        anchors: Arc::from(all),
                    },
                    q_min: 0.0,
                    q_min_inclusive: false,
                }
            }
            FamilyName::SinPiecewise => YoungFamily {
                label,
                params: Vec::new(),
                kind: Kind::SinPiecewise,
                q_min: 1.0,
                q_min_inclusive: true,
            },
            FamilyName::PowerLogE => YoungFamily {
                label,
                params: vec![("p".into(), p)],
                kind: Kind::PowerLogE { p },
                q_min: 0.0,
                q_min_inclusive: false,
            },
        };
        Ok(family)
    }

    /// Parses a descriptor and builds the family.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::from_spec(&spec.parse()?)
    }

    /// A family defined by an arbitrary constructor, for fixtures.
    pub fn custom(
        label: &str,
        q_min: f64,
        make: impl Fn(f64) -> YoungFunction + Send + Sync + 'static,
    ) -> Self {
        YoungFamily {
            label: label.to_string(),
            params: Vec::new(),
            kind: Kind::Custom(Arc::new(make)),
            q_min,
            q_min_inclusive: true,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Fixed parameters, including solved anchor constants.
    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    /// Smallest admissible `q` (exclusive when [`Self::q_min_inclusive`] is false).
    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_min_inclusive(&self) -> bool {
        self.q_min_inclusive
    }

    pub fn accepts_q(&self, q: f64) -> bool {
        q.is_finite() && (q > self.q_min || (self.q_min_inclusive && q == self.q_min))
    }

    /// First point of the default q-schedule.
    pub fn schedule_start(&self) -> f64 {
        self.q_min.max(1.0)
    }

    /// `Ψ_q`.
    pub fn make(&self, q: f64) -> Result<YoungFunction> {
        if !self.accepts_q(q) {
            let op = if self.q_min_inclusive { ">=" } else { ">" };
            return Err(Error::domain(format!(
                "q = {q} outside the domain of `{}` (q {op} {})",
                self.label, self.q_min
            )));
        }
        let mut params = self.params.clone();
        params.push(("q".into(), q));
        let shape = match &self.kind {
            Kind::Identity => return Ok(YoungFunction::identity()),
            Kind::Power => return YoungFunction::power(q),
            Kind::Custom(make) => return Ok(make(q)),
            Kind::IteratedLog { p, anchors } => Shape::IteratedLog {
                p: *p,
                q,
                anchors: anchors.clone(),
            },
            Kind::LogProduct { p, anchors } => Shape::LogProduct {
                p: *p,
                q,
                anchors: anchors.clone(),
            },
            Kind::SinPiecewise => {
                params.retain(|(k, _)| k == "q");
                Shape::SinPiecewise { q }
            }
            Kind::PowerLogE { p } => Shape::PowerLogE { p: *p, q },
        };
        Ok(YoungFunction::from_shape(&self.label, params, shape))
    }

    /// True when the family's `q`-dependence is periodic and needs phase-locked sampling.
    pub fn is_phase_sensitive(&self) -> bool {
        matches!(self.kind, Kind::SinPiecewise)
    }

    /// Default schedules: geometric `q_min·2^j, j = 0..12`, plus the
    /// phase-locked `q = π/2 + kπ, k = 1..64` for phase-sensitive families.
    pub fn default_schedules(&self) -> Vec<Schedule> {
        let mut out = vec![Schedule::geometric(self.schedule_start(), 2.0, 13)];
        if self.is_phase_sensitive() {
            out.push(Schedule::phase_locked(1, 64));
        }
        out
    }
}

/// Anchors `[L_0(c+1), .., L_{N-1}(c+1)]` for the order-`N` iterated log, with
/// `c` solved by bisection from `L_N(c + 1) = 1`.
pub(crate) fn iterated_log_anchors(n: u32) -> Result<Vec<f64>> {
    let constant = solve_iterated_log_constant(n)?;
    let mut anchors = Vec::with_capacity(n as usize);
    let mut a = constant + 1.0;
    for _ in 0..n {
        anchors.push(a);
        a = a.ln();
    }
    Ok(anchors)
}

/// The constant `c` with `L_N(c + 1) = 1`, found by bisection.
pub fn solve_iterated_log_constant(n: u32) -> Result<f64> {
    if !(1..=MAX_LOG_ORDER).contains(&n) {
        return Err(Error::domain(format!("iterated-log order must lie in 1..={MAX_LOG_ORDER}, got {n}")));
    }
    let nested = |x: f64| {
        let mut v = x;
        for _ in 0..n {
            if v <= 0.0 {
                return f64::NEG_INFINITY;
            }
            v = v.ln();
        }
        v
    };
    let mut hi = 2.0_f64;
    while nested(hi) < 1.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Bracket {
                what: "iterated-log anchor constant",
                target: 1.0,
                lo: 1.0,
                hi,
            });
        }
    }
    let bracket = bisect(1.0, hi, MAX_BISECTION_STEPS, |x| nested(x) < 1.0);
    let x = if (nested(bracket.hi) - 1.0).abs() < (nested(bracket.lo) - 1.0).abs() {
        bracket.hi
    } else {
        bracket.lo
    };
    Ok(x - 1.0)
}
