//! Luxemburg norms of simple functions and `q → ∞` diagnostics for
//! one-parameter families of Young functions.
//!
//! Simple functions are finite lists of `(value, mass)` atoms, so every modular
//! `∫Ψ(|f|/λ)dμ` is an exact finite sum and the norm is the root of
//! `modular(λ) = 1`. On top of that sit limit estimators for `Ψ_q(t)` and
//! `Ψ_q⁻¹(y)`, an admissibility classifier, the growth test for the ratio
//! `t / Ψ_q⁻¹(Φ(t))`, and the log-bump transfer function.
//!
//! ```
//! use orlicz_core::{luxemburg_norm, SimpleFunction, YoungFamily};
//!
//! let psi = YoungFamily::parse("power").unwrap().make(3.0).unwrap();
//! let chi = SimpleFunction::indicator(8.0).unwrap();
//! assert!((luxemburg_norm(&psi, &chi).unwrap().norm - 2.0).abs() < 1e-12);
//! ```

// Domain checks are written `!(x > 0.0)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissibility;
pub mod error;
pub mod family;
pub mod growth;
pub mod limits;
pub mod luxemburg;
pub mod measure;
pub mod solve;
pub mod sweep;
pub mod transfer;
pub mod young;

pub use admissibility::{classify, classify_with, AdmissibilityReport, ClassifyConfig, Verdict};
pub use error::{Error, Result};
pub use family::{FamilyName, FamilySpec, YoungFamily};
pub use growth::{growth_check, growth_check_inverse_form, growth_check_with, GrowthConfig, MonotonicityReport, Witness};
pub use limits::{limit_of_inverses, limit_of_values, LimitConfig, LimitEstimate, LimitKind, Schedule};
pub use luxemburg::{chebyshev_bound, indicator_norm, luxemburg_norm, modular, NormResult};
pub use measure::{Atom, DistributionSet, MeasureSpace, SimpleFunction};
pub use sweep::{run_sweep, to_csv, SweepRow};
pub use transfer::{logbump_transfer, tc_fixed_point_check, TcCheck};
pub use young::{default_validation_grid, ValidationConfig, ValidationReport, Violation, YoungFunction};
