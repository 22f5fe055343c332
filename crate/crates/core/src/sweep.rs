//! Norms along a q-schedule, compared with the predicted limit `‖f‖_∞ / δ`.

use std::fmt::Write as _;

use crate::error::Result;
use crate::family::YoungFamily;
use crate::limits::Schedule;
use crate::luxemburg::luxemburg_norm;
use crate::measure::SimpleFunction;

pub const CSV_HEADER: &str = "q,norm,target,abs_error";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub q: f64,
    pub norm: f64,
    pub target: Option<f64>,
    pub abs_error: Option<f64>,
}

/// One row per scheduled `q`, in increasing `q`. With `delta` known the
/// target is `‖f‖_∞ / δ`.
pub fn run_sweep(family: &YoungFamily, f: &SimpleFunction, schedule: &Schedule, delta: Option<f64>) -> Result<Vec<SweepRow>> {
    let target = delta.map(|d| f.ess_sup() / d);
    schedule
        .qs()
        .into_iter()
        .map(|q| {
            let norm = luxemburg_norm(&family.make(q)?, f)?.norm;
            Ok(SweepRow {
                q,
                norm,
                target,
                abs_error: target.map(|t| (norm - t).abs()),
            })
        })
        .collect()
}

/// CSV with the fixed header; numbers in shortest round-trip form, blanks for
/// missing targets.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.q, r.norm, opt(r.target), opt(r.abs_error));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_sweep_matches_closed_form() {
        let fam = YoungFamily::parse("power").unwrap();
        let f = SimpleFunction::from_pairs(&[(3.0, 1.0), (1.0, 1.0)]).unwrap();
        let rows = run_sweep(&fam, &f, &Schedule::geometric(1.0, 2.0, 8), Some(1.0)).unwrap();
        for r in &rows {
            assert_relative_eq!(r.norm, (3f64.powf(r.q) + 1.0).powf(1.0 / r.q), max_relative = 1e-12);
            assert_eq!(r.target, Some(3.0));
        }
        assert!(rows.windows(2).all(|w| w[0].norm >= w[1].norm));
    }

    #[test]
    fn csv_layout() {
        let rows = [
            SweepRow {
                q: 1.0,
                norm: 4.0,
                target: Some(3.0),
                abs_error: Some(1.0),
            },
            SweepRow {
                q: 2.5,
                norm: 0.1,
                target: None,
                abs_error: None,
            },
        ];
        assert_eq!(to_csv(&rows), "q,norm,target,abs_error\n1,4,3,1\n2.5,0.1,,\n");
    }
}
