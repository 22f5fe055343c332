//! Bracketing and bisection for monotone scalar problems.
//!
//! Every root in this crate is the crossing point of a monotone function, so
//! plain bisection is all that is needed. Iteration stops once the bracket
//! endpoints are adjacent floating-point numbers or the iteration cap is hit.

/// Final state of a bisection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Hard cap on bisection steps.
pub const MAX_BISECTION_STEPS: usize = 200;

/// Bisects `[lo, hi]` where `below(lo)` holds and `below(hi)` does not.
///
/// `below(x)` must be monotone: true up to the crossing point, false after.
pub fn bisect(mut lo: f64, mut hi: f64, max_steps: usize, mut below: impl FnMut(f64) -> bool) -> Bracket {
    let mut iterations = 0;
    while iterations < max_steps {
        let mid = lo + 0.5 * (hi - lo);
        if !(mid > lo && mid < hi) {
            break;
        }
        iterations += 1;
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Bracket { lo, hi, iterations }
}

/// Picks whichever bracket endpoint has the value closer to `target`; ties go to `lo`.
pub fn closer_endpoint(bracket: &Bracket, target: f64, mut value: impl FnMut(f64) -> f64) -> f64 {
    let dlo = (value(bracket.lo) - target).abs();
    let dhi = (value(bracket.hi) - target).abs();
    if dhi < dlo {
        bracket.hi
    } else {
        bracket.lo
    }
}
