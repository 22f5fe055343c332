//! End-to-end acceptance run: ten criteria, one PASS/FAIL line each.
//!
//! Lines go straight to the process stdout so they show up in the test log
//! even when the harness captures output.

use std::io::Write as _;
use std::time::{Duration, Instant};

use orlicz_core::limits::phase_locked_q;
use orlicz_core::transfer::{transfer_at_zero, transfer_residual};
use orlicz_core::{
    chebyshev_bound, classify, growth_check, luxemburg_norm, modular, run_sweep, tc_fixed_point_check,
    logbump_transfer, Atom, MeasureSpace, Schedule, SimpleFunction, Verdict, YoungFamily, YoungFunction,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const CATALOG: [&str; 12] = [
    "power",
    "logbump:p=1",
    "logbump:p=2",
    "iterlog:N=1,p=1",
    "iterlog:N=2,p=1",
    "iterlog:N=3,p=2",
    "addie:N=1,p=1",
    "addie:N=2,p=1",
    "addie:N=3,p=1.5",
    "sinpiecewise",
    "powerlog_e:p=1",
    "identity",
];

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn family(spec: &str) -> YoungFamily {
    YoungFamily::parse(spec).unwrap()
}

fn pairs(p: &[(f64, f64)]) -> SimpleFunction {
    SimpleFunction::from_pairs(p).unwrap()
}

fn geometric_to(q_max: f64) -> Schedule {
    let n = q_max.log2().round() as usize + 1;
    Schedule::geometric(1.0, 2.0, n)
}

/// Independent inverse: plain bisection on `eval`, bracket grown by factors of 4.
fn oracle_inverse(psi: &YoungFunction, y: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while psi.eval(hi).unwrap() < y {
        lo = hi;
        hi *= 4.0;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi.eval(mid).unwrap() < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    for spec in CATALOG {
        let fam = family(spec);
        for q in [1.5, 4.0, 32.0] {
            let psi = fam.make(q).unwrap();
            for mass in [0.1, 1.0, 2.0, 1000.0] {
                let norm = luxemburg_norm(&psi, &SimpleFunction::indicator(mass).unwrap()).unwrap().norm;
                let closed = 1.0 / oracle_inverse(&psi, 1.0 / mass);
                check((norm - closed).abs() <= 1e-9 * closed, || {
                    format!("{spec} q={q} mass={mass}: norm {norm} vs closed form {closed}")
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let fam = family("power");
    let f = pairs(&[(3.0, 1.0), (1.0, 1.0)]);
    let rows = run_sweep(&fam, &f, &geometric_to(4096.0), Some(1.0)).map_err(|e| e.to_string())?;
    for r in &rows {
        let closed = 3.0 * (1.0 + 3f64.powf(-r.q)).powf(1.0 / r.q);
        check((r.norm - closed).abs() <= 1e-10 * closed, || format!("q={}: {} vs {closed}", r.q, r.norm))?;
    }
    let last = rows.last().unwrap();
    check(last.q == 4096.0 && (last.norm - 3.0).abs() <= 1e-3 * 3.0, || format!("final norm {}", last.norm))
}

/// Final abs_error below `bound`, and non-increasing over the last six rows.
fn converging_sweep(spec: &str, bound: f64, require_decrease: bool) -> Outcome {
    let fam = family(spec);
    let f = pairs(&[(2.0, 1.0), (1.0, 3.0)]);
    let delta = classify(&fam, f.space()).unwrap().verdict.delta();
    let delta = delta.ok_or_else(|| format!("{spec}: no delta verdict"))?;
    let rows = run_sweep(&fam, &f, &geometric_to(4096.0), Some(delta)).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = rows.iter().map(|r| r.abs_error.unwrap()).collect();
    if require_decrease {
        let tail = &errs[errs.len() - 6..];
        check(tail.windows(2).all(|w| w[1] <= w[0] + 1e-12), || format!("{spec}: tail errors {tail:?}"))?;
    }
    let last = *errs.last().unwrap();
    check(last < bound * f.ess_sup(), || format!("{spec}: final abs_error {last}"))
}

fn criterion_3() -> Outcome {
    converging_sweep("logbump:p=2", 0.05, true)
}

fn criterion_4() -> Outcome {
    converging_sweep("iterlog:N=2,p=1", 0.1, false)?;
    converging_sweep("iterlog:N=2,p=3", 0.1, false)
}

fn criterion_5() -> Outcome {
    let inf = MeasureSpace::infinite();
    for spec in ["power", "logbump:p=1"] {
        let v = classify(&family(spec), &inf).unwrap().verdict;
        check(matches!(v, Verdict::DeltaAdmissible { delta } if (delta - 1.0).abs() <= 1e-2), || {
            format!("{spec}: {v}")
        })?;
    }
    let v = classify(&family("sinpiecewise"), &inf).unwrap().verdict;
    check(
        matches!(v, Verdict::AlphaBetaAdmissible { alpha, beta }
            if (alpha - 0.5).abs() <= 1e-2 && (beta - 1.0).abs() <= 1e-2),
        || format!("sinpiecewise: {v}"),
    )?;
    let v = classify(&family("powerlog_e:p=1"), &inf).unwrap().verdict;
    check(v == Verdict::InadmissibleDivergent, || format!("powerlog_e: {v}"))
}

fn criterion_6() -> Outcome {
    let fam = family("sinpiecewise");
    let chi = SimpleFunction::indicator(3.0).unwrap();
    let (mut odd, mut even) = (Vec::new(), Vec::new());
    for k in 33..=64u32 {
        let norm = luxemburg_norm(&fam.make(phase_locked_q(k)).unwrap(), &chi).unwrap().norm;
        check((1.0 - 1e-6..=2.0 + 1e-6).contains(&norm), || format!("k={k}: norm {norm}"))?;
        if k % 2 == 1 { &mut odd } else { &mut even }.push(norm);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let gap = (mean(&odd) - mean(&even)).abs();
    check(gap > 0.01, || format!("subsequence means differ by only {gap}"))
}

fn criterion_7() -> Outcome {
    let fam = family("powerlog_e:p=1");
    let chi = SimpleFunction::new(vec![Atom::new(1.0, 1.0)], MeasureSpace::finite(1.0).unwrap()).unwrap();
    let rows = run_sweep(&fam, &chi, &geometric_to(512.0), None).map_err(|e| e.to_string())?;
    let norms: Vec<f64> = rows.iter().map(|r| r.norm).collect();
    let tail = &norms[norms.len() - 6..];
    check(tail.windows(2).all(|w| w[1] > w[0]), || format!("tail norms {tail:?}"))?;
    let last = rows.last().unwrap();
    check(last.q == 512.0 && last.norm > 10.0, || format!("norm at q=512 is {}", last.norm))
}

fn criterion_8() -> Outcome {
    let sched = geometric_to(4096.0);
    let power = family("power");
    for r in [1.5, 2.0, 3.0] {
        let report = growth_check(&power, &YoungFunction::power(r).unwrap(), 10.0, &sched).unwrap();
        let qt = report.q_threshold.ok_or_else(|| format!("r={r}: no threshold"))?;
        check((qt / r).log2().abs() <= 1.0, || format!("r={r}: threshold {qt}"))?;
    }
    let report = growth_check(&family("logbump:p=1"), &YoungFunction::power(3.0).unwrap(), 10.0, &sched).unwrap();
    let w = report.witness.ok_or("logbump p=1 vs t^3: no witness")?;
    check(!report.non_decreasing && w.ln_t1 < w.ln_t2 && w.ln_ratio1 > w.ln_ratio2 + 1e-9, || {
        format!("bad witness {w:?}")
    })?;
    for p in [1.0, 2.0] {
        let spec = format!("logbump:p={p}");
        let fam = family(&spec);
        let report = growth_check(&fam, &fam.make(1.0).unwrap(), 10.0, &sched).unwrap();
        check(report.non_decreasing && report.q_threshold.is_some(), || format!("{spec}: {report:?}"))?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for (p, q0, q) in [(1.0, 1.0, 3.0), (2.0, 1.0, 8.0)] {
        let f0 = transfer_at_zero(p, q0, q).unwrap();
        for i in 1..=100 {
            let t = 10.0 * i as f64 / 100.0;
            let res = transfer_residual(p, q0, q, t).unwrap();
            check(res <= 1e-8, || format!("({p},{q0},{q}) t={t}: residual {res}"))?;
            let f = logbump_transfer(p, q0, q, t).unwrap();
            check(f > f0, || format!("({p},{q0},{q}) t={t}: F={f} <= F(0)={f0}"))?;
        }
        let mut runner = TestRunner::new(Config {
            cases: 20,
            failure_persistence: None,
            ..Config::default()
        });
        runner
            .run(&(1e-3f64..10.0), |t1| {
                let c = logbump_transfer(p, q0, q, t1).unwrap();
                let check = tc_fixed_point_check(p, q0, q, c, t1, 10.0).unwrap();
                prop_assert!(check.residual <= 1e-8 * t1.max(1.0), "t1={} residual {}", t1, check.residual);
                Ok(())
            })
            .map_err(|e| format!("({p},{q0},{q}): {e}"))?;
    }
    Ok(())
}

fn arb_family() -> impl Strategy<Value = YoungFamily> {
    proptest::sample::select(CATALOG.to_vec()).prop_map(family)
}

fn arb_q() -> impl Strategy<Value = f64> {
    (0.0f64..12.0).prop_map(|e| e.exp2())
}

fn arb_atoms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec(((-3.0f64..3.0), (-3.0f64..3.0)), 1..6)
        .prop_map(|v| v.into_iter().map(|(a, m)| (10f64.powf(a), 10f64.powf(m))).collect())
}

fn setup() -> impl Strategy<Value = (YoungFamily, f64, Vec<(f64, f64)>)> {
    (arb_family(), arb_q(), arb_atoms())
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    })
}

fn criterion_10() -> Outcome {
    runner()
        .run(&(setup(), -3.0f64..3.0), |((fam, q, atoms), log_c)| {
            let psi = fam.make(q).unwrap();
            let f = pairs(&atoms);
            let c = 10f64.powf(log_c);
            let n = luxemburg_norm(&psi, &f).unwrap().norm;
            let nc = luxemburg_norm(&psi, &f.scale(c).unwrap()).unwrap().norm;
            prop_assert!((nc - c * n).abs() <= 1e-9 * nc, "homogeneity: {} vs {}", nc, c * n);
            Ok(())
        })
        .map_err(|e| format!("homogeneity: {e}"))?;

    let bumps = proptest::collection::vec(prop_oneof![Just(1.0f64), 1.001f64..2.0], 6);
    runner()
        .run(&(setup(), bumps), |((fam, q, atoms), bumps)| {
            let psi = fam.make(q).unwrap();
            let f = pairs(&atoms);
            let bigger: Vec<(f64, f64)> = atoms.iter().zip(&bumps).map(|(&(a, m), b)| (a * b, m)).collect();
            let g = pairs(&bigger);
            let (nf, ng) = (luxemburg_norm(&psi, &f).unwrap().norm, luxemburg_norm(&psi, &g).unwrap().norm);
            prop_assert!(nf <= ng + 1e-12, "monotonicity: {} > {}", nf, ng);
            Ok(())
        })
        .map_err(|e| format!("monotonicity: {e}"))?;

    runner()
        .run(&setup(), |(fam, q, atoms)| {
            let psi = fam.make(q).unwrap();
            let f = pairs(&atoms);
            let r = luxemburg_norm(&psi, &f).unwrap();
            let m = modular(&psi, &f, r.norm).unwrap();
            prop_assert!((m - 1.0).abs() <= 1e-10, "unit modular: {} at {}", m, r.norm);
            Ok(())
        })
        .map_err(|e| format!("unit-modular: {e}"))?;

    runner()
        .run(&(setup(), 0.0f64..1.5), |((fam, q, atoms), frac)| {
            let psi = fam.make(q).unwrap();
            let f = pairs(&atoms);
            let alpha = (frac * f.ess_sup()).max(1e-300);
            let bound = chebyshev_bound(&psi, &f, alpha).unwrap();
            let n = luxemburg_norm(&psi, &f).unwrap().norm;
            prop_assert!(bound <= n + 1e-9, "chebyshev: {} > {}", bound, n);
            Ok(())
        })
        .map_err(|e| format!("chebyshev dominance: {e}"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("indicator closed form", Duration::from_secs(1), criterion_1),
        ("classical power limit", Duration::from_secs(1), criterion_2),
        ("log-bump limit", Duration::from_secs(10), criterion_3),
        ("iterated log-bump limit", Duration::from_secs(30), criterion_4),
        ("admissibility verdicts", Duration::from_secs(30), criterion_5),
        ("oscillation counterexample", Duration::from_secs(10), criterion_6),
        ("divergence of norms", Duration::from_secs(5), criterion_7),
        ("growth-condition thresholds", Duration::from_secs(30), criterion_8),
        ("transfer function and fixed points", Duration::from_secs(5), criterion_9),
        ("property suites", Duration::from_secs(60), criterion_10),
    ];
    let mut failures = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            check(elapsed <= budget, || format!("took {elapsed:.2?}, budget {budget:?}"))
        });
        let line = match &outcome {
            Ok(()) => format!("criterion {:>2} PASS  {name} ({elapsed:.2?})", i + 1),
            Err(why) => format!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {why}", i + 1),
        };
        writeln!(out, "{line}").unwrap();
        if outcome.is_err() {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
