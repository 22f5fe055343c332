//! `orlicz`: Luxemburg norms, q-sweeps, admissibility and growth checks from the shell.
//!
//! Exit codes: 0 on success, 2 for bad flags or input, 3 when a numerical
//! routine fails to bracket a root.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orlicz_core::limits::LimitEstimate;
use orlicz_core::{
    classify, growth_check, luxemburg_norm, run_sweep, to_csv, Error, FamilySpec, MeasureSpace, Schedule,
    SimpleFunction, YoungFamily, YoungFunction,
};

mod format;

use format::{sig12, short};

#[derive(Parser)]
#[command(name = "orlicz", version, about = "Luxemburg norms and q → ∞ diagnostics for Young-function families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Luxemburg norm of a simple function.
    Norm {
        #[arg(long)]
        family: String,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        input: PathBuf,
    },
    /// Write norms along a q-schedule as CSV.
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Use the phase-locked points q = π/2 + kπ.
        #[arg(long)]
        phase_locked: bool,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a family as δ- or (α,β)-admissible.
    Classify {
        #[arg(long)]
        family: String,
        /// Total mass of the space, a positive real or `inf`.
        #[arg(long, default_value = "inf")]
        total_mass: String,
    },
    /// Check that t / Ψ_q⁻¹(Φ(t)) is non-decreasing on [0, k].
    Growth {
        #[arg(long)]
        family: String,
        /// Descriptor of Φ.
        #[arg(long)]
        phi: String,
        /// Parameter of Φ within its family.
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 10.0)]
        k: f64,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
}

#[derive(Args)]
struct ScheduleArgs {
    /// First q (default: the family's least q, at least 1).
    #[arg(long)]
    q_min: Option<f64>,
    /// Last q (default: 4096·q_min).
    #[arg(long)]
    q_max: Option<f64>,
    /// Number of geometric steps from q_min to q_max.
    #[arg(long, default_value_t = 13)]
    q_steps: usize,
}

impl ScheduleArgs {
    fn geometric(&self, family: &YoungFamily) -> orlicz_core::Result<Schedule> {
        let q_min = self.q_min.unwrap_or_else(|| family.schedule_start());
        let q_max = self.q_max.unwrap_or(q_min * 4096.0);
        if self.q_steps == 1 && q_min == q_max {
            return Schedule::points(vec![q_min]);
        }
        Schedule::geometric_range(q_min, q_max, self.q_steps)
    }

    fn phase_locked(&self) -> orlicz_core::Result<Schedule> {
        match (self.q_min, self.q_max) {
            (None, None) => Ok(Schedule::phase_locked(1, 64)),
            (lo, hi) => Schedule::phase_locked_range(
                lo.unwrap_or(std::f64::consts::FRAC_PI_2),
                hi.unwrap_or(std::f64::consts::FRAC_PI_2 + 64.0 * std::f64::consts::PI),
            ),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}

fn run(command: Command) -> orlicz_core::Result<String> {
    match command {
        Command::Norm { family, q, input } => {
            let psi = YoungFamily::parse(&family)?.make(q)?;
            let f = SimpleFunction::from_json_file(&input)?;
            Ok(format!("{}\n", sig12(luxemburg_norm(&psi, &f)?.norm)))
        }
        Command::Sweep {
            family,
            input,
            schedule,
            phase_locked,
            out,
        } => {
            let fam = YoungFamily::parse(&family)?;
            let f = SimpleFunction::from_json_file(&input)?;
            let sched = if phase_locked {
                schedule.phase_locked()?
            } else {
                schedule.geometric(&fam)?
            };
            let delta = classify(&fam, f.space())?.verdict.delta();
            let csv = to_csv(&run_sweep(&fam, &f, &sched, delta)?);
            match out {
                Some(path) => {
                    std::fs::write(&path, csv)
                        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Classify { family, total_mass } => {
            let fam = YoungFamily::parse(&family)?;
            let space: MeasureSpace = total_mass.parse()?;
            let report = classify(&fam, &space)?;
            let mut s = String::new();
            let _ = writeln!(s, "{}", report.verdict);
            let _ = writeln!(s, "family: {}", family.parse::<FamilySpec>()?);
            let _ = writeln!(s, "total_mass: {space}");
            for (y, e) in &report.inverse_evidence {
                let _ = writeln!(s, "inverse y={}: {}", short(*y), describe(e));
            }
            for note in &report.notes {
                let _ = writeln!(s, "note: {note}");
            }
            Ok(s)
        }
        Command::Growth {
            family,
            phi,
            q,
            k,
            schedule,
        } => {
            let fam = YoungFamily::parse(&family)?;
            let phi_fn: YoungFunction = YoungFamily::parse(&phi)?.make(q)?;
            let sched = schedule.geometric(&fam)?;
            let report = growth_check(&fam, &phi_fn, k, &sched)?;
            let mut s = String::new();
            match report.q_threshold {
                Some(qt) => {
                    let _ = writeln!(s, "non-decreasing q_threshold={}", short(qt));
                }
                None => {
                    let _ = writeln!(s, "violated");
                }
            }
            let _ = writeln!(s, "family: {}", family.parse::<FamilySpec>()?);
            let _ = writeln!(s, "phi: {phi_fn}");
            let _ = writeln!(s, "interval: [0, {}]", short(k));
            if let Some(w) = report.witness {
                let _ = writeln!(
                    s,
                    "witness: q={} ln_t1={} ln_t2={} ln_ratio1={} ln_ratio2={}",
                    short(w.q),
                    w.ln_t1,
                    w.ln_t2,
                    w.ln_ratio1,
                    w.ln_ratio2
                );
            }
            for sample in &report.samples {
                let _ = writeln!(s, "q={}: {}", short(sample.q), if sample.passes { "pass" } else { "fail" });
            }
            Ok(s)
        }
    }
}

fn describe(e: &LimitEstimate) -> String {
    match e.value {
        Some(v) if e.kind == orlicz_core::LimitKind::Finite => {
            format!("{} value={} liminf={} limsup={}", e.kind, sig12(v), sig12(e.liminf_est), sig12(e.limsup_est))
        }
        _ => format!("{} liminf={} limsup={}", e.kind, sig12(e.liminf_est), sig12(e.limsup_est)),
    }
}
