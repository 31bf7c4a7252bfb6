use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pepbound::bench::{median, run_experiment, ExperimentConfig, PolySource, DEFAULT_D, DEFAULT_N};
use pepbound::formats::{emit_csv, emit_plot, write_poly_file, PolyFile};
use pepbound::verify::run_invariants;
use pepbound::{BenchError, Result};
use pepbound_core::kronlin::Label;
use pepbound_core::polyval::{PolyKind, PolySpec};

/// Eigenvector error bounds for polynomial eigenvalue problems.
#[derive(Parser)]
#[command(name = "pepbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and write per-eigenpair errors and bounds.
    Run {
        /// `p1`, `p2`, or the path of a polynomial JSON file.
        #[arg(long, default_value = "p1")]
        poly: String,
        /// Companion linearization to solve.
        #[arg(long, value_enum, default_value = "l1")]
        linearization: Linearization,
        /// Seed for the generated polynomial.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Grade of the generated polynomial.
        #[arg(long, default_value_t = DEFAULT_D)]
        d: usize,
        /// Size of the generated polynomial.
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG plot path.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Process eigenpairs on a single thread.
        #[arg(long)]
        no_parallel: bool,
    },
    /// Check the core invariants on a random instance.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Compute reference eigenpairs and write them with the polynomial.
    Oracle {
        /// `p1`, `p2`, or the path of a polynomial JSON file.
        #[arg(long, default_value = "p1")]
        poly: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_D)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
        /// JSON output path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Linearization {
    L1,
    L2,
    L3,
}

impl From<Linearization> for Label {
    fn from(l: Linearization) -> Self {
        match l {
            Linearization::L1 => Label::L1,
            Linearization::L2 => Label::L2,
            Linearization::L3 => Label::L3,
        }
    }
}

fn poly_source(poly: &str, seed: u64, d: usize, n: usize) -> Result<PolySource> {
    if d == 0 || n == 0 {
        return Err(BenchError::Config("--d and --n must be positive".into()));
    }
    Ok(match poly.to_ascii_lowercase().as_str() {
        "p1" => PolySource::Generated(PolySpec::new(PolyKind::P1, n, d, seed)),
        "p2" => PolySource::Generated(PolySpec::new(PolyKind::P2, n, d, seed)),
        _ => PolySource::File(PathBuf::from(poly)),
    })
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            poly,
            linearization,
            seed,
            d,
            n,
            out,
            plot,
            no_parallel,
        } => {
            let cfg = ExperimentConfig {
                poly: poly_source(&poly, seed, d, n)?,
                linearization: linearization.into(),
                parallel: !no_parallel,
            };
            let report = run_experiment(&cfg)?;
            emit_csv(&report.rows, &out)?;
            if let Some(path) = plot {
                emit_plot(&report.rows, &path)?;
            }
            let m = &report.metadata;
            println!(
                "{} {:?}: {} rows, {} flagged, {} excluded, {} bound violations, median ratio {}, {:.2?} on {} threads",
                m.poly,
                m.linearization,
                report.rows.len(),
                report.diagnostics.flagged_rows,
                report.diagnostics.excluded.len(),
                report.violations().len(),
                median(&report.tightness_ratios()).map_or("n/a".into(), |v| format!("{v:.3e}")),
                m.wall_time,
                m.threads,
            );
            for e in report
                .diagnostics
                .excluded
                .iter()
                .chain(&report.diagnostics.reference_failures)
            {
                eprintln!("excluded lambda = {}: {}", e.lambda, e.reason);
            }
            Ok(report.violations().is_empty())
        }
        Command::Verify { seed, d, n } => {
            if d == 0 || n == 0 {
                return Err(BenchError::Config("--d and --n must be positive".into()));
            }
            let checks = run_invariants(seed, d, n)?;
            for c in &checks {
                println!("{c}");
            }
            Ok(checks.iter().all(|c| c.passed))
        }
        Command::Oracle { poly, seed, d, n, out } => {
            let (raw, _) = pepbound::bench::load_polynomial(&poly_source(&poly, seed, d, n)?)?;
            let (_, refs, _) = pepbound::bench::scaled_with_references(&raw, None)?;
            write_poly_file(&out, &PolyFile::from_polynomial(&raw, Some(&refs)))?;
            let unconverged = refs.pairs.iter().filter(|q| !q.converged).count();
            println!(
                "{} reference pairs, {unconverged} unconverged, {} failures",
                refs.pairs.len(),
                refs.failures.len()
            );
            Ok(unconverged == 0 && refs.failures.is_empty())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
