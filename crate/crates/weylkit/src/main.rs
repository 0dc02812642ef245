//! Command-line front end: randomized verification runs, config-driven
//! sweeps, and the reference-vs-fast transform benchmark.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use weylkit::error::{Error, Result};
use weylkit::harness::{
    all_passed, bench_transform, emit_report, evaluate_reports, max_ratio_per_suite, run_sweep,
    RatioReport, ReportFormat, Suite, SuiteCheck, SweepConfig,
};
use weylkit::weyl::TransformMode;

#[derive(Parser)]
#[command(
    name = "weylkit",
    version,
    about = "Weyl-transform inequality verification on finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run selected suites over exponent grids on one or more groups.
    Verify(VerifyArgs),
    /// Run a sweep described by a JSON config file.
    Sweep {
        /// Path to the JSON serialization of a sweep config.
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare the reference and fast transform paths.
    Bench {
        /// Cyclic group orders to time.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        sizes: Vec<usize>,
        /// `both` is the only supported mode; kept as a flag for scripts.
        #[arg(long, default_value = "both")]
        mode: String,
        /// Timing repetitions (best run is reported).
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Group spec or comma-separated list, e.g. "8" or "4,2x3".
    #[arg(long)]
    group: String,
    /// Suites to run (comma separated); defaults to all.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    /// p grid.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// q grid (multiplier suites).
    #[arg(long, value_delimiter = ',', default_value = "2")]
    q: Vec<f64>,
    /// b grid (interpolated suites).
    #[arg(long, value_delimiter = ',', default_value = "2")]
    b: Vec<f64>,
    /// beta grid (power-weight suite).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    beta: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Tolerance for the exact-case assertions.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Report output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Transform path: fast or reference.
    #[arg(long, default_value = "fast")]
    mode: String,
    /// Skip wall-time recording so equal runs emit identical bytes.
    #[arg(long, default_value_t = false)]
    no_timing: bool,
}

fn parse_mode(s: &str) -> Result<TransformMode> {
    match s {
        "fast" => Ok(TransformMode::Fast),
        "reference" => Ok(TransformMode::Reference),
        other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
    }
}

fn print_checks(checks: &[SuiteCheck]) {
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {} ({})", c.label, c.detail);
    }
}

fn emit(reports: &[RatioReport], path: &Path, format: ReportFormat) -> Result<()> {
    emit_report(reports, format, path)?;
    println!("wrote {} reports to {}", reports.len(), path.display());
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<bool> {
    let suites = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite
            .iter()
            .map(|s| s.parse::<Suite>())
            .collect::<Result<Vec<_>>>()?
    };
    if args.p.is_empty() {
        return Err(Error::InvalidConfig("--p requires at least one value".into()));
    }
    let cfg = SweepConfig {
        group_spec: args.group,
        suites,
        p_grid: args.p,
        q_grid: args.q,
        b_grid: args.b,
        beta_grid: args.beta,
        trials: args.trials,
        seed: args.seed,
        tolerance: args.tol,
        output_path: args
            .out
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_default(),
        mode: parse_mode(&args.mode)?,
        record_timing: !args.no_timing,
    };
    let reports = run_sweep(&cfg)?;
    if let Some(out) = &args.out {
        emit(&reports, out, args.format.parse()?)?;
    }
    for (suite, max) in max_ratio_per_suite(&reports) {
        let count = reports.iter().filter(|r| r.suite == suite).count();
        println!("suite {suite}: {count} reports, max ratio {max:.6}");
    }
    let checks = evaluate_reports(&reports, cfg.tolerance);
    print_checks(&checks);
    Ok(all_passed(&checks))
}

fn run_config_sweep(path: &Path) -> Result<bool> {
    let body = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let cfg: SweepConfig =
        serde_json::from_str(&body).map_err(|e| Error::InvalidConfig(format!("bad config: {e}")))?;
    let reports = run_sweep(&cfg)?;
    if !cfg.output_path.is_empty() {
        let out = PathBuf::from(&cfg.output_path);
        let format = match out.extension().and_then(|e| e.to_str()) {
            Some("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        };
        emit(&reports, &out, format)?;
    }
    let checks = evaluate_reports(&reports, cfg.tolerance);
    print_checks(&checks);
    Ok(all_passed(&checks))
}

fn run_bench(sizes: &[usize], mode: &str, reps: usize, seed: u64) -> Result<bool> {
    if mode != "both" {
        return Err(Error::InvalidConfig(format!(
            "bench supports only --mode both, got {mode:?}"
        )));
    }
    let rows = bench_transform(sizes, reps, seed)?;
    println!(
        "{:>6} {:>14} {:>14} {:>9} {:>12}",
        "order", "reference_ms", "fast_ms", "speedup", "max_rel_diff"
    );
    let mut ok = true;
    for row in &rows {
        println!(
            "{:>6} {:>14.3} {:>14.3} {:>9.1} {:>12.2e}",
            row.order, row.reference_ms, row.fast_ms, row.speedup, row.max_rel_diff
        );
        if row.max_rel_diff > 1e-12 {
            ok = false;
            println!(
                "[FAIL] order {} path disagreement {:.2e}",
                row.order, row.max_rel_diff
            );
        }
    }
    if let Some(row) = rows.iter().find(|r| r.order == 64) {
        let status = if row.speedup >= 5.0 { "PASS" } else { "WARN" };
        println!(
            "[{status}] fast path speedup at order 64: {:.1}x (target 5x)",
            row.speedup
        );
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Sweep { config } => run_config_sweep(&config),
        Command::Bench {
            sizes,
            mode,
            reps,
            seed,
        } => run_bench(&sizes, &mode, reps, seed),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more suite assertions failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
