use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vsl_core::io::{emit_outputs, load_config, report_from_dir, write_trajectory_csv};
use vsl_core::radial::{make_graded_grid, FieldKind, Grading, RadialField};
use vsl_core::solver::{log_spaced_times, solve_ns_radial};
use vsl_core::sweep::{equivalence_report, run_sweep, ForcingSpec, InitialProfile, SweepConfig};
use vsl_core::tensor::run_identity_suite;
use vsl_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "vsl",
    version,
    about = "Vanishing-viscosity diagnostics for flow in the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve at one viscosity and write trajectory_<nu>.csv
    Solve(SolveArgs),
    /// Run a viscosity sweep and write conditions, sheet, summary and field files
    Sweep {
        /// key = value configuration (defaults to the rigid/no-slip scenario)
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the vector identity suite and print a pass/fail table
    CheckIdentities {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Box intervals per axis (multiple of 4)
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute the equivalence verdict from a sweep output directory
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    nu: f64,
    /// Radial intervals
    #[arg(long = "N", default_value_t = 2048)]
    n: usize,
    /// Final time
    #[arg(long = "T", default_value_t = 1.0)]
    t_final: f64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    /// Initial profile: rigid, cubic or zero
    #[arg(long, default_value = "rigid")]
    u0: String,
    /// Boundary forcing: const:<v>, raised_cosine or table:<t>:<a>,...
    #[arg(long, default_value = "const:0")]
    alpha: String,
    /// Grid grading: uniform or sine
    #[arg(long, default_value = "sine")]
    grading: String,
    #[arg(long, default_value_t = 32)]
    output_times: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Failed checks or a report that does not match its files.
const FAILED: u8 = 2;

fn solve(args: &SolveArgs) -> Result<()> {
    let profile: InitialProfile = args.u0.parse()?;
    let grading: Grading = args.grading.parse()?;
    let forcing = args.alpha.parse::<ForcingSpec>()?.build(args.t_final)?;
    let grid = make_graded_grid::<f64>(args.n, grading)?;
    let u0 = RadialField::from_fn(grid, FieldKind::VelocityTheta, |r| profile.eval(r))?;
    let times = log_spaced_times(args.t_final, args.output_times, 1e-3)?;
    let traj = solve_ns_radial(&u0, args.nu, &forcing, args.t_final, args.dt, &times)?;
    std::fs::create_dir_all(&args.out).map_err(|e| Error::Io {
        path: args.out.display().to_string(),
        source: e,
    })?;
    let path = args.out.join(format!("trajectory_{:e}.csv", args.nu));
    write_trajectory_csv(&traj, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn sweep(config: Option<PathBuf>, out: &Path) -> Result<()> {
    let config = match config {
        Some(path) => load_config(&path)?,
        None => SweepConfig::rigid_noslip(),
    };
    let result = run_sweep(&config)?;
    let manifest = emit_outputs(&result, out)?;
    for run in &result.runs {
        if let Err(e) = &run.outcome {
            eprintln!("nu = {:e} failed: {e}", run.nu);
        }
    }
    if result.is_complete() {
        print!("{}", equivalence_report(&result)?.text);
    }
    println!("wrote {} files to {}", manifest.files.len(), out.display());
    Ok(())
}

fn check_identities(dim: usize, n: usize, seed: u64) -> Result<bool> {
    let rows = run_identity_suite(dim, n, seed)?;
    println!("{:<52} {:>12}  {:<11} result", "check", "value", "bound");
    for r in &rows {
        let bound = format!(
            "{} {:.1e}",
            if r.lower_bound { ">=" } else { "<=" },
            r.tolerance
        );
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{:<52} {:>12.3e}  {:<11} {status}", r.name, r.value, bound);
    }
    let failed = rows.iter().filter(|r| !r.passed()).count();
    println!("{} checks, {failed} failed", rows.len());
    Ok(failed == 0)
}

fn report(out: &Path) -> Result<bool> {
    let stored = report_from_dir(out)?;
    print!("{}", stored.recomputed.text);
    for m in &stored.mismatches {
        eprintln!("stored result differs from recomputation: {m}");
    }
    Ok(stored.matches())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(args) => solve(&args).map(|_| true),
        Command::Sweep { config, out } => sweep(config, &out).map(|_| true),
        Command::CheckIdentities { dim, n, seed } => check_identities(dim, n, seed),
        Command::Report { out } => report(&out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 1 } else { 2 })
        }
    }
}
