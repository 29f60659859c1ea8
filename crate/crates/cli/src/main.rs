use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fibra_cli::config::{load, LoadError, Overrides};
use fibra_cli::run::{emit, run, Command, RunError};

#[derive(Parser)]
#[command(name = "fibra", version, about = "Atypical values, singular loci and asymptotic sets of polynomial maps")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the whole pipeline and write analysis-report.json.
    Analyze(Common),
    /// Decide whether the critical values set is empty.
    K0(Common),
    /// Sample the singular locus of (G, ρ).
    SingularLocus(Common),
    /// Estimate the asymptotic set as clusters over the radius schedule.
    AsymptoticSet(Common),
    /// Test linear forms for being very good projections.
    CheckProjection(Common),
    /// Exact Euler characteristics of fibers and the atypical values.
    EulerProfile(Common),
    /// Build the point cloud of the image variety and export it.
    BuildVg(Common),
}

#[derive(Args)]
struct Common {
    /// JSON job file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Map components separated by `;`.
    #[arg(long)]
    map: Option<String>,
    /// Comma-separated variable names.
    #[arg(long)]
    vars: Option<String>,
    /// Comma-separated weights a_i of ρ, integers or rationals like 1/2.
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; the report goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated, strictly increasing radii.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, c) = match cli.command {
        Cmd::Analyze(c) => (Command::Analyze, c),
        Cmd::K0(c) => (Command::K0, c),
        Cmd::SingularLocus(c) => (Command::SingularLocus, c),
        Cmd::AsymptoticSet(c) => (Command::AsymptoticSet, c),
        Cmd::CheckProjection(c) => (Command::CheckProjection, c),
        Cmd::EulerProfile(c) => (Command::EulerProfile, c),
        Cmd::BuildVg(c) => (Command::BuildVg, c),
    };
    let overrides = Overrides {
        map: c.map,
        vars: c.vars,
        rho: c.rho,
        seed: c.seed,
        out: c.out,
        schedule: c.schedule,
        tol: c.tol,
        threads: c.threads,
    };
    let job = match load(c.config.as_deref(), &overrides) {
        Ok(j) => j,
        Err(LoadError::Config(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(LoadError::Io(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(t) = job.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: thread pool already initialized: {e}");
        }
    }
    let result = run(cmd, &job).and_then(|r| emit(cmd, &job, &r));
    match result {
        Ok(Some(path)) => {
            eprintln!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(RunError::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(RunError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
