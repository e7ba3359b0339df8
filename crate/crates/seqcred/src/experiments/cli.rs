//! Command-line front end. One subcommand per experiment kind plus
//! `check-class`. Exit codes: 0 on success, 1 for bad invocations and bad
//! configs, 2 when a validated run fails while executing or writing.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use super::config::{ExperimentConfig, ExperimentKind};
use super::outputs::{write_manifest, write_outputs, ExperimentReport};
use super::{run_bvm, run_coverage, run_figure1, run_freedman, run_radius_scaling};
use crate::experiments::check_class::{run_check_class, ClassCondition};
use crate::sequence_model::SignalVector;
use crate::Result;

#[derive(Parser)]
#[command(
    name = "seqcred",
    version,
    about = "Monte Carlo studies of credible sets in the Gaussian sequence model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frequentist coverage of the calibrated credible ball
    #[command(name = "coverage")]
    Coverage(RunArgs),
    /// Frequentist vs posterior spread of the squared error, over a grid of n
    #[command(name = "freedman")]
    Freedman(RunArgs),
    /// Credible radius against 1/sqrt(n), over a grid of n
    #[command(name = "scaling")]
    Scaling(RunArgs),
    /// Posterior-vs-white-noise discrepancy sweep, over a grid of n
    #[command(name = "bvm")]
    Bvm(RunArgs),
    /// Draw-cloud data for the two-ball comparison plot at a single n
    #[command(name = "figure1")]
    Figure1(RunArgs),
    /// Evaluate a signal-class condition on a coefficient CSV
    #[command(name = "check-class")]
    CheckClass(CheckClassArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment configuration
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Output directory; overrides `out_dir` from the config
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override the master seed from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CheckClassArgs {
    /// Signal coefficients as CSV
    #[arg(long, value_name = "FILE")]
    signal: PathBuf,
    /// Condition description as JSON
    #[arg(long, value_name = "FILE")]
    params: PathBuf,
    /// Directory for verdict.json (the verdict is always printed)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

impl Command {
    fn kind(&self) -> Option<ExperimentKind> {
        match self {
            Self::Coverage(_) => Some(ExperimentKind::Coverage),
            Self::Freedman(_) => Some(ExperimentKind::Freedman),
            Self::Scaling(_) => Some(ExperimentKind::Scaling),
            Self::Bvm(_) => Some(ExperimentKind::Bvm),
            Self::Figure1(_) => Some(ExperimentKind::Figure1),
            Self::CheckClass(_) => None,
        }
    }
}

/// Load and cross-check everything the run will need, before any work
/// happens. Problems here are the caller's to fix, so they exit with 1.
fn prepare(args: &RunArgs, kind: ExperimentKind) -> Result<(ExperimentConfig, PathBuf)> {
    let mut config = ExperimentConfig::from_json_file(&args.config)?;
    if config.kind != kind {
        return Err(crate::invalid(format!(
            "config file is for `{}` runs but the `{}` subcommand was invoked",
            config.kind.name(),
            kind.name()
        )));
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let out_dir = match (&args.out, &config.out_dir) {
        (Some(dir), _) => dir.clone(),
        (None, Some(dir)) => PathBuf::from(dir),
        (None, None) => {
            return Err(crate::invalid(
                "no output directory: pass --out or set `out_dir` in the config",
            ))
        }
    };
    Ok((config, out_dir))
}

fn execute(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let report = match config.kind {
        ExperimentKind::Coverage => ExperimentReport::Coverage(run_coverage(config)?),
        ExperimentKind::Freedman => ExperimentReport::Freedman(run_freedman(config)?),
        ExperimentKind::Scaling => ExperimentReport::Scaling(run_radius_scaling(config)?),
        ExperimentKind::Bvm => ExperimentReport::Bvm(run_bvm(config)?),
        ExperimentKind::Figure1 => ExperimentReport::Figure1(run_figure1(config)?),
    };
    let mut written = write_outputs(config, &report, out_dir)?;
    written.push(write_manifest(config, out_dir, started)?);
    Ok(written)
}

fn run_experiment(args: &RunArgs, kind: ExperimentKind) -> i32 {
    let (config, out_dir) = match prepare(args, kind) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let outcome = match args.threads {
        Some(threads) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: could not build a {threads}-thread pool: {e}");
                    return 1;
                }
            };
            pool.install(|| execute(&config, &out_dir))
        }
        None => execute(&config, &out_dir),
    };
    match outcome {
        Ok(written) => {
            println!("{}: wrote {} files to {}", kind.name(), written.len(), out_dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run_check_class_command(args: &CheckClassArgs) -> i32 {
    let signal = match SignalVector::read_csv(&args.signal) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let condition = match std::fs::read_to_string(&args.params)
        .map_err(crate::Error::from)
        .and_then(|text| ClassCondition::from_json_str(&text))
    {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let verdict = match run_check_class(signal.coeffs(), &condition) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut text = serde_json::to_string_pretty(&verdict).expect("verdict serializes");
    text.push('\n');
    print!("{text}");
    if let Some(dir) = &args.out {
        if let Err(e) = std::fs::create_dir_all(dir)
            .map_err(crate::Error::from)
            .and_then(|()| std::fs::write(dir.join("verdict.json"), &text).map_err(Into::into))
        {
            eprintln!("error: {e}");
            return 2;
        }
    }
    0
}

/// Parse arguments (element 0 is the program name) and run the selected
/// subcommand, returning the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Coverage(args)
        | Command::Freedman(args)
        | Command::Scaling(args)
        | Command::Bvm(args)
        | Command::Figure1(args) => run_experiment(args, cli.command.kind().unwrap()),
        Command::CheckClass(args) => run_check_class_command(args),
    }
}
