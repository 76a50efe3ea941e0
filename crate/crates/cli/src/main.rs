//! `mbhl`: experiment harness for the half-line coupled KdV laboratory.
//!
//! Subcommands: `solve` (fixed-point solver with residual reports),
//! `probe-bilinear` / `verify-linear` (ensemble estimate probes),
//! `resonance-report` (roots, identity sweeps, region tables), and
//! `convergence-study` (refinement ladders). Every run writes plot-ready CSV
//! tables plus one JSON manifest echoing the configuration, resolved
//! parameters, seeds, and residuals.
//!
//! Exit codes: 0 success, 2 validation failure, 3 non-convergence,
//! 4 quadrature-tail failure.

mod commands;
mod config;
mod report;

use anyhow::Result;
use clap::{Parser, Subcommand};
use config::Config;
use mb_halfline::CoreError;
use report::RunDir;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "mbhl",
    version,
    about = "Spectral laboratory for the Majda-Biello system on the half line"
)]
struct Cli {
    /// Configuration file (TOML; see `mbhl config-reference`)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV tables and the run manifest
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Random seed (overrides the config's [run].seed)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for ensemble and kernel evaluation (default 1 for
    /// reproducibility)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Treat flagged warnings (quadrature tails, boundary exponents) as errors
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Picard solver on a configured problem
    Solve,
    /// Ensemble ratio probe of one bilinear estimate (bil1..bil4)
    ProbeBilinear,
    /// Ensemble ratio probe of one linear estimate
    VerifyLinear,
    /// Resonance roots, identity sweeps, and region tables
    ResonanceReport,
    /// Grid-refinement ladders (boundary, duhamel, conservation)
    ConvergenceStudy,
    /// Print the documented configuration key reference
    ConfigReference,
}

fn init_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        if threads > 1 {
            eprintln!(
                "note: built without the `parallel` feature; --threads {threads} runs sequentially"
            );
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    if let Some(core) = err.downcast_ref::<CoreError>() {
        return match core {
            CoreError::Validation(_) | CoreError::InvalidArgument(_) => 2,
            CoreError::NonConvergence { .. } => 3,
            CoreError::QuadratureTail { .. } => 4,
            _ => 1,
        };
    }
    // config/type errors are validation failures
    if err.to_string().contains("strict mode") {
        return 4;
    }
    if err.is::<toml::de::Error>() || err.to_string().contains("config") {
        return 2;
    }
    1
}

fn run(cli: &Cli) -> Result<()> {
    if let Command::ConfigReference = cli.cmd {
        print!("{}", config::CONFIG_REFERENCE);
        return Ok(());
    }
    init_threads(cli.threads);
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let seed = cli.seed.or(cfg.run.seed).unwrap_or(0);
    let out_dir = cli
        .out
        .clone()
        .or_else(|| cfg.run.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let out = RunDir::create(&out_dir)?;
    match cli.cmd {
        Command::Solve => commands::solve::run(&cfg, &out, seed, cli.threads, cli.strict),
        Command::ProbeBilinear => {
            commands::probes::run_bilinear(&cfg, &out, seed, cli.threads, cli.strict)
        }
        Command::VerifyLinear => {
            commands::probes::run_linear(&cfg, &out, seed, cli.threads, cli.strict)
        }
        Command::ResonanceReport => {
            commands::resonance::run(&cfg, &out, seed, cli.threads, cli.strict)
        }
        Command::ConvergenceStudy => {
            commands::study::run(&cfg, &out, seed, cli.threads, cli.strict)
        }
        Command::ConfigReference => unreachable!(),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code_for(&err));
    }
}
