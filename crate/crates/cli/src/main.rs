use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nnadapt_cli::commands::{cmd_adapt, cmd_baseline, cmd_benchmark};
use nnadapt_cli::config::{load_config, Mode, RunConfig};
use nnadapt_cli::stats::cmd_stats;

#[derive(Parser)]
#[command(
    name = "nnadapt",
    version,
    about = "Surrogate-assisted multi-objective optimization runs"
)]
struct Cli {
    /// Worker threads for candidate evaluation; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plain evolutionary run on the true cost function.
    Baseline(RunArgs),
    /// Adaptive surrogate-assisted run.
    Adapt(RunArgs),
    /// Indicator convergence table against a pre-computed archive.
    Benchmark(RunArgs),
    /// Architecture statistics across completed adaptive runs.
    Stats(StatsArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config data-source archive.
    #[arg(long)]
    data_source: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Completed adapt run directories (at least two).
    #[arg(required = true)]
    run_dirs: Vec<PathBuf>,
    /// Also writes the report JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for configuration problems, 3 for I/O and malformed inputs, 4 for
/// numerical failures.
fn exit_code(e: &nnadapt::Error) -> u8 {
    match e {
        nnadapt::Error::InvalidArgument(_) => 2,
        nnadapt::Error::Parse(_) | nnadapt::Error::Io(_) => 3,
        nnadapt::Error::Numerical(_) => 4,
    }
}

fn load_run_config(args: &RunArgs, mode: Mode) -> nnadapt::Result<RunConfig> {
    let mut cfg = load_config(&args.config)?;
    if cfg.mode != mode {
        return Err(nnadapt::Error::InvalidArgument(format!(
            "config mode is {} but the {} command was invoked",
            cfg.mode.as_str(),
            mode.as_str()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if let Some(source) = &args.data_source {
        cfg.data_source = Some(source.clone());
    }
    Ok(cfg)
}

fn run(command: Command) -> nnadapt::Result<()> {
    match command {
        Command::Baseline(args) => {
            let cfg = load_run_config(&args, Mode::Baseline)?;
            let dir = cmd_baseline(&cfg)?;
            println!("{}", dir.display());
        }
        Command::Adapt(args) => {
            let cfg = load_run_config(&args, Mode::Adapt)?;
            let dir = cmd_adapt(&cfg)?;
            println!("{}", dir.display());
        }
        Command::Benchmark(args) => {
            let cfg = load_run_config(&args, Mode::Benchmark)?;
            let report = cmd_benchmark(&cfg)?;
            match (report.feval_min, report.feval_max) {
                (Some(lo), Some(hi)) => {
                    println!("cost-effectiveness window: [{lo}; {hi}] evaluations")
                }
                _ => println!("cost-effectiveness window: empty"),
            }
            println!("{}", report.run_dir.display());
        }
        Command::Stats(args) => {
            let report = cmd_stats(&args.run_dirs)?;
            let text = serde_json::to_string_pretty(&report).map_err(std::io::Error::other)?;
            if let Some(path) = &args.out {
                std::fs::write(path, format!("{text}\n"))?;
            }
            println!("{text}");
        }
    }
    Ok(())
}
