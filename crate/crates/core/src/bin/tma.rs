use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use tma_core::harness::{emit_outputs, read_runs, run_monte_carlo, write_tables, ExperimentConfig};
use tma_core::oracle;
use tma_core::sequencing::Policy;

#[derive(Parser)]
#[command(name = "tma", version, about = "Arrival sequencing Monte Carlo experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run(RunArgs),
    /// Rebuild binned tables from a raw run file.
    Aggregate {
        /// Directory holding runs.csv; tables are written here too.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Raw record file to read instead of <out>/runs.csv.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Config supplying the bin half-width.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a config file and print warnings.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the brute-force reference suites.
    Oracle {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random instances per suite.
        #[arg(long, default_value_t = 100)]
        seeds: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seeds: Option<usize>,
    /// Wind samples per seed.
    #[arg(long)]
    winds: Option<usize>,
    /// Comma-separated policies, e.g. fefs,foffs,cps1.
    #[arg(long, value_delimiter = ',')]
    policy: Option<Vec<Policy>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(config: Option<&Path>) -> tma_core::Result<ExperimentConfig> {
    match config {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn run(args: RunArgs) -> tma_core::Result<()> {
    let mut cfg = load(args.config.as_deref())?;
    if let Some(n) = args.seeds {
        cfg.seeds = n;
    }
    if let Some(n) = args.winds {
        cfg.winds = n;
    }
    if let Some(p) = args.policy {
        cfg.policies = p;
    }
    if let Some(o) = args.out {
        cfg.out = o;
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    let started = Instant::now();
    let records = run_monte_carlo(&cfg)?;
    let files = emit_outputs(&cfg.out, &records, cfg.bin_half_width)?;
    println!(
        "{} runs in {:.1} s, {} files written to {}",
        records.len(),
        started.elapsed().as_secs_f64(),
        files.len(),
        cfg.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Aggregate { out, input, config } => (|| {
            let cfg = load(config.as_deref())?;
            let input = input.unwrap_or_else(|| out.join("runs.csv"));
            let records = read_runs(&input)?;
            let files = write_tables(&out, &records, cfg.bin_half_width)?;
            println!("{} records, {} files written to {}", records.len(), files.len(), out.display());
            Ok(())
        })(),
        Command::Validate { config } => ExperimentConfig::load(&config).map(|cfg| {
            for w in cfg.warnings() {
                println!("warning: {w}");
            }
            println!(
                "ok: {} seeds x {} winds x {} policies x {} grids",
                cfg.seeds,
                cfg.winds,
                cfg.policies.len(),
                cfg.grids.len()
            );
        }),
        Command::Oracle { seed, seeds } => {
            let reports = oracle::run_all(seed, seeds);
            for r in &reports {
                println!("{r}");
            }
            if reports.iter().all(|r| r.passed) {
                return ExitCode::SUCCESS;
            }
            return ExitCode::FAILURE;
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
