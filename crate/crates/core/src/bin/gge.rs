use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gge::harness::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "gge", about = "Gossip averaging experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the edge list of every graph realization
    Topology(Common),
    /// Run the configured algorithms and write per-run and aggregate CSVs
    Run(Common),
    /// Spectral gap, contraction constant and averaging-time bounds per graph
    Bounds(Common),
    /// Contraction constant and averaging time across `topology.sizes`
    Sweep(Common),
    /// GGE under lost broadcasts, one curve per `miss_probs` entry, plus RG
    Stale(Common),
    /// GGE with 1, 2 and 3 hops against RG and geographic gossip
    Multihop(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's base seed
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (Command::Topology(c)
    | Command::Run(c)
    | Command::Bounds(c)
    | Command::Sweep(c)
    | Command::Stale(c)
    | Command::Multihop(c)) = &cli.command;

    let mut cfg = match ExperimentConfig::load(&c.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &c.out {
        cfg.output = out.clone();
    }

    let result = match cli.command {
        Command::Topology(_) => harness::cmd_topology(&cfg).map(|g| format!("{} graphs", g.len())),
        Command::Run(_) => harness::cmd_run(&cfg).map(|t| format!("{} rows", t.rows.len())),
        Command::Bounds(_) => harness::cmd_bounds(&cfg).map(|r| format!("{} graphs", r.len())),
        Command::Sweep(_) => harness::cmd_sweep(&cfg).map(|r| format!("{} sizes", r.len())),
        Command::Stale(_) => harness::cmd_stale(&cfg).map(|t| format!("{} rows", t.rows.len())),
        Command::Multihop(_) => harness::cmd_multihop(&cfg).map(|t| format!("{} rows", t.rows.len())),
    };
    match result {
        Ok(summary) => {
            println!("{summary} written to {}", cfg.output.display());
            ExitCode::SUCCESS
        }
        Err(e) if e.is_config_error() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
