//! Load a config file and run one of the experiment commands, the same way
//! the `gge` binary does.
//!
//! cargo run --release --example experiment -- configs/minimal.toml run

use gge::harness::{cmd_bounds, cmd_multihop, cmd_run, cmd_stale, cmd_sweep, cmd_topology, ExperimentConfig};

fn main() -> gge::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "configs/minimal.toml".into());
    let command = args.next().unwrap_or_else(|| "run".into());
    let mut cfg = ExperimentConfig::load(&path)?;
    cfg.output = std::env::temp_dir().join("gge-experiment-example");
    println!("{}", cfg.to_toml());
    match command.as_str() {
        "topology" => println!("{} graphs", cmd_topology(&cfg)?.len()),
        "bounds" => {
            for b in cmd_bounds(&cfg)? {
                print!("{}", b.to_key_value());
            }
        }
        "sweep" => println!("{} sizes", cmd_sweep(&cfg)?.len()),
        cmd => {
            let table = match cmd {
                "stale" => cmd_stale(&cfg)?,
                "multihop" => cmd_multihop(&cfg)?,
                _ => cmd_run(&cfg)?,
            };
            for row in table
                .aggregate()
                .iter()
                .filter(|r| r.tx_bucket % (cfg.budget / 10).max(1) == 0)
            {
                println!("{:>12} {:>8} {:.3e}", row.algorithm, row.tx_bucket, row.mean_rel_err);
            }
        }
    }
    println!("outputs in {}", cfg.output.display());
    Ok(())
}
