//! Multi-hop GGE on a grid: the initiator may average with a node up to h hops
//! away along a chain of strictly improving neighbors.

use gge::harness::{multihop_algorithms, run_experiment, tx_to_reach, ExperimentConfig};

fn main() -> gge::Result<()> {
    let cfg = ExperimentConfig::parse(
        "seed = 2\nbudget = 80000\nruns = 10\nbucket = 200\n\
         [topology]\nkind = \"grid\"\nside = 10\n[field]\nkind = \"linear\"\n[[algorithm]]\nkind = \"gge\"\n",
    )?;
    let algorithms = multihop_algorithms(&cfg);
    let agg = run_experiment(&cfg, cfg.topology.size, &algorithms)?.aggregate();
    for a in &algorithms {
        match tx_to_reach(&agg, &a.name, 1e-2) {
            Some(t) => println!("{:>10}: {t} transmissions to 1e-2", a.name),
            None => println!("{:>10}: not reached within {}", a.name, cfg.budget),
        }
    }
    Ok(())
}
