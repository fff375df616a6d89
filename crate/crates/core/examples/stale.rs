//! GGE with lossy eavesdropping: each neighbor misses a broadcast with
//! probability p, so greedy choices use stale cached values.

use gge::harness::{run_experiment, stale_algorithms, tx_to_reach, AlgorithmEntry, ExperimentConfig};

fn main() -> gge::Result<()> {
    let mut cfg = ExperimentConfig::parse(
        "seed = 3\nbudget = 20000\nruns = 20\nbucket = 100\n\
         [topology]\nkind = \"rgg\"\nn = 100\ngraphs = 3\n[[algorithm]]\nkind = \"gge\"\n",
    )?;
    cfg.miss_probs = vec![0.1, 0.3, 0.5, 0.8];
    let algorithms: Vec<AlgorithmEntry> = stale_algorithms(&cfg);
    let table = run_experiment(&cfg, cfg.topology.size, &algorithms)?;
    let agg = table.aggregate();
    for a in &algorithms {
        let last = agg.iter().rfind(|r| r.algorithm == a.name).unwrap();
        let reach = tx_to_reach(&agg, &a.name, 1e-2).map_or("-".to_string(), |t| t.to_string());
        println!(
            "{:>9}: final error {:.3e} +- {:.1e}, tx to 1e-2 {reach}",
            a.name, last.mean_rel_err, last.stderr
        );
    }
    Ok(())
}
