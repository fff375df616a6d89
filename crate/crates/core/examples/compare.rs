//! GGE against randomized and geographic gossip on a single graph: mean
//! relative error at a few transmission counts and transmissions to 1e-2.
//!
//! cargo run --release --example compare -- 200 20

use gge::engine::{run_trial, EngineConfig, Trace};
use gge::fields::{synthesize, FieldSpec};
use gge::topology::generate_rgg;

fn main() -> gge::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(200, |s| s.parse().expect("n"));
    let runs: u64 = args.next().map_or(20, |s| s.parse().expect("runs"));
    let budget = 300 * n as u64;

    let g = generate_rgg(n, 1)?;
    let x0 = synthesize(&FieldSpec::gaussian_bumps(), &g)?;
    let marks = [n as u64, 5 * n as u64, 20 * n as u64, 50 * n as u64];

    println!("n={n} runs={runs}; mean relative error after t transmissions");
    print!("{:>11}", "algorithm");
    for t in marks {
        print!(" {:>10}", format!("t={t}"));
    }
    println!(" {:>12}", "tx to 1e-2");
    for cfg in [EngineConfig::gge(), EngineConfig::rg(), EngineConfig::geographic()] {
        let traces: Vec<Trace> = (0..runs)
            .map(|r| run_trial(&g, &x0, &cfg, budget, r))
            .collect::<gge::Result<_>>()?;
        print!("{:>11}", cfg.algorithm.name());
        for t in marks {
            let at = |tr: &Trace| tr.points.iter().take_while(|p| p.tx <= t).last().unwrap().rel_err;
            let mean = traces.iter().map(at).sum::<f64>() / runs as f64;
            print!(" {mean:>10.3e}");
        }
        let reached: Vec<u64> = traces.iter().filter_map(|t| t.tx_to_reach(1e-2)).collect();
        let avg = reached.iter().sum::<u64>() as f64 / reached.len().max(1) as f64;
        println!(" {avg:>12.0}");
    }
    Ok(())
}
