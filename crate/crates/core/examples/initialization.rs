//! Cost of learning neighbor values before the greedy phase: the proposed
//! scheme (initiators pick unheard neighbors first), an explicit broadcast
//! round, and an idealized start with full caches.

use gge::engine::{run_trial, EngineConfig, InitMode};
use gge::fields::{synthesize, FieldSpec};
use gge::topology::generate_rgg;

fn main() -> gge::Result<()> {
    let n = 200;
    let runs = 20;
    let g = generate_rgg(n, 2)?;
    let x0 = synthesize(&FieldSpec::gaussian_bumps(), &g)?;
    for (label, mode) in [
        ("proposed", InitMode::Proposed),
        ("broadcast", InitMode::Broadcast),
        ("ideal", InitMode::Ideal),
    ] {
        let cfg = EngineConfig::gge().with_init(mode);
        let mut total = 0u64;
        for r in 0..runs {
            let trace = run_trial(&g, &x0, &cfg, 200 * n as u64, r)?;
            total += trace.tx_to_reach(1e-2).expect("budget too small");
        }
        println!("{label:>10}: {:.0} transmissions to 1e-2", total as f64 / runs as f64);
    }
    println!("(overheads are measured against the ideal start; n = {n})");
    Ok(())
}
