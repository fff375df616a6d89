//! Spectral gap, contraction constant `A(G)` and the averaging-time bounds
//! for a grid and a random geometric graph, next to a Monte Carlo estimate of
//! the actual averaging time.

use gge::analysis::{compute_bounds, estimate_tave, AOptions, TaveOptions};
use gge::engine::{EngineConfig, InitMode};
use gge::topology::{generate_grid, generate_rgg, Graph};

fn report(label: &str, g: &Graph) -> gge::Result<()> {
    let eps = 0.01;
    let b = compute_bounds(g, eps, &AOptions::new(10, 2000), 0)?;
    // the optimizer's maximizer is a hard start for GGE
    let tave = estimate_tave(
        g,
        &EngineConfig::gge().with_init(InitMode::Ideal),
        &b.argmax,
        &TaveOptions::new(eps, 200),
        0,
    )?;
    println!("{label}: n={} d_max={}", b.n, b.d_max);
    println!("  lambda2            {:.6}", b.lambda2);
    println!(
        "  A(G) estimate      {:.6}  (lower bound {:.6})",
        b.a_estimate, b.a_lower
    );
    println!("  T_ave bound, GGE   {:.0}", b.tave_bound_gge);
    println!("  T_ave bound, RG    {:.0}", b.tave_bound_rg);
    println!("  T_ave measured     {}", tave.iterations);
    Ok(())
}

fn main() -> gge::Result<()> {
    report("grid 8x8", &generate_grid(8)?)?;
    report("rgg 64", &generate_rgg(64, 4)?)?;
    Ok(())
}
