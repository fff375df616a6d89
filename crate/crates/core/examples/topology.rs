//! Random geometric graphs and grids: size, degrees, spectral gap, edge list.
//!
//! cargo run --release --example topology -- 200 7

use gge::topology::{connectivity_radius, expected_gossip_matrix, generate_grid, generate_rgg, lambda2, Graph};

fn describe(label: &str, g: &Graph) -> gge::Result<()> {
    let l2 = lambda2(&expected_gossip_matrix(g)?)?;
    println!(
        "{label:>10}: n={} edges={} degree {}..{} redraws={} lambda2={l2:.6} gap={:.3e}",
        g.n(),
        g.edge_count(),
        g.min_degree(),
        g.max_degree(),
        g.redraws(),
        1.0 - l2
    );
    Ok(())
}

fn main() -> gge::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(200, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let rgg = generate_rgg(n, seed)?;
    println!("rgg radius r(n) = {:.4}", connectivity_radius(n));
    describe("rgg", &rgg)?;
    let side = (n as f64).sqrt().round() as usize;
    describe("grid", &generate_grid(side)?)?;
    describe("cycle", &Graph::cycle(n))?;

    let text = rgg.to_edge_list();
    assert_eq!(Graph::parse_edge_list(&text)?, rgg);
    println!("\nfirst lines of the rgg edge list:");
    for line in text.lines().take(5) {
        println!("  {line}");
    }
    Ok(())
}
