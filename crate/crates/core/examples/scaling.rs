//! How A(G) and the averaging time grow with network size.

use gge::harness::{cmd_sweep, sweep_table, ExperimentConfig};

fn main() -> gge::Result<()> {
    let out = std::env::temp_dir().join("gge-scaling-example");
    let cfg = ExperimentConfig::parse(&format!(
        "seed = 1\noutput = {:?}\nruns = 100\n\
         [topology]\nkind = \"rgg\"\nn = 25\ngraphs = 3\nsizes = [25, 50, 100]\n\
         [optimizer]\nrestarts = 4\niters = 1000\n[[algorithm]]\nkind = \"gge\"\ninit = \"ideal\"\n",
        out.display().to_string()
    ))?;
    let rows = cmd_sweep(&cfg)?;
    print!("{}", sweep_table(cfg.topology.kind, &rows));
    for r in &rows {
        println!("n={:>4}: T_ave/n = {:.2}", r.n, r.tave_per_node());
    }
    println!("csv written to {}", out.display());
    Ok(())
}
