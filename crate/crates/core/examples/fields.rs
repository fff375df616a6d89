//! The four initial fields on one graph, with their spread and their
//! contraction factor `A(x)` (how much one greedy step is guaranteed to help).

use gge::analysis::contraction_factor;
use gge::fields::{default_bumps, synthesize, FieldKind, FieldSpec};
use gge::topology::generate_rgg;

fn main() -> gge::Result<()> {
    let g = generate_rgg(200, 3)?;
    let kinds = [
        FieldKind::GaussianBumps(default_bumps()),
        FieldKind::Linear,
        FieldKind::Spike,
        FieldKind::IidGaussian,
    ];
    println!(
        "{:>15} {:>10} {:>10} {:>10} {:>8}",
        "field", "min", "max", "mean", "A(x)"
    );
    for kind in kinds {
        let x = synthesize(&FieldSpec::new(kind.clone(), 5), &g)?;
        let (lo, hi) = x
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let a = contraction_factor(&x, &g)?;
        println!("{:>15} {lo:>10.4} {hi:>10.4} {mean:>10.4} {a:>8.4}", kind.name());
    }
    Ok(())
}
