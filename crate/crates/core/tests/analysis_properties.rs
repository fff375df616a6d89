use gge::analysis::{
    a_lower_bound, compute_bounds, contraction_factor, estimate_a, estimate_tave, gge_cost, relative_error, tave_bound,
    AOptions, TaveOptions,
};
use gge::engine::{EngineConfig, InitMode};
use gge::fields::{synthesize, FieldSpec};
use gge::topology::{generate_grid, generate_rgg, Graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn contraction_factor_is_shift_and_scale_invariant(
        n in 3..30usize,
        seed in any::<u64>(),
        c in 0.01..100.0f64,
        shift in -50.0..50.0f64,
    ) {
        let g = generate_rgg(n, seed).unwrap();
        let x: Vec<f64> = (0..n).map(|i| ((i as f64 + 1.0) * (seed % 97) as f64 * 0.01 + i as f64).sin()).collect();
        prop_assume!(x.iter().any(|&v| (v - x[0]).abs() > 1e-6));
        let a = contraction_factor(&x, &g).unwrap();
        let y: Vec<f64> = x.iter().map(|v| c * v + shift).collect();
        let b = contraction_factor(&y, &g).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((0.0..1.0).contains(&a));
        let z: Vec<f64> = x.iter().map(|v| v + shift).collect();
        prop_assert!((gge_cost(&x, &g) - gge_cost(&z, &g)).abs() <= 1e-9 * gge_cost(&x, &g).max(1.0));
    }

    #[test]
    fn a_estimate_respects_lower_bound(n in 3..40usize, seed in any::<u64>()) {
        let g = generate_rgg(n, seed).unwrap();
        let a = estimate_a(&g, &AOptions::new(3, 300), seed).unwrap();
        let lower = a_lower_bound(&g).unwrap();
        prop_assert!(a.value >= lower - 1e-6);
        prop_assert!(a.value >= -1e-12 && a.value < 1.0);
        prop_assert!((contraction_factor(&a.argmax, &g).unwrap() - a.value).abs() < 1e-12);
    }
}

#[test]
fn relative_error_hand_values() {
    assert_eq!(relative_error(&[0.5, 1.5], &[0.0, 2.0]).unwrap(), 0.5);
    assert_eq!(relative_error(&[0.0, 2.0], &[0.0, 2.0]).unwrap(), 1.0);
    assert_eq!(relative_error(&[1.0, 1.0], &[0.0, 2.0]).unwrap(), 0.0);
}

#[test]
fn gge_averaging_time_beats_rg_on_same_runs() {
    for seed in 0..3 {
        let g = generate_rgg(40, 70 + seed).unwrap();
        let x0 = synthesize(&FieldSpec::gaussian_bumps(), &g).unwrap();
        let opts = TaveOptions::new(0.01, 200);
        let gge = estimate_tave(&g, &EngineConfig::gge().with_init(InitMode::Ideal), &x0, &opts, seed).unwrap();
        let rg = estimate_tave(&g, &EngineConfig::rg(), &x0, &opts, seed).unwrap();
        assert!(
            gge.iterations <= rg.iterations,
            "{} > {}",
            gge.iterations,
            rg.iterations
        );
    }
}

#[test]
fn bounds_on_grid_and_pair() {
    let pair = compute_bounds(&Graph::path(2), 0.01, &AOptions::new(2, 100), 0).unwrap();
    assert!(pair.lambda2.abs() < 1e-12 && pair.a_estimate.abs() < 1e-9);
    let grid = compute_bounds(&generate_grid(10).unwrap(), 0.01, &AOptions::new(4, 2000), 1).unwrap();
    assert!((grid.a_lower - (1.0 - 4.0 * (1.0 - grid.lambda2))).abs() < 1e-12);
    assert!(grid.a_lower <= grid.a_estimate);
    assert!(grid.tave_bound_gge <= grid.tave_bound_rg * grid.d_max as f64);
    assert_eq!(tave_bound(0.0, 0.01).unwrap(), 0.0);
    assert!(tave_bound(1.0, 0.01).is_err());
}
