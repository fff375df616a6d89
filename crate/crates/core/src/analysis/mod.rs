//! Convergence metrics and bound machinery.
//!
//! GGE is an incremental subgradient method on
//! `f(x) = Σ_s max_{t∈N_s} ½ (x_s - x_t)²` under the constraint that the sum
//! of `x` is preserved. Each step lowers `‖x - x̄‖²` by exactly `¼‖g‖²`, which
//! is what the per-step checks and the contraction constant below build on.

mod bounds;
mod optimize;
mod tave;
mod xi;

pub use bounds::{compute_bounds, BoundsReport};
pub use optimize::{estimate_a, AEstimate, AOptions};
pub use tave::{estimate_tave, TaveEstimate, TaveOptions};
pub use xi::{estimate_xi, estimate_xi_curve, gge_bound_curve, BoundCurve, XiCurve, XiEstimate};

use crate::error::{Error, Result};
use crate::topology::{expected_gossip_matrix, lambda2, Graph};

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Accumulator::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Running compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    compensated_sum(x.iter().copied()) / x.len() as f64
}

pub(crate) fn sq_dev(x: &[f64], m: f64) -> f64 {
    x.iter().map(|v| (v - m) * (v - m)).sum()
}

/// `‖x - x̄‖ / ‖x(0) - x̄‖` where `x̄` is the average of `x0`; 0 when `x0` is constant.
pub fn relative_error(x: &[f64], x0: &[f64]) -> Result<f64> {
    if x.len() != x0.len() {
        return Err(Error::LengthMismatch {
            expected: x0.len(),
            actual: x.len(),
        });
    }
    let m = mean(x0);
    let denom = sq_dev(x0, m);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((sq_dev(x, m) / denom).sqrt())
}

/// Subgradient of `f_s` at `x` when `t` is the selected neighbor of `s`.
pub fn subgradient(x: &[f64], g: &Graph, s: usize, t: usize) -> Result<Vec<f64>> {
    if x.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            actual: x.len(),
        });
    }
    if !g.has_edge(s, t) {
        return Err(Error::NotNeighbors(s, t));
    }
    Ok(pair_subgradient(x, s, t))
}

/// `g_s = x_s - x_t`, `g_t = -(x_s - x_t)`, zero elsewhere, for any pair.
pub fn pair_subgradient(x: &[f64], s: usize, t: usize) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let d = x[s] - x[t];
    g[s] = d;
    g[t] = -d;
    g
}

/// `Σ_s max_{t∈N_s} ½ (x_s - x_t)²`.
pub fn gge_cost(x: &[f64], g: &Graph) -> f64 {
    (0..g.n()).map(|s| 0.5 * max_sq_diff(x, g, s)).sum()
}

pub(crate) fn max_sq_diff(x: &[f64], g: &Graph, s: usize) -> f64 {
    g.neighbors(s)
        .iter()
        .map(|&t| (x[s] - x[t]) * (x[s] - x[t]))
        .fold(0.0, f64::max)
}

pub(crate) fn mean_sq_diff(x: &[f64], g: &Graph, s: usize) -> f64 {
    let nb = g.neighbors(s);
    if nb.is_empty() {
        return 0.0;
    }
    nb.iter().map(|&t| (x[s] - x[t]) * (x[s] - x[t])).sum::<f64>() / nb.len() as f64
}

/// Squared-error bound for randomized gossip after `k` steps: `e0² λ₂^k`.
pub fn rg_bound(lambda2: f64, k: u32, e0: f64) -> f64 {
    e0 * e0 * lambda2.powi(k as i32)
}

/// Expected one-step ratio `E‖x(1) - x̄‖² / ‖x - x̄‖²` of GGE from `x` with
/// exact caches: `(1/n) Σ_s (1 - ‖g_s(x)‖² / (4‖x - x̄‖²))`, where `g_s` uses a
/// greedy partner of `s`. The value does not depend on which maximizer is used.
pub fn contraction_factor(x: &[f64], g: &Graph) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            actual: x.len(),
        });
    }
    let err = sq_dev(x, mean(x));
    if err == 0.0 {
        return Err(Error::ConstantVector);
    }
    let n = g.n() as f64;
    // ‖g_s‖² = 2 max_t (x_s - x_t)²
    let total: f64 = (0..g.n()).map(|s| max_sq_diff(x, g, s)).sum();
    Ok(1.0 - total / (2.0 * n * err))
}

/// Lower bound on the contraction constant: `1 - d_max (1 - λ₂(W̄))`. May be negative.
pub fn a_lower_bound(g: &Graph) -> Result<f64> {
    let l2 = lambda2(&expected_gossip_matrix(g)?)?;
    Ok(1.0 - g.max_degree() as f64 * (1.0 - l2))
}

/// Averaging-time bound `3 ln(1/ε) / ln(1/c)` in iterations, for a per-step
/// contraction `c` (the contraction constant for GGE, `λ₂` for randomized gossip).
pub fn tave_bound(contraction: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be in (0, 1), got {epsilon}"
        )));
    }
    if !(0.0..1.0).contains(&contraction) {
        return Err(Error::InvalidArgument(format!(
            "contraction must be in [0, 1), got {contraction}"
        )));
    }
    if contraction == 0.0 {
        return Ok(0.0);
    }
    Ok(3.0 * (1.0 / epsilon).ln() / (1.0 / contraction).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{generate_grid, generate_rgg};

    #[test]
    fn relative_error_cases() {
        let x0 = [0.0, 2.0];
        assert_eq!(relative_error(&[1.0, 1.0], &x0).unwrap(), 0.0);
        assert_eq!(relative_error(&x0, &x0).unwrap(), 1.0);
        assert!((relative_error(&[0.5, 1.5], &x0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(relative_error(&[1.0, 1.0], &[3.0, 3.0]).unwrap(), 0.0);
        assert!(relative_error(&[1.0], &x0).is_err());
    }

    #[test]
    fn subgradient_cases() {
        let g = Graph::path(2);
        let v = subgradient(&[0.0, 2.0], &g, 0, 1).unwrap();
        assert_eq!(v, vec![-2.0, 2.0]);
        assert_eq!(v.iter().map(|a| a * a).sum::<f64>(), 8.0);
        assert_eq!(subgradient(&[1.0, 1.0], &g, 0, 1).unwrap(), vec![0.0, 0.0]);
        let g3 = Graph::path(3);
        assert!(matches!(
            subgradient(&[0.0, 1.0, 2.0], &g3, 0, 2),
            Err(Error::NotNeighbors(0, 2))
        ));
    }

    #[test]
    fn gge_cost_cases() {
        let g = Graph::path(2);
        assert_eq!(gge_cost(&[0.0, 2.0], &g), 4.0);
        assert_eq!(gge_cost(&[5.0, 5.0], &g), 0.0);
        let g = generate_grid(4).unwrap();
        let x: Vec<f64> = (0..16).map(|i| (i as f64 * 0.7).sin()).collect();
        let shifted: Vec<f64> = x.iter().map(|v| v + 3.25).collect();
        assert!((gge_cost(&x, &g) - gge_cost(&shifted, &g)).abs() < 1e-12);
    }

    #[test]
    fn rg_bound_cases() {
        assert_eq!(rg_bound(0.3, 0, 2.0), 4.0);
        assert_eq!(rg_bound(0.0, 1, 1.0), 0.0);
        assert!((rg_bound(0.75, 2, 1.0) - 9.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn contraction_two_nodes_is_zero() {
        let g = Graph::path(2);
        for x in [[0.0, 1.0], [-3.0, 7.5]] {
            assert!(contraction_factor(&x, &g).unwrap().abs() < 1e-15);
        }
        assert!(matches!(
            contraction_factor(&[2.0, 2.0], &g),
            Err(Error::ConstantVector)
        ));
    }

    #[test]
    fn contraction_three_path() {
        // maxima of (x_s - x_t)² are 1, 1, 1; ‖x - x̄‖² = 2; 1 - 3 / (2·3·2)
        let v = contraction_factor(&[-1.0, 0.0, 1.0], &Graph::path(3)).unwrap();
        assert!((v - 0.75).abs() < 1e-15);
    }

    #[test]
    fn contraction_is_scale_and_shift_invariant() {
        let g = generate_rgg(40, 1).unwrap();
        let x: Vec<f64> = (0..40).map(|i| (i as f64).cos()).collect();
        let base = contraction_factor(&x, &g).unwrap();
        for (c, b) in [(2.0, 0.0), (-0.5, 10.0), (1e3, -4.0)] {
            let y: Vec<f64> = x.iter().map(|v| c * v + b).collect();
            assert!((contraction_factor(&y, &g).unwrap() - base).abs() < 1e-12);
        }
        assert!((0.0..1.0).contains(&base));
    }

    #[test]
    fn lower_bound_cases() {
        assert!(a_lower_bound(&Graph::path(2)).unwrap().abs() < 1e-12);
        let g = generate_grid(10).unwrap();
        let l2 = lambda2(&expected_gossip_matrix(&g).unwrap()).unwrap();
        assert!((a_lower_bound(&g).unwrap() - (1.0 - 4.0 * (1.0 - l2))).abs() < 1e-15);
    }

    #[test]
    fn tave_bound_cases() {
        let v = tave_bound(0.99, 0.01).unwrap();
        assert!((v - 3.0 * 100f64.ln() / (1.0 / 0.99f64).ln()).abs() < 1e-9);
        assert!((v - 1_374.631_729_660_158).abs() < 1e-9);
        assert!(tave_bound(0.5, 1.0 - 1e-12).unwrap() < 1e-9);
        assert_eq!(tave_bound(0.0, 0.01).unwrap(), 0.0);
        assert!(tave_bound(1.0, 0.01).is_err());
        assert!(tave_bound(0.5, 0.0).is_err());
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let v = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(v), 1.0);
    }
}
