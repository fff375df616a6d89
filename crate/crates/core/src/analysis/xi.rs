//! Per-iteration gain of GGE over randomized gossip and the resulting
//! mean-squared-error bound.
//!
//! For the state `x(i-1)` reached after `i-1` GGE steps,
//!
//! ```text
//! ξ_i = E[Σ_s max_t (x_s - x_t)² - Σ_s mean_t (x_s - x_t)²] / (2n E‖x(i-1) - x̄‖²)
//! ```
//!
//! with the expectation over initiator sequences, and
//! `E‖x(k) - x̄‖² ≤ ‖x(0) - x̄‖² Π_{i≤k} (λ₂ - ξ_i)`. Both are estimated by Monte
//! Carlo with exact caches and no lost broadcasts.

use rayon::prelude::*;

use super::{max_sq_diff, mean_sq_diff, rg_bound, sq_dev, Accumulator};
use crate::engine::{EngineConfig, InitMode, Simulation};
use crate::error::{Error, Result};
use crate::seed;
use crate::topology::{expected_gossip_matrix, lambda2, Graph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEstimate {
    pub i: usize,
    pub xi: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// ξ estimates for `i = 1..=kmax` and the empirical mean squared error
/// `E‖x(k) - x̄‖²` for `k = 0..=kmax`, all from the same trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct XiCurve {
    pub xi: Vec<XiEstimate>,
    pub mse: Vec<f64>,
    pub mse_stderr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub lambda2: f64,
    /// `‖x(0) - x̄‖² Π_{i≤k} (λ₂ - ξ_i)` for `k = 1..=kmax`.
    pub gge: Vec<f64>,
    /// `‖x(0) - x̄‖² λ₂^k` for `k = 1..=kmax`.
    pub rg: Vec<f64>,
    pub estimates: XiCurve,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    num: Accumulator,
    den: Accumulator,
    num2: Accumulator,
    den2: Accumulator,
    cross: Accumulator,
}

impl Moments {
    fn add(&mut self, num: f64, den: f64) {
        self.num.add(num);
        self.den.add(den);
        self.num2.add(num * num);
        self.den2.add(den * den);
        self.cross.add(num * den);
    }

    fn merge(&mut self, other: &Moments) {
        for (a, b) in [
            (&mut self.num, &other.num),
            (&mut self.den, &other.den),
            (&mut self.num2, &other.num2),
            (&mut self.den2, &other.den2),
            (&mut self.cross, &other.cross),
        ] {
            a.add(b.value());
        }
    }
}

/// Ratio estimate `ΣN / (2n ΣD)` with a delta-method standard error.
fn ratio(i: usize, m: &Moments, trials: usize, n: usize) -> XiEstimate {
    let t = trials as f64;
    let scale = 2.0 * n as f64;
    let (sn, sd) = (m.num.value(), m.den.value());
    if sd == 0.0 {
        return XiEstimate {
            i,
            xi: 0.0,
            stderr: 0.0,
            trials,
        };
    }
    let xi = sn / (scale * sd);
    let stderr = if trials > 1 {
        // residual Z = N - 2nξ D
        let c = scale * xi;
        let sum_z = sn - c * sd;
        let sum_z2 = m.num2.value() - 2.0 * c * m.cross.value() + c * c * m.den2.value();
        let var = ((sum_z2 - sum_z * sum_z / t) / (t - 1.0)).max(0.0);
        (var / t).sqrt() / (scale * sd / t)
    } else {
        0.0
    };
    XiEstimate { i, xi, stderr, trials }
}

/// Numerator term of ξ at a fixed state.
fn greedy_gain(x: &[f64], g: &Graph) -> f64 {
    (0..g.n()).map(|s| max_sq_diff(x, g, s) - mean_sq_diff(x, g, s)).sum()
}

/// Estimate `ξ_1..ξ_kmax` from `trials` GGE trajectories.
pub fn estimate_xi_curve(g: &Graph, x0: &[f64], kmax: usize, trials: usize, seed: u64) -> Result<XiCurve> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let cfg = EngineConfig::gge().with_init(InitMode::Ideal);
    let mean = super::mean(x0);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|j| -> Result<(Vec<Moments>, Vec<f64>)> {
            let mut sim = Simulation::new(g, x0, cfg, seed::derive(seed, &[j as u64]))?;
            let mut moments = vec![Moments::default(); kmax];
            let mut errs = Vec::with_capacity(kmax + 1);
            for m in moments.iter_mut() {
                let x = sim.state().x();
                let d = sq_dev(x, mean);
                errs.push(d);
                m.add(greedy_gain(x, g), d);
                sim.step()?;
            }
            errs.push(sq_dev(sim.state().x(), mean));
            Ok((moments, errs))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut moments = vec![Moments::default(); kmax];
    let mut err_sum = vec![Accumulator::default(); kmax + 1];
    let mut err_sq = vec![Accumulator::default(); kmax + 1];
    for (m, e) in &per_trial {
        for (acc, item) in moments.iter_mut().zip(m) {
            acc.merge(item);
        }
        for k in 0..=kmax {
            err_sum[k].add(e[k]);
            err_sq[k].add(e[k] * e[k]);
        }
    }
    let t = trials as f64;
    let xi = moments
        .iter()
        .enumerate()
        .map(|(idx, m)| ratio(idx + 1, m, trials, g.n()))
        .collect();
    let mse: Vec<f64> = err_sum.iter().map(|a| a.value() / t).collect();
    let mse_stderr = err_sq
        .iter()
        .zip(&mse)
        .map(|(a, &mu)| {
            if trials < 2 {
                0.0
            } else {
                let var = ((a.value() - t * mu * mu) / (t - 1.0)).max(0.0);
                (var / t).sqrt()
            }
        })
        .collect();
    Ok(XiCurve { xi, mse, mse_stderr })
}

/// Estimate `ξ_i` alone.
pub fn estimate_xi(g: &Graph, x0: &[f64], i: usize, trials: usize, seed: u64) -> Result<XiEstimate> {
    if i == 0 {
        return Err(Error::InvalidArgument("xi is indexed from 1".into()));
    }
    let curve = estimate_xi_curve(g, x0, i, trials, seed)?;
    Ok(curve.xi[i - 1])
}

/// GGE and randomized-gossip mean-squared-error bounds for `k = 1..=kmax`.
pub fn gge_bound_curve(g: &Graph, x0: &[f64], kmax: usize, trials: usize, seed: u64) -> Result<BoundCurve> {
    let l2 = lambda2(&expected_gossip_matrix(g)?)?;
    let estimates = estimate_xi_curve(g, x0, kmax, trials, seed)?;
    let e0_sq = sq_dev(x0, super::mean(x0));
    let mut gge = Vec::with_capacity(kmax);
    let mut acc = e0_sq;
    for est in &estimates.xi {
        acc *= l2 - est.xi;
        gge.push(acc);
    }
    let rg = (1..=kmax).map(|k| rg_bound(l2, k as u32, e0_sq.sqrt())).collect();
    Ok(BoundCurve {
        lambda2: l2,
        gge,
        rg,
        estimates,
    })
}
