//! Empirical ε-averaging time.
//!
//! Every algorithm here moves by pairwise averaging, which never increases
//! `‖x - x̄‖`, so a run's error stays below ε once it gets there. Each run is
//! therefore simulated only up to its first passage below ε, and the fraction
//! of runs still at or above ε is a non-increasing function of the iteration.

use rayon::prelude::*;

use crate::engine::{EngineConfig, Simulation};
use crate::error::{Error, Result};
use crate::seed;
use crate::topology::Graph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaveOptions {
    pub epsilon: f64,
    pub runs: usize,
    /// Iterations after which a run counts as not having converged.
    pub iteration_cap: u64,
}

impl TaveOptions {
    pub fn new(epsilon: f64, runs: usize) -> Self {
        TaveOptions {
            epsilon,
            runs,
            iteration_cap: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaveEstimate {
    /// Smallest iteration at which at most a fraction ε of runs have relative error ≥ ε.
    pub iterations: u64,
    /// First-passage iteration of each run (`None` if it hit the cap).
    pub first_passage: Vec<Option<u64>>,
}

impl TaveEstimate {
    /// Fraction of runs whose relative error is still ≥ ε after `k` iterations.
    pub fn fraction_above(&self, k: u64) -> f64 {
        let above = self
            .first_passage
            .iter()
            .filter(|tau| tau.is_none_or(|t| t > k))
            .count();
        above as f64 / self.first_passage.len() as f64
    }
}

/// Estimate the ε-averaging time of `cfg` from `x0` over `opts.runs` independent runs.
pub fn estimate_tave(g: &Graph, cfg: &EngineConfig, x0: &[f64], opts: &TaveOptions, seed: u64) -> Result<TaveEstimate> {
    let eps = opts.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be in (0, 1), got {eps}")));
    }
    if (eps * opts.runs as f64) < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "need epsilon * runs >= 1, got {eps} * {}",
            opts.runs
        )));
    }
    let first_passage = (0..opts.runs)
        .into_par_iter()
        .map(|r| -> Result<Option<u64>> {
            let mut sim = Simulation::new(g, x0, *cfg, seed::derive(seed, &[r as u64]))?;
            while sim.relative_error() >= eps {
                if sim.k() >= opts.iteration_cap {
                    return Ok(None);
                }
                sim.step()?;
            }
            Ok(Some(sim.k()))
        })
        .collect::<Result<Vec<_>>>()?;

    let allowed = (eps * opts.runs as f64 + 1e-9).floor() as usize;
    let capped = first_passage.iter().filter(|t| t.is_none()).count();
    if capped > allowed {
        return Err(Error::NoConvergence(format!(
            "{capped} of {} runs still above epsilon after {} iterations",
            opts.runs, opts.iteration_cap
        )));
    }
    let mut sorted: Vec<u64> = first_passage.iter().flatten().copied().collect();
    sorted.sort_unstable();
    // need #{τ > k} ≤ allowed; capped runs count as τ = ∞
    let idx = opts.runs - allowed - 1;
    let iterations = sorted[idx];

    let est = TaveEstimate {
        iterations,
        first_passage,
    };
    // stability guard: the exceedance fraction must stay ≤ ε over [k, 2k]
    debug_assert!(est.fraction_above(iterations) <= eps + 1e-12);
    debug_assert!(est.fraction_above(2 * iterations) <= eps + 1e-12);
    Ok(est)
}
