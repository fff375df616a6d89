//! Numerical estimate of the GGE contraction constant
//! `A(G) = max_{x ≠ x̄} contraction_factor(x)`.
//!
//! The objective depends only on the direction of `x - x̄`, so the search runs
//! over zero-mean unit vectors. Maximizing it is the same as minimizing the
//! convex function `Σ_s max_{t∈N_s} (x_s - x_t)²` over that non-convex set. Each
//! iteration picks a random component `s`, takes a subgradient step on its
//! term (which pulls `x_s` and its greedy partner together) and projects back
//! onto the unit sphere. Several restarts guard against local optima; the
//! first restart always begins at the second eigenvector of `W̄`, where the
//! objective is known to be at least `1 - d_max (1 - λ₂)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{contraction_factor, mean};
use crate::error::{Error, Result};
use crate::seed;
use crate::topology::{expected_gossip_matrix, second_eigenpair, Graph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AOptions {
    pub restarts: usize,
    pub iters: usize,
    /// Step size for the first half of each restart.
    pub coarse_step: f64,
    /// Step size for the second half.
    pub fine_step: f64,
}

impl Default for AOptions {
    fn default() -> Self {
        AOptions {
            restarts: 50,
            iters: 5000,
            coarse_step: 0.1,
            fine_step: 0.01,
        }
    }
}

impl AOptions {
    pub fn new(restarts: usize, iters: usize) -> Self {
        AOptions {
            restarts,
            iters,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AEstimate {
    /// Best objective found, evaluated exactly at `argmax`.
    pub value: f64,
    /// Zero-mean unit vector achieving `value`.
    pub argmax: Vec<f64>,
    pub restarts: usize,
    pub iterations: usize,
    /// Restart that produced the best value.
    pub best_restart: usize,
}

/// Search state in unnormalized coordinates `y`: the current point is
/// `(y - ȳ) / ‖y - ȳ‖`. Steps keep `Σ y` fixed, so only the norm is tracked.
struct Search<'a> {
    g: &'a Graph,
    y: Vec<f64>,
    /// `max_t (y_s - y_t)²` and the neighbor attaining it.
    m: Vec<f64>,
    arg: Vec<usize>,
    total: f64,
    norm2: f64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, start: Vec<f64>) -> Self {
        let n = g.n();
        let mut s = Search {
            g,
            y: start,
            m: vec![0.0; n],
            arg: vec![0; n],
            total: 0.0,
            norm2: 0.0,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let mu = mean(&self.y);
        let norm = self.y.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>().sqrt();
        for v in &mut self.y {
            *v = (*v - mu) / norm;
        }
        for u in 0..self.g.n() {
            self.refresh(u);
        }
        self.total = self.m.iter().sum();
        self.norm2 = 1.0;
    }

    fn refresh(&mut self, u: usize) {
        let yu = self.y[u];
        let (mut best, mut arg) = (0.0, u);
        for &v in self.g.neighbors(u) {
            let d = (yu - self.y[v]) * (yu - self.y[v]);
            if d > best || arg == u {
                best = d;
                arg = v;
            }
        }
        self.total += best - self.m[u];
        self.m[u] = best;
        self.arg[u] = arg;
    }

    fn objective(&self) -> f64 {
        1.0 - self.total / (2.0 * self.g.n() as f64 * self.norm2)
    }

    fn step(&mut self, s: usize, alpha: f64) {
        let t = self.arg[s];
        let d = self.y[s] - self.y[t];
        if d == 0.0 {
            return;
        }
        let delta = 2.0 * alpha * d;
        self.y[s] -= delta;
        self.y[t] += delta;
        self.norm2 -= 4.0 * alpha * (1.0 - 2.0 * alpha) * d * d;

        self.refresh(s);
        self.refresh(t);
        for moved in [s, t] {
            let ym = self.y[moved];
            for i in 0..self.g.degree(moved) {
                let u = self.g.neighbors(moved)[i];
                if u == s || u == t {
                    continue;
                }
                if self.arg[u] == moved {
                    self.refresh(u);
                } else {
                    let d2 = (self.y[u] - ym) * (self.y[u] - ym);
                    if d2 > self.m[u] {
                        self.total += d2 - self.m[u];
                        self.m[u] = d2;
                        self.arg[u] = moved;
                    }
                }
            }
        }
    }
}

/// Maximize the contraction factor of `g` by projected incremental subgradient
/// steps from `opts.restarts` starting points. Deterministic given `seed`;
/// restart `r` draws its start and its component order from a stream derived
/// from `(seed, r)`, so adding restarts never lowers the result.
pub fn estimate_a(g: &Graph, opts: &AOptions, seed: u64) -> Result<AEstimate> {
    if opts.restarts == 0 || opts.iters == 0 {
        return Err(Error::InvalidArgument("restarts and iters must be at least 1".into()));
    }
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two nodes".into()));
    }
    let (_, v2) = second_eigenpair(&expected_gossip_matrix(g)?)?;

    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, &[r as u64]));
        let start: Vec<f64> = if r == 0 {
            v2.clone()
        } else {
            (0..n).map(|_| rng.sample(StandardNormal)).collect()
        };
        let mut search = Search::new(g, start);
        let mut local_best = search.objective();
        let mut local_arg = search.y.clone();
        for it in 0..opts.iters {
            let alpha = if it < opts.iters / 2 {
                opts.coarse_step
            } else {
                opts.fine_step
            };
            let s = rng.random_range(0..n);
            search.step(s, alpha);
            if (it + 1) % n == 0 || search.norm2 < 1e-3 {
                search.normalize();
            }
            let value = search.objective();
            if value > local_best {
                local_best = value;
                local_arg.clone_from(&search.y);
            }
        }
        let mu = mean(&local_arg);
        let norm = local_arg.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>().sqrt();
        let unit: Vec<f64> = local_arg.iter().map(|v| (v - mu) / norm).collect();
        let exact = contraction_factor(&unit, g)?;
        if best.as_ref().is_none_or(|(b, _, _)| exact > *b) {
            best = Some((exact, unit, r));
        }
    }
    let (value, argmax, best_restart) = best.expect("at least one restart");
    Ok(AEstimate {
        value,
        argmax,
        restarts: opts.restarts,
        iterations: opts.iters,
        best_restart,
    })
}
