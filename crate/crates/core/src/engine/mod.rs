//! The gossip state machine.
//!
//! Three algorithms share one [`GossipState`]:
//!
//! * greedy gossip with eavesdropping (`gge`): the initiator gossips with the
//!   neighbor whose cached value differs most from its own, optionally
//!   extending the search over up to three hops;
//! * randomized gossip (`rg`) under the natural random walk;
//! * geographic gossip (`geographic`) with greedy location-based routing.
//!
//! Averaging always uses the true values of the two endpoints. Eavesdropped
//! caches only influence which partner GGE selects.

mod baseline;
mod gge;
mod state;
mod trial;

use serde::{Deserialize, Serialize};

pub use baseline::{greedy_route, step_geographic, step_rg};
pub use gge::{greedy_select, step_gge, step_gge_from};
pub use state::{init_state, GossipState};
pub use trial::{run_trial, Simulation, Trace, TracePoint};

use crate::error::{Error, Result};
use crate::topology::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rg,
    Gge,
    Geographic,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rg => "rg",
            Algorithm::Gge => "gge",
            Algorithm::Geographic => "geographic",
        }
    }
}

/// How GGE nodes learn their neighbors' initial values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    /// Nodes gossip with unheard neighbors until they have heard from all of them.
    Proposed,
    /// Every node broadcasts once before gossip starts (n transmissions up front).
    Broadcast,
    /// Caches start out exact, at no cost.
    Ideal,
}

/// Per-iteration transmission accounting for one-hop GGE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TxMode {
    /// Request, then a broadcast from each endpoint.
    Three,
    /// The initiator's broadcast doubles as the request.
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub algorithm: Algorithm,
    /// Maximum chain length for GGE (1 = plain GGE).
    pub hops: usize,
    /// Probability that an eavesdropper misses a broadcast.
    pub miss_prob: f64,
    pub init_mode: InitMode,
    pub tx_mode: TxMode,
    pub step_size: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            algorithm: Algorithm::Gge,
            hops: 1,
            miss_prob: 0.0,
            init_mode: InitMode::Proposed,
            tx_mode: TxMode::Three,
            step_size: 0.5,
        }
    }
}

impl EngineConfig {
    pub fn gge() -> Self {
        Self::default()
    }

    pub fn rg() -> Self {
        EngineConfig {
            algorithm: Algorithm::Rg,
            ..Self::default()
        }
    }

    pub fn geographic() -> Self {
        EngineConfig {
            algorithm: Algorithm::Geographic,
            ..Self::default()
        }
    }

    pub fn with_init(mut self, init_mode: InitMode) -> Self {
        self.init_mode = init_mode;
        self
    }

    pub fn with_hops(mut self, hops: usize) -> Self {
        self.hops = hops;
        self
    }

    pub fn with_miss_prob(mut self, p: f64) -> Self {
        self.miss_prob = p;
        self
    }

    pub fn with_tx_mode(mut self, tx_mode: TxMode) -> Self {
        self.tx_mode = tx_mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.hops < 1 {
            return Err(Error::InvalidArgument("hops must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.miss_prob) {
            return Err(Error::InvalidArgument(format!(
                "miss probability must be in [0, 1), got {}",
                self.miss_prob
            )));
        }
        if !(self.step_size > 0.0 && self.step_size < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "step size must be in (0, 1), got {}",
                self.step_size
            )));
        }
        Ok(())
    }

    /// Transmissions charged for a GGE exchange over a chain of `hops` links:
    /// `hops` forward, `hops - 1` relayed back, one broadcast per endpoint.
    pub fn gge_tx_cost(&self, hops: usize) -> u64 {
        let h = hops as u64;
        match self.tx_mode {
            TxMode::Three => 2 * h + 1,
            TxMode::Two => 2 * h,
        }
    }
}

/// Audit record of a single iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    /// Initiator.
    pub s: usize,
    /// Node the initiator averaged with.
    pub partner: usize,
    /// Hop sequence from `s` to `partner`, both included.
    pub chain: Vec<usize>,
    pub tx_used: u64,
    /// `(broadcaster, eavesdropper)` pairs whose broadcast was lost.
    pub misses: Vec<(usize, usize)>,
    pub was_init_step: bool,
    /// Values of `s` and `partner` before averaging.
    pub before: (f64, f64),
}

impl StepReport {
    /// `‖g(k)‖² = 2 (x_s - x_partner)²` for the pair that actually gossiped.
    pub fn subgradient_norm_sq(&self) -> f64 {
        let d = self.before.0 - self.before.1;
        2.0 * d * d
    }
}

/// Run one iteration of the configured algorithm.
pub fn step(g: &Graph, state: &mut GossipState, cfg: &EngineConfig) -> Result<StepReport> {
    match cfg.algorithm {
        Algorithm::Gge => Ok(step_gge(g, state, cfg)),
        Algorithm::Rg => Ok(step_rg(g, state, cfg)),
        Algorithm::Geographic => step_geographic(g, state, cfg),
    }
}

/// `x_s ← x_s - α d`, `x_w ← x_w + α d` with `d = x_s - x_w`; at `α = ½` both
/// become the pair average. Returns the values before the update.
fn average_pair(x: &mut [f64], s: usize, w: usize, alpha: f64) -> (f64, f64) {
    let (a, b) = (x[s], x[w]);
    if alpha == 0.5 {
        let m = 0.5 * (a + b);
        x[s] = m;
        x[w] = m;
    } else {
        let d = a - b;
        x[s] = a - alpha * d;
        x[w] = b + alpha * d;
    }
    (a, b)
}
