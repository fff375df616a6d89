use super::{init_state, step, step_gge_from, Algorithm, EngineConfig, GossipState, StepReport};
use crate::error::{Error, Result};
use crate::topology::Graph;

/// Exact recomputation of the squared error happens at least this often (in
/// steps per node) and whenever the running value has shrunk by this factor.
const RECOMPUTE_SHRINK: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub k: u64,
    pub tx: u64,
    pub rel_err: f64,
}

/// Time series of one trial. The first point is the initial state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub points: Vec<TracePoint>,
}

impl Trace {
    pub fn last(&self) -> Option<&TracePoint> {
        self.points.last()
    }

    /// Transmissions spent when the relative error first dropped below `level`.
    pub fn tx_to_reach(&self, level: f64) -> Option<u64> {
        self.points.iter().find(|p| p.rel_err < level).map(|p| p.tx)
    }
}

/// A trial in progress: graph, configuration, state and a running record of
/// `‖x(k) - x̄‖²`.
///
/// Pairwise averaging with step `α` lowers the squared error by exactly
/// `2α(1-α)(x_s - x_w)²`, so the error is updated in O(1) per step and
/// recomputed from scratch every `n` steps or after it has shrunk a hundredfold.
#[derive(Debug, Clone)]
pub struct Simulation<'g> {
    graph: &'g Graph,
    cfg: EngineConfig,
    state: GossipState,
    mean: f64,
    initial_sq: f64,
    sq: f64,
    baseline_sq: f64,
    since_recompute: usize,
}

impl<'g> Simulation<'g> {
    pub fn new(graph: &'g Graph, x0: &[f64], cfg: EngineConfig, seed: u64) -> Result<Self> {
        let state = init_state(graph, x0, &cfg, seed)?;
        let mean = crate::analysis::compensated_sum(x0.iter().copied()) / x0.len() as f64;
        let initial_sq = sq_dev(x0, mean);
        Ok(Simulation {
            graph,
            cfg,
            state,
            mean,
            initial_sq,
            sq: initial_sq,
            baseline_sq: initial_sq,
            since_recompute: 0,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn state(&self) -> &GossipState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut GossipState {
        &mut self.state
    }

    /// Mean of the initial values.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn k(&self) -> u64 {
        self.state.k
    }

    pub fn tx(&self) -> u64 {
        self.state.tx
    }

    /// Running value of `‖x(k) - x̄‖²`.
    pub fn sq_error(&self) -> f64 {
        self.sq
    }

    pub fn initial_sq_error(&self) -> f64 {
        self.initial_sq
    }

    /// `‖x(k) - x̄‖ / ‖x(0) - x̄‖`, defined as 0 when `x(0)` is constant.
    pub fn relative_error(&self) -> f64 {
        if self.initial_sq == 0.0 {
            0.0
        } else {
            (self.sq / self.initial_sq).sqrt()
        }
    }

    pub fn point(&self) -> TracePoint {
        TracePoint {
            k: self.state.k,
            tx: self.state.tx,
            rel_err: self.relative_error(),
        }
    }

    pub fn step(&mut self) -> Result<StepReport> {
        let report = step(self.graph, &mut self.state, &self.cfg)?;
        self.account(&report);
        Ok(report)
    }

    /// GGE iteration with a chosen initiator.
    pub fn step_from(&mut self, s: usize) -> Result<StepReport> {
        if self.cfg.algorithm != Algorithm::Gge {
            return Err(Error::InvalidArgument(
                "a forced initiator is only supported for GGE".into(),
            ));
        }
        if s >= self.graph.n() {
            return Err(Error::InvalidArgument(format!("node {s} out of range")));
        }
        let report = step_gge_from(self.graph, &mut self.state, &self.cfg, s);
        self.account(&report);
        Ok(report)
    }

    fn account(&mut self, report: &StepReport) {
        let d = report.before.0 - report.before.1;
        let alpha = self.cfg.step_size;
        self.sq = (self.sq - 2.0 * alpha * (1.0 - alpha) * d * d).max(0.0);
        self.since_recompute += 1;
        if self.since_recompute >= self.graph.n() || self.sq < RECOMPUTE_SHRINK * self.baseline_sq {
            self.sq = sq_dev(&self.state.x, self.mean);
            self.baseline_sq = self.sq;
            self.since_recompute = 0;
        }
    }

    /// Step until `tx >= budget`, calling `observe` with the initial point and
    /// after every step. Stops early once `stop` returns true.
    pub fn run(
        &mut self,
        budget: u64,
        mut observe: impl FnMut(&TracePoint, Option<&StepReport>),
        mut stop: impl FnMut(&TracePoint) -> bool,
    ) -> Result<()> {
        let p = self.point();
        observe(&p, None);
        if stop(&p) {
            return Ok(());
        }
        while self.state.tx < budget {
            let report = self.step()?;
            let p = self.point();
            observe(&p, Some(&report));
            if stop(&p) {
                break;
            }
        }
        Ok(())
    }
}

fn sq_dev(x: &[f64], mean: f64) -> f64 {
    x.iter().map(|v| (v - mean) * (v - mean)).sum()
}

/// Run one trial until at least `budget` transmissions have been spent.
pub fn run_trial(g: &Graph, x0: &[f64], cfg: &EngineConfig, budget: u64, seed: u64) -> Result<Trace> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let mut sim = Simulation::new(g, x0, *cfg, seed)?;
    let mut trace = Trace::default();
    sim.run(budget, |p, _| trace.points.push(*p), |_| false)?;
    Ok(trace)
}
