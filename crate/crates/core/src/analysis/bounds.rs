use std::fmt::Write as _;

use super::{a_lower_bound, estimate_a, tave_bound, AOptions};
use crate::error::Result;
use crate::topology::{expected_gossip_matrix, lambda2, Graph};

/// Spectral and contraction constants of one graph with the averaging-time
/// bounds they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub edges: usize,
    pub d_max: usize,
    pub lambda2: f64,
    pub a_estimate: f64,
    pub a_lower: f64,
    pub tave_bound_gge: f64,
    pub tave_bound_rg: f64,
    pub epsilon: f64,
    pub restarts: usize,
    pub iterations: usize,
    pub best_restart: usize,
    /// Maximizer found by the optimizer (zero mean, unit norm).
    pub argmax: Vec<f64>,
}

pub fn compute_bounds(g: &Graph, epsilon: f64, opts: &AOptions, seed: u64) -> Result<BoundsReport> {
    let l2 = lambda2(&expected_gossip_matrix(g)?)?;
    let a = estimate_a(g, opts, seed)?;
    Ok(BoundsReport {
        n: g.n(),
        edges: g.edge_count(),
        d_max: g.max_degree(),
        lambda2: l2,
        a_estimate: a.value,
        a_lower: a_lower_bound(g)?,
        tave_bound_gge: tave_bound(a.value.max(0.0), epsilon)?,
        tave_bound_rg: tave_bound(l2.max(0.0), epsilon)?,
        epsilon,
        restarts: a.restarts,
        iterations: a.iterations,
        best_restart: a.best_restart,
        argmax: a.argmax,
    })
}

impl BoundsReport {
    pub const CSV_HEADER: &'static str = "graph_id,n,edges,d_max,lambda2,a_estimate,a_lower,tave_bound_gge,tave_bound_rg,epsilon,restarts,iterations,best_restart";

    pub fn csv_row(&self, graph_id: usize) -> String {
        format!(
            "{graph_id},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{}",
            self.n,
            self.edges,
            self.d_max,
            self.lambda2,
            self.a_estimate,
            self.a_lower,
            self.tave_bound_gge,
            self.tave_bound_rg,
            self.epsilon,
            self.restarts,
            self.iterations,
            self.best_restart
        )
    }

    /// `key = value` lines, one per field.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "edges = {}", self.edges);
        let _ = writeln!(out, "d_max = {}", self.d_max);
        let _ = writeln!(out, "lambda2 = {:.16e}", self.lambda2);
        let _ = writeln!(out, "a_estimate = {:.16e}", self.a_estimate);
        let _ = writeln!(out, "a_lower = {:.16e}", self.a_lower);
        let _ = writeln!(out, "tave_bound_gge = {:.16e}", self.tave_bound_gge);
        let _ = writeln!(out, "tave_bound_rg = {:.16e}", self.tave_bound_rg);
        let _ = writeln!(out, "epsilon = {:.16e}", self.epsilon);
        let _ = writeln!(out, "restarts = {}", self.restarts);
        let _ = writeln!(out, "iterations = {}", self.iterations);
        let _ = writeln!(out, "best_restart = {}", self.best_restart);
        out
    }
}
