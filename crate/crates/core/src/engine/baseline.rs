//! Randomized gossip and geographic gossip.

use rand::Rng;

use super::{average_pair, EngineConfig, GossipState, StepReport};
use crate::error::{Error, Result};
use crate::topology::{Graph, Point};

/// Randomized gossip: `s` uniform on the nodes, `t` uniform on `N_s`. Two
/// transmissions, no eavesdropping.
pub fn step_rg(g: &Graph, state: &mut GossipState, cfg: &EngineConfig) -> StepReport {
    let s = state.rng.random_range(0..g.n());
    let nb = g.neighbors(s);
    let t = nb[state.rng.random_range(0..nb.len())];
    let before = average_pair(&mut state.x, s, t, cfg.step_size);
    state.k += 1;
    state.tx += 2;
    StepReport {
        s,
        partner: t,
        chain: vec![s, t],
        tx_used: 2,
        misses: Vec::new(),
        was_init_step: false,
        before,
    }
}

/// Route greedily from `from` toward `target`: each hop moves to the neighbor
/// closest to the target's location (lowest id on ties) and routing stops
/// once no neighbor is strictly closer than the current node. The returned
/// path starts at `from`.
pub fn greedy_route(g: &Graph, from: usize, target: usize) -> Result<Vec<usize>> {
    let locs = g.locations().ok_or(Error::MissingLocations)?;
    Ok(route(g, locs, from, target))
}

fn route(g: &Graph, locs: &[Point], from: usize, target: usize) -> Vec<usize> {
    let goal = locs[target];
    let mut path = vec![from];
    let mut cur = from;
    while cur != target {
        let mut best = cur;
        let mut best_d = locs[cur].dist2(&goal);
        for &u in g.neighbors(cur) {
            let d = locs[u].dist2(&goal);
            if d < best_d {
                best = u;
                best_d = d;
            }
        }
        if best == cur {
            break;
        }
        path.push(best);
        cur = best;
    }
    path
}

/// Geographic gossip: `s` picks a uniformly random target node and routes a
/// request to it greedily; `s` averages with whichever node the request
/// reaches. A target whose route cannot leave `s` is redrawn. The round trip
/// costs two transmissions per hop.
pub fn step_geographic(g: &Graph, state: &mut GossipState, cfg: &EngineConfig) -> Result<StepReport> {
    let locs = g.locations().ok_or(Error::MissingLocations)?;
    let n = g.n();
    let s = state.rng.random_range(0..n);
    let path = loop {
        let mut target = state.rng.random_range(0..n - 1);
        if target >= s {
            target += 1;
        }
        let path = route(g, locs, s, target);
        if path.len() > 1 {
            break path;
        }
    };
    let partner = *path.last().unwrap();
    let before = average_pair(&mut state.x, s, partner, cfg.step_size);
    let tx_used = 2 * (path.len() as u64 - 1);
    state.k += 1;
    state.tx += tx_used;
    Ok(StepReport {
        s,
        partner,
        chain: path,
        tx_used,
        misses: Vec::new(),
        was_init_step: false,
        before,
    })
}
