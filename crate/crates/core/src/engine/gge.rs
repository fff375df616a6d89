use rand::Rng;

use super::{average_pair, EngineConfig, GossipState, StepReport};
use crate::error::{Error, Result};
use crate::topology::Graph;

/// Id of the highest-scoring candidate; ties are broken uniformly at random
/// by reservoir sampling, so the generator is only consulted on ties.
fn argmax_random<R: Rng>(rng: &mut R, candidates: impl Iterator<Item = (usize, f64)>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    let mut ties = 0u32;
    for (id, score) in candidates {
        match best {
            Some((_, top)) if score < top => {}
            Some((_, top)) if score == top => {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = Some((id, score));
                }
            }
            _ => {
                best = Some((id, score));
                ties = 1;
            }
        }
    }
    best
}

/// Greedy partner search for initiator `s`, returning the hop chain without `s`.
///
/// The first hop goes to the neighbor whose cached value is farthest from
/// `x_s`. With `hops > 1` the current end of the chain inspects its own cache
/// and forwards the request to the neighbor farthest from the carried `x_s`,
/// provided that neighbor is strictly farther from `x_s` than the inspecting
/// node's own value. Nodes already on the chain, and neighbors the inspecting
/// node has not heard from, are not candidates.
pub fn greedy_select(g: &Graph, state: &mut GossipState, s: usize, hops: usize) -> Result<Vec<usize>> {
    if !state.is_initialized(s) {
        return Err(Error::InitializationIncomplete(s));
    }
    let xs = state.x[s];
    let GossipState { cache, rng, x, .. } = state;

    let first = g
        .neighbors(s)
        .iter()
        .zip(&cache[s])
        .map(|(&t, c)| (t, sq(xs - c.expect("initialized node has full cache"))));
    let (t, _) = argmax_random(rng, first).expect("connected graph has no isolated nodes");

    let mut chain = Vec::with_capacity(hops);
    chain.push(t);
    while chain.len() < hops {
        let cur = *chain.last().unwrap();
        let own = sq(xs - x[cur]);
        let on_chain = |u: usize| u == s || chain.contains(&u);
        let candidates = g
            .neighbors(cur)
            .iter()
            .zip(&cache[cur])
            .filter_map(|(&u, c)| c.filter(|_| !on_chain(u)).map(|v| (u, sq(xs - v))));
        match argmax_random(rng, candidates) {
            Some((u, score)) if score > own => chain.push(u),
            _ => break,
        }
    }
    Ok(chain)
}

/// One GGE iteration with a uniformly drawn initiator.
pub fn step_gge(g: &Graph, state: &mut GossipState, cfg: &EngineConfig) -> StepReport {
    let s = state.rng.random_range(0..g.n());
    step_gge_from(g, state, cfg, s)
}

/// One GGE iteration with initiator `s`.
///
/// An initiator that has not heard from all neighbors gossips with a uniformly
/// chosen unheard neighbor instead of searching greedily.
pub fn step_gge_from(g: &Graph, state: &mut GossipState, cfg: &EngineConfig, s: usize) -> StepReport {
    let (chain, was_init_step) = if state.is_initialized(s) {
        let chain = greedy_select(g, state, s, cfg.hops).expect("initiator is initialized");
        (chain, false)
    } else {
        let pick = state.rng.random_range(0..state.unheard[s]);
        let t = g
            .neighbors(s)
            .iter()
            .zip(&state.cache[s])
            .filter(|(_, c)| c.is_none())
            .map(|(&t, _)| t)
            .nth(pick)
            .expect("unheard neighbor exists");
        (vec![t], true)
    };
    let w = *chain.last().unwrap();
    let before = average_pair(&mut state.x, s, w, cfg.step_size);

    let relays = &chain[..chain.len() - 1];
    let mut misses = Vec::new();
    let mut reliable: Vec<usize> = Vec::with_capacity(chain.len());
    reliable.push(w);
    reliable.extend_from_slice(relays);
    broadcast(g, state, cfg, s, &reliable, &mut misses);
    reliable[0] = s;
    broadcast(g, state, cfg, w, &reliable, &mut misses);

    let tx_used = cfg.gge_tx_cost(chain.len());
    state.k += 1;
    state.tx += tx_used;

    let mut full_chain = Vec::with_capacity(chain.len() + 1);
    full_chain.push(s);
    full_chain.extend(chain);
    StepReport {
        s,
        partner: w,
        chain: full_chain,
        tx_used,
        misses,
        was_init_step,
        before,
    }
}

/// `from` broadcasts its current value. Nodes in `reliable` (the other
/// endpoint and relays that carried the exchange) always receive it; every
/// other neighbor receives it with probability `1 - p`.
fn broadcast(
    g: &Graph,
    state: &mut GossipState,
    cfg: &EngineConfig,
    from: usize,
    reliable: &[usize],
    misses: &mut Vec<(usize, usize)>,
) {
    let value = state.x[from];
    let p = cfg.miss_prob;
    for &r in g.neighbors(from) {
        let received = reliable.contains(&r) || p == 0.0 || state.rng.random::<f64>() >= p;
        if received {
            state.set_cache(g, r, from, value);
        } else {
            misses.push((from, r));
        }
    }
}

fn sq(v: f64) -> f64 {
    v * v
}
