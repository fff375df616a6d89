use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, EngineConfig, InitMode};
use crate::error::{Error, Result};
use crate::topology::Graph;

/// Live protocol state of one trial.
#[derive(Debug, Clone)]
pub struct GossipState {
    pub(super) x: Vec<f64>,
    /// `cache[i][slot]` is node `i`'s last received value of `neighbors(i)[slot]`.
    pub(super) cache: Vec<Vec<Option<f64>>>,
    pub(super) unheard: Vec<usize>,
    pub(super) k: u64,
    pub(super) tx: u64,
    pub(super) rng: ChaCha8Rng,
}

impl GossipState {
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Iterations completed.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Cumulative transmissions, including any initialization overhead.
    pub fn tx(&self) -> u64 {
        self.tx
    }

    /// Node `i`'s cached value of neighbor `j`; `None` if `i` has not heard
    /// from `j` or `j` is not a neighbor.
    pub fn cached(&self, g: &Graph, i: usize, j: usize) -> Option<f64> {
        g.neighbor_slot(i, j).and_then(|slot| self.cache[i][slot])
    }

    /// Neighbors that `i` has received at least one broadcast from.
    pub fn heard(&self, g: &Graph, i: usize) -> Vec<usize> {
        g.neighbors(i)
            .iter()
            .zip(&self.cache[i])
            .filter(|(_, c)| c.is_some())
            .map(|(&j, _)| j)
            .collect()
    }

    /// True once `i` has heard from every neighbor.
    pub fn is_initialized(&self, i: usize) -> bool {
        self.unheard[i] == 0
    }

    pub(super) fn set_cache(&mut self, g: &Graph, i: usize, j: usize, value: f64) {
        let slot = g.neighbor_slot(i, j).expect("cache update for a non-neighbor");
        let entry = &mut self.cache[i][slot];
        if entry.is_none() {
            self.unheard[i] -= 1;
        }
        *entry = Some(value);
    }
}

/// Initial state for a trial. `seed` drives every random choice of the trial.
pub fn init_state(g: &Graph, x0: &[f64], cfg: &EngineConfig, seed: u64) -> Result<GossipState> {
    cfg.validate()?;
    let n = g.n();
    if x0.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: x0.len(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("gossip needs at least two nodes".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if cfg.algorithm == Algorithm::Geographic && g.locations().is_none() {
        return Err(Error::MissingLocations);
    }

    let prefill = matches!(cfg.init_mode, InitMode::Ideal | InitMode::Broadcast);
    let cache = (0..n)
        .map(|i| g.neighbors(i).iter().map(|&j| prefill.then_some(x0[j])).collect())
        .collect();
    let unheard = (0..n).map(|i| if prefill { 0 } else { g.degree(i) }).collect();
    let tx = if cfg.init_mode == InitMode::Broadcast {
        n as u64
    } else {
        0
    };
    Ok(GossipState {
        x: x0.to_vec(),
        cache,
        unheard,
        k: 0,
        tx,
        rng: ChaCha8Rng::seed_from_u64(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::generate_rgg;

    #[test]
    fn ideal_mode_prefills() {
        let g = Graph::path(3);
        let cfg = EngineConfig::gge().with_init(InitMode::Ideal);
        let st = init_state(&g, &[1.0, 2.0, 3.0], &cfg, 0).unwrap();
        assert_eq!(st.cached(&g, 1, 0), Some(1.0));
        assert_eq!(st.cached(&g, 1, 2), Some(3.0));
        assert_eq!(st.cached(&g, 0, 2), None);
        assert_eq!(st.tx(), 0);
        assert!((0..3).all(|i| st.is_initialized(i)));
    }

    #[test]
    fn broadcast_mode_charges_n() {
        let g = generate_rgg(200, 1).unwrap();
        let cfg = EngineConfig::gge().with_init(InitMode::Broadcast);
        let st = init_state(&g, &vec![0.0; 200], &cfg, 0).unwrap();
        assert_eq!(st.tx(), 200);
        assert!(st.is_initialized(17));
    }

    #[test]
    fn proposed_mode_starts_empty() {
        let g = generate_rgg(30, 1).unwrap();
        let st = init_state(&g, &vec![0.0; 30], &EngineConfig::gge(), 0).unwrap();
        assert!((0..30).all(|i| st.heard(&g, i).is_empty()));
        assert_eq!(st.tx(), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Graph::path(3);
        let cfg = EngineConfig::gge();
        assert!(matches!(
            init_state(&g, &[0.0; 2], &cfg, 0),
            Err(Error::LengthMismatch { expected: 3, actual: 2 })
        ));
        let bad = EngineConfig::gge().with_miss_prob(1.0);
        assert!(init_state(&g, &[0.0; 3], &bad, 0).is_err());
        assert!(matches!(
            init_state(&g, &[0.0; 3], &EngineConfig::geographic(), 0),
            Err(Error::MissingLocations)
        ));
        let split = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(
            init_state(&split, &[0.0; 3], &cfg, 0),
            Err(Error::Disconnected)
        ));
    }
}
