//! Experiment configuration.
//!
//! Configs are TOML files. Top-level keys set the experiment protocol,
//! `[topology]`, `[field]` and `[optimizer]` describe the inputs, and each
//! `[[algorithm]]` table adds one algorithm to compare. Unknown keys are
//! rejected. See `configs/` in the repository for complete examples.
//!
//! ```toml
//! seed = 1
//! output = "out/run"
//! budget = 60000        # transmissions per run
//! runs = 100            # runs per graph
//! epsilon = 0.01
//! bucket = 100          # tx bucket width for the output tables
//! miss_probs = [0.1, 0.2, 0.3, 0.5]   # stale command only
//!
//! [topology]
//! kind = "rgg"          # or "grid" (then `side` instead of `n`)
//! n = 200
//! graphs = 10
//! sizes = [25, 50, 100] # sweep command only
//!
//! [field]
//! kind = "gaussian_bumps"   # linear | spike | iid_gaussian
//!
//! [optimizer]
//! restarts = 50
//! iters = 5000
//!
//! [[algorithm]]
//! name = "gge"
//! kind = "gge"          # rg | gge | geographic
//! hops = 1
//! miss_prob = 0.0
//! init = "proposed"     # broadcast | ideal
//! tx_mode = "three"     # two
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::AOptions;
use crate::engine::{Algorithm, EngineConfig, InitMode, TxMode};
use crate::error::{Error, Result};
use crate::fields::{default_bumps, Bump, FieldKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Rgg,
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologySpec {
    pub kind: TopologyKind,
    /// Node count for RGGs, side length for grids.
    pub size: usize,
    pub graphs: usize,
    /// Sizes visited by the sweep command.
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmEntry {
    pub name: String,
    pub engine: EngineConfig,
}

impl AlgorithmEntry {
    pub fn new(name: impl Into<String>, engine: EngineConfig) -> Self {
        AlgorithmEntry {
            name: name.into(),
            engine,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output: PathBuf,
    pub budget: u64,
    pub runs: usize,
    pub epsilon: f64,
    pub bucket: u64,
    pub topology: TopologySpec,
    pub field: FieldKind,
    pub algorithms: Vec<AlgorithmEntry>,
    pub miss_probs: Vec<f64>,
    pub optimizer: AOptions,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    output: Option<String>,
    budget: Option<i64>,
    runs: Option<i64>,
    epsilon: Option<f64>,
    bucket: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    miss_probs: Option<Vec<f64>>,
    topology: Option<RawTopology>,
    field: Option<RawField>,
    optimizer: Option<RawOptimizer>,
    #[serde(default)]
    algorithm: Vec<RawAlgorithm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTopology {
    kind: TopologyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<i64>,
    graphs: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sizes: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bumps: Option<Vec<Bump>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptimizer {
    restarts: Option<i64>,
    iters: Option<i64>,
    coarse_step: Option<f64>,
    fine_step: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgorithm {
    name: Option<String>,
    kind: Algorithm,
    hops: Option<i64>,
    miss_prob: Option<f64>,
    init: Option<InitMode>,
    tx_mode: Option<TxMode>,
    step_size: Option<f64>,
}

fn positive(what: &str, v: i64) -> Result<u64> {
    if v <= 0 {
        return Err(Error::Config(format!("{what} must be positive, got {v}")));
    }
    Ok(v as u64)
}

impl ExperimentConfig {
    /// Read and validate a config file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| e.context(path.display().to_string()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let topo = raw
            .topology
            .ok_or_else(|| Error::Config("missing [topology] section".into()))?;
        let size = match (topo.kind, topo.n, topo.side) {
            (TopologyKind::Rgg, Some(n), None) => {
                let n = positive("topology.n", n)? as usize;
                if n < 2 {
                    return Err(Error::Config("topology.n must be at least 2".into()));
                }
                n
            }
            (TopologyKind::Grid, None, Some(side)) => {
                let side = positive("topology.side", side)? as usize;
                if side < 2 {
                    return Err(Error::Config("topology.side must be at least 2".into()));
                }
                side
            }
            (TopologyKind::Rgg, _, _) => return Err(Error::Config("rgg topology takes `n` (and not `side`)".into())),
            (TopologyKind::Grid, _, _) => return Err(Error::Config("grid topology takes `side` (and not `n`)".into())),
        };
        let sizes = topo
            .sizes
            .unwrap_or_default()
            .into_iter()
            .map(|s| positive("topology.sizes entry", s).map(|v| v as usize))
            .collect::<Result<Vec<_>>>()?;
        if sizes.iter().any(|&s| s < 2) {
            return Err(Error::Config("topology.sizes entries must be at least 2".into()));
        }
        let topology = TopologySpec {
            kind: topo.kind,
            size,
            graphs: positive("topology.graphs", topo.graphs.unwrap_or(1))? as usize,
            sizes,
        };

        let field = match raw.field {
            None => FieldKind::GaussianBumps(default_bumps()),
            Some(f) => match (f.kind.as_str(), f.bumps) {
                ("gaussian_bumps", bumps) => FieldKind::GaussianBumps(bumps.unwrap_or_else(default_bumps)),
                ("linear", None) => FieldKind::Linear,
                ("spike", None) => FieldKind::Spike,
                ("iid_gaussian", None) => FieldKind::IidGaussian,
                (k, Some(_)) if ["linear", "spike", "iid_gaussian"].contains(&k) => {
                    return Err(Error::Config(format!("field kind `{k}` takes no bumps")))
                }
                (k, _) => return Err(Error::Config(format!("unknown field kind `{k}`"))),
            },
        };
        crate::fields::FieldSpec::new(field.clone(), 0)
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;

        let mut algorithms = Vec::with_capacity(raw.algorithm.len());
        for (idx, a) in raw.algorithm.into_iter().enumerate() {
            let defaults = EngineConfig::default();
            let engine = EngineConfig {
                algorithm: a.kind,
                hops: positive(&format!("algorithm[{idx}].hops"), a.hops.unwrap_or(1))? as usize,
                miss_prob: a.miss_prob.unwrap_or(defaults.miss_prob),
                init_mode: a.init.unwrap_or(defaults.init_mode),
                tx_mode: a.tx_mode.unwrap_or(defaults.tx_mode),
                step_size: a.step_size.unwrap_or(defaults.step_size),
            };
            engine
                .validate()
                .map_err(|e| Error::Config(format!("algorithm[{idx}]: {e}")))?;
            let name = a.name.unwrap_or_else(|| a.kind.name().to_string());
            if name.is_empty() || name.contains([',', '\n', '"']) {
                return Err(Error::Config(format!("algorithm[{idx}]: invalid name `{name}`")));
            }
            algorithms.push(AlgorithmEntry { name, engine });
        }
        if algorithms.is_empty() {
            return Err(Error::Config("at least one [[algorithm]] is required".into()));
        }
        let mut names: Vec<&str> = algorithms.iter().map(|a| a.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("algorithm names must be unique".into()));
        }

        let epsilon = raw.epsilon.unwrap_or(0.01);
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!("epsilon must be in (0, 1), got {epsilon}")));
        }
        let miss_probs = raw.miss_probs.unwrap_or_default();
        if let Some(p) = miss_probs.iter().find(|p| !(0.0..1.0).contains(*p)) {
            return Err(Error::Config(format!("miss_probs entries must be in [0, 1), got {p}")));
        }

        let defaults = AOptions::default();
        let optimizer = match raw.optimizer {
            None => defaults,
            Some(o) => AOptions {
                restarts: positive("optimizer.restarts", o.restarts.unwrap_or(defaults.restarts as i64))? as usize,
                iters: positive("optimizer.iters", o.iters.unwrap_or(defaults.iters as i64))? as usize,
                coarse_step: o.coarse_step.unwrap_or(defaults.coarse_step),
                fine_step: o.fine_step.unwrap_or(defaults.fine_step),
            },
        };
        if !(optimizer.coarse_step > 0.0 && optimizer.fine_step > 0.0) {
            return Err(Error::Config("optimizer steps must be positive".into()));
        }

        Ok(ExperimentConfig {
            seed: raw.seed.unwrap_or(0),
            output: PathBuf::from(raw.output.unwrap_or_else(|| "out".into())),
            budget: positive("budget", raw.budget.unwrap_or(100_000))?,
            runs: positive("runs", raw.runs.unwrap_or(1))? as usize,
            epsilon,
            bucket: positive("bucket", raw.bucket.unwrap_or(100))?,
            topology,
            field,
            algorithms,
            miss_probs,
            optimizer,
        })
    }

    /// Canonical TOML form with every default spelled out.
    pub fn to_toml(&self) -> String {
        let (n, side) = match self.topology.kind {
            TopologyKind::Rgg => (Some(self.topology.size as i64), None),
            TopologyKind::Grid => (None, Some(self.topology.size as i64)),
        };
        let field = match &self.field {
            FieldKind::GaussianBumps(b) => RawField {
                kind: "gaussian_bumps".into(),
                bumps: Some(b.clone()),
            },
            other => RawField {
                kind: other.name().into(),
                bumps: None,
            },
        };
        let raw = RawConfig {
            seed: Some(self.seed),
            output: Some(self.output.display().to_string()),
            budget: Some(self.budget as i64),
            runs: Some(self.runs as i64),
            epsilon: Some(self.epsilon),
            bucket: Some(self.bucket as i64),
            miss_probs: (!self.miss_probs.is_empty()).then(|| self.miss_probs.clone()),
            topology: Some(RawTopology {
                kind: self.topology.kind,
                n,
                side,
                graphs: Some(self.topology.graphs as i64),
                sizes: (!self.topology.sizes.is_empty())
                    .then(|| self.topology.sizes.iter().map(|&s| s as i64).collect()),
            }),
            field: Some(field),
            optimizer: Some(RawOptimizer {
                restarts: Some(self.optimizer.restarts as i64),
                iters: Some(self.optimizer.iters as i64),
                coarse_step: Some(self.optimizer.coarse_step),
                fine_step: Some(self.optimizer.fine_step),
            }),
            algorithm: self
                .algorithms
                .iter()
                .map(|a| RawAlgorithm {
                    name: Some(a.name.clone()),
                    kind: a.engine.algorithm,
                    hops: Some(a.engine.hops as i64),
                    miss_prob: Some(a.engine.miss_prob),
                    init: Some(a.engine.init_mode),
                    tx_mode: Some(a.engine.tx_mode),
                    step_size: Some(a.engine.step_size),
                })
                .collect(),
        };
        toml::to_string(&raw).expect("config serializes")
    }

    /// First GGE entry, or plain GGE with the default settings.
    pub fn base_gge(&self) -> EngineConfig {
        self.algorithms
            .iter()
            .find(|a| a.engine.algorithm == Algorithm::Gge)
            .map(|a| a.engine)
            .unwrap_or_default()
    }
}
