//! Experiment orchestration: configs, seeds, the six commands and their
//! CSV outputs.
//!
//! Every random stream is derived from the base seed and a fixed set of
//! labels, so the same config and seed reproduce every output byte:
//!
//! - graph `g` at size `m`: `derive(base, [tag("graph"), m, g])`
//! - its initial field: `derive(base, [tag("field"), m, g])`
//! - run `r` of an algorithm: `derive(base, [tag("run"), m, g, r, tag(kind)])`
//!
//! Run streams are keyed by algorithm kind rather than by position in the
//! list, so adding an algorithm leaves the others untouched and variants of
//! one kind (hops, miss probability, init mode) see the same initiator draws.

mod commands;
mod config;
mod table;

pub use commands::{
    cmd_bounds, cmd_multihop, cmd_run, cmd_stale, cmd_sweep, cmd_topology, graph_seed, make_field, make_graph,
    multihop_algorithms, run_experiment, run_seed, stale_algorithms, sweep_table, SweepRow, SWEEP_HEADER,
};
pub use config::{AlgorithmEntry, ExperimentConfig, TopologyKind, TopologySpec};
pub use table::{aggregate_csv, tx_to_reach, AggregateRow, RawRow, ResultTable, AGGREGATE_HEADER, RAW_HEADER};
