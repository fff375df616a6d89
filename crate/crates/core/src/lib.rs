//! Greedy gossip with eavesdropping (GGE) for distributed averaging in
//! wireless networks, with randomized and geographic gossip baselines and
//! tools for the convergence bounds that compare them.
//!
//! - [`topology`]: random geometric graphs, grids, the expected gossip matrix and its spectrum.
//! - [`fields`]: initial measurement fields.
//! - [`engine`]: the gossip state machine and trial driver.
//! - [`analysis`]: contraction constant, per-iteration gain, averaging-time estimates and bounds.
//! - [`harness`]: configs, seeded experiment orchestration and CSV output.
//!
//! ```
//! use gge::engine::{run_trial, EngineConfig};
//! use gge::fields::{synthesize, FieldSpec};
//! use gge::topology::generate_rgg;
//!
//! let g = generate_rgg(50, 7).unwrap();
//! let x0 = synthesize(&FieldSpec::gaussian_bumps(), &g).unwrap();
//! let trace = run_trial(&g, &x0, &EngineConfig::gge(), 5_000, 1).unwrap();
//! assert!(trace.last().unwrap().rel_err < 0.5);
//! ```

pub mod analysis;
pub mod engine;
pub mod error;
pub mod fields;
pub mod harness;
pub mod seed;
pub mod topology;

pub use error::{Error, Result};
