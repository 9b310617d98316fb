//! Biased and time-biased random walks on finite graphs.
//!
//! At every step of an ε-biased walk a coin with bias ε decides whether a
//! controller picks the next vertex or the walk takes a uniform step. This
//! crate computes optimal controller strategies exactly (trajectory events,
//! hitting, return and cover times, stationary mass), audits the known
//! inequalities relating biased and unbiased walks, builds the directed
//! gadgets used in hardness reductions for the cover-time problem and
//! simulates all walk variants from seeded substreams.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and parallel estimation live in the `biaswalk` crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod bias;
pub mod chain;
mod error;
pub mod gadget;
pub mod graph;
pub(crate) mod linalg;
pub(crate) mod math;
pub mod rng;
pub mod sim;
pub mod strategy;

pub use error::{Error, Result};
pub use graph::{Connectivity, DegreeStats, Graph, VertexSet};
