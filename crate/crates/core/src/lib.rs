//! Fully dynamic maximum and approximate matching: a dynamic graph, a
//! matching with undo, a blossom search engine, six dynamic matchers, update
//! sequence tooling and an experiment harness.

pub mod baselines;
pub mod bench;
pub mod bgs;
pub mod blossom;
pub mod dyn_blossom;
pub mod graph;
pub mod matcher;
pub mod matching;
pub mod neiman_solomon;
pub mod oracle;
pub mod protocol;
pub mod random_walk;
pub mod workload;

pub use graph::{DynamicGraph, GraphError, VertexId};
pub use matcher::{check_guarantee, AuditError, DynamicMatcher, Guarantee};
pub use matching::Matching;
pub use workload::{OpKind, UpdateOp, UpdateSequence};
