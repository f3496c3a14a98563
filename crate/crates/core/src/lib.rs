//! Temporal follow-graph reconstruction and analysis.
//!
//! Follower lists become a time-ordered edge list ([`inference`]), prefixes
//! of which are frozen into CSR [`Snapshot`]s. The [`metrics`] module
//! computes 24 graph metrics on a snapshot; [`estimation`] wraps the costly
//! ones in budgeted random-node, random-subgraph and cutoff samplers, and
//! [`timeline`] runs them over cumulative eras.
//!
//! The crate is `no_std` and needs only `alloc`. Parallel executors, clocks
//! and file formats live in the `tempograph` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod components;
pub mod error;
pub mod estimation;
pub mod fixtures;
pub mod graph;
pub mod inference;
pub mod metrics;
pub mod synth;
pub mod timeline;

pub use error::{EstimationError, GraphError, InferenceError, MetricError, SynthError, TimelineError};
pub use graph::{build_snapshot, IngestStats, Mode, NodeId, Snapshot, TemporalEdgeList, TimedEdge};
pub use inference::{CreationIndex, FollowerList, TimeUnit};
pub use metrics::registry::{MetricName, MetricParams, Strategy};
pub use metrics::{MetricValue, NodeMap};
