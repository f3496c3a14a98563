use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate edge sequence number {0}")]
    DuplicateSeq(u64),
    #[error("checkpoints must be ascending and at most the edge count ({edge_count}); got {checkpoint}")]
    BadCheckpoint { checkpoint: usize, edge_count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("no creation time for id {0}")]
    MissingCreationTime(NodeId),
    #[error("duplicate follower id {follower} in the list of {target}")]
    DuplicateFollower { target: NodeId, follower: NodeId },
    #[error("{0} appears in its own follower list")]
    SelfFollow(NodeId),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("empty graph")]
    EmptyGraph,
    #[error("graph needs at least {0} nodes")]
    TooFewNodes(usize),
    #[error("graph has no edges")]
    NoEdges,
    #[error("undefined ({0})")]
    Undefined(&'static str),
    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("node {0} is not in the snapshot")]
    UnknownNode(NodeId),
    #[error("expected {expected} edge weights, got {got}")]
    WeightsMismatch { expected: usize, got: usize },
    #[error("graph not connected; extract largest component first")]
    NotConnected,
    #[error("metric {0} does not support this evaluation strategy")]
    UnsupportedStrategy(&'static str),
}

impl MetricError {
    /// Errors that mean "no value here" rather than a failure; samplers skip
    /// them.
    pub fn is_undefined(&self) -> bool {
        matches!(
            self,
            MetricError::Undefined(_)
                | MetricError::EmptyGraph
                | MetricError::NoEdges
                | MetricError::TooFewNodes(_)
                | MetricError::NotConnected
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimationError {
    #[error("invalid estimation config: {0}")]
    InvalidConfig(&'static str),
    #[error("need at least {needed} finite values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("non-finite sample value")]
    NonFinite,
    #[error("metric failed on node {node}: {source}")]
    NodeMetric { node: NodeId, source: MetricError },
    #[error("metric failed: {0}")]
    Metric(#[from] MetricError),
    #[error("snapshot has {nodes} nodes, fewer than required {required}")]
    GraphTooSmall { nodes: usize, required: usize },
    #[error("no valid samples were obtained")]
    NoValidSamples,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimelineError {
    #[error("calendar granularity requires epoch-second timestamps")]
    CalendarRequired,
    #[error("empty era range")]
    EmptyRange,
    #[error("edge-count granularity needs k >= 1")]
    ZeroStep,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(&'static str),
}
