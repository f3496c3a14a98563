//! Exact graph metrics. Every function is a pure function of a [`Snapshot`]
//! and its parameters.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::graph::{NodeId, Snapshot};

mod centrality;
mod degree;
mod motifs;
mod paths;
pub mod registry;
mod similarity;
mod structure;

pub use centrality::{eigenvector_centrality, hits_scores, pagerank, HitsScores, PageRankOptions};
pub use degree::{assortativity_degree, degree_stats, density, knn_average_degree, neighborhood_size, strength, DegreeStats};
pub use motifs::motifs_randesu;
pub use paths::{
    avg_shortest_path, betweenness, betweenness_with_saturation, closeness, closeness_of, diameter,
    eccentricity_radius, Bfs, Eccentricity, PathSummary,
};
pub use similarity::{cocitation, cocitation_pair, silw, silw_pair};
pub use structure::{coreness, edge_connectivity, local_clustering, max_clique, transitivity, Transitivity};

pub(crate) const MAX_POWER_ITERATIONS: usize = 10_000;

/// Per-node values keyed by [`NodeId`], in ascending id order. Nodes a
/// metric leaves undefined are absent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeMap {
    entries: Vec<(NodeId, f64)>,
}

impl NodeMap {
    pub(crate) fn from_dense(s: &Snapshot, values: &[f64]) -> Self {
        NodeMap { entries: s.ids().iter().copied().zip(values.iter().copied()).collect() }
    }

    pub(crate) fn from_dense_opt(s: &Snapshot, values: &[Option<f64>]) -> Self {
        NodeMap {
            entries: s
                .ids()
                .iter()
                .zip(values)
                .filter_map(|(&id, v)| v.map(|v| (id, v)))
                .collect(),
        }
    }

    pub fn from_entries(mut entries: Vec<(NodeId, f64)>) -> Self {
        entries.sort_by_key(|e| e.0);
        NodeMap { entries }
    }

    pub fn get(&self, id: NodeId) -> Option<f64> {
        self.entries.binary_search_by_key(&id, |e| e.0).ok().map(|i| self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.1)
    }

    /// Arithmetic mean in id order; `None` when empty.
    pub fn mean(&self) -> Option<f64> {
        if self.entries.is_empty() {
            None
        } else {
            Some(self.values().sum::<f64>() / self.entries.len() as f64)
        }
    }
}

/// The result of evaluating one metric.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricValue {
    Scalar(f64),
    PerNode(NodeMap),
    Histogram(BTreeMap<u64, u64>),
}

impl MetricValue {
    /// Single number reported for an era: the scalar itself, the mean of a
    /// per-node map, or the count-weighted mean of a histogram.
    pub fn summary(&self) -> Option<f64> {
        match self {
            MetricValue::Scalar(v) => Some(*v),
            MetricValue::PerNode(m) => m.mean(),
            MetricValue::Histogram(h) => {
                let total: u64 = h.values().sum();
                if total == 0 {
                    return None;
                }
                let weighted: f64 = h.iter().map(|(&k, &c)| k as f64 * c as f64).sum();
                Some(weighted / total as f64)
            }
        }
    }

    /// Number of values summarized (nodes, histogram mass, or 1).
    pub fn count(&self) -> usize {
        match self {
            MetricValue::Scalar(_) => 1,
            MetricValue::PerNode(m) => m.len(),
            MetricValue::Histogram(h) => h.values().sum::<u64>() as usize,
        }
    }
}

pub(crate) fn resolve_nodes(s: &Snapshot, ids: &[NodeId]) -> Result<Vec<usize>, crate::error::MetricError> {
    ids.iter()
        .map(|&id| s.index_of(id).ok_or(crate::error::MetricError::UnknownNode(id)))
        .collect()
}

#[inline]
pub(crate) fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| libm::fabs(x - y)).sum()
}
