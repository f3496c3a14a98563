//! Power-iteration centralities: PageRank, HITS and eigenvector centrality.
//! All iterate until the L1 change drops below the tolerance, or fail after
//! 10 000 iterations.

use alloc::vec::Vec;

use super::{l1_distance, NodeMap, MAX_POWER_ITERATIONS};
use crate::error::MetricError;
use crate::graph::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankOptions {
    pub damping: f64,
    pub tol: f64,
    /// Multiply scores by `|V|` so that the average score is 1.
    pub scale_by_node_count: bool,
}

impl Default for PageRankOptions {
    fn default() -> Self {
        PageRankOptions { damping: 0.85, tol: 1e-10, scale_by_node_count: false }
    }
}

/// PageRank with uniform teleportation; dangling nodes spread their mass
/// uniformly. Scores sum to 1 unless `scale_by_node_count` is set.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn pagerank(s: &Snapshot, opts: PageRankOptions) -> Result<NodeMap, MetricError> {
    if !(opts.damping > 0.0 && opts.damping < 1.0) {
        return Err(MetricError::InvalidParameter("damping must lie in (0, 1)"));
    }
    if !(opts.tol > 0.0) {
        return Err(MetricError::InvalidParameter("tolerance must be positive"));
    }
    let n = s.node_count();
    if n == 0 {
        return Err(MetricError::EmptyGraph);
    }
    let nf = n as f64;
    let d = opts.damping;
    let mut rank = alloc::vec![1.0 / nf; n];
    let mut next = alloc::vec![0.0; n];
    let mut share = alloc::vec![0.0; n];

    let mut residual = f64::INFINITY;
    for _ in 0..MAX_POWER_ITERATIONS {
        let mut dangling = 0.0;
        for v in 0..n {
            let out = s.out_neighbors(v).len();
            if out == 0 {
                dangling += rank[v];
                share[v] = 0.0;
            } else {
                share[v] = rank[v] / out as f64;
            }
        }
        let base = (1.0 - d) / nf + d * dangling / nf;
        for v in 0..n {
            let inflow: f64 = s.in_neighbors(v).iter().map(|&u| share[u]).sum();
            next[v] = base + d * inflow;
        }
        residual = l1_distance(&next, &rank);
        core::mem::swap(&mut rank, &mut next);
        if residual < opts.tol {
            let total: f64 = rank.iter().sum();
            let scale = if opts.scale_by_node_count { nf } else { 1.0 };
            for r in &mut rank {
                *r = *r / total * scale;
            }
            return Ok(NodeMap::from_dense(s, &rank));
        }
    }
    Err(MetricError::NotConverged { iterations: MAX_POWER_ITERATIONS, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HitsScores {
    pub hub: NodeMap,
    pub authority: NodeMap,
}

fn normalize_max(v: &mut [f64]) -> bool {
    let max = v.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return false;
    }
    for x in v.iter_mut() {
        *x /= max;
    }
    true
}

/// Kleinberg hub and authority scores, each max-normalized to 1.
pub fn hits_scores(s: &Snapshot, tol: f64) -> Result<HitsScores, MetricError> {
    if s.edge_count() == 0 {
        return Err(MetricError::NoEdges);
    }
    let n = s.node_count();
    let mut hub = alloc::vec![1.0; n];
    let mut auth = alloc::vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_POWER_ITERATIONS {
        let mut new_auth: Vec<f64> = (0..n).map(|v| s.in_neighbors(v).iter().map(|&u| hub[u]).sum()).collect();
        normalize_max(&mut new_auth);
        let mut new_hub: Vec<f64> = (0..n).map(|v| s.out_neighbors(v).iter().map(|&u| new_auth[u]).sum()).collect();
        normalize_max(&mut new_hub);
        residual = l1_distance(&new_hub, &hub) + l1_distance(&new_auth, &auth);
        hub = new_hub;
        auth = new_auth;
        if residual < tol {
            return Ok(HitsScores { hub: NodeMap::from_dense(s, &hub), authority: NodeMap::from_dense(s, &auth) });
        }
    }
    Err(MetricError::NotConverged { iterations: MAX_POWER_ITERATIONS, residual })
}

/// Principal eigenvector of the undirected projection's adjacency matrix,
/// max-normalized to 1.
///
/// Iterates with `A + I`, which has the same eigenvectors but no eigenvalue
/// of equal magnitude and opposite sign, so bipartite graphs converge too.
pub fn eigenvector_centrality(s: &Snapshot, tol: f64) -> Result<NodeMap, MetricError> {
    if s.edge_count() == 0 {
        return Err(MetricError::NoEdges);
    }
    let n = s.node_count();
    let mut x = alloc::vec![1.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_POWER_ITERATIONS {
        let mut next: Vec<f64> = (0..n)
            .map(|v| x[v] + s.undirected_neighbors(v).iter().map(|&u| x[u]).sum::<f64>())
            .collect();
        normalize_max(&mut next);
        residual = l1_distance(&next, &x);
        x = next;
        if residual < tol {
            return Ok(NodeMap::from_dense(s, &x));
        }
    }
    Err(MetricError::NotConverged { iterations: MAX_POWER_ITERATIONS, residual })
}
