//! Pairwise neighborhood overlap: co-citation and inverse-log-weighted
//! similarity. Per-target results are means over all other nodes.

use alloc::vec::Vec;

use super::{resolve_nodes, NodeMap};
use crate::error::MetricError;
use crate::graph::{Mode, NodeId, Snapshot};

/// Number of nodes that follow both `u` and `v`.
pub fn cocitation_pair(s: &Snapshot, u: NodeId, v: NodeId) -> Result<usize, MetricError> {
    let idx = resolve_nodes(s, &[u, v])?;
    Ok(super::structure::sorted_intersection_len(s.in_neighbors(idx[0]), s.in_neighbors(idx[1])))
}

/// Mean co-citation of node `u` with every other node.
pub(crate) fn cocitation_mean_of(s: &Snapshot, u: usize) -> f64 {
    let n = s.node_count();
    if n < 2 {
        return 0.0;
    }
    // each citer w of u co-cites u with every other node it follows
    let total: usize = s.in_neighbors(u).iter().map(|&w| s.out_neighbors(w).len() - 1).sum();
    total as f64 / (n - 1) as f64
}

/// Mean co-citation score of each target with all other nodes.
pub fn cocitation(s: &Snapshot, targets: &[NodeId]) -> Result<NodeMap, MetricError> {
    let idx = resolve_nodes(s, targets)?;
    Ok(NodeMap::from_entries(idx.iter().map(|&u| (s.id(u), cocitation_mean_of(s, u))).collect()))
}

#[inline]
fn inverse_log_weight(s: &Snapshot, w: usize) -> f64 {
    1.0 / libm::log(s.total_degree(w) as f64)
}

/// Sum of `1 / ln(total degree)` over the common `mode`-neighbors of `u` and `v`.
pub fn silw_pair(s: &Snapshot, u: NodeId, v: NodeId, mode: Mode) -> Result<f64, MetricError> {
    let idx = resolve_nodes(s, &[u, v])?;
    if idx[0] == idx[1] {
        return Err(MetricError::InvalidParameter("similarity needs two distinct nodes"));
    }
    let (a, b) = (s.neighbors(idx[0], mode), s.neighbors(idx[1], mode));
    let mut sum = 0.0;
    for &w in a {
        if b.binary_search(&w).is_ok() {
            sum += inverse_log_weight(s, w);
        }
    }
    Ok(sum)
}

/// Mean similarity of `u` with every other node.
///
/// Each common neighbor `w` of `u` and `v` contributes `1 / ln(totaldeg(w))`.
/// Summing over `v` means visiting every `w` adjacent to `u` and counting the
/// other nodes that have `w` as a `mode`-neighbor.
pub(crate) fn silw_mean_of(s: &Snapshot, u: usize, mode: Mode) -> f64 {
    let n = s.node_count();
    if n < 2 {
        return 0.0;
    }
    let back = mode.reverse();
    let mut total = 0.0;
    for &w in s.neighbors(u, mode) {
        let others = s.neighbors(w, back).len() - 1;
        if others > 0 {
            total += others as f64 * inverse_log_weight(s, w);
        }
    }
    total / (n - 1) as f64
}

pub fn silw(s: &Snapshot, targets: &[NodeId], mode: Mode) -> Result<NodeMap, MetricError> {
    let idx: Vec<usize> = resolve_nodes(s, targets)?;
    Ok(NodeMap::from_entries(idx.iter().map(|&u| (s.id(u), silw_mean_of(s, u, mode))).collect()))
}
