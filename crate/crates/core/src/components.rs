//! Weak connectivity: a size-tracking union-find for streaming edges and a
//! BFS reference used on snapshots.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::GraphError;
use crate::graph::{Mode, NodeId, Snapshot, TemporalEdgeList};

/// Disjoint sets with union by size and path halving.
#[derive(Debug, Clone, Default)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: alloc::vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the size of the merged set.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return self.size[ra];
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.size[ra]
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// Fraction of nodes seen so far that belong to the largest weakly
/// connected component, after each checkpoint (a count of processed edges).
///
/// Checkpoint 0 reports 0.0 since no node has been seen yet.
pub fn largest_component_ratio_series(
    edges: &TemporalEdgeList,
    checkpoints: &[usize],
) -> Result<Vec<(usize, f64)>, GraphError> {
    let edge_count = edges.edge_count();
    let mut prev = 0;
    for &c in checkpoints {
        if c > edge_count || c < prev {
            return Err(GraphError::BadCheckpoint { checkpoint: c, edge_count });
        }
        prev = c;
    }
    if checkpoints.is_empty() {
        return Ok(Vec::new());
    }

    let mut ids: Vec<NodeId> = edges.edges().iter().flat_map(|e| [e.src, e.dst]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index = |id: NodeId| ids.binary_search(&id).expect("endpoint registered");

    let mut uf = UnionFind::new(ids.len());
    let mut seen = alloc::vec![false; ids.len()];
    let mut seen_count = 0usize;
    let mut largest = 0usize;

    let mut out = Vec::with_capacity(checkpoints.len());
    let mut processed = 0usize;
    for &c in checkpoints {
        while processed < c {
            let e = &edges.edges()[processed];
            let (a, b) = (index(e.src), index(e.dst));
            for v in [a, b] {
                if !seen[v] {
                    seen[v] = true;
                    seen_count += 1;
                }
            }
            largest = largest.max(uf.union(a, b));
            processed += 1;
        }
        let ratio = if seen_count == 0 { 0.0 } else { largest as f64 / seen_count as f64 };
        out.push((c, ratio));
    }
    Ok(out)
}

/// Weakly connected component sizes of a snapshot, largest first.
pub fn weak_component_sizes(s: &Snapshot) -> Vec<usize> {
    let n = s.node_count();
    let mut seen = alloc::vec![false; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &u in s.neighbors(v, Mode::All) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn is_weakly_connected(s: &Snapshot) -> bool {
    weak_component_sizes(s).len() <= 1
}

/// True when every node reaches every other along edge directions.
pub fn is_strongly_connected(s: &Snapshot) -> bool {
    let n = s.node_count();
    if n <= 1 {
        return true;
    }
    let reaches_all = |mode: Mode| {
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in s.neighbors(v, mode) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    };
    reaches_all(Mode::Out) && reaches_all(Mode::In)
}
