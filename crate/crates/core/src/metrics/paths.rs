//! Breadth-first distance metrics: betweenness, closeness, eccentricity,
//! diameter and average shortest path. Unreachable pairs are skipped, never
//! treated as infinite.

use alloc::vec::Vec;

use super::{resolve_nodes, NodeMap};
use crate::error::MetricError;
use crate::graph::{Mode, NodeId, Snapshot};

const UNSEEN: u32 = u32::MAX;

/// Reusable BFS buffers. After [`Bfs::run`], `order()` lists the reached
/// nodes in visiting order (source first) and `dist(v)` their hop counts.
#[derive(Debug, Clone)]
pub struct Bfs {
    dist: Vec<u32>,
    order: Vec<usize>,
    truncated: bool,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs { dist: alloc::vec![UNSEEN; n], order: Vec::with_capacity(n), truncated: false }
    }

    /// Explores from `src` following `mode` adjacency, never expanding nodes
    /// at depth `cutoff`.
    pub fn run(&mut self, s: &Snapshot, src: usize, mode: Mode, cutoff: Option<u32>) {
        for &v in &self.order {
            self.dist[v] = UNSEEN;
        }
        self.order.clear();
        self.truncated = false;
        if self.dist.len() < s.node_count() {
            self.dist.resize(s.node_count(), UNSEEN);
        }

        self.dist[src] = 0;
        self.order.push(src);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let d = self.dist[v];
            let at_limit = cutoff.is_some_and(|c| d >= c);
            for &u in s.neighbors(v, mode) {
                if self.dist[u] == UNSEEN {
                    if at_limit {
                        self.truncated = true;
                        break;
                    }
                    self.dist[u] = d + 1;
                    self.order.push(u);
                }
            }
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Hop count from the last source, `None` when not reached.
    pub fn dist(&self, v: usize) -> Option<u32> {
        match self.dist[v] {
            UNSEEN => None,
            d => Some(d),
        }
    }

    /// Whether the last run stopped with nodes left beyond the cutoff.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn distance_sum(&self) -> u64 {
        self.order.iter().map(|&v| self.dist[v] as u64).sum()
    }

    fn max_distance(&self) -> u32 {
        self.order.last().map_or(0, |&v| self.dist[v])
    }
}

/// Brandes betweenness. With a cutoff only shortest paths of length at most
/// `cutoff` contribute. Values are unnormalized; on the undirected view each
/// unordered pair counts once.
pub fn betweenness(s: &Snapshot, cutoff: Option<u32>, directed: bool) -> Result<NodeMap, MetricError> {
    let (values, _) = betweenness_with_saturation(s, cutoff, directed)?;
    Ok(NodeMap::from_dense(s, &values))
}

/// Dense betweenness plus a flag telling whether the cutoff cut nothing off
/// (no node lies beyond it from any source).
pub fn betweenness_with_saturation(
    s: &Snapshot,
    cutoff: Option<u32>,
    directed: bool,
) -> Result<(Vec<f64>, bool), MetricError> {
    if cutoff == Some(0) {
        return Err(MetricError::InvalidParameter("cutoff must be >= 1"));
    }
    let n = s.node_count();
    let undirected = !directed || !s.is_directed();
    let mode = if undirected { Mode::All } else { Mode::Out };
    let back = mode.reverse();

    let mut bc = alloc::vec![0.0f64; n];
    let mut sigma = alloc::vec![0.0f64; n];
    let mut delta = alloc::vec![0.0f64; n];
    let mut bfs = Bfs::new(n);
    let mut saturated = true;

    for src in 0..n {
        bfs.run(s, src, mode, cutoff);
        saturated &= !bfs.truncated();
        for &v in bfs.order() {
            sigma[v] = 0.0;
            delta[v] = 0.0;
        }
        sigma[src] = 1.0;
        for &w in &bfs.order()[1..] {
            let dw = bfs.dist[w];
            let mut paths = 0.0;
            for &v in s.neighbors(w, back) {
                if bfs.dist[v] != UNSEEN && bfs.dist[v] + 1 == dw {
                    paths += sigma[v];
                }
            }
            sigma[w] = paths;
        }
        for &w in bfs.order()[1..].iter().rev() {
            let dw = bfs.dist[w];
            let coeff = (1.0 + delta[w]) / sigma[w];
            for &v in s.neighbors(w, back) {
                if bfs.dist[v] != UNSEEN && bfs.dist[v] + 1 == dw {
                    delta[v] += sigma[v] * coeff;
                }
            }
            bc[w] += delta[w];
        }
    }
    if undirected {
        for x in &mut bc {
            *x /= 2.0;
        }
    }
    Ok((bc, saturated))
}

/// Closeness of one node: `1 / sum of distances` to the nodes it reaches
/// within `cutoff` (all reachable nodes without one); 0 when it reaches
/// nothing. Also returns whether the cutoff hid farther nodes.
pub fn closeness_of(s: &Snapshot, v: usize, cutoff: Option<u32>, mode: Mode, bfs: &mut Bfs) -> (f64, bool) {
    bfs.run(s, v, mode, cutoff);
    let total = bfs.distance_sum();
    let value = if total == 0 { 0.0 } else { 1.0 / total as f64 };
    (value, bfs.truncated())
}

pub fn closeness(s: &Snapshot, cutoff: Option<u32>, mode: Mode) -> Result<NodeMap, MetricError> {
    if cutoff == Some(0) {
        return Err(MetricError::InvalidParameter("cutoff must be >= 1"));
    }
    let mut bfs = Bfs::new(s.node_count());
    let values: Vec<f64> = (0..s.node_count()).map(|v| closeness_of(s, v, cutoff, mode, &mut bfs).0).collect();
    Ok(NodeMap::from_dense(s, &values))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eccentricity {
    pub ecc: NodeMap,
    pub radius: f64,
}

pub(crate) fn eccentricity_of(s: &Snapshot, v: usize, mode: Mode, bfs: &mut Bfs) -> u32 {
    bfs.run(s, v, mode, None);
    bfs.max_distance()
}

/// Eccentricity over reachable nodes (0 for a node reaching nothing) and the
/// radius: the smallest eccentricity among nodes that reach something.
pub fn eccentricity_radius(s: &Snapshot, mode: Mode) -> Result<Eccentricity, MetricError> {
    if s.edge_count() == 0 {
        return Err(MetricError::NoEdges);
    }
    let mut bfs = Bfs::new(s.node_count());
    let ecc: Vec<u32> = (0..s.node_count()).map(|v| eccentricity_of(s, v, mode, &mut bfs)).collect();
    let radius = ecc.iter().copied().filter(|&e| e > 0).min().ok_or(MetricError::NoEdges)?;
    let values: Vec<f64> = ecc.iter().map(|&e| e as f64).collect();
    Ok(Eccentricity { ecc: NodeMap::from_dense(s, &values), radius: radius as f64 })
}

/// Longest finite shortest path.
pub fn diameter(s: &Snapshot, mode: Mode) -> Result<u32, MetricError> {
    if s.edge_count() == 0 {
        return Err(MetricError::NoEdges);
    }
    let mut bfs = Bfs::new(s.node_count());
    Ok((0..s.node_count()).map(|v| eccentricity_of(s, v, mode, &mut bfs)).max().unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSummary {
    /// Mean over all finite source-target distances.
    pub mean: f64,
    /// Finite pairs over all `(source, other node)` pairs.
    pub reachable_fraction: f64,
}

/// Average shortest path from the given sources.
pub fn avg_shortest_path(s: &Snapshot, sources: &[NodeId], mode: Mode) -> Result<PathSummary, MetricError> {
    let sources = resolve_nodes(s, sources)?;
    let n = s.node_count();
    let mut bfs = Bfs::new(n);
    let (mut total, mut pairs) = (0u64, 0u64);
    for &v in &sources {
        bfs.run(s, v, mode, None);
        total += bfs.distance_sum();
        pairs += (bfs.order().len() - 1) as u64;
    }
    if pairs == 0 {
        return Err(MetricError::Undefined("no finite distance"));
    }
    let possible = (sources.len() * (n - 1)) as f64;
    Ok(PathSummary { mean: total as f64 / pairs as f64, reachable_fraction: pairs as f64 / possible })
}

/// Mean distance from `v` to the nodes it reaches; `None` if it reaches none.
pub(crate) fn mean_distance_from(s: &Snapshot, v: usize, mode: Mode, bfs: &mut Bfs) -> Option<f64> {
    bfs.run(s, v, mode, None);
    let reached = bfs.order().len() - 1;
    (reached > 0).then(|| bfs.distance_sum() as f64 / reached as f64)
}
