//! Temporal edge storage and immutable CSR snapshots.
//!
//! A [`TemporalEdgeList`] holds every follow edge once, ordered by its
//! inferred creation time. A [`Snapshot`] is the graph induced by a prefix
//! of that order; all metrics consume snapshots.

use alloc::vec::Vec;
use core::fmt;

use crate::error::GraphError;

/// Account identifier. Ids are ordered by account creation rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

/// A directed follow edge with its lower-bound creation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimedEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub est_time: u64,
    /// Global ingestion index; breaks ties between equal `est_time`s.
    pub seq: u64,
}

impl TimedEdge {
    fn order_key(&self) -> (u64, u64) {
        (self.est_time, self.seq)
    }
}

/// What was dropped while normalizing an edge stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Directed edges sorted by `(est_time, seq)`, one entry per `(src, dst)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemporalEdgeList {
    edges: Vec<TimedEdge>,
    node_count: usize,
}

impl TemporalEdgeList {
    /// Normalizes a raw edge stream: self-loops are dropped, repeated
    /// `(src, dst)` pairs keep their earliest occurrence, and the result is
    /// sorted by `(est_time, seq)`.
    pub fn new(mut edges: Vec<TimedEdge>) -> Result<(Self, IngestStats), GraphError> {
        let mut stats = IngestStats::default();

        let before = edges.len();
        edges.retain(|e| e.src != e.dst);
        stats.self_loops = before - edges.len();

        let mut seqs: Vec<u64> = edges.iter().map(|e| e.seq).collect();
        seqs.sort_unstable();
        if let Some(w) = seqs.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateSeq(w[0]));
        }

        edges.sort_unstable_by_key(TimedEdge::order_key);

        // Earliest occurrence of each pair wins.
        let mut by_pair: Vec<usize> = (0..edges.len()).collect();
        by_pair.sort_by_key(|&i| (edges[i].src, edges[i].dst, i));
        let mut keep = alloc::vec![true; edges.len()];
        for w in by_pair.windows(2) {
            let (a, b) = (&edges[w[0]], &edges[w[1]]);
            if a.src == b.src && a.dst == b.dst {
                keep[w[1]] = false;
                stats.duplicates += 1;
            }
        }
        let mut i = 0;
        edges.retain(|_| {
            i += 1;
            keep[i - 1]
        });

        let node_count = count_distinct_endpoints(&edges);
        Ok((TemporalEdgeList { edges, node_count }, stats))
    }

    /// Builds a list from `(src, dst, est_time)` triples; `seq` is the
    /// position in the input.
    pub fn from_triples<I>(triples: I) -> Result<(Self, IngestStats), GraphError>
    where
        I: IntoIterator<Item = (u64, u64, u64)>,
    {
        let edges = triples
            .into_iter()
            .enumerate()
            .map(|(i, (s, d, t))| TimedEdge {
                src: NodeId(s),
                dst: NodeId(d),
                est_time: t,
                seq: i as u64,
            })
            .collect();
        Self::new(edges)
    }

    /// Rewrites `seq` to each edge's position in the sorted list.
    pub fn renumbered(mut self) -> Self {
        for (i, e) in self.edges.iter_mut().enumerate() {
            e.seq = i as u64;
        }
        self
    }

    pub fn edges(&self) -> &[TimedEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Number of edges with `est_time <= t`; the snapshot at `t` is this prefix.
    pub fn count_until(&self, t: u64) -> usize {
        self.edges.partition_point(|e| e.est_time <= t)
    }

    pub fn max_time(&self) -> Option<u64> {
        self.edges.last().map(|e| e.est_time)
    }
}

fn count_distinct_endpoints(edges: &[TimedEdge]) -> usize {
    let mut ids: Vec<NodeId> = edges.iter().flat_map(|e| [e.src, e.dst]).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}

/// Direction handling for degree- and distance-based metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Mode {
    In,
    Out,
    /// Undirected projection semantics.
    All,
}

impl Mode {
    pub fn reverse(self) -> Mode {
        match self {
            Mode::In => Mode::Out,
            Mode::Out => Mode::In,
            Mode::All => Mode::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Directed,
    Undirected,
}

/// Compressed sparse rows over dense node indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    /// `pairs` must be sorted by `(row, col)` and deduplicated.
    fn from_sorted(n: usize, pairs: &[(usize, usize)]) -> Csr {
        let mut offsets = alloc::vec![0usize; n + 1];
        for &(r, _) in pairs {
            offsets[r + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Csr {
            offsets,
            targets: pairs.iter().map(|&(_, c)| c).collect(),
        }
    }

    #[inline]
    fn row(&self, i: usize) -> &[usize] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Immutable simple graph at one point in time.
///
/// Nodes are addressed by dense indices `0..node_count()` assigned in
/// ascending [`NodeId`] order. Adjacency rows are sorted and duplicate-free.
/// For a directed snapshot `|E|` equals the sum of out-degrees and the sum of
/// in-degrees. For an undirected one `|E|` counts each `{u, v}` once and the
/// three adjacency views coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    kind: GraphKind,
    ids: Vec<NodeId>,
    out: Csr,
    inc: Csr,
    und: Csr,
    e_count: usize,
}

impl Default for Snapshot {
    fn default() -> Self {
        Snapshot::empty()
    }
}

impl Snapshot {
    pub fn empty() -> Snapshot {
        Snapshot {
            kind: GraphKind::Directed,
            ids: Vec::new(),
            out: Csr { offsets: alloc::vec![0], targets: Vec::new() },
            inc: Csr { offsets: alloc::vec![0], targets: Vec::new() },
            und: Csr { offsets: alloc::vec![0], targets: Vec::new() },
            e_count: 0,
        }
    }

    /// Directed snapshot over `edges` plus any extra (possibly isolated)
    /// `nodes`. Self-loops and repeated pairs are dropped.
    pub fn new<N, E>(nodes: N, edges: E) -> Snapshot
    where
        N: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let edges: Vec<(NodeId, NodeId)> = edges.into_iter().filter(|(a, b)| a != b).collect();
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        ids.extend(edges.iter().flat_map(|&(a, b)| [a, b]));
        ids.sort_unstable();
        ids.dedup();

        let index = |id: NodeId| ids.binary_search(&id).expect("endpoint registered");
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (index(a), index(b))).collect();
        Self::from_index_pairs(GraphKind::Directed, ids, pairs)
    }

    pub fn from_edges<E>(edges: E) -> Snapshot
    where
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::new(core::iter::empty(), edges)
    }

    /// Convenience constructor from raw `u64` pairs.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Snapshot {
        Self::from_edges(pairs.iter().map(|&(a, b)| (NodeId(a), NodeId(b))))
    }

    /// Snapshot of the first `count` edges of `edges`.
    pub fn from_prefix(edges: &TemporalEdgeList, count: usize) -> Snapshot {
        let count = count.min(edges.edge_count());
        Self::from_edges(edges.edges()[..count].iter().map(|e| (e.src, e.dst)))
    }

    fn from_index_pairs(kind: GraphKind, ids: Vec<NodeId>, mut pairs: Vec<(usize, usize)>) -> Snapshot {
        let n = ids.len();
        pairs.retain(|(a, b)| a != b);
        pairs.sort_unstable();
        pairs.dedup();
        let out = Csr::from_sorted(n, &pairs);

        let mut rev: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (b, a)).collect();
        rev.sort_unstable();
        let inc = Csr::from_sorted(n, &rev);

        let mut both = pairs.clone();
        both.extend_from_slice(&rev);
        both.sort_unstable();
        both.dedup();
        let und = Csr::from_sorted(n, &both);

        let e_count = match kind {
            GraphKind::Directed => pairs.len(),
            GraphKind::Undirected => both.len() / 2,
        };
        Snapshot { kind, ids, out, inc, und, e_count }
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_directed(&self) -> bool {
        self.kind == GraphKind::Directed
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.e_count
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    #[inline]
    pub fn id(&self, idx: usize) -> NodeId {
        self.ids[idx]
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        self.out.row(v)
    }

    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        self.inc.row(v)
    }

    /// Neighbors in the undirected projection.
    #[inline]
    pub fn undirected_neighbors(&self, v: usize) -> &[usize] {
        self.und.row(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize, mode: Mode) -> &[usize] {
        match mode {
            Mode::Out => self.out.row(v),
            Mode::In => self.inc.row(v),
            Mode::All => self.und.row(v),
        }
    }

    #[inline]
    pub fn degree(&self, v: usize, mode: Mode) -> usize {
        self.neighbors(v, mode).len()
    }

    /// In-degree plus out-degree on a directed snapshot; plain degree on an
    /// undirected one.
    #[inline]
    pub fn total_degree(&self, v: usize) -> usize {
        match self.kind {
            GraphKind::Directed => self.out.row(v).len() + self.inc.row(v).len(),
            GraphKind::Undirected => self.und.row(v).len(),
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out.row(u).binary_search(&v).is_ok()
    }

    #[inline]
    pub fn adjacent_undirected(&self, u: usize, v: usize) -> bool {
        self.und.row(u).binary_search(&v).is_ok()
    }

    /// Edges in storage order as `(src, dst)` index pairs. On an undirected
    /// snapshot each `{u, v}` appears once with `u < v`. The position in this
    /// iteration is the edge index used by per-edge weights.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let undirected = self.kind == GraphKind::Undirected;
        (0..self.node_count())
            .flat_map(move |u| self.out.row(u).iter().map(move |&v| (u, v)))
            .filter(move |&(u, v)| !undirected || u < v)
    }

    /// Maximum degree under `mode`, 0 on an empty snapshot.
    pub fn max_degree(&self, mode: Mode) -> usize {
        (0..self.node_count()).map(|v| self.degree(v, mode)).max().unwrap_or(0)
    }

    /// The undirected projection: `{u, v}` is an edge iff `u -> v` or `v -> u`.
    /// Idempotent.
    pub fn undirected_projection(&self) -> Snapshot {
        if self.kind == GraphKind::Undirected {
            return self.clone();
        }
        Snapshot {
            kind: GraphKind::Undirected,
            ids: self.ids.clone(),
            out: self.und.clone(),
            inc: self.und.clone(),
            und: self.und.clone(),
            e_count: self.und.targets.len() / 2,
        }
    }

    /// Subgraph induced by the given dense indices (which must be sorted and
    /// duplicate-free). Keeps the snapshot kind.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Snapshot {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let ids: Vec<NodeId> = nodes.iter().map(|&v| self.ids[v]).collect();
        let mut pairs = Vec::new();
        for (new_u, &u) in nodes.iter().enumerate() {
            for &v in self.out.row(u) {
                if let Ok(new_v) = nodes.binary_search(&v) {
                    pairs.push((new_u, new_v));
                }
            }
        }
        Self::from_index_pairs(self.kind, ids, pairs)
    }
}

/// Snapshot of all edges with `est_time <= t` and their endpoints.
pub fn build_snapshot(edges: &TemporalEdgeList, t: u64) -> Snapshot {
    Snapshot::from_prefix(edges, edges.count_until(t))
}
