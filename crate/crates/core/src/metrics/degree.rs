use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::paths::Bfs;
use super::NodeMap;
use crate::error::MetricError;
use crate::graph::{Mode, Snapshot};

/// Degree counted for degree statistics and strength: in-, out-, or total
/// (in + out) degree.
#[inline]
pub(crate) fn counted_degree(s: &Snapshot, v: usize, mode: Mode) -> usize {
    match mode {
        Mode::All => s.total_degree(v),
        m => s.degree(v, m),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub distribution: BTreeMap<u64, u64>,
    pub average: f64,
    pub max: usize,
}

/// Degree distribution, average and maximum. `Mode::All` counts in + out,
/// so its average is `2|E|/|V|` on a directed snapshot.
pub fn degree_stats(s: &Snapshot, mode: Mode) -> Result<DegreeStats, MetricError> {
    let n = s.node_count();
    if n == 0 {
        return Err(MetricError::EmptyGraph);
    }
    let mut distribution = BTreeMap::new();
    let mut total = 0usize;
    let mut max = 0usize;
    for v in 0..n {
        let d = counted_degree(s, v, mode);
        *distribution.entry(d as u64).or_insert(0) += 1;
        total += d;
        max = max.max(d);
    }
    Ok(DegreeStats { distribution, average: total as f64 / n as f64, max })
}

/// Sum of incident edge weights per node. Without weights every edge counts
/// 1, which reproduces [`degree_stats`] degrees. `weights[i]` belongs to the
/// i-th edge of [`Snapshot::edges`].
pub fn strength(s: &Snapshot, mode: Mode, weights: Option<&[f64]>) -> Result<NodeMap, MetricError> {
    if let Some(w) = weights {
        if w.len() != s.edge_count() {
            return Err(MetricError::WeightsMismatch { expected: s.edge_count(), got: w.len() });
        }
        if w.iter().any(|x| !x.is_finite()) {
            return Err(MetricError::InvalidParameter("edge weights must be finite"));
        }
    }
    let mut acc = alloc::vec![0.0f64; s.node_count()];
    let undirected = !s.is_directed();
    for (i, (u, v)) in s.edges().enumerate() {
        let w = weights.map_or(1.0, |w| w[i]);
        if undirected {
            acc[u] += w;
            acc[v] += w;
            continue;
        }
        match mode {
            Mode::Out => acc[u] += w,
            Mode::In => acc[v] += w,
            Mode::All => {
                acc[u] += w;
                acc[v] += w;
            }
        }
    }
    Ok(NodeMap::from_dense(s, &acc))
}

/// Number of nodes within `order` hops of each node, itself included.
pub fn neighborhood_size(s: &Snapshot, order: u32, mode: Mode) -> NodeMap {
    let mut bfs = Bfs::new(s.node_count());
    let values: Vec<f64> = (0..s.node_count())
        .map(|v| {
            bfs.run(s, v, mode, Some(order));
            bfs.order().len() as f64
        })
        .collect();
    NodeMap::from_dense(s, &values)
}

/// Directed density `|E| / (|V| (|V| - 1))`.
pub fn density(s: &Snapshot) -> Result<f64, MetricError> {
    let n = s.node_count();
    if n < 2 {
        return Err(MetricError::TooFewNodes(2));
    }
    let possible = (n * (n - 1)) as f64;
    let e = match s.is_directed() {
        true => s.edge_count(),
        false => 2 * s.edge_count(),
    };
    Ok(e as f64 / possible)
}

/// Mean `mode`-degree of each node's `mode`-neighbors. Nodes without
/// neighbors are left out.
pub fn knn_average_degree(s: &Snapshot, mode: Mode) -> NodeMap {
    let values: Vec<Option<f64>> = (0..s.node_count()).map(|v| knn_of(s, v, mode)).collect();
    NodeMap::from_dense_opt(s, &values)
}

pub(crate) fn knn_of(s: &Snapshot, v: usize, mode: Mode) -> Option<f64> {
    let nb = s.neighbors(v, mode);
    if nb.is_empty() {
        return None;
    }
    let sum: usize = nb.iter().map(|&u| s.degree(u, mode)).sum();
    Some(sum as f64 / nb.len() as f64)
}

/// Degree assortativity: Pearson correlation of endpoint degrees over edges.
///
/// `Mode::All` uses projection degrees and counts every undirected edge in
/// both orientations. `Mode::Out` and `Mode::In` correlate the out-degrees
/// (respectively in-degrees) of source and target of each directed edge.
pub fn assortativity_degree(s: &Snapshot, mode: Mode) -> Result<f64, MetricError> {
    let mut m: i128 = 0;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i128, 0i128, 0i128, 0i128, 0i128);
    let mut add = |x: i128, y: i128| {
        m += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    };
    for v in 0..s.node_count() {
        let targets = match mode {
            Mode::All => s.undirected_neighbors(v),
            _ => s.out_neighbors(v),
        };
        for &u in targets {
            add(s.degree(v, mode) as i128, s.degree(u, mode) as i128);
        }
    }
    if m == 0 {
        return Err(MetricError::NoEdges);
    }
    let var_x = m * sxx - sx * sx;
    let var_y = m * syy - sy * sy;
    if var_x == 0 || var_y == 0 {
        return Err(MetricError::Undefined("regular graph"));
    }
    let cov = (m * sxy - sx * sy) as f64;
    Ok(cov / (libm::sqrt(var_x as f64) * libm::sqrt(var_y as f64)))
}
