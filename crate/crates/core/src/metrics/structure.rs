use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::NodeMap;
use crate::components::{is_strongly_connected, is_weakly_connected};
use crate::error::MetricError;
use crate::graph::{Mode, Snapshot};

/// Bin-sort peeling (Batagelj-Zaversnik). Returns the shell index per node
/// and the order in which nodes were removed.
pub(crate) fn peel(s: &Snapshot, mode: Mode) -> (Vec<usize>, Vec<usize>) {
    let n = s.node_count();
    let mut deg: Vec<usize> = (0..n).map(|v| s.degree(v, mode)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    let mut bin = alloc::vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = alloc::vec![0usize; n];
    let mut vert = alloc::vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    let back = mode.reverse();
    for i in 0..n {
        let v = vert[i];
        for &u in s.neighbors(v, back) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    (deg, vert)
}

/// k-core shell index of every node under `mode` degrees.
pub fn coreness(s: &Snapshot, mode: Mode) -> NodeMap {
    let (core, _) = peel(s, mode);
    let values: Vec<f64> = core.iter().map(|&c| c as f64).collect();
    NodeMap::from_dense(s, &values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transitivity {
    pub global: f64,
    pub local_average: f64,
}

/// Number of projection edges among the neighbors of `v`.
fn closed_pairs(s: &Snapshot, v: usize) -> usize {
    let nv = s.undirected_neighbors(v);
    let mut links = 0;
    for &u in nv {
        links += sorted_intersection_len(nv, s.undirected_neighbors(u));
    }
    links / 2
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Local clustering coefficient on the undirected projection; `None` for
/// nodes of degree below 2.
pub fn local_clustering(s: &Snapshot, v: usize) -> Option<f64> {
    let d = s.undirected_neighbors(v).len();
    if d < 2 {
        return None;
    }
    Some(closed_pairs(s, v) as f64 / (d * (d - 1) / 2) as f64)
}

/// Global transitivity (3 x triangles / connected triples) and the average
/// local clustering over nodes of degree at least 2, both on the undirected
/// projection.
pub fn transitivity(s: &Snapshot) -> Result<Transitivity, MetricError> {
    let (mut closed, mut triples) = (0usize, 0usize);
    let (mut local_sum, mut local_n) = (0.0, 0usize);
    for v in 0..s.node_count() {
        let d = s.undirected_neighbors(v).len();
        if d < 2 {
            continue;
        }
        let t = closed_pairs(s, v);
        let possible = d * (d - 1) / 2;
        closed += t;
        triples += possible;
        local_sum += t as f64 / possible as f64;
        local_n += 1;
    }
    if triples == 0 {
        return Err(MetricError::Undefined("no connected triple"));
    }
    Ok(Transitivity { global: closed as f64 / triples as f64, local_average: local_sum / local_n as f64 })
}

/// Size of the largest clique of the undirected projection.
///
/// Branch and bound with Tomita pivoting; the top level walks a degeneracy
/// order so each branch starts from the later neighbors of one node.
pub fn max_clique(s: &Snapshot) -> usize {
    let n = s.node_count();
    if n == 0 {
        return 0;
    }
    let (_, order) = peel(s, Mode::All);
    let mut rank = alloc::vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut best = 1;
    for &v in &order {
        let later: Vec<usize> = s.undirected_neighbors(v).iter().copied().filter(|&u| rank[u] > rank[v]).collect();
        if later.len() < best {
            continue;
        }
        expand(s, 1, later, &mut best);
    }
    best
}

fn expand(s: &Snapshot, size: usize, mut cand: Vec<usize>, best: &mut usize) {
    if cand.is_empty() {
        *best = (*best).max(size);
        return;
    }
    if size + cand.len() <= *best {
        return;
    }
    let pivot = *cand
        .iter()
        .max_by_key(|&&u| sorted_intersection_len(&cand, s.undirected_neighbors(u)))
        .expect("non-empty");
    let branches: Vec<usize> = cand.iter().copied().filter(|&v| !s.adjacent_undirected(pivot, v)).collect();
    for v in branches {
        if size + cand.len() <= *best {
            return;
        }
        let nv = s.undirected_neighbors(v);
        let next: Vec<usize> = cand.iter().copied().filter(|u| nv.binary_search(u).is_ok()).collect();
        expand(s, size + 1, next, best);
        if let Ok(i) = cand.binary_search(&v) {
            cand.remove(i);
        }
    }
}

/// Unit-capacity residual network.
struct FlowNet {
    head: Vec<usize>,
    arcs: Vec<(usize, i32)>, // (to, capacity); arc i pairs with i ^ 1
    adj: Vec<usize>,
}

impl FlowNet {
    fn new(n: usize, pairs: &[(usize, usize, i32, i32)]) -> FlowNet {
        let mut arcs = Vec::with_capacity(pairs.len() * 2);
        let mut from = Vec::with_capacity(pairs.len() * 2);
        for &(u, v, cap, rev_cap) in pairs {
            arcs.push((v, cap));
            from.push(u);
            arcs.push((u, rev_cap));
            from.push(v);
        }
        let mut head = alloc::vec![0usize; n + 1];
        for &u in &from {
            head[u + 1] += 1;
        }
        for i in 0..n {
            head[i + 1] += head[i];
        }
        let mut fill = head.clone();
        let mut adj = alloc::vec![0usize; arcs.len()];
        for (i, &u) in from.iter().enumerate() {
            adj[fill[u]] = i;
            fill[u] += 1;
        }
        FlowNet { head, arcs, adj }
    }

    /// Edmonds-Karp max flow from `src` to `sink`, stopping at `limit`.
    fn max_flow(&self, src: usize, sink: usize, limit: usize) -> usize {
        let n = self.head.len() - 1;
        let mut cap: Vec<i32> = self.arcs.iter().map(|a| a.1).collect();
        let mut via = alloc::vec![usize::MAX; n];
        let mut flow = 0;
        while flow < limit {
            via.iter_mut().for_each(|x| *x = usize::MAX);
            via[src] = usize::MAX - 1;
            let mut queue = VecDeque::from([src]);
            while let Some(v) = queue.pop_front() {
                if v == sink {
                    break;
                }
                for &a in &self.adj[self.head[v]..self.head[v + 1]] {
                    let to = self.arcs[a].0;
                    if cap[a] > 0 && via[to] == usize::MAX {
                        via[to] = a;
                        queue.push_back(to);
                    }
                }
            }
            if via[sink] == usize::MAX {
                break;
            }
            let mut bottleneck = i32::MAX;
            let mut v = sink;
            while v != src {
                let a = via[v];
                bottleneck = bottleneck.min(cap[a]);
                v = self.arcs[a ^ 1].0;
            }
            let mut v = sink;
            while v != src {
                let a = via[v];
                cap[a] -= bottleneck;
                cap[a ^ 1] += bottleneck;
                v = self.arcs[a ^ 1].0;
            }
            flow += bottleneck as usize;
        }
        flow
    }
}

/// Global edge connectivity: the fewest edges whose removal disconnects the
/// graph. Undirected mode works on the projection and needs a connected
/// graph; directed mode needs a strongly connected one.
pub fn edge_connectivity(s: &Snapshot, directed: bool) -> Result<usize, MetricError> {
    let n = s.node_count();
    if n == 0 {
        return Err(MetricError::EmptyGraph);
    }
    if n == 1 {
        return Ok(0);
    }
    let directed = directed && s.is_directed();
    let connected = if directed { is_strongly_connected(s) } else { is_weakly_connected(s) };
    if !connected {
        return Err(MetricError::NotConnected);
    }

    let pairs: Vec<(usize, usize, i32, i32)> = if directed {
        s.edges().map(|(u, v)| (u, v, 1, 0)).collect()
    } else {
        s.undirected_projection().edges().map(|(u, v)| (u, v, 1, 1)).collect()
    };
    let net = FlowNet::new(n, &pairs);

    let mut best = (0..n)
        .map(|v| match directed {
            true => s.out_neighbors(v).len().min(s.in_neighbors(v).len()),
            false => s.undirected_neighbors(v).len(),
        })
        .min()
        .unwrap_or(0);
    for t in 1..n {
        if best == 0 {
            break;
        }
        best = best.min(net.max_flow(0, t, best));
        if directed {
            best = best.min(net.max_flow(t, 0, best));
        }
    }
    Ok(best)
}
