//! Brute-force reference implementations over dense adjacency matrices.
//! Deliberately naive: exhaustive path and subset enumeration, Floyd-Warshall.
#![allow(dead_code)]

use tempograph_core::synth::generate_random_digraph;
use tempograph_core::{fixtures, Mode, Snapshot};

pub struct Dense {
    pub n: usize,
    /// `out[u][v]`: edge u -> v.
    pub out: Vec<Vec<bool>>,
    pub und: Vec<Vec<bool>>,
    pub directed: bool,
}

impl Dense {
    pub fn new(s: &Snapshot) -> Self {
        let n = s.node_count();
        let mut out = vec![vec![false; n]; n];
        let mut und = vec![vec![false; n]; n];
        for (u, v) in s.edges() {
            out[u][v] = true;
            und[u][v] = true;
            und[v][u] = true;
            if !s.is_directed() {
                out[v][u] = true;
            }
        }
        Dense { n, out, und, directed: s.is_directed() }
    }

    /// Adjacency as seen in `mode`: out-edges, reversed edges, or projection.
    pub fn adj(&self, mode: Mode) -> Vec<Vec<bool>> {
        match mode {
            Mode::Out => self.out.clone(),
            Mode::All => self.und.clone(),
            Mode::In => (0..self.n).map(|u| (0..self.n).map(|v| self.out[v][u]).collect()).collect(),
        }
    }

    /// In + out degree; plain degree when undirected.
    pub fn total_degree(&self, v: usize) -> usize {
        if !self.directed {
            return (0..self.n).filter(|&u| self.und[v][u]).count();
        }
        (0..self.n).filter(|&u| self.out[v][u]).count() + (0..self.n).filter(|&u| self.out[u][v]).count()
    }
}

/// All-pairs hop distances by Floyd-Warshall; `None` when unreachable.
pub fn distances(adj: &[Vec<bool>]) -> Vec<Vec<Option<u32>>> {
    let n = adj.len();
    let mut d = vec![vec![None; n]; n];
    for u in 0..n {
        d[u][u] = Some(0);
        for v in 0..n {
            if adj[u][v] && u != v {
                d[u][v] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Every shortest path from `s` to `t`, as node sequences.
fn shortest_paths(adj: &[Vec<bool>], dist: &[Vec<Option<u32>>], s: usize, t: usize) -> Vec<Vec<usize>> {
    let Some(len) = dist[s][t] else { return Vec::new() };
    let mut out = Vec::new();
    let mut path = vec![s];
    fn walk(adj: &[Vec<bool>], t: usize, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if path.len() - 1 == len {
            if last == t {
                out.push(path.clone());
            }
            return;
        }
        for next in 0..adj.len() {
            if adj[last][next] && !path.contains(&next) {
                path.push(next);
                walk(adj, t, len, path, out);
                path.pop();
            }
        }
    }
    walk(adj, t, len as usize, &mut path, &mut out);
    out
}

/// Betweenness by enumerating every geodesic of length at most `cutoff`.
/// Undirected runs count each unordered pair once.
pub fn betweenness(s: &Snapshot, directed: bool, cutoff: Option<u32>) -> Vec<f64> {
    let g = Dense::new(s);
    let adj = if directed && s.is_directed() { g.out.clone() } else { g.und.clone() };
    let dist = distances(&adj);
    let mut bc = vec![0.0; g.n];
    for a in 0..g.n {
        for b in 0..g.n {
            if a == b || dist[a][b].is_none() || cutoff.is_some_and(|c| dist[a][b].unwrap() > c) {
                continue;
            }
            let paths = shortest_paths(&adj, &dist, a, b);
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    bc[v] += 1.0 / paths.len() as f64;
                }
            }
        }
    }
    if !(directed && s.is_directed()) {
        bc.iter_mut().for_each(|x| *x /= 2.0);
    }
    bc
}

/// Directed betweenness counting only geodesics of length 2: for every
/// ordered non-adjacent pair, each middle node gets an equal share.
pub fn betweenness_len2(s: &Snapshot) -> Vec<f64> {
    let g = Dense::new(s);
    let mut bc = vec![0.0; g.n];
    for a in 0..g.n {
        for b in 0..g.n {
            if a == b || g.out[a][b] {
                continue;
            }
            let mids: Vec<usize> = (0..g.n).filter(|&m| g.out[a][m] && g.out[m][b]).collect();
            for &m in &mids {
                bc[m] += 1.0 / mids.len() as f64;
            }
        }
    }
    bc
}

/// `1 / sum of distances` over nodes reached within `cutoff`; 0 if none.
pub fn closeness(s: &Snapshot, mode: Mode, cutoff: Option<u32>) -> Vec<f64> {
    let g = Dense::new(s);
    let dist = distances(&g.adj(mode));
    (0..g.n)
        .map(|v| {
            let total: u32 = (0..g.n)
                .filter_map(|t| dist[v][t])
                .filter(|&d| cutoff.is_none_or(|c| d <= c))
                .sum();
            if total == 0 {
                0.0
            } else {
                1.0 / total as f64
            }
        })
        .collect()
}

pub fn diameter(s: &Snapshot, mode: Mode) -> u32 {
    let d = distances(&Dense::new(s).adj(mode));
    d.iter().flatten().filter_map(|x| *x).max().unwrap_or(0)
}

/// Largest subset of nodes that is pairwise adjacent in the projection.
pub fn max_clique(s: &Snapshot) -> usize {
    let g = Dense::new(s);
    assert!(g.n <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << g.n) {
        let nodes: Vec<usize> = (0..g.n).filter(|&i| mask >> i & 1 == 1).collect();
        if nodes.len() <= best {
            continue;
        }
        if nodes.iter().all(|&a| nodes.iter().all(|&b| a == b || g.und[a][b])) {
            best = nodes.len();
        }
    }
    best
}

/// Shell index on the projection: the largest k such that the node survives
/// repeatedly deleting nodes of degree below k.
pub fn coreness(s: &Snapshot) -> Vec<usize> {
    let g = Dense::new(s);
    let mut core = vec![0; g.n];
    for k in 1..=g.n {
        let mut alive = vec![true; g.n];
        loop {
            let doomed: Vec<usize> = (0..g.n)
                .filter(|&v| alive[v] && (0..g.n).filter(|&u| alive[u] && g.und[v][u]).count() < k)
                .collect();
            if doomed.is_empty() {
                break;
            }
            doomed.into_iter().for_each(|v| alive[v] = false);
        }
        for v in 0..g.n {
            if alive[v] {
                core[v] = k;
            }
        }
    }
    core
}

/// (global transitivity, mean local clustering over degree >= 2) on the
/// projection, from explicit triangle and wedge enumeration.
pub fn transitivity(s: &Snapshot) -> Option<(f64, f64)> {
    let g = Dense::new(s);
    let (mut closed_wedges, mut wedges) = (0u64, 0u64);
    let (mut local_sum, mut local_n) = (0.0, 0);
    for c in 0..g.n {
        let (mut w, mut t) = (0u64, 0u64);
        for a in 0..g.n {
            for b in a + 1..g.n {
                if a != c && b != c && g.und[c][a] && g.und[c][b] {
                    w += 1;
                    if g.und[a][b] {
                        t += 1;
                    }
                }
            }
        }
        wedges += w;
        closed_wedges += t;
        if w > 0 {
            local_sum += t as f64 / w as f64;
            local_n += 1;
        }
    }
    (wedges > 0).then(|| (closed_wedges as f64 / wedges as f64, local_sum / local_n as f64))
}

/// Mean over `v != u` of the number of nodes following both.
pub fn cocitation_mean(s: &Snapshot, u: usize) -> f64 {
    let g = Dense::new(s);
    if g.n < 2 {
        return 0.0;
    }
    let mut total = 0usize;
    for v in (0..g.n).filter(|&v| v != u) {
        total += (0..g.n).filter(|&w| g.out[w][u] && g.out[w][v]).count();
    }
    total as f64 / (g.n - 1) as f64
}

/// Mean over `v != u` of the sum of `1 / ln(total degree)` over common
/// `mode`-neighbors.
pub fn silw_mean(s: &Snapshot, u: usize, mode: Mode) -> f64 {
    let g = Dense::new(s);
    if g.n < 2 {
        return 0.0;
    }
    let adj = g.adj(mode);
    let mut total = 0.0;
    for v in (0..g.n).filter(|&v| v != u) {
        for w in 0..g.n {
            if adj[u][w] && adj[v][w] {
                total += 1.0 / (g.total_degree(w) as f64).ln();
            }
        }
    }
    total / (g.n - 1) as f64
}

fn connected(und: &[Vec<bool>], nodes: &[usize]) -> bool {
    let mut seen = vec![nodes[0]];
    let mut i = 0;
    while i < seen.len() {
        let v = seen[i];
        for &u in nodes {
            if und[v][u] && !seen.contains(&u) {
                seen.push(u);
            }
        }
        i += 1;
    }
    seen.len() == nodes.len()
}

/// Number of `k`-node subsets inducing a connected subgraph of the projection.
pub fn connected_subsets(s: &Snapshot, k: usize) -> u64 {
    let g = Dense::new(s);
    let mut count = 0;
    let mut pick = Vec::with_capacity(k);
    fn rec(g: &Dense, k: usize, from: usize, pick: &mut Vec<usize>, count: &mut u64) {
        if pick.len() == k {
            if connected(&g.und, pick) {
                *count += 1;
            }
            return;
        }
        for v in from..g.n {
            pick.push(v);
            rec(g, k, v + 1, pick, count);
            pick.pop();
        }
    }
    rec(&g, k, 0, &mut pick, &mut count);
    count
}

/// Textbook two-pass Pearson correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}

/// Degree assortativity on the projection, both orientations of each edge.
pub fn assortativity_all(s: &Snapshot) -> Option<f64> {
    let g = Dense::new(s);
    let deg: Vec<f64> = (0..g.n).map(|v| (0..g.n).filter(|&u| g.und[v][u]).count() as f64).collect();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for u in 0..g.n {
        for v in 0..g.n {
            if g.und[u][v] {
                xs.push(deg[u]);
                ys.push(deg[v]);
            }
        }
    }
    pearson(&xs, &ys)
}

/// Named fixtures plus seeded random digraphs, all with at most 10 nodes.
pub fn small_corpus() -> Vec<(String, Snapshot)> {
    let mut out = vec![
        ("c3".to_string(), fixtures::c3()),
        ("p3".to_string(), fixtures::p3()),
        ("star".to_string(), fixtures::star()),
        ("coc".to_string(), fixtures::coc()),
        ("k4".to_string(), fixtures::k4u()),
        ("k4-projection".to_string(), fixtures::k4u().undirected_projection()),
        ("two-paths".to_string(), Snapshot::from_pairs(&[(1, 2), (3, 4), (4, 5), (2, 1)])),
    ];
    let mut seed = 0;
    for n in 3..=10 {
        for p in [0.15, 0.3, 0.5, 0.8] {
            seed += 1;
            out.push((format!("gnp-{n}-{p}-{seed}"), generate_random_digraph(n, p, seed).unwrap()));
        }
    }
    out
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
