//! Seeded synthetic data: a growing follow stream with ground-truth edge
//! times, and uniform random digraphs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SynthError;
use crate::graph::{NodeId, Snapshot, TemporalEdgeList, TimedEdge};
use crate::inference::{CreationIndex, FollowerList, TimeUnit};

pub use crate::estimation::RNG_ALGORITHM;

/// Success probability of the followback delay distribution; the delay
/// (in follow events of the followed-back account) has mean 2.
const FOLLOWBACK_DELAY_P: f64 = 1.0 / 3.0;

/// Target draws rejected (self or already followed) before a follow event
/// is dropped.
const MAX_TARGET_TRIES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StreamParams {
    pub n_users: usize,
    /// New accounts per tick; fractional rates accumulate across ticks.
    pub arrivals: f64,
    pub follows_per_tick: f64,
    /// Targets are drawn with weight `(in_degree + 1) ^ attach_exponent`.
    pub attach_exponent: f64,
    pub p_followback: f64,
    pub seed: u64,
    /// Length of the stream. Accounts stop arriving once `n_users` exist,
    /// follows continue until the last tick.
    pub ticks: u64,
}

impl StreamParams {
    /// One arrival per tick, three follows per tick, linear preferential
    /// attachment, no followbacks, and twice as many ticks as users.
    pub fn new(n_users: usize, seed: u64) -> Self {
        StreamParams {
            n_users,
            arrivals: 1.0,
            follows_per_tick: 3.0,
            attach_exponent: 1.0,
            p_followback: 0.0,
            seed,
            ticks: 2 * n_users as u64,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_users < 2 {
            return Err(SynthError::InvalidParameter("n_users must be at least 2"));
        }
        if !(self.arrivals > 0.0 && self.arrivals.is_finite()) || !(self.follows_per_tick > 0.0 && self.follows_per_tick.is_finite()) {
            return Err(SynthError::InvalidParameter("rates must be positive and finite"));
        }
        if !(0.0..=1.0).contains(&self.p_followback) {
            return Err(SynthError::InvalidParameter("p_followback must lie in [0, 1]"));
        }
        if !self.attach_exponent.is_finite() {
            return Err(SynthError::InvalidParameter("attach_exponent must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FollowStream {
    /// One list per followed account, in target id order, followers in
    /// follow order.
    pub lists: Vec<FollowerList>,
    /// Every edge with its true tick as `est_time` and its position in the
    /// stream as `seq`.
    pub truth: Vec<TimedEdge>,
    /// Account creation ticks.
    pub idx: CreationIndex,
}

impl FollowStream {
    /// The true edge order as a temporal edge list.
    pub fn truth_list(&self) -> TemporalEdgeList {
        TemporalEdgeList::new(self.truth.clone()).expect("stream positions are unique").0
    }
}

/// Prefix sums over account weights for preferential draws.
struct Fenwick {
    tree: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick { tree: alloc::vec![0.0; n + 1] }
    }

    fn add(&mut self, i: usize, delta: f64) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn total(&self, len: usize) -> f64 {
        let mut i = len;
        let mut s = 0.0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }

    /// Smallest index whose prefix sum exceeds `r`.
    fn find(&self, mut r: f64) -> usize {
        let mut pos = 0;
        let mut step = self.tree.len().next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= r {
                pos = next;
                r -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

struct StreamState {
    rng: ChaCha8Rng,
    created_at: Vec<u64>,
    indeg: Vec<u64>,
    weights: Fenwick,
    exponent: f64,
    edges: BTreeSet<(usize, usize)>,
    events: Vec<(usize, usize, u64)>,
    /// Followbacks owed by each account: (account to follow, remaining
    /// follow events of the owner before it happens).
    pending: BTreeMap<usize, Vec<(usize, u32)>>,
    p_followback: f64,
}

impl StreamState {
    fn weight(&self, indeg: u64) -> f64 {
        libm::pow(indeg as f64 + 1.0, self.exponent)
    }

    fn create(&mut self, tick: u64) {
        let id = self.created_at.len();
        self.created_at.push(tick);
        self.indeg.push(0);
        let w = self.weight(0);
        self.weights.add(id, w);
    }

    fn draw_target(&mut self, follower: usize) -> Option<usize> {
        let n = self.created_at.len();
        let total = self.weights.total(n);
        for _ in 0..MAX_TARGET_TRIES {
            let r = self.rng.gen::<f64>() * total;
            let t = self.weights.find(r).min(n - 1);
            // reciprocal edges only arise from followbacks
            if t != follower && !self.edges.contains(&(follower, t)) && !self.edges.contains(&(t, follower)) {
                return Some(t);
            }
        }
        None
    }

    /// Records `src -> dst`, schedules a possible followback, then settles
    /// followbacks `src` owes whose delay has run out.
    fn follow(&mut self, src: usize, dst: usize, tick: u64, is_followback: bool) {
        if src == dst || !self.edges.insert((src, dst)) {
            return;
        }
        self.events.push((src, dst, tick));
        let old = self.weight(self.indeg[dst]);
        self.indeg[dst] += 1;
        let new = self.weight(self.indeg[dst]);
        self.weights.add(dst, new - old);

        if !is_followback && self.p_followback > 0.0 && self.rng.gen::<f64>() < self.p_followback {
            let mut delay = 0u32;
            while self.rng.gen::<f64>() >= FOLLOWBACK_DELAY_P {
                delay += 1;
            }
            if delay == 0 {
                self.follow(dst, src, tick, true);
            } else {
                self.pending.entry(dst).or_default().push((src, delay));
            }
        }

        // this event is one more intervening follow for everything src owes
        let due: Vec<usize> = match self.pending.get_mut(&src) {
            None => Vec::new(),
            Some(owed) => {
                let mut due = Vec::new();
                owed.retain_mut(|(to, left)| {
                    *left -= 1;
                    if *left == 0 {
                        due.push(*to);
                        false
                    } else {
                        true
                    }
                });
                due
            }
        };
        for to in due {
            self.follow(src, to, tick, true);
        }
    }
}

/// Simulates a growing follow network.
///
/// Account ids are creation ranks. Each follow event picks a uniform
/// follower among existing accounts and a preferential target it is not
/// yet linked with in either direction. A follow is
/// followed back with probability `p_followback` after a geometric number
/// of the target's own subsequent follow events (zero means immediately).
pub fn generate_follow_stream(p: &StreamParams) -> Result<FollowStream, SynthError> {
    p.validate()?;
    let mut st = StreamState {
        rng: ChaCha8Rng::seed_from_u64(p.seed),
        created_at: Vec::with_capacity(p.n_users),
        indeg: Vec::with_capacity(p.n_users),
        weights: Fenwick::new(p.n_users),
        exponent: p.attach_exponent,
        edges: BTreeSet::new(),
        events: Vec::new(),
        pending: BTreeMap::new(),
        p_followback: p.p_followback,
    };

    let (mut arrival_acc, mut follow_acc) = (0.0f64, 0.0f64);
    for tick in 0..p.ticks {
        arrival_acc += p.arrivals;
        while arrival_acc >= 1.0 {
            arrival_acc -= 1.0;
            if st.created_at.len() < p.n_users {
                st.create(tick);
            }
        }
        follow_acc += p.follows_per_tick;
        while follow_acc >= 1.0 {
            follow_acc -= 1.0;
            let n = st.created_at.len();
            if n < 2 {
                continue;
            }
            let follower = st.rng.gen_range(0..n);
            if let Some(target) = st.draw_target(follower) {
                st.follow(follower, target, tick, false);
            }
        }
    }

    let mut by_target: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for &(src, dst, _) in &st.events {
        by_target.entry(dst).or_default().push(NodeId(src as u64));
    }
    let lists = by_target.into_iter().map(|(t, f)| FollowerList::new(NodeId(t as u64), f)).collect();
    let truth = st
        .events
        .iter()
        .enumerate()
        .map(|(i, &(src, dst, tick))| TimedEdge {
            src: NodeId(src as u64),
            dst: NodeId(dst as u64),
            est_time: tick,
            seq: i as u64,
        })
        .collect();
    let idx = CreationIndex::from_pairs(
        st.created_at.iter().enumerate().map(|(i, &t)| (NodeId(i as u64), t)),
        TimeUnit::Rank,
    );
    Ok(FollowStream { lists, truth, idx })
}

/// Directed G(n, p): each ordered pair `(u, v)`, `u != v`, is an edge
/// independently with probability `p_edge`. Nodes are `0..n`, all kept.
///
/// Pairs are visited in row-major order with geometric skips, so sparse
/// graphs cost time proportional to their edge count.
pub fn generate_random_digraph(n: usize, p_edge: f64, seed: u64) -> Result<Snapshot, SynthError> {
    if n < 1 {
        return Err(SynthError::InvalidParameter("n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p_edge) {
        return Err(SynthError::InvalidParameter("p_edge must lie in [0, 1]"));
    }
    let nodes = (0..n as u64).map(NodeId);
    let slots = (n as u64) * (n as u64 - 1);
    let mut edges = Vec::new();
    let to_pair = |k: u64| {
        let u = k / (n as u64 - 1);
        let mut v = k % (n as u64 - 1);
        if v >= u {
            v += 1;
        }
        (NodeId(u), NodeId(v))
    };
    if p_edge >= 1.0 {
        edges.extend((0..slots).map(to_pair));
    } else if p_edge > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log_q = libm::log(1.0 - p_edge);
        let mut k: u64 = 0;
        loop {
            let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
            let skip = libm::floor(libm::log(u) / log_q);
            if skip >= (slots - k) as f64 {
                break;
            }
            k += skip as u64;
            edges.push(to_pair(k));
            k += 1;
            if k >= slots {
                break;
            }
        }
    }
    Ok(Snapshot::new(nodes, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::{followback_order_histogram, infer_edge_times};

    #[test]
    fn complete_and_empty_digraphs() {
        let g = generate_random_digraph(5, 1.0, 1).unwrap();
        assert_eq!(g.edge_count(), 20);
        assert_eq!(crate::metrics::density(&g), Ok(1.0));
        let g = generate_random_digraph(5, 0.0, 1).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 0));
        assert!(generate_random_digraph(0, 0.5, 1).is_err());
        assert!(generate_random_digraph(3, 1.5, 1).is_err());
    }

    #[test]
    fn edge_count_within_binomial_bounds() {
        let g = generate_random_digraph(64, 0.2, 42).unwrap();
        let (mean, sd) = (0.2 * 4032.0, libm::sqrt(4032.0 * 0.2 * 0.8));
        assert!((g.edge_count() as f64 - mean).abs() <= 3.0 * sd, "{}", g.edge_count());
    }

    #[test]
    fn digraph_is_seeded() {
        let a = generate_random_digraph(50, 0.1, 7).unwrap();
        let b = generate_random_digraph(50, 0.1, 7).unwrap();
        assert!(a.edges().eq(b.edges()));
        let c = generate_random_digraph(50, 0.1, 8).unwrap();
        assert!(!a.edges().eq(c.edges()));
    }

    #[test]
    fn no_followbacks_without_probability() {
        let s = generate_follow_stream(&StreamParams::new(300, 3)).unwrap();
        assert!(followback_order_histogram(&s.truth_list()).is_empty());
    }

    #[test]
    fn two_users() {
        let p = StreamParams { follows_per_tick: 1.0, ticks: 5, ..StreamParams::new(2, 0) };
        let s = generate_follow_stream(&p).unwrap();
        assert_eq!(s.truth.len(), 1);
        assert_eq!(s, generate_follow_stream(&p).unwrap());
        let back = StreamParams { p_followback: 1.0, ..p };
        let s = generate_follow_stream(&back).unwrap();
        assert_eq!(s.truth.len(), 2);
        assert_eq!((s.truth[0].src, s.truth[0].dst), (s.truth[1].dst, s.truth[1].src));
    }

    #[test]
    fn inferred_times_bound_truth() {
        let p = StreamParams { p_followback: 0.3, ..StreamParams::new(500, 9) };
        let s = generate_follow_stream(&p).unwrap();
        let inferred = infer_edge_times(&s.lists, &s.idx).unwrap();
        let truth: BTreeMap<(NodeId, NodeId), u64> = s.truth.iter().map(|e| ((e.src, e.dst), e.est_time)).collect();
        assert_eq!(inferred.edge_count(), truth.len());
        for e in inferred.edges() {
            assert!(e.est_time <= truth[&(e.src, e.dst)]);
        }
    }

    #[test]
    fn followback_orders_follow_the_delay() {
        let p = StreamParams { p_followback: 0.3, ..StreamParams::new(2000, 5) };
        let s = generate_follow_stream(&p).unwrap();
        let h = followback_order_histogram(&s.truth_list());
        let zero = h.get(&0).copied().unwrap_or(0);
        assert!(zero > 0);
        assert!(h.values().all(|&c| c <= zero));
    }

    #[test]
    fn fenwick_draws() {
        let mut f = Fenwick::new(4);
        for (i, w) in [1.0, 2.0, 3.0, 4.0].into_iter().enumerate() {
            f.add(i, w);
        }
        assert_eq!(f.total(4), 10.0);
        assert_eq!([0.5, 1.5, 2.9, 3.0, 5.9, 6.0, 9.9].map(|r| f.find(r)), [0, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(generate_follow_stream(&StreamParams::new(1, 0)).is_err());
        let p = StreamParams { p_followback: 2.0, ..StreamParams::new(5, 0) };
        assert!(generate_follow_stream(&p).is_err());
    }
}
