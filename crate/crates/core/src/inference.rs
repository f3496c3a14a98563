//! Lower-bound edge creation times from ordered follower lists, and the
//! followback-order analysis built on top of them.
//!
//! Follower lists come back ordered oldest-first and account ids grow with
//! creation time. A follow cannot predate the account that made it, and the
//! k-th follower of a target followed after the first k-1. So the k-th
//! follow edge is no older than the newest account among followers `1..=k`:
//! its estimated time is the running maximum of their creation times.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::InferenceError;
use crate::graph::{NodeId, TemporalEdgeList, TimedEdge};

/// One target account and its followers, oldest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FollowerList {
    pub target: NodeId,
    pub followers: Vec<NodeId>,
}

impl FollowerList {
    pub fn new(target: NodeId, followers: Vec<NodeId>) -> Self {
        FollowerList { target, followers }
    }

    /// Checks that the target does not follow itself and no follower repeats.
    pub fn validate(&self) -> Result<(), InferenceError> {
        if self.followers.contains(&self.target) {
            return Err(InferenceError::SelfFollow(self.target));
        }
        let mut sorted = self.followers.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(InferenceError::DuplicateFollower { target: self.target, follower: w[0] });
        }
        Ok(())
    }
}

/// Unit of the timestamps held by a [`CreationIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeUnit {
    /// Logical creation rank; carries no calendar meaning.
    #[default]
    Rank,
    /// Seconds since the Unix epoch.
    EpochSeconds,
}

/// Account creation time per node.
///
/// Without an explicit table every id maps to itself (ids are creation
/// ranks).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CreationIndex {
    unit: TimeUnit,
    table: Option<BTreeMap<NodeId, u64>>,
}

impl CreationIndex {
    pub fn identity() -> Self {
        CreationIndex::default()
    }

    pub fn from_pairs<I>(pairs: I, unit: TimeUnit) -> Self
    where
        I: IntoIterator<Item = (NodeId, u64)>,
    {
        CreationIndex { unit, table: Some(pairs.into_iter().collect()) }
    }

    pub fn unit(&self) -> TimeUnit {
        self.unit
    }

    pub fn is_identity(&self) -> bool {
        self.table.is_none()
    }

    pub fn get(&self, id: NodeId) -> Option<u64> {
        match &self.table {
            None => Some(id.0),
            Some(t) => t.get(&id).copied(),
        }
    }

    /// Entries of an explicit table in id order (empty for the identity).
    pub fn entries(&self) -> impl Iterator<Item = (NodeId, u64)> + '_ {
        self.table.iter().flat_map(|t| t.iter().map(|(&k, &v)| (k, v)))
    }

    fn require(&self, id: NodeId) -> Result<u64, InferenceError> {
        self.get(id).ok_or(InferenceError::MissingCreationTime(id))
    }
}

/// Turns follower lists into a globally ordered temporal edge list.
///
/// Follower `k` of target `A` yields the edge `U_k -> A` with
/// `est_time = max(idx[U_1], ..., idx[U_k])`. Edges are then ordered by
/// `(est_time, seq)` where `seq` ranks edges by (position within their list,
/// list order), so ties favour earlier list positions and per-list order is
/// preserved. The returned `seq` values are final positions.
pub fn infer_edge_times(lists: &[FollowerList], idx: &CreationIndex) -> Result<TemporalEdgeList, InferenceError> {
    // (position, list, follower, target, est_time)
    let mut raw: Vec<(usize, usize, NodeId, NodeId, u64)> = Vec::new();
    for (li, list) in lists.iter().enumerate() {
        list.validate()?;
        idx.require(list.target)?;
        let mut running = 0u64;
        for (pos, &u) in list.followers.iter().enumerate() {
            running = running.max(idx.require(u)?);
            raw.push((pos, li, u, list.target, running));
        }
    }
    raw.sort_unstable_by_key(|r| (r.0, r.1));

    let edges = raw
        .into_iter()
        .enumerate()
        .map(|(seq, (_, _, src, dst, est_time))| TimedEdge { src, dst, est_time, seq: seq as u64 })
        .collect();
    let (list, _) = TemporalEdgeList::new(edges).expect("sequence numbers are unique by construction");
    Ok(list.renumbered())
}

/// Histogram of followback orders.
///
/// For every reciprocal pair where `A -> B` precedes `B -> A` in the global
/// order, the order is the number of follow events initiated by `B` strictly
/// between the two. Returns order -> number of pairs.
pub fn followback_order_histogram(edges: &TemporalEdgeList) -> BTreeMap<u64, u64> {
    let es = edges.edges();
    let mut by_pair: Vec<(NodeId, NodeId, usize)> = es.iter().enumerate().map(|(i, e)| (e.src, e.dst, i)).collect();
    by_pair.sort_unstable();

    let mut out_positions: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (i, e) in es.iter().enumerate() {
        out_positions.entry(e.src).or_default().push(i);
    }

    let mut hist = BTreeMap::new();
    for (j, back) in es.iter().enumerate() {
        let (b, a) = (back.src, back.dst);
        let Ok(k) = by_pair.binary_search_by(|p| (p.0, p.1).cmp(&(a, b))) else {
            continue;
        };
        let i = by_pair[k].2;
        if i >= j {
            continue;
        }
        let pos = &out_positions[&b];
        let between = pos.partition_point(|&p| p < j) - pos.partition_point(|&p| p <= i);
        *hist.entry(between as u64).or_insert(0) += 1;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ids(v: &[u64]) -> Vec<NodeId> {
        v.iter().map(|&x| NodeId(x)).collect()
    }

    fn times_for(list: &TemporalEdgeList, target: u64) -> Vec<(u64, u64)> {
        list.edges()
            .iter()
            .filter(|e| e.dst == NodeId(target))
            .map(|e| (e.src.0, e.est_time))
            .collect()
    }

    #[test]
    fn running_max_of_creation_ranks() {
        let lists = [FollowerList::new(NodeId(100), ids(&[5, 2, 9]))];
        let l = infer_edge_times(&lists, &CreationIndex::identity()).unwrap();
        assert_eq!(times_for(&l, 100), vec![(5, 5), (2, 5), (9, 9)]);
    }

    #[test]
    fn monotone_list_keeps_own_ranks() {
        let lists = [FollowerList::new(NodeId(100), ids(&[1, 2, 3]))];
        let l = infer_edge_times(&lists, &CreationIndex::identity()).unwrap();
        assert_eq!(times_for(&l, 100), vec![(1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn duplicate_follower_rejected() {
        let lists = [FollowerList::new(NodeId(100), ids(&[9, 1, 1]))];
        assert_eq!(
            infer_edge_times(&lists, &CreationIndex::identity()).unwrap_err(),
            InferenceError::DuplicateFollower { target: NodeId(100), follower: NodeId(1) }
        );
    }

    #[test]
    fn missing_creation_time_names_the_id() {
        let idx = CreationIndex::from_pairs([(NodeId(1), 10), (NodeId(100), 0)], TimeUnit::Rank);
        let lists = [FollowerList::new(NodeId(100), ids(&[1, 7]))];
        assert_eq!(infer_edge_times(&lists, &idx).unwrap_err(), InferenceError::MissingCreationTime(NodeId(7)));
    }

    #[test]
    fn empty_list_yields_no_edges() {
        let lists = [FollowerList::new(NodeId(1), vec![])];
        assert!(infer_edge_times(&lists, &CreationIndex::identity()).unwrap().is_empty());
    }

    #[test]
    fn ties_break_by_position_then_list() {
        let lists = [
            FollowerList::new(NodeId(50), ids(&[3, 1])),
            FollowerList::new(NodeId(60), ids(&[3, 2])),
        ];
        let l = infer_edge_times(&lists, &CreationIndex::identity()).unwrap();
        let order: Vec<(u64, u64)> = l.edges().iter().map(|e| (e.src.0, e.dst.0)).collect();
        assert_eq!(order, vec![(3, 50), (3, 60), (1, 50), (2, 60)]);
    }

    fn stream(pairs: &[(u64, u64)]) -> TemporalEdgeList {
        TemporalEdgeList::from_triples(pairs.iter().enumerate().map(|(i, &(a, b))| (a, b, i as u64)))
            .unwrap()
            .0
    }

    #[test]
    fn adjacent_followback_has_order_zero() {
        let h = followback_order_histogram(&stream(&[(1, 2), (2, 1)]));
        assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn intervening_follows_are_counted() {
        // A=1, B=2, C=3, D=4: A->B, B->C, B->D, B->A
        let h = followback_order_histogram(&stream(&[(1, 2), (2, 3), (2, 4), (2, 1)]));
        assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![(2, 1)]);
    }

    #[test]
    fn no_reciprocity_no_histogram() {
        assert!(followback_order_histogram(&stream(&[(1, 2), (3, 1)])).is_empty());
    }
}
