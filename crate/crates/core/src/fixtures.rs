//! Small named graphs shared by tests and documentation.

use crate::graph::Snapshot;

/// Directed triangle `1 -> 2 -> 3 -> 1`.
pub fn c3() -> Snapshot {
    Snapshot::from_pairs(&[(1, 2), (2, 3), (3, 1)])
}

/// Directed path `1 -> 2 -> 3`.
pub fn p3() -> Snapshot {
    Snapshot::from_pairs(&[(1, 2), (2, 3)])
}

/// In-star: leaves `1, 2, 3` all follow `0`.
pub fn star() -> Snapshot {
    Snapshot::from_pairs(&[(1, 0), (2, 0), (3, 0)])
}

/// Co-citation fixture: `1` and `2` both follow `3` and `4`.
pub fn coc() -> Snapshot {
    Snapshot::from_pairs(&[(1, 3), (2, 3), (1, 4), (2, 4)])
}

/// Complete directed graph on nodes `0..4` (all 12 ordered pairs).
pub fn k4u() -> Snapshot {
    let mut pairs = alloc::vec::Vec::new();
    for a in 0..4u64 {
        for b in 0..4u64 {
            if a != b {
                pairs.push((a, b));
            }
        }
    }
    Snapshot::from_pairs(&pairs)
}
