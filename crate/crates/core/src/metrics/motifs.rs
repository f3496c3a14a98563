//! ESU enumeration of connected induced subgraphs, with the RAND-ESU
//! per-level sampling variant.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::MetricError;
use crate::graph::Snapshot;

struct Esu<'a> {
    g: &'a Snapshot,
    size: usize,
    probs: Option<&'a [f64]>,
    rng: ChaCha8Rng,
    leaves: u64,
}

impl Esu<'_> {
    fn keep(&mut self, depth: usize) -> bool {
        match self.probs {
            None => true,
            Some(p) => {
                let p = p[depth - 1];
                p >= 1.0 || self.rng.gen::<f64>() < p
            }
        }
    }

    fn extend(&mut self, sub: &mut Vec<usize>, mut ext: Vec<usize>, root: usize) {
        if sub.len() == self.size {
            self.leaves += 1;
            return;
        }
        while let Some(w) = ext.pop() {
            if !self.keep(sub.len() + 1) {
                continue;
            }
            let mut next = ext.clone();
            for &u in self.g.undirected_neighbors(w) {
                if u <= root || sub.contains(&u) || next.contains(&u) || u == w {
                    continue;
                }
                if sub.iter().any(|&x| self.g.adjacent_undirected(x, u)) {
                    continue;
                }
                next.push(u);
            }
            sub.push(w);
            self.extend(sub, next, root);
            sub.pop();
        }
    }
}

/// Number of connected induced subgraphs with `size` nodes (3 or 4) in the
/// undirected projection.
///
/// Without `sample_probs` (or with all ones) the count is exact. Otherwise
/// `sample_probs[d - 1]` is the chance of descending into a depth-`d` node of
/// the ESU tree, and the number of reached leaves is scaled by the inverse of
/// the product of all probabilities, an unbiased estimate of the count.
pub fn motifs_randesu(s: &Snapshot, size: usize, sample_probs: Option<&[f64]>, seed: u64) -> Result<f64, MetricError> {
    if !(3..=4).contains(&size) {
        return Err(MetricError::InvalidParameter("motif size must be 3 or 4"));
    }
    if let Some(p) = sample_probs {
        if p.len() != size {
            return Err(MetricError::InvalidParameter("one sampling probability per motif level"));
        }
        if p.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
            return Err(MetricError::InvalidParameter("sampling probabilities must lie in (0, 1]"));
        }
    }
    let probs = sample_probs.filter(|p| p.iter().any(|&x| x < 1.0));
    let mut esu = Esu { g: s, size, probs, rng: ChaCha8Rng::seed_from_u64(seed), leaves: 0 };

    let mut sub = Vec::with_capacity(size);
    for v in 0..s.node_count() {
        if !esu.keep(1) {
            continue;
        }
        let ext: Vec<usize> = s.undirected_neighbors(v).iter().copied().filter(|&u| u > v).collect();
        sub.push(v);
        esu.extend(&mut sub, ext, v);
        sub.pop();
    }

    let inclusion: f64 = probs.map_or(1.0, |p| p.iter().product());
    Ok(esu.leaves as f64 / inclusion)
}
