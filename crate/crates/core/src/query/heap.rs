use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::graph::VertexId;

/// A matched `(r, s)` pair with its network distance. Pairs order by
/// `(dist, r, s)`.
#[derive(Debug, Clone, Copy)]
pub struct MatchPair {
    pub r: VertexId,
    pub s: VertexId,
    pub dist: f64,
}

impl PartialEq for MatchPair {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MatchPair {}

impl PartialOrd for MatchPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MatchPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.r.cmp(&other.r))
            .then(self.s.cmp(&other.s))
    }
}

/// Bounded worst-out collection of the best pairs seen so far.
///
/// Holds at most `capacity` pairs (unbounded when `None`), never a pair
/// farther than `limit`, and at most one entry per `(r, s)`, the closest.
#[derive(Debug, Clone)]
pub struct ResultHeap {
    capacity: Option<usize>,
    limit: f64,
    entries: BTreeSet<MatchPair>,
    index: HashMap<(VertexId, VertexId), f64>,
}

impl ResultHeap {
    pub fn new(capacity: Option<usize>, limit: f64) -> Self {
        ResultHeap {
            capacity,
            limit,
            entries: BTreeSet::new(),
            index: HashMap::new(),
        }
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn limit(&self) -> f64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.capacity.is_some_and(|k| self.entries.len() >= k)
    }

    pub fn worst(&self) -> Option<&MatchPair> {
        self.entries.last()
    }

    /// Largest distance a new pair may have and still get in.
    pub fn bound(&self) -> f64 {
        match self.worst() {
            Some(w) if self.is_full() => w.dist.min(self.limit),
            _ if self.capacity == Some(0) => f64::NEG_INFINITY,
            _ => self.limit,
        }
    }

    /// Offers a pair; returns whether the heap changed.
    pub fn insert(&mut self, pair: MatchPair) -> bool {
        if pair.dist.is_nan() || pair.dist > self.limit || self.capacity == Some(0) {
            return false;
        }
        let key = (pair.r, pair.s);
        let previous = self.index.get(&key).copied();
        if previous.is_some_and(|d| d <= pair.dist) {
            return false;
        }
        if previous.is_none() && self.is_full() && self.worst().is_some_and(|w| pair >= *w) {
            return false;
        }
        if let Some(d) = previous {
            self.entries.remove(&MatchPair { dist: d, ..pair });
        }
        self.entries.insert(pair);
        self.index.insert(key, pair.dist);
        if let Some(k) = self.capacity {
            while self.entries.len() > k {
                let evicted = self.entries.pop_last().expect("non-empty");
                self.index.remove(&(evicted.r, evicted.s));
            }
        }
        true
    }

    pub fn merge(&mut self, other: ResultHeap) {
        for p in other.entries {
            self.insert(p);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &MatchPair> {
        self.entries.iter()
    }

    /// Pairs sorted by `(dist, r, s)`.
    pub fn into_sorted_vec(self) -> Vec<MatchPair> {
        self.entries.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(r: u32, s: u32, dist: f64) -> MatchPair {
        MatchPair {
            r: VertexId(r),
            s: VertexId(s),
            dist,
        }
    }

    #[test]
    fn keeps_best_k_and_dedups() {
        let mut h = ResultHeap::new(Some(2), f64::INFINITY);
        assert!(h.insert(p(0, 1, 5.0)));
        assert!(h.insert(p(0, 2, 3.0)));
        assert!(!h.insert(p(1, 1, 6.0)));
        assert!(h.insert(p(0, 1, 4.0)));
        assert!(!h.insert(p(0, 1, 4.5)));
        assert_eq!(h.bound(), 4.0);
        assert!(h.insert(p(2, 2, 1.0)));
        assert_eq!(h.clone().into_sorted_vec(), vec![p(2, 2, 1.0), p(0, 2, 3.0)]);
        // equal distance: the smaller (r, s) wins
        assert!(!h.insert(p(0, 9, 3.0)));
        assert!(h.insert(p(0, 1, 3.0)));
        assert_eq!(h.worst(), Some(&p(0, 1, 3.0)));
    }

    #[test]
    fn limit_and_zero_capacity() {
        let mut h = ResultHeap::new(None, 2.0);
        assert!(!h.insert(p(0, 1, 2.5)));
        assert!(h.insert(p(0, 1, 2.0)));
        assert_eq!(h.bound(), 2.0);
        let mut z = ResultHeap::new(Some(0), f64::INFINITY);
        assert!(!z.insert(p(0, 1, 0.0)));
        assert!(z.is_full());
    }

    proptest! {
        #[test]
        fn matches_sort_and_truncate(
            raw in prop::collection::vec((0u32..6, 0u32..6, 0u32..20), 0..60),
            k in 0usize..8,
            limit in 0u32..25,
        ) {
            let mut h = ResultHeap::new(Some(k), limit as f64);
            for &(r, s, d) in &raw {
                h.insert(p(r, s, d as f64));
                prop_assert!(h.len() <= k);
                prop_assert!(h.iter().all(|e| e.dist <= limit as f64));
            }
            let mut best: HashMap<(u32, u32), u32> = HashMap::new();
            for &(r, s, d) in &raw {
                if d <= limit {
                    let e = best.entry((r, s)).or_insert(d);
                    *e = (*e).min(d);
                }
            }
            let mut expect: Vec<MatchPair> = best.into_iter().map(|((r, s), d)| p(r, s, d as f64)).collect();
            expect.sort();
            expect.truncate(k);
            prop_assert_eq!(h.into_sorted_vec(), expect);
        }
    }
}
