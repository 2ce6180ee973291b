//! Bounded top-k selection under the crate-wide order: larger score first,
//! ties broken by the lower point id.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::PointId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scored {
    pub id: PointId,
    pub score: f64,
}

impl Scored {
    pub fn new(id: PointId, score: f64) -> Self {
        Scored { id, score }
    }

    /// `Less` when `self` ranks ahead of `other`. Sorting with this puts the
    /// best entry first.
    #[inline]
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .score
            .total_cmp(&self.score)
            .then(self.id.cmp(&other.id))
    }

    #[inline]
    pub fn beats(&self, other: &Self) -> bool {
        self.rank_cmp(other) == Ordering::Less
    }
}

// Heap entry ordered so the max-heap top is the worst retained entry.
#[derive(Debug, Clone, Copy)]
struct Worst(Scored);

impl PartialEq for Worst {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Worst {}
impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank_cmp(&other.0)
    }
}

/// Keeps the `k` best entries seen so far.
#[derive(Debug, Clone)]
pub struct TopK {
    k: usize,
    heap: BinaryHeap<Worst>,
}

impl TopK {
    pub fn new(k: usize) -> Self {
        TopK {
            k,
            heap: BinaryHeap::with_capacity(k + 1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.heap.len() >= self.k
    }

    /// The worst retained entry, i.e. the one the next better entry evicts.
    pub fn worst(&self) -> Option<Scored> {
        self.heap.peek().map(|w| w.0)
    }

    #[inline]
    pub fn push(&mut self, id: PointId, score: f64) {
        if self.k == 0 {
            return;
        }
        let cand = Scored::new(id, score);
        if self.heap.len() < self.k {
            self.heap.push(Worst(cand));
        } else if let Some(mut top) = self.heap.peek_mut() {
            if cand.beats(&top.0) {
                *top = Worst(cand);
            }
        }
    }

    /// Retained entries, best first.
    pub fn into_sorted(self) -> Vec<Scored> {
        let mut v: Vec<Scored> = self.heap.into_iter().map(|w| w.0).collect();
        v.sort_unstable_by(Scored::rank_cmp);
        v
    }
}

/// Top-`k` of `scores` (indexed by point id), best first.
pub fn top_k_of(scores: &[f64], k: usize) -> Vec<Scored> {
    let mut top = TopK::new(k.min(scores.len()));
    for (i, &s) in scores.iter().enumerate() {
        top.push(i as PointId, s);
    }
    top.into_sorted()
}
