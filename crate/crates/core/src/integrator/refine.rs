//! Worst-first bisection over a growing partition.
//!
//! Each step bisects the live cell with the largest score, ties going to the
//! leftmost cell. That is the same choice `partition::refine_worst` makes on
//! the full score vector, kept in a heap so a run of `n` steps costs
//! `O(n log n)` rather than `O(n²)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::numeric::compensated_sum;
use crate::partition::Partition;

struct Slot<D> {
    lo: f64,
    hi: f64,
    data: D,
    score: f64,
    live: bool,
    children: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy)]
struct Key {
    score: f64,
    lo: f64,
    idx: usize,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

pub(crate) struct Refiner<D, F>
where
    F: FnMut(f64, f64) -> (D, f64),
{
    eval: F,
    slots: Vec<Slot<D>>,
    heap: BinaryHeap<Key>,
    live: usize,
    roots: usize,
    running: f64,
}

impl<D, F> Refiner<D, F>
where
    F: FnMut(f64, f64) -> (D, f64),
{
    pub(crate) fn new(points: &[f64], eval: F) -> Self {
        let mut r = Refiner {
            eval,
            slots: Vec::new(),
            heap: BinaryHeap::new(),
            live: 0,
            roots: 0,
            running: 0.0,
        };
        for w in points.windows(2) {
            r.push(w[0], w[1]);
        }
        r.roots = r.slots.len();
        r
    }

    fn push(&mut self, lo: f64, hi: f64) {
        let (data, score) = (self.eval)(lo, hi);
        let idx = self.slots.len();
        self.slots.push(Slot {
            lo,
            hi,
            data,
            score,
            live: true,
            children: None,
        });
        self.heap.push(Key { score, lo, idx });
        self.live += 1;
        self.running += score;
    }

    pub(crate) fn len(&self) -> usize {
        self.live
    }

    /// Bisect the worst cell. Returns `false` when that cell is too narrow
    /// to split in floating point.
    pub(crate) fn bisect_worst(&mut self) -> bool {
        let Some(key) = self.heap.peek().copied() else {
            return false;
        };
        let slot = &self.slots[key.idx];
        let (lo, hi) = (slot.lo, slot.hi);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return false;
        }
        self.heap.pop();
        let next = self.slots.len();
        self.slots[key.idx].live = false;
        self.slots[key.idx].children = Some((next, next + 1));
        self.live -= 1;
        self.running -= key.score;
        self.push(lo, mid);
        self.push(mid, hi);
        true
    }

    /// Sum of live scores; the running value drifts, so callers confirm a
    /// stopping decision with [`Refiner::exact_total`].
    pub(crate) fn running_total(&self) -> f64 {
        self.running
    }

    pub(crate) fn exact_total(&mut self) -> f64 {
        let t = compensated_sum(self.slots.iter().filter(|s| s.live).map(|s| s.score));
        self.running = t;
        t
    }

    /// Refine until the total score is at most `target` or `budget` cells
    /// are live. Returns whether the target was met.
    pub(crate) fn run(&mut self, target: f64, budget: usize) -> bool {
        loop {
            if self.running_total() <= target && self.exact_total() <= target {
                return true;
            }
            if self.len() >= budget || !self.bisect_worst() {
                return self.exact_total() <= target;
            }
        }
    }

    /// Live cells in left-to-right order, read off the bisection tree.
    pub(crate) fn cells(&self) -> Vec<(f64, f64, &D)> {
        let mut v = Vec::with_capacity(self.live);
        let mut stack: Vec<usize> = (0..self.roots).rev().collect();
        while let Some(i) = stack.pop() {
            let s = &self.slots[i];
            match s.children {
                Some((l, r)) => stack.extend([r, l]),
                None => v.push((s.lo, s.hi, &s.data)),
            }
        }
        v
    }

    pub(crate) fn partition(&self) -> Partition {
        let cells = self.cells();
        let mut pts: Vec<f64> = cells.iter().map(|c| c.0).collect();
        pts.push(cells[cells.len() - 1].1);
        Partition::new(pts).expect("bisection keeps points strictly increasing")
    }
}
