//! Branch and bound for `ex*(m, n, H')`.
//!
//! Rows (the m-part) are filled one at a time with nonincreasing degrees.
//! Within a row, columns that are still indistinguishable (same neighborhood
//! among the rows placed so far) are taken as a prefix of their class.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::canon::{canonical_labeling_colored, CanonicalCode};
use crate::graph::{bit, low_mask, SimpleGraph};
use crate::pattern::OrientedBipartite;

pub(super) struct Outcome {
    pub value: usize,
    pub witnesses: Vec<SimpleGraph>,
    pub complete: bool,
    pub exhausted: bool,
}

struct Search<'a> {
    m: usize,
    n: usize,
    h: &'a OrientedBipartite,
    domains: Vec<u64>,
    rows: Vec<u64>,
    best: usize,
    witnesses: BTreeMap<CanonicalCode, SimpleGraph>,
    cap: usize,
    collecting: bool,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

/// Exhaustive search for the maximum; `floor` is a known achievable value.
pub(super) fn search(m: usize, n: usize, h: &OrientedBipartite, floor: usize, budget: u64, cap: usize) -> Outcome {
    let row_mask = low_mask(m);
    let col_mask = low_mask(m + n) & !row_mask;
    let mut s = Search {
        m,
        n,
        h,
        domains: h.domains(row_mask, col_mask),
        rows: vec![0; m + n],
        best: floor,
        witnesses: BTreeMap::new(),
        cap: cap.max(1),
        collecting: true,
        nodes: 0,
        budget,
        exhausted: false,
    };
    s.row(0, n, 0);
    Outcome {
        value: s.best,
        complete: s.collecting && !s.exhausted,
        witnesses: s.witnesses.into_values().collect(),
        exhausted: s.exhausted,
    }
}

impl Search<'_> {
    fn prune(&self, edges: usize, bound: usize) -> bool {
        let reach = edges + bound;
        if self.collecting {
            reach < self.best
        } else {
            reach <= self.best
        }
    }

    fn row(&mut self, r: usize, max_deg: usize, edges: usize) {
        if self.exhausted {
            return;
        }
        if r == self.m {
            self.leaf(edges);
            return;
        }
        if self.prune(edges, (self.m - r) * max_deg) {
            return;
        }
        // Column classes by neighborhood among rows 0..r.
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut sigs: Vec<u64> = Vec::new();
        for c in self.m..self.m + self.n {
            let sig = self.rows[c];
            match sigs.iter().position(|&s| s == sig) {
                Some(i) => classes[i].push(c),
                None => {
                    sigs.push(sig);
                    classes.push(vec![c]);
                }
            }
        }
        self.choose(r, &classes, 0, 0, max_deg, edges);
    }

    /// Picks how many columns of `classes[ci..]` row `r` takes, largest first.
    fn choose(&mut self, r: usize, classes: &[Vec<usize>], ci: usize, deg: usize, max_deg: usize, edges: usize) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if ci == classes.len() {
            self.row(r + 1, deg, edges + deg);
            return;
        }
        let class = &classes[ci];
        // Largest feasible prefix: adding columns is monotone for copies.
        let room = max_deg - deg;
        let mut taken = 0;
        while taken < class.len().min(room) {
            let c = class[taken];
            self.link(r, c);
            if self.h.plan().find_through_edge(&self.rows, r, c, Some(&self.domains)).is_some() {
                self.unlink(r, c);
                break;
            }
            taken += 1;
        }
        for count in (0..=taken).rev() {
            if count < taken {
                self.unlink(r, class[count]);
            }
            let remaining: usize = classes[ci + 1..].iter().map(Vec::len).sum();
            let row_cap = (deg + count + remaining).min(max_deg);
            let bound = row_cap * (self.m - r);
            if self.prune(edges, bound) {
                continue;
            }
            self.choose(r, classes, ci + 1, deg + count, max_deg, edges);
        }
    }

    fn leaf(&mut self, edges: usize) {
        if edges < self.best || (edges == self.best && !self.collecting) {
            return;
        }
        if edges > self.best {
            self.best = edges;
            self.witnesses.clear();
            self.collecting = true;
        }
        if !self.collecting {
            return;
        }
        let g = SimpleGraph::from_rows(&self.rows);
        let colors: Vec<u32> = (0..self.m + self.n).map(|v| (v >= self.m) as u32).collect();
        let c = canonical_labeling_colored(&g, &colors);
        self.witnesses.entry(c.code).or_insert(g);
        if self.witnesses.len() >= self.cap {
            self.collecting = false;
        }
    }

    fn link(&mut self, r: usize, c: usize) {
        self.rows[r] |= bit(c);
        self.rows[c] |= bit(r);
    }

    fn unlink(&mut self, r: usize, c: usize) {
        self.rows[r] &= !bit(c);
        self.rows[c] &= !bit(r);
    }
}

/// Randomized greedy subgraph of `K_{m,n}` without oriented copies of `h`.
pub(super) fn greedy(m: usize, n: usize, h: &OrientedBipartite, tries: usize) -> SimpleGraph {
    let row_mask = low_mask(m);
    let col_mask = low_mask(m + n) & !row_mask;
    let domains = h.domains(row_mask, col_mask);
    let mut cells: Vec<(usize, usize)> = (0..m).flat_map(|r| (m..m + n).map(move |c| (r, c))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(((m as u64) << 32) | n as u64);
    let mut best = SimpleGraph::new(m + n);
    for attempt in 0..tries.max(1) {
        if attempt > 0 {
            cells.shuffle(&mut rng);
        }
        let mut g = SimpleGraph::new(m + n);
        for &(r, c) in &cells {
            g.add_edge(r, c);
            if h.plan().find_through_edge(g.rows(), r, c, Some(&domains)).is_some() {
                g.remove_edge(r, c);
            }
        }
        if g.edge_count() > best.edge_count() {
            best = g;
        }
    }
    best
}
