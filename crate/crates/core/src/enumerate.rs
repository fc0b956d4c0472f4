//! Isomorph-free generation by canonical augmentation.
//!
//! A child is obtained from a parent on `n - 1` vertices by appending vertex
//! `n - 1` with some neighbor set. The child is kept only if deleting its
//! canonically-last vertex gives back the parent's isomorphism class, so each
//! class has exactly one parent class; duplicates under the same parent are
//! removed by canonical code.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::canon::{canonical_form, canonical_labeling, CanonicalCode};
use crate::error::{Error, Result};
use crate::graph::{bit, SimpleGraph};

pub const DEFAULT_CEILING: usize = 10;

/// A canonically labeled graph together with its code.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub graph: SimpleGraph,
    pub code: CanonicalCode,
}

impl Canonical {
    pub fn new(g: &SimpleGraph) -> Self {
        let c = canonical_labeling(g);
        Canonical {
            graph: g.permuted(&c.positions()),
            code: c.code,
        }
    }
}

/// One representative (in canonical labeling) per isomorphism class of graphs
/// on `n` vertices, in a deterministic order.
pub fn enumerate_graphs(n: usize) -> Result<Vec<SimpleGraph>> {
    enumerate_graphs_with_ceiling(n, DEFAULT_CEILING)
}

pub fn enumerate_graphs_with_ceiling(n: usize, ceiling: usize) -> Result<Vec<SimpleGraph>> {
    check_ceiling(n, ceiling)?;
    let last = Generator::new(|_: &SimpleGraph, _: usize| true).run_observed(n, |_, _, _| {})?;
    Ok(last.into_iter().map(|c| c.graph).collect())
}

/// Sub-stream `index` of `parts`: the children of the level-`n - 1` parents whose
/// position is congruent to `index` mod `parts`. The sub-streams partition
/// [`enumerate_graphs`] and can be consumed independently.
pub fn enumerate_graphs_partitioned(n: usize, parts: usize, index: usize) -> Result<Vec<SimpleGraph>> {
    check_ceiling(n, DEFAULT_CEILING)?;
    if parts == 0 || index >= parts {
        return Err(Error::InvalidInput(format!("sub-stream {index} of {parts}")));
    }
    if n == 0 {
        return Ok(if index == 0 { vec![SimpleGraph::new(0)] } else { vec![] });
    }
    let admit = |_: &SimpleGraph, _: usize| true;
    let gen = Generator::new(admit);
    let parents = gen.run_observed(n - 1, |_, _, _| {})?;
    let mut out = Vec::new();
    for (i, p) in parents.iter().enumerate() {
        if i % parts == index {
            out.extend(gen.children(p).into_iter().map(|c| c.graph));
        }
    }
    Ok(out)
}

fn check_ceiling(n: usize, ceiling: usize) -> Result<()> {
    if n > ceiling {
        return Err(Error::ResourceLimit(format!(
            "graph enumeration at n={n} exceeds the ceiling {ceiling}"
        )));
    }
    Ok(())
}

/// Canonical-augmentation generator restricted to a hereditary class.
///
/// `admit(g, v)` decides whether the graph `g`, whose last vertex `v` was just
/// given its current neighbors, stays in the class. It must be monotone:
/// once a neighbor set is rejected, every superset is rejected too.
pub struct Generator<F> {
    admit: F,
    budget: Option<u64>,
    work: AtomicU64,
    exhausted: AtomicBool,
}

impl<F> Generator<F>
where
    F: Fn(&SimpleGraph, usize) -> bool + Sync,
{
    pub fn new(admit: F) -> Self {
        Generator {
            admit,
            budget: None,
            work: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Caps the number of canonical labelings computed.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn work(&self) -> u64 {
        self.work.load(Ordering::Relaxed)
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    /// All levels `0..=n`. Fails with [`Error::ResourceLimit`] when the budget
    /// runs out.
    pub fn run(&self, n: usize) -> Result<Vec<Vec<Canonical>>> {
        let mut levels = Vec::with_capacity(n + 1);
        self.run_observed(n, |_, level, _| levels.push(level.to_vec()))?;
        Ok(levels)
    }

    /// Generates levels `0..=n`, calling `observe(size, level, complete)` on each
    /// and returning the last one. A level cut short by the budget is still
    /// observed, with `complete == false`, before the error is returned.
    pub fn run_observed(
        &self,
        n: usize,
        mut observe: impl FnMut(usize, &[Canonical], bool),
    ) -> Result<Vec<Canonical>> {
        let mut current = vec![Canonical::new(&SimpleGraph::new(0))];
        observe(0, &current, true);
        for size in 1..=n {
            let next: Vec<Canonical> = current
                .par_iter()
                .map(|p| self.children(p))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect();
            if self.exhausted() {
                observe(size, &next, false);
                return Err(Error::ResourceLimit(format!(
                    "augmentation budget exhausted at level {size}"
                )));
            }
            observe(size, &next, true);
            current = next;
        }
        Ok(current)
    }

    fn charge(&self) -> bool {
        let w = self.work.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(b) = self.budget {
            if w > b {
                self.exhausted.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }

    /// Accepted children of `parent`, in canonical labeling.
    pub fn children(&self, parent: &Canonical) -> Vec<Canonical> {
        let base = parent.graph.with_vertex(0);
        let v = parent.graph.n();
        let mut sets = Vec::new();
        let mut work = base.clone();
        if (self.admit)(&work, v) {
            self.neighbor_sets(&mut work, v, 0, 0, &mut sets);
        }
        let mut seen: HashSet<CanonicalCode> = HashSet::new();
        let mut out = Vec::new();
        for nbrs in sets {
            if self.exhausted() || !self.charge() {
                break;
            }
            let child = parent.graph.with_vertex(nbrs);
            let c = canonical_labeling(&child);
            let last = c.order[v];
            if last != v && canonical_form(&child.remove_vertex(last)) != parent.code {
                continue;
            }
            if seen.insert(c.code.clone()) {
                out.push(Canonical {
                    graph: child.permuted(&c.positions()),
                    code: c.code,
                });
            }
        }
        out
    }

    fn neighbor_sets(&self, g: &mut SimpleGraph, v: usize, from: usize, cur: u64, out: &mut Vec<u64>) {
        out.push(cur);
        for u in from..v {
            g.add_edge(u, v);
            if (self.admit)(g, v) {
                self.neighbor_sets(g, v, u + 1, cur | bit(u), out);
            }
            g.remove_edge(u, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edge_from_index, pair_count};

    /// Counts classes by brute force: all labeled graphs, deduplicated by the
    /// lexicographically least adjacency over every relabeling.
    fn brute_class_count(n: usize) -> usize {
        let perms = {
            fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
                if cur.len() == used.len() {
                    out.push(cur.clone());
                    return;
                }
                for v in 0..used.len() {
                    if !used[v] {
                        used[v] = true;
                        cur.push(v);
                        rec(cur, used, out);
                        cur.pop();
                        used[v] = false;
                    }
                }
            }
            let mut out = Vec::new();
            rec(&mut Vec::new(), &mut vec![false; n], &mut out);
            out
        };
        let m = pair_count(n);
        let mut seen = HashSet::new();
        for mask in 0u32..(1 << m) {
            let mut g = SimpleGraph::new(n);
            for i in 0..m {
                if mask >> i & 1 == 1 {
                    let (u, v) = edge_from_index(n, i);
                    g.add_edge(u, v);
                }
            }
            let key = perms.iter().map(|p| g.permuted(p).to_graph6()).min().unwrap();
            seen.insert(key);
        }
        seen.len()
    }

    #[test]
    fn counts_match_brute_force_dedup() {
        for n in 0..=5 {
            let expected = brute_class_count(n);
            assert_eq!(enumerate_graphs(n).unwrap().len(), expected, "n={n}");
        }
        assert_eq!(enumerate_graphs(4).unwrap().len(), 11);
        assert_eq!(enumerate_graphs(5).unwrap().len(), 34);
        assert_eq!(enumerate_graphs(1).unwrap().len(), 1);
    }

    #[test]
    fn known_counts_to_eight() {
        let counts: Vec<usize> = (0..=8).map(|n| enumerate_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156, 1044, 12346]);
    }

    #[test]
    fn output_is_isomorph_free() {
        let gs = enumerate_graphs(6).unwrap();
        let codes: HashSet<_> = gs.iter().map(canonical_form).collect();
        assert_eq!(codes.len(), gs.len());
    }

    #[test]
    fn partitions_cover_the_stream() {
        let full: HashSet<_> = enumerate_graphs(6).unwrap().iter().map(canonical_form).collect();
        let mut union = HashSet::new();
        let mut total = 0;
        for i in 0..3 {
            let part = enumerate_graphs_partitioned(6, 3, i).unwrap();
            total += part.len();
            union.extend(part.iter().map(canonical_form));
        }
        assert_eq!(total, full.len());
        assert_eq!(union, full);
    }

    #[test]
    fn ceiling_is_enforced() {
        assert!(matches!(enumerate_graphs(11), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn hereditary_filter_triangle_free() {
        // Triangle-free graphs on 1..=7 vertices: 1, 2, 3, 7, 14, 38, 107.
        let gen = Generator::new(|g: &SimpleGraph, v: usize| {
            let nb = g.neighbors(v);
            crate::graph::Bits(nb).all(|u| g.neighbors(u) & nb == 0)
        });
        let levels = gen.run(7).unwrap();
        let counts: Vec<usize> = levels.iter().skip(1).map(|l| l.len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 7, 14, 38, 107]);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let gen = Generator::new(|_: &SimpleGraph, _: usize| true).with_budget(50);
        assert!(matches!(gen.run(6), Err(Error::ResourceLimit(_))));
    }
}
