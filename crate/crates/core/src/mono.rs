//! Monochromatic copies of a pattern and NIM edges.

use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::graph::{bit, edge_from_index, edge_index, pair_count, Bits};
use crate::pattern::{BipartitePattern, PatternGraph};

/// Per-edge NIM flags with per-color totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NimReport {
    pub flags: Vec<bool>,
    /// `per_color[i - 1]` counts NIM edges of color `i`.
    pub per_color: Vec<usize>,
    pub total: usize,
}

impl NimReport {
    fn from_flags(c: &EdgeColoring, flags: Vec<bool>) -> Self {
        let mut per_color = vec![0; c.k() as usize];
        for (i, &f) in flags.iter().enumerate() {
            if f {
                per_color[c.color_at(i) as usize - 1] += 1;
            }
        }
        NimReport {
            total: per_color.iter().sum(),
            per_color,
            flags,
        }
    }

    /// Colors carrying at least one NIM edge.
    pub fn colors_present(&self) -> Vec<u8> {
        (0..self.per_color.len())
            .filter(|&i| self.per_color[i] > 0)
            .map(|i| i as u8 + 1)
            .collect()
    }

    /// Adjacency rows of the NIM edges of color `color`.
    pub fn nim_rows(&self, c: &EdgeColoring, color: u8) -> Vec<u64> {
        let n = c.n();
        let mut rows = vec![0u64; n];
        for (i, &f) in self.flags.iter().enumerate() {
            if f && c.color_at(i) == color {
                let (u, v) = edge_from_index(n, i);
                rows[u] |= bit(v);
                rows[v] |= bit(u);
            }
        }
        rows
    }
}

/// Whether the edge `uv` lies in a copy of `H` all of whose edges have the
/// color of `uv`.
pub fn mono_copy_exists(c: &EdgeColoring, u: usize, v: usize, h: &BipartitePattern) -> bool {
    let rows = c.class_rows(c.color(u, v));
    h.forbidden().plan().find_through_edge(&rows, u, v, None).is_some()
}

pub fn nim_edges(c: &EdgeColoring, h: &BipartitePattern) -> NimReport {
    nim_edges_for(c, h.forbidden())
}

pub fn nim_edges_for(c: &EdgeColoring, h: &PatternGraph) -> NimReport {
    let n = c.n();
    let mut flags = vec![true; pair_count(n)];
    if n < h.order() {
        return NimReport::from_flags(c, flags);
    }
    for color in 1..=c.k() {
        let rows = c.class_rows(color);
        scan_class(c, h, color, &rows, &mut flags, |_| true);
    }
    NimReport::from_flags(c, flags)
}

/// Recomputes the flags of the `color` edges selected by `select`. Each copy
/// found certifies all its edges as non-NIM.
fn scan_class(
    c: &EdgeColoring,
    h: &PatternGraph,
    color: u8,
    rows: &[u64],
    flags: &mut [bool],
    select: impl Fn(usize) -> bool,
) {
    let n = c.n();
    let mut covered = vec![false; flags.len()];
    let pattern_edges: Vec<(usize, usize)> = h.graph().edges().collect();
    for idx in 0..flags.len() {
        if c.color_at(idx) != color || !select(idx) {
            continue;
        }
        if covered[idx] {
            flags[idx] = false;
            continue;
        }
        let (u, v) = edge_from_index(n, idx);
        match h.plan().find_through_edge(rows, u, v, None) {
            Some(map) => {
                for &(p, q) in &pattern_edges {
                    covered[edge_index(n, map[p], map[q])] = true;
                }
                flags[idx] = false;
            }
            None => flags[idx] = true,
        }
    }
}

/// Distinct copies of `H` in the class of `color` (as injections
/// `pattern vertex -> host vertex`, one per edge set), by exhaustive
/// injection scan. Stops after `limit` copies.
pub fn enumerate_mono_copies(c: &EdgeColoring, color: u8, h: &BipartitePattern, limit: usize) -> Vec<Vec<usize>> {
    let rows = c.class_rows(color);
    let pattern = h.graph();
    let hn = pattern.n();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(hn);
    fn rec(
        rows: &[u64],
        pattern: &crate::graph::SimpleGraph,
        map: &mut Vec<usize>,
        seen: &mut std::collections::HashSet<Vec<usize>>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let n = rows.len();
        if map.len() == pattern.n() {
            let mut key: Vec<usize> = pattern.edges().map(|(p, q)| edge_index(n, map[p], map[q])).collect();
            key.sort_unstable();
            if seen.insert(key) {
                out.push(map.clone());
            }
            return;
        }
        let p = map.len();
        for x in 0..n {
            if map.contains(&x) {
                continue;
            }
            if (0..p).all(|q| !pattern.has_edge(p, q) || rows[x] & bit(map[q]) != 0) {
                map.push(x);
                rec(rows, pattern, map, seen, out, limit);
                map.pop();
            }
        }
    }
    if limit > 0 {
        rec(&rows, pattern, &mut map, &mut seen, &mut out, limit);
    }
    out
}

/// For each color, the NIM edges of that color form an `H`-free graph.
pub fn same_color_nim_is_h_free(c: &EdgeColoring, report: &NimReport, h: &BipartitePattern) -> bool {
    (1..=c.k()).all(|color| {
        let rows = report.nim_rows(c, color);
        h.forbidden().plan().find_any(&rows, None).is_none()
    })
}

/// A coloring with NIM flags kept up to date under single-edge recoloring.
#[derive(Clone, Debug)]
pub struct NimState<'a> {
    pattern: &'a PatternGraph,
    coloring: EdgeColoring,
    rows: Vec<Vec<u64>>,
    flags: Vec<bool>,
    per_color: Vec<usize>,
    total: usize,
}

impl<'a> NimState<'a> {
    pub fn new(coloring: EdgeColoring, pattern: &'a PatternGraph) -> Self {
        let report = nim_edges_for(&coloring, pattern);
        let rows = (1..=coloring.k()).map(|c| coloring.class_rows(c)).collect();
        NimState {
            pattern,
            rows,
            flags: report.flags,
            per_color: report.per_color,
            total: report.total,
            coloring,
        }
    }

    pub fn coloring(&self) -> &EdgeColoring {
        &self.coloring
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn report(&self) -> NimReport {
        NimReport {
            flags: self.flags.clone(),
            per_color: self.per_color.clone(),
            total: self.total,
        }
    }

    /// Recolors edge `idx` and updates the flags. Only edges of the old and
    /// new colors can change status: old-color edges may lose their copies,
    /// new-color edges may gain one.
    pub fn recolor(&mut self, idx: usize, color: u8) {
        let old = self.coloring.color_at(idx);
        if old == color {
            return;
        }
        let n = self.coloring.n();
        let (u, v) = edge_from_index(n, idx);
        self.coloring.set_color_at(idx, color);
        let (oi, ni) = (old as usize - 1, color as usize - 1);
        self.rows[oi][u] &= !bit(v);
        self.rows[oi][v] &= !bit(u);
        self.rows[ni][u] |= bit(v);
        self.rows[ni][v] |= bit(u);
        if n < self.pattern.order() {
            return;
        }

        // Old class: previously non-NIM edges near uv may become NIM.
        let mut flags = std::mem::take(&mut self.flags);
        let reach = if self.pattern.graph().is_connected() {
            let before = {
                let mut r = self.rows[oi].clone();
                r[u] |= bit(v);
                r[v] |= bit(u);
                r
            };
            Some(component(&before, u))
        } else {
            None
        };
        let was = flags.clone();
        scan_class(&self.coloring, self.pattern, old, &self.rows[oi], &mut flags, |e| {
            if was[e] {
                return false;
            }
            match reach {
                Some(comp) => {
                    let (a, _) = edge_from_index(n, e);
                    comp & bit(a) != 0
                }
                None => true,
            }
        });
        // New class: the recolored edge and previously NIM edges.
        scan_class(&self.coloring, self.pattern, color, &self.rows[ni], &mut flags, |e| e == idx || was[e]);
        self.flags = flags;
        self.recount();
    }

    fn recount(&mut self) {
        let mut per_color = vec![0; self.coloring.k() as usize];
        for (i, &f) in self.flags.iter().enumerate() {
            if f {
                per_color[self.coloring.color_at(i) as usize - 1] += 1;
            }
        }
        self.total = per_color.iter().sum();
        self.per_color = per_color;
    }
}

fn component(rows: &[u64], start: usize) -> u64 {
    let mut seen = bit(start);
    let mut frontier = bit(start);
    while frontier != 0 {
        let mut next = 0;
        for x in Bits(frontier) {
            next |= rows[x];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{BLUE, RED};
    use crate::graph::SimpleGraph;
    use crate::pattern::BipartitePattern;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k3() -> BipartitePattern {
        BipartitePattern::parse("k3").unwrap()
    }

    fn c4() -> BipartitePattern {
        BipartitePattern::parse("c4").unwrap()
    }

    fn random_coloring(rng: &mut ChaCha8Rng, n: usize, k: u8) -> EdgeColoring {
        let colors = (0..pair_count(n)).map(|_| rng.random_range(1..=k)).collect();
        EdgeColoring::new(n, k, colors).unwrap()
    }

    fn naive_flags(c: &EdgeColoring, h: &BipartitePattern) -> Vec<bool> {
        let n = c.n();
        let mut flags = vec![true; pair_count(n)];
        for color in 1..=c.k() {
            for m in enumerate_mono_copies(c, color, h, usize::MAX) {
                for (p, q) in h.graph().edges() {
                    flags[edge_index(n, m[p], m[q])] = false;
                }
            }
        }
        flags
    }

    #[test]
    fn all_red_triangle() {
        let c = EdgeColoring::monochromatic(3, 2, RED);
        assert!(mono_copy_exists(&c, 0, 1, &k3()));
        assert_eq!(nim_edges(&c, &k3()).total, 0);
    }

    #[test]
    fn red_star_is_triangle_free() {
        let star = SimpleGraph::complete_bipartite(1, 4);
        let c = EdgeColoring::from_red_graph(&star);
        for (u, v) in star.edges() {
            assert!(!mono_copy_exists(&c, u, v, &k3()));
        }
    }

    #[test]
    fn nim_examples() {
        assert_eq!(nim_edges(&EdgeColoring::monochromatic(4, 2, RED), &k3()).total, 0);
        let c5 = EdgeColoring::from_red_graph(&SimpleGraph::cycle(5));
        let r = nim_edges(&c5, &k3());
        assert_eq!(r.total, 10);
        assert_eq!(r.per_color, vec![5, 5]);
        let small = EdgeColoring::monochromatic(3, 2, BLUE);
        assert_eq!(nim_edges(&small, &c4()).total, 3);
    }

    #[test]
    fn copy_enumeration_examples() {
        let c = EdgeColoring::monochromatic(4, 2, RED);
        assert_eq!(enumerate_mono_copies(&c, RED, &k3(), 100).len(), 4);
        assert_eq!(enumerate_mono_copies(&c, RED, &k3(), 2).len(), 2);
        // K4 holds three 4-cycles.
        assert_eq!(enumerate_mono_copies(&c, RED, &c4(), 100).len(), 3);
        let petersen_free = EdgeColoring::from_red_graph(&SimpleGraph::cycle(5));
        assert!(enumerate_mono_copies(&petersen_free, RED, &c4(), 10).is_empty());
    }

    #[test]
    fn pinned_detection_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let patterns = [k3(), c4(), BipartitePattern::parse("k2,3").unwrap()];
        for round in 0..120 {
            let n = 3 + round % 6;
            let k = 2 + (round % 2) as u8;
            let c = random_coloring(&mut rng, n, k);
            for h in &patterns {
                let r = nim_edges(&c, h);
                assert_eq!(r.flags, naive_flags(&c, h), "n={n} {}", h.name());
                assert!(same_color_nim_is_h_free(&c, &r, h));
            }
        }
    }

    #[test]
    fn relabeling_and_color_swap_permute_flags() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = c4();
        for _ in 0..30 {
            let n = 7;
            let c = random_coloring(&mut rng, n, 2);
            let r = nim_edges(&c, &h);
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let p = c.permute_vertices(&perm);
            let rp = nim_edges(&p, &h);
            for i in 0..r.flags.len() {
                let (u, v) = edge_from_index(n, i);
                assert_eq!(r.flags[i], rp.flags[edge_index(n, perm[u], perm[v])]);
            }
            let swapped = nim_edges(&c.permute_colors(&[2, 1]), &h);
            assert_eq!(swapped.flags, r.flags);
        }
    }

    #[test]
    fn incremental_matches_full_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for h in [k3(), c4()] {
            for _ in 0..10 {
                let n = 8;
                let k = 3;
                let c = random_coloring(&mut rng, n, k);
                let pattern = h.forbidden();
                let mut st = NimState::new(c, pattern);
                for _ in 0..40 {
                    let idx = rng.random_range(0..pair_count(n));
                    let col = rng.random_range(1..=k);
                    st.recolor(idx, col);
                    let full = nim_edges(st.coloring(), &h);
                    assert_eq!(st.report(), full);
                }
            }
        }
    }
}
