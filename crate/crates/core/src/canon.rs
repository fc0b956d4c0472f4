//! Canonical labeling by equitable-partition refinement and an individualization
//! search tree, pruned with the automorphisms discovered along the way.
//!
//! The certificate of a leaf is the adjacency matrix under the leaf's labeling;
//! the canonical labeling is the leaf with the lexicographically largest
//! certificate. Two leaves with equal certificates differ by an automorphism,
//! which is recorded and used to skip equivalent branches.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{bit, Bits, SimpleGraph};

/// Byte string identifying an isomorphism class (of vertex-colored graphs when
/// built with [`canonical_labeling_colored`]).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCode(pub Vec<u8>);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("canonical codes are ASCII")
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.as_str())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct Canonization {
    pub code: CanonicalCode,
    /// `order[pos]` is the vertex placed at canonical position `pos`.
    pub order: Vec<usize>,
    /// Automorphisms found during the search; `g[v]` is the image of `v`.
    /// Together they generate the (color-preserving) automorphism group.
    pub generators: Vec<Vec<usize>>,
}

impl Canonization {
    /// `pos[v]` is the canonical position of vertex `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            pos[v] = p;
        }
        pos
    }
}

pub fn canonical_form(g: &SimpleGraph) -> CanonicalCode {
    canonical_labeling(g).code
}

pub fn canonical_labeling(g: &SimpleGraph) -> Canonization {
    Searcher::run(g, None)
}

/// Canonical labeling preserving a vertex coloring: only color-preserving
/// relabelings are considered equivalent.
pub fn canonical_labeling_colored(g: &SimpleGraph, colors: &[u32]) -> Canonization {
    assert_eq!(colors.len(), g.n());
    Searcher::run(g, Some(colors))
}

/// The graph relabeled into canonical position, with its code.
pub fn canonical_graph(g: &SimpleGraph) -> (SimpleGraph, CanonicalCode) {
    let c = canonical_labeling(g);
    (g.permuted(&c.positions()), c.code)
}

pub fn automorphism_generators(g: &SimpleGraph) -> Vec<Vec<usize>> {
    canonical_labeling(g).generators
}

pub fn are_isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_form(a) == canonical_form(b)
}

/// Orbit representative (the least element) of every point under the group
/// generated by `gens`.
pub fn orbits(n: usize, gens: &[Vec<usize>]) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for g in gens {
        for (v, &w) in g.iter().enumerate() {
            uf.union(v, w);
        }
    }
    (0..n).map(|v| uf.find(v)).collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Keeps the smaller root so that roots are orbit minima.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

type Leaf = (Vec<u64>, Vec<usize>);

struct Searcher<'a> {
    adj: &'a [u64],
    n: usize,
    generators: Vec<Vec<usize>>,
    first: Option<Leaf>,
    first_path: Vec<usize>,
    best: Option<Leaf>,
}

impl<'a> Searcher<'a> {
    fn run(g: &'a SimpleGraph, colors: Option<&[u32]>) -> Canonization {
        let n = g.n();
        let adj = g.rows();
        let cells = initial_cells(n, colors);
        let mut s = Searcher {
            adj,
            n,
            generators: twin_transpositions(adj, colors),
            first: None,
            first_path: Vec::new(),
            best: None,
        };
        if n > 0 {
            s.search(cells, &mut Vec::new());
        }
        let (cert, order) = s.best.take().unwrap_or_default();
        let mut code = SimpleGraph::from_rows(&cert).to_graph6().into_bytes();
        if n == 0 {
            code = SimpleGraph::new(0).to_graph6().into_bytes();
        }
        if let Some(colors) = colors {
            let mut sorted: Vec<u32> = colors.to_vec();
            sorted.sort_unstable();
            code.push(b';');
            let mut first = true;
            for c in sorted {
                if !first {
                    code.push(b',');
                }
                first = false;
                code.extend_from_slice(c.to_string().as_bytes());
            }
        }
        Canonization {
            code: CanonicalCode(code),
            order,
            generators: s.generators,
        }
    }

    /// Returns `Some(level)` when the caller should unwind to the node at `level`.
    fn search(&mut self, mut cells: Vec<u64>, prefix: &mut Vec<usize>) -> Option<usize> {
        refine(self.adj, &mut cells);
        if cells.len() == self.n {
            return self.leaf(&cells, prefix);
        }
        let level = prefix.len();
        let target = cells
            .iter()
            .position(|c| c.count_ones() > 1)
            .expect("non-discrete partition has a non-singleton cell");
        let cell = cells[target];
        let mut explored: Vec<usize> = Vec::new();
        let mut seen_gens = usize::MAX;
        let mut orbit = Vec::new();
        for v in Bits(cell) {
            if !explored.is_empty() {
                if seen_gens != self.generators.len() {
                    orbit = self.orbits_fixing(prefix);
                    seen_gens = self.generators.len();
                }
                if explored.iter().any(|&u| orbit[u] == orbit[v]) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(bit(v));
            child.push(cell & !bit(v));
            child.extend_from_slice(&cells[target + 1..]);
            prefix.push(v);
            let jump = self.search(child, prefix);
            prefix.pop();
            if let Some(l) = jump {
                if l < level {
                    return Some(l);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[u64], prefix: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let mut pos = vec![0usize; self.n];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let cert: Vec<u64> = order
            .iter()
            .map(|&v| Bits(self.adj[v]).fold(0u64, |acc, u| acc | bit(pos[u])))
            .collect();

        let Some((first_cert, first_order)) = &self.first else {
            self.first = Some((cert.clone(), order.clone()));
            self.first_path = prefix.to_vec();
            self.best = Some((cert, order));
            return None;
        };
        if cert == *first_cert {
            let gen = automorphism(first_order, &order);
            self.generators.push(gen);
            let common = prefix
                .iter()
                .zip(&self.first_path)
                .take_while(|(a, b)| a == b)
                .count();
            return Some(common);
        }
        let (best_cert, best_order) = self.best.as_ref().expect("best set with first");
        match cert.cmp(best_cert) {
            std::cmp::Ordering::Equal => {
                let gen = automorphism(best_order, &order);
                self.generators.push(gen);
            }
            std::cmp::Ordering::Greater => self.best = Some((cert, order)),
            std::cmp::Ordering::Less => {}
        }
        None
    }

    fn orbits_fixing(&self, prefix: &[usize]) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for g in &self.generators {
            if prefix.iter().all(|&p| g[p] == p) {
                for (v, &w) in g.iter().enumerate() {
                    uf.union(v, w);
                }
            }
        }
        (0..self.n).map(|v| uf.find(v)).collect()
    }
}

/// Maps the vertex at each position of `from` to the vertex at the same position of `to`.
fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut g = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        g[a] = b;
    }
    g
}

fn initial_cells(n: usize, colors: Option<&[u32]>) -> Vec<u64> {
    match colors {
        None => {
            if n == 0 {
                vec![]
            } else {
                vec![crate::graph::low_mask(n)]
            }
        }
        Some(colors) => {
            let mut distinct: Vec<u32> = colors.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            distinct
                .iter()
                .map(|&c| {
                    colors
                        .iter()
                        .enumerate()
                        .filter(|&(_, &x)| x == c)
                        .fold(0u64, |m, (v, _)| m | bit(v))
                })
                .collect()
        }
    }
}

/// Transpositions of same-colored twins (`N(u) - v == N(v) - u`); each is an automorphism.
fn twin_transpositions(adj: &[u64], colors: Option<&[u32]>) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut gens = Vec::new();
    let mut has_twin_rep = vec![false; n];
    for u in 0..n {
        if has_twin_rep[u] {
            continue;
        }
        for v in u + 1..n {
            if has_twin_rep[v] {
                continue;
            }
            if let Some(c) = colors {
                if c[u] != c[v] {
                    continue;
                }
            }
            if adj[u] & !bit(v) == adj[v] & !bit(u) {
                let mut g: Vec<usize> = (0..n).collect();
                g.swap(u, v);
                gens.push(g);
                has_twin_rep[v] = true;
            }
        }
    }
    gens
}

/// Refines an ordered partition to the coarsest equitable refinement. Cells
/// split by neighbor count into the splitter, fragments ordered by count.
fn refine(adj: &[u64], cells: &mut Vec<u64>) {
    let mut si = 0;
    let mut buckets: Vec<(u32, u64)> = Vec::new();
    while si < cells.len() {
        let w = cells[si];
        let mut split = false;
        let mut next = Vec::with_capacity(cells.len() + 4);
        for &c in cells.iter() {
            if c & (c - 1) == 0 {
                next.push(c);
                continue;
            }
            buckets.clear();
            for v in Bits(c) {
                let k = (adj[v] & w).count_ones();
                match buckets.iter_mut().find(|(kk, _)| *kk == k) {
                    Some((_, m)) => *m |= bit(v),
                    None => buckets.push((k, bit(v))),
                }
            }
            if buckets.len() > 1 {
                split = true;
                buckets.sort_unstable_by_key(|&(k, _)| k);
            }
            next.extend(buckets.iter().map(|&(_, m)| m));
        }
        if split {
            *cells = next;
            si = 0;
        } else {
            si += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edge_from_index, pair_count};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
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
    }

    /// Brute-force isomorphism test by trying every relabeling.
    fn brute_isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
        a.n() == b.n()
            && a.edge_count() == b.edge_count()
            && permutations(a.n()).iter().any(|p| &a.permuted(p) == b)
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for i in 0..pair_count(n) {
            if rng.random_bool(p) {
                let (u, v) = edge_from_index(n, i);
                g.add_edge(u, v);
            }
        }
        g
    }

    #[test]
    fn relabeled_paths_share_a_code() {
        let a = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let b = SimpleGraph::from_edges(3, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn c5_matches_its_complement() {
        let c5 = SimpleGraph::cycle(5);
        assert!(brute_isomorphic(&c5, &c5.complement()));
        assert_eq!(canonical_form(&c5), canonical_form(&c5.complement()));
    }

    #[test]
    fn k3_and_p3_differ() {
        assert_ne!(
            canonical_form(&SimpleGraph::complete(3)),
            canonical_form(&SimpleGraph::path(3))
        );
    }

    #[test]
    fn invariant_under_all_relabelings_up_to_six() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=6 {
            let perms = permutations(n);
            for _ in 0..6 {
                let g = random_graph(&mut rng, n, 0.5);
                let code = canonical_form(&g);
                for p in &perms {
                    assert_eq!(canonical_form(&g.permuted(p)), code, "n={n} g={g:?} p={p:?}");
                }
            }
        }
    }

    #[test]
    fn codes_separate_exactly_the_isomorphism_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let graphs: Vec<SimpleGraph> = (0..25).map(|_| random_graph(&mut rng, n, 0.5)).collect();
            for a in &graphs {
                for b in &graphs {
                    assert_eq!(canonical_form(a) == canonical_form(b), brute_isomorphic(a, b));
                }
            }
        }
    }

    #[test]
    fn generators_are_automorphisms_and_group_order_matches() {
        // |Aut(C6)| = 12, |Aut(K_{2,3})| = 12, |Aut(Petersen)| = 120.
        let petersen = SimpleGraph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            ],
        )
        .unwrap();
        for (g, order) in [
            (SimpleGraph::cycle(6), 12),
            (SimpleGraph::complete_bipartite(2, 3), 12),
            (petersen, 120),
        ] {
            let gens = automorphism_generators(&g);
            for a in &gens {
                assert_eq!(g.permuted(a), g);
            }
            assert_eq!(group_order(g.n(), &gens), order);
        }
    }

    fn group_order(n: usize, gens: &[Vec<usize>]) -> usize {
        use std::collections::HashSet;
        let id: Vec<usize> = (0..n).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut stack = vec![id];
        while let Some(p) = stack.pop() {
            for g in gens {
                let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
                if seen.insert(q.clone()) {
                    stack.push(q);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn colored_labeling_respects_colors() {
        // The path 0-1-2 colored (0,1,1) is not color-isomorphic to the coloring (1,0,1).
        let p = SimpleGraph::path(3);
        let a = canonical_labeling_colored(&p, &[0, 1, 1]).code;
        let b = canonical_labeling_colored(&p, &[1, 0, 1]).code;
        let c = canonical_labeling_colored(&p, &[1, 1, 0]).code;
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn large_symmetric_graphs_finish() {
        let mut matching = SimpleGraph::new(40);
        for i in 0..15 {
            matching.add_edge(2 * i, 2 * i + 1);
        }
        let c = canonical_labeling(&matching);
        assert_eq!(SimpleGraph::from_graph6(std::str::from_utf8(&c.code.0).unwrap()).unwrap().edge_count(), 15);
        let _ = canonical_form(&SimpleGraph::new(64));
        let _ = canonical_form(&SimpleGraph::complete_bipartite(20, 20));
    }
}
