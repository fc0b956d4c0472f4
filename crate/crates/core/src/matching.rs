//! Backtracking subgraph (not necessarily induced) search with bitset candidate
//! sets, pinned to a host edge or vertex.
//!
//! Pins are tried once per orbit of the pattern's automorphism group acting on
//! arcs (resp. vertices): two pattern arcs in the same orbit lead to the same
//! set of copies through the pinned host edge.

use crate::canon::{canonical_labeling, canonical_labeling_colored, UnionFind};
use crate::graph::{bit, low_mask, Bits, SimpleGraph};

#[derive(Clone, Debug)]
struct Order {
    seq: Vec<usize>,
    /// For step `j`, the pattern vertices placed before `seq[j]` that are adjacent to it.
    anchors: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct MatchPlan {
    adj: Vec<u64>,
    deg: Vec<u32>,
    arc_orders: Vec<Order>,
    vertex_orders: Vec<Order>,
    free_order: Order,
}

impl MatchPlan {
    pub fn new(pattern: &SimpleGraph) -> Self {
        Self::build(pattern, None)
    }

    /// Plan whose pins only use automorphisms preserving `classes`. Required
    /// when searching with per-vertex domains that depend on the classes.
    pub fn with_classes(pattern: &SimpleGraph, classes: &[u32]) -> Self {
        Self::build(pattern, Some(classes.to_vec()))
    }

    fn build(pattern: &SimpleGraph, classes: Option<Vec<u32>>) -> Self {
        let h = pattern.n();
        let adj = pattern.rows().to_vec();
        let deg: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
        let gens = match &classes {
            Some(c) => canonical_labeling_colored(pattern, c).generators,
            None => canonical_labeling(pattern).generators,
        };

        let mut vuf = UnionFind::new(h);
        for g in &gens {
            for (v, &w) in g.iter().enumerate() {
                vuf.union(v, w);
            }
        }
        let vertex_reps: Vec<usize> = (0..h).filter(|&v| vuf.find(v) == v).collect();

        let arcs: Vec<(usize, usize)> = (0..h)
            .flat_map(|p| Bits(adj[p]).map(move |q| (p, q)))
            .collect();
        let arc_id = |p: usize, q: usize| arcs.iter().position(|&a| a == (p, q)).expect("arc exists");
        let mut auf = UnionFind::new(arcs.len());
        for g in &gens {
            for (i, &(p, q)) in arcs.iter().enumerate() {
                auf.union(i, arc_id(g[p], g[q]));
            }
        }
        let arc_reps: Vec<(usize, usize)> = (0..arcs.len())
            .filter(|&i| auf.find(i) == i)
            .map(|i| arcs[i])
            .collect();

        let arc_orders = arc_reps.iter().map(|&(p, q)| greedy_order(&adj, &deg, vec![p, q])).collect();
        let vertex_orders = vertex_reps.iter().map(|&p| greedy_order(&adj, &deg, vec![p])).collect();
        let start = (0..h).max_by_key(|&v| (deg[v], std::cmp::Reverse(v)));
        let free_order = greedy_order(&adj, &deg, start.into_iter().collect());
        MatchPlan {
            adj,
            deg,
            arc_orders,
            vertex_orders,
            free_order,
        }
    }

    /// Number of pattern vertices.
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn arc_orbit_count(&self) -> usize {
        self.arc_orders.len()
    }

    /// A copy of the pattern in `host` using the edge `ab`, as the injection
    /// `pattern vertex -> host vertex`. `domains[p]` restricts the image of `p`;
    /// pinned searches with domains need a plan built by [`MatchPlan::with_classes`]
    /// whose classes the domains respect.
    pub fn find_through_edge(
        &self,
        host: &[u64],
        a: usize,
        b: usize,
        domains: Option<&[u64]>,
    ) -> Option<Vec<usize>> {
        if host[a] & bit(b) == 0 || host.len() < self.order() {
            return None;
        }
        let (da, db) = (host[a].count_ones(), host[b].count_ones());
        let mut map = vec![usize::MAX; self.order()];
        for order in &self.arc_orders {
            let (p, q) = (order.seq[0], order.seq[1]);
            if self.deg[p] > da || self.deg[q] > db {
                continue;
            }
            if let Some(d) = domains {
                if d[p] & bit(a) == 0 || d[q] & bit(b) == 0 {
                    continue;
                }
            }
            map[p] = a;
            map[q] = b;
            if self.extend(host, order, 2, &mut map, bit(a) | bit(b), domains) {
                return Some(map);
            }
        }
        None
    }

    /// A copy of the pattern in `host` that uses vertex `v`.
    pub fn find_through_vertex(&self, host: &[u64], v: usize, domains: Option<&[u64]>) -> Option<Vec<usize>> {
        if host.len() < self.order() {
            return None;
        }
        let dv = host[v].count_ones();
        let mut map = vec![usize::MAX; self.order()];
        for order in &self.vertex_orders {
            let p = order.seq[0];
            if self.deg[p] > dv {
                continue;
            }
            if let Some(d) = domains {
                if d[p] & bit(v) == 0 {
                    continue;
                }
            }
            map[p] = v;
            if self.extend(host, order, 1, &mut map, bit(v), domains) {
                return Some(map);
            }
        }
        None
    }

    /// Any copy of the pattern in `host`.
    pub fn find_any(&self, host: &[u64], domains: Option<&[u64]>) -> Option<Vec<usize>> {
        if host.len() < self.order() {
            return None;
        }
        let mut map = vec![usize::MAX; self.order()];
        if self.extend(host, &self.free_order, 0, &mut map, 0, domains) {
            Some(map)
        } else {
            None
        }
    }

    fn extend(
        &self,
        host: &[u64],
        order: &Order,
        step: usize,
        map: &mut [usize],
        used: u64,
        domains: Option<&[u64]>,
    ) -> bool {
        if step == order.seq.len() {
            return true;
        }
        let u = order.seq[step];
        let mut cand = low_mask(host.len()) & !used;
        for &p in &order.anchors[step] {
            cand &= host[map[p]];
        }
        if let Some(d) = domains {
            cand &= d[u];
        }
        let need = self.deg[u];
        for x in Bits(cand) {
            if host[x].count_ones() < need {
                continue;
            }
            map[u] = x;
            if self.extend(host, order, step + 1, map, used | bit(x), domains) {
                return true;
            }
        }
        false
    }
}

/// Extends `seq` greedily: next is the unplaced vertex with the most placed
/// neighbors, then the highest degree, then the lowest index.
fn greedy_order(adj: &[u64], deg: &[u32], mut seq: Vec<usize>) -> Order {
    let h = adj.len();
    let mut placed = seq.iter().fold(0u64, |m, &v| m | bit(v));
    while seq.len() < h {
        let next = (0..h)
            .filter(|&v| placed & bit(v) == 0)
            .max_by_key(|&v| ((adj[v] & placed).count_ones(), deg[v], std::cmp::Reverse(v)))
            .expect("unplaced vertex remains");
        seq.push(next);
        placed |= bit(next);
    }
    let anchors = seq
        .iter()
        .enumerate()
        .map(|(j, &u)| seq[..j].iter().copied().filter(|&p| adj[u] & bit(p) != 0).collect())
        .collect();
    Order { seq, anchors }
}
