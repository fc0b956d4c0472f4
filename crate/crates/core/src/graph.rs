//! Labeled simple graphs on at most 64 vertices with bit-row adjacency.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

#[inline]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

/// Number of unordered pairs of `n` vertices.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Row-major upper-triangle index of the pair `{u, v}`.
#[inline]
pub fn edge_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(u != v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_from_index(n: usize, mut idx: usize) -> (usize, usize) {
    let mut u = 0;
    loop {
        let row = n - u - 1;
        if idx < row {
            return (u, u + 1 + idx);
        }
        idx -= row;
        u += 1;
    }
}

/// Undirected loop-free graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    /// Edgeless graph. Panics if `n` exceeds [`MAX_VERTICES`].
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices supported");
        SimpleGraph {
            n,
            adj: vec![0; n],
        }
    }

    pub fn try_new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::InvalidInput(format!(
                "{n} vertices requested, at most {MAX_VERTICES} supported"
            )));
        }
        Ok(Self::new(n))
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::try_new(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad edge {u}-{v} for n={n}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency rows, dropping loops and out-of-range
    /// bits and symmetrizing.
    pub fn from_rows(rows: &[u64]) -> Self {
        let n = rows.len();
        let mut g = Self::new(n);
        for (u, &row) in rows.iter().enumerate() {
            for v in Bits(row & low_mask(n) & !bit(u)) {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            g.adj[u] = low_mask(n) & !bit(u);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::new(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Adjacency rows; bit `v` of `rows()[u]` is set iff `uv` is an edge.
    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    #[inline]
    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    #[inline]
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Edges `(u, v)` with `u < v`, in edge-index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| Bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    pub fn complement(&self) -> Self {
        let full = low_mask(self.n);
        SimpleGraph {
            n: self.n,
            adj: (0..self.n).map(|u| !self.adj[u] & full & !bit(u)).collect(),
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n);
        let mut g = Self::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Subgraph induced on `vertices`, relabeled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut g = Self::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Deletes `v`; vertices above it shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Appends a vertex adjacent to the vertices in `nbrs`.
    pub fn with_vertex(&self, nbrs: u64) -> Self {
        let mut g = self.clone();
        let v = g.n;
        assert!(v < MAX_VERTICES);
        g.n += 1;
        g.adj.push(0);
        for u in Bits(nbrs & low_mask(v)) {
            g.add_edge(u, v);
        }
        g
    }

    /// Connected component containing `v`, as a mask.
    pub fn component_of(&self, v: usize) -> u64 {
        let mut seen = bit(v);
        let mut frontier = bit(v);
        while frontier != 0 {
            let mut next = 0;
            for u in Bits(frontier) {
                next |= self.adj[u];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.component_of(0) == low_mask(self.n)
    }

    pub fn component_count(&self) -> usize {
        let mut left = low_mask(self.n);
        let mut count = 0;
        while left != 0 {
            let v = left.trailing_zeros() as usize;
            left &= !self.component_of(v);
            count += 1;
        }
        count
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.is_connected() && self.edge_count() + 1 == self.n
    }

    /// Proper 2-coloring as a mask of one side, if the graph is bipartite.
    /// Vertex 0 of each component lands in the returned side.
    pub fn bipartition(&self) -> Option<u64> {
        let mut side = 0u64;
        let mut seen = 0u64;
        for start in 0..self.n {
            if seen & bit(start) != 0 {
                continue;
            }
            side |= bit(start);
            seen |= bit(start);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let u_side = side & bit(u) != 0;
                for v in Bits(self.adj[u]) {
                    if seen & bit(v) == 0 {
                        seen |= bit(v);
                        if !u_side {
                            side |= bit(v);
                        }
                        stack.push(v);
                    } else if (side & bit(v) != 0) == u_side {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            out.push(((n >> 12) & 63) as u8 + 63);
            out.push(((n >> 6) & 63) as u8 + 63);
            out.push((n & 63) as u8 + 63);
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 is printable ASCII")
    }

    pub fn from_graph6(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        let bad = |msg: &str| Error::Parse(format!("graph6 {s:?}: {msg}"));
        if bytes.is_empty() {
            return Err(bad("empty string"));
        }
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(bad("byte out of range"));
        }
        let (n, body) = if bytes[0] == 126 {
            if bytes.len() < 4 || bytes[1] == 126 {
                return Err(bad("unsupported size header"));
            }
            let n = ((bytes[1] - 63) as usize) << 12 | ((bytes[2] - 63) as usize) << 6 | (bytes[3] - 63) as usize;
            (n, &bytes[4..])
        } else {
            ((bytes[0] - 63) as usize, &bytes[1..])
        };
        if n > MAX_VERTICES {
            return Err(bad("too many vertices"));
        }
        let needed = pair_count(n).div_ceil(6);
        if body.len() != needed {
            return Err(bad("wrong body length"));
        }
        let mut g = Self::new(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[k / 6] - 63;
                if byte >> (5 - k % 6) & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        Ok(g)
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, ", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_graph6())
    }
}

impl Serialize for SimpleGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_graph6())
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SimpleGraph::from_graph6(&s).map_err(serde::de::Error::custom)
    }
}

/// Edge-set complement on the same vertex set.
pub fn complement(g: &SimpleGraph) -> SimpleGraph {
    g.complement()
}
