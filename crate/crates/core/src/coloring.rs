//! Total edge colorings of `K_n` and their text format:
//! `"n k\n"` followed by the `C(n,2)` colors in edge-index order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, edge_from_index, edge_index, pair_count, SimpleGraph, MAX_VERTICES};

pub const RED: u8 = 1;
pub const BLUE: u8 = 2;
pub const GREEN: u8 = 3;

/// Colors are `1..=k`, stored per edge index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawColoring", into = "RawColoring")]
pub struct EdgeColoring {
    n: usize,
    k: u8,
    colors: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawColoring {
    n: usize,
    k: u8,
    colors: Vec<u8>,
}

impl TryFrom<RawColoring> for EdgeColoring {
    type Error = Error;
    fn try_from(r: RawColoring) -> Result<Self> {
        EdgeColoring::new(r.n, r.k, r.colors)
    }
}

impl From<EdgeColoring> for RawColoring {
    fn from(c: EdgeColoring) -> Self {
        RawColoring {
            n: c.n,
            k: c.k,
            colors: c.colors,
        }
    }
}

impl EdgeColoring {
    pub fn new(n: usize, k: u8, colors: Vec<u8>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::InvalidInput(format!("n={n} exceeds {MAX_VERTICES}")));
        }
        if k < 2 {
            return Err(Error::InvalidInput(format!("k={k}: at least two colors")));
        }
        if colors.len() != pair_count(n) {
            return Err(Error::InvalidInput(format!(
                "expected {} colors for n={n}, got {}",
                pair_count(n),
                colors.len()
            )));
        }
        if let Some(i) = colors.iter().position(|&c| c == 0 || c > k) {
            return Err(Error::InvalidInput(format!("edge {i} has color {} outside 1..={k}", colors[i])));
        }
        Ok(EdgeColoring { n, k, colors })
    }

    pub fn monochromatic(n: usize, k: u8, color: u8) -> Self {
        EdgeColoring::new(n, k, vec![color; pair_count(n)]).expect("valid monochromatic coloring")
    }

    /// Red on the edges of `g`, blue elsewhere.
    pub fn from_red_graph(g: &SimpleGraph) -> Self {
        let n = g.n();
        let colors = (0..pair_count(n))
            .map(|i| {
                let (u, v) = edge_from_index(n, i);
                if g.has_edge(u, v) {
                    RED
                } else {
                    BLUE
                }
            })
            .collect();
        EdgeColoring { n, k: 2, colors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, u: usize, v: usize) -> u8 {
        self.colors[edge_index(self.n, u, v)]
    }

    pub fn color_at(&self, idx: usize) -> u8 {
        self.colors[idx]
    }

    pub fn set_color_at(&mut self, idx: usize, color: u8) {
        assert!(color >= 1 && color <= self.k, "color {color} out of range");
        self.colors[idx] = color;
    }

    /// Adjacency rows of the color class `color`.
    pub fn class_rows(&self, color: u8) -> Vec<u64> {
        let mut rows = vec![0u64; self.n];
        let mut idx = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.colors[idx] == color {
                    rows[u] |= bit(v);
                    rows[v] |= bit(u);
                }
                idx += 1;
            }
        }
        rows
    }

    pub fn class(&self, color: u8) -> SimpleGraph {
        SimpleGraph::from_rows(&self.class_rows(color))
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k as usize];
        for &c in &self.colors {
            sizes[c as usize - 1] += 1;
        }
        sizes
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute_vertices(&self, perm: &[usize]) -> Self {
        let mut colors = vec![0u8; self.colors.len()];
        for (i, &c) in self.colors.iter().enumerate() {
            let (u, v) = edge_from_index(self.n, i);
            colors[edge_index(self.n, perm[u], perm[v])] = c;
        }
        EdgeColoring { n: self.n, k: self.k, colors }
    }

    /// Replaces color `c` by `map[c - 1]`.
    pub fn permute_colors(&self, map: &[u8]) -> Self {
        EdgeColoring {
            n: self.n,
            k: self.k,
            colors: self.colors.iter().map(|&c| map[c as usize - 1]).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.colors.iter().map(|c| c.to_string()).collect();
        format!("{} {}\n{}\n", self.n, self.k, body.join(" "))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next_num = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("coloring: missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("coloring: bad {what}: {e}")))
        };
        let n = next_num("n")?;
        let k = next_num("k")?;
        if k > u8::MAX as usize || n > MAX_VERTICES {
            return Err(Error::Parse(format!("coloring: n={n}, k={k} out of range")));
        }
        let mut colors = Vec::with_capacity(pair_count(n));
        for _ in 0..pair_count(n) {
            colors.push(next_num("color")? as u8);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("coloring: trailing tokens".into()));
        }
        EdgeColoring::new(n, k as u8, colors)
    }
}

impl fmt::Display for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for EdgeColoring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EdgeColoring::from_text(s)
    }
}
