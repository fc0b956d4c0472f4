//! Monochromatic stars around NIM edges, the merged vertex set `S`, and the
//! classes of outside vertices keyed by their color vector toward `S`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::graph::{bit, Bits};
use crate::mono::{nim_edges, NimReport};
use crate::pattern::BipartitePattern;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub color: u8,
    pub center: usize,
    pub leaves: Vec<usize>,
    /// A leaf `v` with `center v` a NIM edge of this color.
    pub nim_partner: usize,
    /// True when the center had at least `h` edges of this color, so the star
    /// has exactly `h + 1` vertices.
    pub saturated: bool,
}

impl Star {
    pub fn vertices(&self) -> Vec<usize> {
        let mut v = vec![self.center];
        v.extend(&self.leaves);
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorClass {
    /// `vector[j]` is the color of the edges from the class to `S[j]`.
    pub vector: Vec<u8>,
    pub members: Vec<usize>,
    /// The colors occurring in `vector`, ascending.
    pub feasible: Vec<u8>,
}

impl VectorClass {
    pub fn is_constant(&self) -> bool {
        self.feasible.len() <= 1
    }

    pub fn has_color(&self, color: u8) -> bool {
        self.feasible.contains(&color)
    }

    pub fn vector_string(&self) -> String {
        self.vector.iter().map(|c| c.to_string()).collect()
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &v| m | bit(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarDecomposition {
    pub h: usize,
    pub k: u8,
    pub stars: Vec<Star>,
    /// `S`, ascending.
    pub s: Vec<usize>,
    /// Classes ordered by vector.
    pub classes: Vec<VectorClass>,
    /// `class_of[z]` is the index of the class of `z`, `None` for `z ∈ S`.
    pub class_of: Vec<Option<usize>>,
}

impl StarDecomposition {
    pub fn t(&self) -> usize {
        self.s.len()
    }

    pub fn s_mask(&self) -> u64 {
        self.s.iter().fold(0, |m, &v| m | bit(v))
    }

    /// Class with every coordinate equal to `color`.
    pub fn constant_class(&self, color: u8) -> Option<&VectorClass> {
        self.classes
            .iter()
            .find(|c| c.feasible.len() == 1 && c.feasible[0] == color)
    }

    /// Violated structural invariants, empty when all hold.
    pub fn violations(&self, c: &EdgeColoring, report: &NimReport) -> Vec<String> {
        let mut out = Vec::new();
        let n = c.n();
        for st in &self.stars {
            for &l in &st.leaves {
                if c.color(st.center, l) != st.color {
                    out.push(format!("star {}: edge {}-{} is not color {}", st.color, st.center, l, st.color));
                }
            }
            let idx = crate::graph::edge_index(n, st.center, st.nim_partner);
            if !st.leaves.contains(&st.nim_partner) || !report.flags[idx] || c.color_at(idx) != st.color {
                out.push(format!("star {}: no NIM edge at the center", st.color));
            }
            if st.saturated && st.leaves.len() != self.h {
                out.push(format!("star {}: saturated star has {} leaves", st.color, st.leaves.len()));
            }
        }
        let bound = if self.k == 2 { 2 * self.h + 2 } else { self.k as usize * (self.h + 1) };
        if self.t() > bound {
            out.push(format!("t={} exceeds {bound}", self.t()));
        }
        let covered: usize = self.classes.iter().map(|cl| cl.members.len()).sum();
        if covered + self.t() != n {
            out.push("classes and S do not partition the vertex set".into());
        }
        for cl in &self.classes {
            for (j, &sj) in self.s.iter().enumerate() {
                if cl.members.iter().any(|&z| c.color(z, sj) != cl.vector[j]) {
                    out.push(format!("class {}: edges to s={sj} are not all color {}", cl.vector_string(), cl.vector[j]));
                }
            }
        }
        out
    }
}

/// Decomposition over all colors of `c`, computing the NIM flags first.
pub fn build_star_decomposition(c: &EdgeColoring, h: &BipartitePattern) -> Result<StarDecomposition> {
    let report = nim_edges(c, h);
    build_star_decomposition_with(c, &report, h)
}

/// Decomposition from precomputed NIM flags; every color needs a NIM edge.
pub fn build_star_decomposition_with(
    c: &EdgeColoring,
    report: &NimReport,
    h: &BipartitePattern,
) -> Result<StarDecomposition> {
    let n = c.n();
    let hh = h.h();
    let mut stars = Vec::with_capacity(c.k() as usize);
    for color in 1..=c.k() {
        stars.push(build_star(c, report, color, hh).ok_or_else(|| Error::NotApplicable {
            reason: "missing-nim-color",
            detail: format!("no NIM edge of color {color}"),
        })?);
    }
    let s_mask = stars
        .iter()
        .flat_map(|st| st.vertices())
        .fold(0u64, |m, v| m | bit(v));
    let s: Vec<usize> = Bits(s_mask).collect();
    let mut by_vector: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    for z in (0..n).filter(|&z| s_mask & bit(z) == 0) {
        let vector: Vec<u8> = s.iter().map(|&sj| c.color(z, sj)).collect();
        by_vector.entry(vector).or_default().push(z);
    }
    let mut class_of = vec![None; n];
    let classes: Vec<VectorClass> = by_vector
        .into_iter()
        .enumerate()
        .map(|(i, (vector, members))| {
            for &z in &members {
                class_of[z] = Some(i);
            }
            let mut feasible = vector.clone();
            feasible.sort_unstable();
            feasible.dedup();
            VectorClass {
                vector,
                members,
                feasible,
            }
        })
        .collect();
    Ok(StarDecomposition {
        h: hh,
        k: c.k(),
        stars,
        s,
        classes,
        class_of,
    })
}

/// The star of `color`; `None` if that color has no NIM edge.
fn build_star(c: &EdgeColoring, report: &NimReport, color: u8, h: usize) -> Option<Star> {
    let n = c.n();
    let rows = c.class_rows(color);
    let nim = report.nim_rows(c, color);
    let incident: Vec<usize> = (0..n).filter(|&v| nim[v] != 0).collect();
    if incident.is_empty() {
        return None;
    }
    let degree = |v: usize| rows[v].count_ones() as usize;
    if let Some(&x) = incident.iter().find(|&&v| degree(v) >= h) {
        let partner = nim[x].trailing_zeros() as usize;
        let mut leaves = vec![partner];
        leaves.extend(Bits(rows[x] & !bit(partner)).take(h - 1));
        leaves.sort_unstable();
        return Some(Star {
            color,
            center: x,
            leaves,
            nim_partner: partner,
            saturated: true,
        });
    }
    let x = *incident
        .iter()
        .max_by_key(|&&v| (degree(v), std::cmp::Reverse(v)))
        .expect("nonempty");
    Some(Star {
        color,
        center: x,
        leaves: Bits(rows[x]).collect(),
        nim_partner: nim[x].trailing_zeros() as usize,
        saturated: false,
    })
}

/// Edges (as index pairs) with both ends in the vertex mask `a`.
pub(crate) fn edges_inside(rows: &[u64], a: u64) -> usize {
    Bits(a).map(|v| (rows[v] & a).count_ones() as usize).sum::<usize>() / 2
}

/// Edges with one end in `a` and the other in `b` (disjoint masks).
pub(crate) fn edges_between(rows: &[u64], a: u64, b: u64) -> usize {
    Bits(a).map(|v| (rows[v] & b).count_ones() as usize).sum()
}
