//! Explicit colorings: the extremal two-coloring, the permuted overlay of
//! extremal graphs, and the blow-up of two complementary 5-cycles.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{EdgeColoring, BLUE, GREEN, RED};
use crate::error::{Error, Result};
use crate::graph::{edge_from_index, pair_count, SimpleGraph};
use crate::pattern::BipartitePattern;
use crate::turan::TuranSolver;

pub const DEFAULT_RETRY_CAP: usize = 64;

/// Red on the first extremal witness of `ex(n, H)`, blue elsewhere.
pub fn extremal_two_coloring(n: usize, h: &BipartitePattern, solver: &TuranSolver) -> Result<EdgeColoring> {
    let rec = solver.ex_exact(n, h.forbidden())?;
    Ok(EdgeColoring::from_red_graph(&rec.witnesses[0]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overlap {
    pub i: usize,
    pub j: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlayCertificate {
    /// `permutations[i - 1]` maps vertex `v` of the extremal graph to `π_i(v)`.
    pub permutations: Vec<Vec<usize>>,
    pub ex_value: usize,
    pub overlaps: Vec<Overlap>,
    pub overlap_sum: usize,
    pub union_size: usize,
    /// `⌈C(k-1, 2) · ex(n,H)² / C(n,2)⌉`.
    pub expectation_bound: usize,
    pub attempts: usize,
    pub bound_met: bool,
}

impl OverlayCertificate {
    /// The inclusion-exclusion and expectation inequalities.
    pub fn invariants_hold(&self) -> bool {
        let k1 = self.permutations.len();
        self.union_size + self.overlap_sum >= k1 * self.ex_value && (!self.bound_met || self.overlap_sum <= self.expectation_bound)
    }
}

/// Overlay of `k - 1` relabeled copies of the first extremal witness: edge
/// `e` gets the least `i` with `e ∈ G(π_i)`, else color `k`. Permutations are
/// resampled until the total pairwise overlap meets the expectation bound,
/// at most `retry_cap` times, keeping the attempt with the smallest overlap.
pub fn permuted_overlay_coloring(
    n: usize,
    h: &BipartitePattern,
    k: u8,
    seed: u64,
    retry_cap: usize,
    solver: &TuranSolver,
) -> Result<(EdgeColoring, OverlayCertificate)> {
    let rec = solver.ex_exact(n, h.forbidden())?;
    overlay_from_graph(&rec.witnesses[0], k, seed, retry_cap)
}

/// The overlay construction for an arbitrary base graph.
pub fn overlay_from_graph(
    base: &SimpleGraph,
    k: u8,
    seed: u64,
    retry_cap: usize,
) -> Result<(EdgeColoring, OverlayCertificate)> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k={k}: at least two colors")));
    }
    let n = base.n();
    let layers = k as usize - 1;
    let ex_value = base.edge_count();
    let pairs = pair_count(n);
    let choose2 = layers * layers.saturating_sub(1) / 2;
    let expectation_bound = if pairs == 0 {
        0
    } else {
        (choose2 * ex_value * ex_value).div_ceil(pairs)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    let mut attempts = 0;
    for attempt in 0..retry_cap.max(1) {
        attempts = attempt + 1;
        let perms: Vec<Vec<usize>> = (0..layers)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let sum = overlap_sizes(base, &perms).iter().map(|o| o.size).sum::<usize>();
        if best.as_ref().is_none_or(|b| sum < b.0) {
            best = Some((sum, perms));
        }
        if sum <= expectation_bound {
            break;
        }
    }
    let (overlap_sum, permutations) = best.expect("at least one attempt");
    let layers_g: Vec<SimpleGraph> = permutations.iter().map(|p| base.permuted(p)).collect();
    let colors: Vec<u8> = (0..pairs)
        .map(|idx| {
            let (u, v) = edge_from_index(n, idx);
            layers_g
                .iter()
                .position(|g| g.has_edge(u, v))
                .map_or(k, |i| i as u8 + 1)
        })
        .collect();
    let coloring = EdgeColoring::new(n, k, colors)?;
    let union_size = union_edges(&layers_g);
    let cert = OverlayCertificate {
        overlaps: overlap_sizes(base, &permutations),
        permutations,
        ex_value,
        overlap_sum,
        union_size,
        expectation_bound,
        attempts,
        bound_met: overlap_sum <= expectation_bound,
    };
    Ok((coloring, cert))
}

fn union_edges(layers: &[SimpleGraph]) -> usize {
    let Some(first) = layers.first() else { return 0 };
    let n = first.n();
    (0..pair_count(n))
        .filter(|&idx| {
            let (u, v) = edge_from_index(n, idx);
            layers.iter().any(|g| g.has_edge(u, v))
        })
        .count()
}

fn overlap_sizes(base: &SimpleGraph, perms: &[Vec<usize>]) -> Vec<Overlap> {
    let layers: Vec<SimpleGraph> = perms.iter().map(|p| base.permuted(p)).collect();
    let mut out = Vec::new();
    for i in 0..layers.len() {
        for j in i + 1..layers.len() {
            let size = layers[i]
                .rows()
                .iter()
                .zip(layers[j].rows())
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>()
                / 2;
            out.push(Overlap { i: i + 1, j: j + 1, size });
        }
    }
    out
}

/// Part index of each vertex: five near-equal parts, the first `n mod 5` of
/// size `⌈n/5⌉`.
pub fn pentagon_parts(n: usize) -> Vec<usize> {
    let (q, r) = (n / 5, n % 5);
    let mut part = Vec::with_capacity(n);
    for i in 0..5 {
        let size = q + usize::from(i < r);
        part.extend(std::iter::repeat_n(i, size));
    }
    part
}

/// Red between cyclically consecutive parts, blue between parts two apart,
/// green inside parts.
pub fn pentagon_three_coloring(n: usize) -> Result<EdgeColoring> {
    if n < 5 {
        return Err(Error::InvalidInput(format!("pentagon coloring needs n >= 5, got {n}")));
    }
    let part = pentagon_parts(n);
    let colors = (0..pair_count(n))
        .map(|idx| {
            let (u, v) = edge_from_index(n, idx);
            match (part[v] + 5 - part[u]) % 5 {
                0 => GREEN,
                1 | 4 => RED,
                _ => BLUE,
            }
        })
        .collect();
    EdgeColoring::new(n, 3, colors)
}
