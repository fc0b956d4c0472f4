//! Exact and heuristic values of `f_k(n, H)`, the maximum number of NIM edges
//! over all k-colorings of `K_n`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalCode};
use crate::coloring::EdgeColoring;
use crate::constructions::{overlay_from_graph, DEFAULT_RETRY_CAP};
use crate::enumerate::enumerate_graphs_with_ceiling;
use crate::error::{Error, Result};
use crate::graph::{pair_count, SimpleGraph};
use crate::mono::{nim_edges, nim_edges_for, NimState};
use crate::pattern::BipartitePattern;
use crate::turan::TuranSolver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Colorings (exact) or candidate moves (heuristic) evaluated.
    pub nodes: u64,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub restarts: u64,
    /// Number of optimal colorings up to symmetry (exact mode).
    pub optima: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub k: u8,
    pub pattern: String,
    pub best: usize,
    /// Optimal colorings up to symmetry (exact, possibly truncated) or the
    /// best coloring found (heuristic).
    pub colorings: Vec<EdgeColoring>,
    pub mode: SearchMode,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug)]
pub struct ExactLimits {
    pub max_n_two: usize,
    pub max_n_multi: usize,
    /// Optimal colorings kept in the report.
    pub keep: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_n_two: 9,
            max_n_multi: 5,
            keep: 64,
        }
    }
}

pub fn f_exact(n: usize, h: &BipartitePattern, k: u8) -> Result<SearchReport> {
    f_exact_with(n, h, k, ExactLimits::default())
}

pub fn f_exact_with(n: usize, h: &BipartitePattern, k: u8, limits: ExactLimits) -> Result<SearchReport> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k={k}: at least two colors")));
    }
    let ceiling = if k == 2 { limits.max_n_two } else { limits.max_n_multi };
    if n > ceiling {
        return Err(Error::ResourceLimit(format!(
            "exact f search for k={k} is limited to n <= {ceiling}, got n={n}"
        )));
    }
    if k == 2 {
        f_exact_two(n, h, limits.keep)
    } else {
        f_exact_multi(n, h, k, limits.keep)
    }
}

/// Red class ranges over graphs up to isomorphism with at most half the edges;
/// the blue class is its complement.
fn f_exact_two(n: usize, h: &BipartitePattern, keep: usize) -> Result<SearchReport> {
    let graphs = enumerate_graphs_with_ceiling(n, n)?;
    let half = pair_count(n) / 2;
    let scored: Vec<(usize, &SimpleGraph)> = graphs
        .par_iter()
        .filter(|g| g.edge_count() <= half)
        .map(|g| (nim_edges(&EdgeColoring::from_red_graph(g), h).total, g))
        .collect();
    let best = scored.iter().map(|s| s.0).max().unwrap_or(0);
    let mut optima: BTreeMap<CanonicalCode, EdgeColoring> = BTreeMap::new();
    for (score, g) in &scored {
        if *score == best {
            let key = canonical_form(g).min(canonical_form(&g.complement()));
            optima.entry(key).or_insert_with(|| EdgeColoring::from_red_graph(g));
        }
    }
    Ok(SearchReport {
        n,
        k: 2,
        pattern: h.name().to_string(),
        best,
        stats: SearchStats {
            nodes: scored.len() as u64,
            optima: Some(optima.len()),
            ..SearchStats::default()
        },
        colorings: optima.into_values().take(keep).collect(),
        mode: SearchMode::Exact,
    })
}

/// All colorings with colors normalized by first appearance and row 0
/// nondecreasing.
fn f_exact_multi(n: usize, h: &BipartitePattern, k: u8, keep: usize) -> Result<SearchReport> {
    let m = pair_count(n);
    let mut optima: BTreeMap<Vec<u8>, EdgeColoring> = BTreeMap::new();
    let perms = permutations(n);
    let color_perms: Vec<Vec<u8>> = permutations(k as usize)
        .into_iter()
        .map(|p| p.into_iter().map(|c| c as u8 + 1).collect())
        .collect();

    fn rec(
        idx: usize,
        used: u8,
        st: &mut (Vec<u8>, usize, u64),
        ctx: (&BipartitePattern, usize, u8),
        optima: &mut BTreeMap<Vec<u8>, EdgeColoring>,
        key_of: &dyn Fn(&EdgeColoring) -> Vec<u8>,
    ) {
        let (h, n, k) = ctx;
        if idx == st.0.len() {
            st.2 += 1;
            let c = EdgeColoring::new(n, k, st.0.clone()).expect("valid colors");
            let total = nim_edges(&c, h).total;
            if total > st.1 {
                st.1 = total;
                optima.clear();
            }
            if total == st.1 {
                optima.entry(key_of(&c)).or_insert(c);
            }
            return;
        }
        let lo = if idx > 0 && idx < n - 1 { st.0[idx - 1] } else { 1 };
        let hi = (used + 1).min(k);
        for color in lo..=hi {
            st.0[idx] = color;
            rec(idx + 1, used.max(color), st, ctx, optima, key_of);
        }
    }

    let key_of = |c: &EdgeColoring| -> Vec<u8> {
        let mut best_key: Option<Vec<u8>> = None;
        for p in &perms {
            let relabeled = c.permute_vertices(p);
            for cp in &color_perms {
                let key = relabeled.permute_colors(cp).colors().to_vec();
                if best_key.as_ref().is_none_or(|b| key < *b) {
                    best_key = Some(key);
                }
            }
        }
        best_key.unwrap_or_default()
    };
    // (colors, best, nodes)
    let mut st = (vec![0u8; m], 0usize, 0u64);
    rec(0, 0, &mut st, (h, n, k), &mut optima, &key_of);
    let (_, best, nodes) = st;
    Ok(SearchReport {
        n,
        k,
        pattern: h.name().to_string(),
        best,
        stats: SearchStats {
            nodes,
            optima: Some(optima.len()),
            ..SearchStats::default()
        },
        colorings: optima.into_values().take(keep).collect(),
        mode: SearchMode::Exact,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for v in 0..n {
        let mut next = Vec::with_capacity(out.len() * (v + 1));
        for p in &out {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Local search seeded by the extremal (k = 2) or overlay (k >= 3)
/// construction built on the best available extremal graph.
pub fn f_heuristic(
    n: usize,
    h: &BipartitePattern,
    k: u8,
    budget: u64,
    seed: u64,
    solver: &TuranSolver,
) -> Result<SearchReport> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k={k}: at least two colors")));
    }
    let rec = solver.ex(n, h.forbidden())?;
    let base = &rec.witnesses[0];
    let initial = if k == 2 {
        EdgeColoring::from_red_graph(base)
    } else {
        overlay_from_graph(base, k, seed, DEFAULT_RETRY_CAP)?.0
    };
    Ok(f_heuristic_from(initial, h, budget, seed))
}

/// Steepest ascent over single-edge recolorings; ties go to the lowest edge
/// index, then the lowest color. At a local optimum the search restarts from a
/// random perturbation of the best coloring so far. `budget` bounds the
/// number of moves plus restarts.
pub fn f_heuristic_from(initial: EdgeColoring, h: &BipartitePattern, budget: u64, seed: u64) -> SearchReport {
    let n = initial.n();
    let k = initial.k();
    let pattern = h.forbidden();
    let edges = pair_count(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = NimState::new(initial, pattern);
    let mut best = state.coloring().clone();
    let mut best_total = state.total();
    let mut stats = SearchStats {
        seed: Some(seed),
        budget: Some(budget),
        ..SearchStats::default()
    };
    if edges == 0 {
        return report(n, k, h, best_total, best, stats);
    }
    let mut steps = 0u64;
    while steps < budget && best_total < edges {
        steps += 1;
        let mut move_to: Option<(usize, u8, usize)> = None;
        let current = state.total();
        for idx in 0..edges {
            let old = state.coloring().color_at(idx);
            for color in 1..=k {
                if color == old {
                    continue;
                }
                stats.nodes += 1;
                let mut trial = state.clone();
                trial.recolor(idx, color);
                let t = trial.total();
                if t > move_to.map_or(current, |m| m.2) {
                    move_to = Some((idx, color, t));
                }
            }
        }
        match move_to {
            Some((idx, color, _)) => {
                state.recolor(idx, color);
                if state.total() > best_total {
                    best_total = state.total();
                    best = state.coloring().clone();
                }
            }
            None => {
                stats.restarts += 1;
                let mut c = best.clone();
                let flips = 1 + rng.random_range(0..edges.clamp(1, 8));
                for _ in 0..flips {
                    let idx = rng.random_range(0..edges);
                    c.set_color_at(idx, rng.random_range(1..=k));
                }
                state = NimState::new(c, pattern);
                debug_assert_eq!(state.report(), nim_edges_for(state.coloring(), pattern));
                if state.total() > best_total {
                    best_total = state.total();
                    best = state.coloring().clone();
                }
            }
        }
    }
    report(n, k, h, best_total, best, stats)
}

fn report(n: usize, k: u8, h: &BipartitePattern, best: usize, c: EdgeColoring, stats: SearchStats) -> SearchReport {
    debug_assert_eq!(nim_edges(&c, h).total, best);
    SearchReport {
        n,
        k,
        pattern: h.name().to_string(),
        best,
        colorings: vec![c],
        mode: SearchMode::Heuristic,
        stats,
    }
}

/// True iff some color class of the two-coloring `c` is `H`-free with exactly
/// `ex(n, H)` edges.
pub fn verify_extremal_characterization(c: &EdgeColoring, h: &BipartitePattern, solver: &TuranSolver) -> Result<bool> {
    if c.k() != 2 {
        return Err(Error::InvalidInput(format!("expected a 2-coloring, got k={}", c.k())));
    }
    let ex = solver.ex_exact(c.n(), h.forbidden())?.value;
    Ok((1..=2).any(|color| {
        let g = c.class(color);
        g.edge_count() == ex && h.forbidden().is_free_in(&g)
    }))
}

/// Swaps colors `a` and `b` on every edge.
pub fn swap_colors(c: &EdgeColoring, a: u8, b: u8) -> EdgeColoring {
    let map: Vec<u8> = (1..=c.k())
        .map(|x| if x == a { b } else if x == b { a } else { x })
        .collect();
    c.permute_colors(&map)
}
