use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, low_mask, SimpleGraph};
use crate::pattern::BipartitePattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KstVerdict {
    /// `t > min{s² - 3s + 3, (s - 1)!}`.
    ReducibleByRule { special_pair: bool },
    Unknown,
}

impl KstVerdict {
    pub fn is_reducible(self) -> bool {
        matches!(self, KstVerdict::ReducibleByRule { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Reducibility {
    Reducible { via: String },
    /// Only sufficient conditions are known; this is never "irreducible".
    Unknown,
}

impl Reducibility {
    pub fn is_reducible(&self) -> bool {
        matches!(self, Reducibility::Reducible { .. })
    }
}

/// The threshold `min{s² - 3s + 3, (s - 1)!}`, saturating.
fn kst_threshold(s: usize) -> usize {
    let quad = s * s + 3 - 3 * s;
    let mut fact = 1usize;
    for i in 2..s {
        fact = fact.saturating_mul(i);
        if fact >= quad {
            break;
        }
    }
    quad.min(fact)
}

/// Sufficient rule for `K_{s,t}`, `1 <= s <= t`. For `s = 1` the rule's
/// arithmetic fires, but removing the single vertex of the small side leaves
/// `t` isolated vertices, so the verdict is `Unknown`.
pub fn kst_reducibility(s: usize, t: usize) -> Result<KstVerdict> {
    if s == 0 || s > t {
        return Err(Error::InvalidInput(format!("need 1 <= s <= t, got s={s} t={t}")));
    }
    if s == 1 || t <= kst_threshold(s) {
        return Ok(KstVerdict::Unknown);
    }
    Ok(KstVerdict::ReducibleByRule {
        special_pair: matches!((s, t), (3, 3) | (4, 7)),
    })
}

fn is_tree(g: &SimpleGraph) -> bool {
    g.n() > 0 && g.is_connected() && g.edge_count() + 1 == g.n()
}

/// Some `w` with `H - w` a tree, given that `H` has a cycle.
fn c_star_vertex(g: &SimpleGraph) -> Option<usize> {
    if g.n() < 3 || !g.is_connected() || g.edge_count() < g.n() {
        return None;
    }
    (0..g.n()).find(|&w| is_tree(&g.remove_vertex(w)))
}

/// Sides `(s, t)`, `s <= t`, when `g` is a complete bipartite graph.
fn complete_bipartite_sides(g: &SimpleGraph) -> Option<(usize, usize)> {
    let n = g.n();
    if n < 2 || !g.is_connected() {
        return None;
    }
    let x = low_mask(n) & !g.rows()[0];
    let y = low_mask(n) & !x;
    let complete = (0..n).all(|v| g.rows()[v] == if x & bit(v) != 0 { y } else { x });
    complete.then(|| {
        let (a, b) = (x.count_ones() as usize, y.count_ones() as usize);
        (a.min(b), a.max(b))
    })
}

pub fn is_reducible(h: &BipartitePattern) -> Result<Reducibility> {
    if !h.is_bipartite() {
        return Err(Error::NonBipartite(h.name().to_string()));
    }
    let g = h.graph();
    if let Some(w) = c_star_vertex(g) {
        return Ok(Reducibility::Reducible {
            via: format!("C*: contains a cycle and H-{w} is a tree"),
        });
    }
    if let Some((s, t)) = complete_bipartite_sides(g) {
        if kst_reducibility(s, t)?.is_reducible() {
            return Ok(Reducibility::Reducible {
                via: format!("K_{{{s},{t}}} rule: {t} > {}", kst_threshold(s)),
            });
        }
    }
    Ok(Reducibility::Unknown)
}
