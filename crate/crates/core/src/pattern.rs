//! The forbidden pattern H: its bipartition (X, Y), the designated weak vertex
//! w in X and the derived reduced pattern H - w.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, canonical_labeling_colored};
use crate::error::{Error, Result};
use crate::graph::{bit, low_mask, Bits, SimpleGraph};
use crate::matching::MatchPlan;

/// A pattern graph prepared for copy searches.
#[derive(Clone, Debug)]
pub struct PatternGraph {
    graph: SimpleGraph,
    plan: MatchPlan,
    fingerprint: String,
}

impl PatternGraph {
    pub fn new(graph: SimpleGraph) -> Self {
        let plan = MatchPlan::new(&graph);
        let fingerprint = format!("g6:{}", canonical_form(&graph));
        PatternGraph {
            graph,
            plan,
            fingerprint,
        }
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn plan(&self) -> &MatchPlan {
        &self.plan
    }

    /// Isomorphism-invariant identifier.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn order(&self) -> usize {
        self.graph.n()
    }

    pub fn is_acyclic(&self) -> bool {
        self.graph.is_forest()
    }

    /// True iff `host` has no subgraph isomorphic to the pattern.
    pub fn is_free_in(&self, host: &SimpleGraph) -> bool {
        self.plan.find_any(host.rows(), None).is_none()
    }
}

/// A bipartite pattern with a fixed orientation: copies must put the X side
/// into the m-part of the host `K_{m,n}`.
#[derive(Clone, Debug)]
pub struct OrientedBipartite {
    graph: SimpleGraph,
    x_mask: u64,
    connected: bool,
    plan: MatchPlan,
    fingerprint: String,
}

impl OrientedBipartite {
    pub fn new(graph: SimpleGraph, x_side: &[usize]) -> Result<Self> {
        let x_mask = x_side.iter().fold(0u64, |m, &v| m | bit(v));
        let y_mask = low_mask(graph.n()) & !x_mask;
        for (u, v) in graph.edges() {
            if (x_mask & bit(u) != 0) == (x_mask & bit(v) != 0) {
                return Err(Error::NotBipartition(u, v));
            }
        }
        let classes = side_classes(graph.n(), x_mask);
        let plan = MatchPlan::with_classes(&graph, &classes);
        let code = canonical_labeling_colored(&graph, &classes).code;
        debug_assert_eq!(y_mask & x_mask, 0);
        Ok(OrientedBipartite {
            connected: graph.is_connected(),
            fingerprint: format!("bip:{code}"),
            graph,
            x_mask,
            plan,
        })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn plan(&self) -> &MatchPlan {
        &self.plan
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn x_size(&self) -> usize {
        self.x_mask.count_ones() as usize
    }

    pub fn y_size(&self) -> usize {
        self.graph.n() - self.x_size()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Identifier invariant under side-preserving isomorphism.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Per-pattern-vertex domains for a host whose m-part is `m_part` and
    /// n-part is `n_part`.
    pub fn domains(&self, m_part: u64, n_part: u64) -> Vec<u64> {
        (0..self.graph.n())
            .map(|v| if self.x_mask & bit(v) != 0 { m_part } else { n_part })
            .collect()
    }

    /// The same graph with the sides swapped.
    pub fn flipped(&self) -> Self {
        let y: Vec<usize> = Bits(low_mask(self.graph.n()) & !self.x_mask).collect();
        OrientedBipartite::new(self.graph.clone(), &y).expect("still a bipartition")
    }
}

fn side_classes(n: usize, x_mask: u64) -> Vec<u32> {
    (0..n).map(|v| if x_mask & bit(v) != 0 { 0 } else { 1 }).collect()
}

/// Named pattern families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternFamily {
    /// `K_r`, admitted for NIM scanning only (not bipartite for r >= 3).
    Clique(usize),
    /// `C_{2l}`, stored by `l`.
    EvenCycle(usize),
    /// `θ_{k,l}`: `k` internally disjoint paths of length `l` between two endpoints.
    Theta(usize, usize),
    /// `K_{s,t}` with `s <= t`.
    CompleteBipartite(usize, usize),
    Custom,
}

impl fmt::Display for PatternFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PatternFamily::Clique(r) => write!(f, "k{r}"),
            PatternFamily::EvenCycle(l) => write!(f, "c{}", 2 * l),
            PatternFamily::Theta(k, l) => write!(f, "theta{k},{l}"),
            PatternFamily::CompleteBipartite(s, t) => write!(f, "k{s},{t}"),
            PatternFamily::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for PatternFamily {
    type Err = Error;

    /// Compact names: `c4`, `c6`, `k3`, `k3,3`, `theta2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidInput(format!("unknown pattern name {s:?}"));
        let pair = |body: &str| -> Result<(usize, usize)> {
            let (a, b) = body.split_once(',').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        };
        if let Some(body) = s.strip_prefix("theta") {
            let (k, l) = pair(body)?;
            return Ok(PatternFamily::Theta(k, l));
        }
        if let Some(body) = s.strip_prefix('c') {
            let len: usize = body.parse().map_err(|_| bad())?;
            if len % 2 != 0 {
                return Err(Error::InvalidInput(format!("odd cycle {s:?} is not an even cycle")));
            }
            return Ok(PatternFamily::EvenCycle(len / 2));
        }
        if let Some(body) = s.strip_prefix('k') {
            if body.contains(',') {
                let (a, b) = pair(body)?;
                return Ok(PatternFamily::CompleteBipartite(a, b));
            }
            return Ok(PatternFamily::Clique(body.parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

/// Text form of a custom pattern, e.g.
/// `{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]],"X":[0,2],"Y":[1,3],"weak":0}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternDescriptor {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    #[serde(rename = "Y")]
    pub y: Vec<usize>,
    #[serde(default)]
    pub weak: Option<usize>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BipartitePattern {
    name: String,
    family: PatternFamily,
    pattern: PatternGraph,
    /// `(X, Y)` masks; `None` for non-bipartite patterns.
    sides: Option<(u64, u64)>,
    weak: Option<usize>,
    reduced: Option<OrientedBipartite>,
    reduced_plain: Option<PatternGraph>,
}

impl BipartitePattern {
    fn assemble(
        name: String,
        family: PatternFamily,
        graph: SimpleGraph,
        sides: Option<(u64, u64)>,
        weak: Option<usize>,
    ) -> Result<Self> {
        if graph.n() < 2 {
            return Err(Error::InvalidInput("a pattern needs at least 2 vertices".into()));
        }
        let reduced = match (sides, weak) {
            (Some((x, _)), Some(w)) => {
                if x & bit(w) == 0 {
                    return Err(Error::InvalidWeakVertex(w));
                }
                let g = graph.remove_vertex(w);
                let shift = |v: usize| if v > w { v - 1 } else { v };
                let x_side: Vec<usize> = Bits(x & !bit(w)).map(shift).collect();
                Some(OrientedBipartite::new(g, &x_side)?)
            }
            (None, Some(w)) => return Err(Error::InvalidWeakVertex(w)),
            _ => None,
        };
        Ok(BipartitePattern {
            name,
            family,
            pattern: PatternGraph::new(graph),
            sides,
            weak,
            reduced_plain: reduced.as_ref().map(|r| PatternGraph::new(r.graph().clone())),
            reduced,
        })
    }

    pub fn build(family: PatternFamily) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidInput(msg));
        let name = family.to_string();
        match family {
            PatternFamily::Clique(r) => {
                if !(3..=16).contains(&r) {
                    return invalid(format!("K_{r}: clique patterns need 3 <= r <= 16"));
                }
                Self::assemble(name, family, SimpleGraph::complete(r), None, None)
            }
            PatternFamily::EvenCycle(l) => {
                if l < 2 || 2 * l > 64 {
                    return invalid(format!("C_{}: need l >= 2", 2 * l));
                }
                let g = SimpleGraph::cycle(2 * l);
                let x = (0..2 * l).step_by(2).fold(0u64, |m, v| m | bit(v));
                Self::assemble(name, family, g, Some((x, low_mask(2 * l) & !x)), Some(0))
            }
            PatternFamily::Theta(k, l) => {
                if k < 2 || l < 2 {
                    return invalid(format!("theta_{{{k},{l}}}: need k, l >= 2"));
                }
                let n = 2 + k * (l - 1);
                if n > 64 {
                    return invalid(format!("theta_{{{k},{l}}} too large"));
                }
                let mut g = SimpleGraph::new(n);
                let mut next = 2;
                for _ in 0..k {
                    let mut prev = 0;
                    for _ in 0..l - 1 {
                        g.add_edge(prev, next);
                        prev = next;
                        next += 1;
                    }
                    g.add_edge(prev, 1);
                }
                let x = g.bipartition().expect("theta graphs are bipartite");
                // Endpoint 0: deleting it leaves a spider, a tree.
                Self::assemble(name, family, g, Some((x, low_mask(n) & !x)), Some(0))
            }
            PatternFamily::CompleteBipartite(s, t) => {
                if s < 1 || s > t || s + t > 64 {
                    return invalid(format!("K_{{{s},{t}}}: need 1 <= s <= t"));
                }
                let g = SimpleGraph::complete_bipartite(s, t);
                let x = low_mask(s);
                Self::assemble(name, family, g, Some((x, low_mask(s + t) & !x)), Some(0))
            }
            PatternFamily::Custom => invalid("custom patterns need a descriptor".into()),
        }
    }

    pub fn from_descriptor(d: &PatternDescriptor) -> Result<Self> {
        let edges: Vec<(usize, usize)> = d.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = SimpleGraph::from_edges(d.n, &edges)?;
        let mut x = 0u64;
        let mut y = 0u64;
        for &v in &d.x {
            if v >= d.n {
                return Err(Error::InvalidInput(format!("X vertex {v} out of range")));
            }
            x |= bit(v);
        }
        for &v in &d.y {
            if v >= d.n || x & bit(v) != 0 {
                return Err(Error::InvalidInput(format!("Y vertex {v} out of range or in X")));
            }
            y |= bit(v);
        }
        if x | y != low_mask(d.n) {
            return Err(Error::InvalidInput("X and Y must cover every vertex".into()));
        }
        for (u, v) in graph.edges() {
            if (x & bit(u) != 0) == (x & bit(v) != 0) {
                return Err(Error::NotBipartition(u, v));
            }
        }
        if let Some(w) = d.weak {
            if w >= d.n || x & bit(w) == 0 {
                return Err(Error::InvalidWeakVertex(w));
            }
        }
        let name = d.name.clone().unwrap_or_else(|| format!("custom:{}", graph.to_graph6()));
        Self::assemble(name, PatternFamily::Custom, graph, Some((x, y)), d.weak)
    }

    /// A family name (`c4`, `k3,3`, ...) or a JSON descriptor.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            parse_pattern(t)
        } else {
            Self::build(t.parse()?)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> PatternFamily {
        self.family
    }

    pub fn graph(&self) -> &SimpleGraph {
        self.pattern.graph()
    }

    pub fn forbidden(&self) -> &PatternGraph {
        &self.pattern
    }

    /// `h = |V(H)|`.
    pub fn h(&self) -> usize {
        self.graph().n()
    }

    pub fn is_bipartite(&self) -> bool {
        self.sides.is_some()
    }

    pub fn x_side(&self) -> Vec<usize> {
        self.sides.map(|(x, _)| Bits(x).collect()).unwrap_or_default()
    }

    pub fn y_side(&self) -> Vec<usize> {
        self.sides.map(|(_, y)| Bits(y).collect()).unwrap_or_default()
    }

    pub fn weak(&self) -> Option<usize> {
        self.weak
    }

    /// `H - w` with the induced bipartition `(X - w, Y)`.
    pub fn reduced(&self) -> Option<&OrientedBipartite> {
        self.reduced.as_ref()
    }

    /// `H - w` without orientation, for `ex(n, H - w)`.
    pub fn reduced_pattern(&self) -> Option<&PatternGraph> {
        self.reduced_plain.as_ref()
    }

    /// The whole pattern, oriented by its own bipartition.
    pub fn oriented(&self) -> Option<OrientedBipartite> {
        let (x, _) = self.sides?;
        OrientedBipartite::new(self.graph().clone(), &Bits(x).collect::<Vec<_>>()).ok()
    }

    /// Checks the setup the decomposition audits rely on: bipartite, weak vertex
    /// set, `H - w` connected. Returns `H - w`.
    pub fn require_reduced(&self) -> Result<&OrientedBipartite> {
        if !self.is_bipartite() {
            return Err(Error::NonBipartite(self.name.clone()));
        }
        let Some(r) = &self.reduced else {
            return Err(Error::Refused {
                reason: "no-weak-vertex",
                detail: format!("pattern {} has no designated weak vertex", self.name),
            });
        };
        if !r.is_connected() {
            return Err(Error::AmbiguousBipartition);
        }
        Ok(r)
    }
}

/// Parses a JSON pattern descriptor.
pub fn parse_pattern(text: &str) -> Result<BipartitePattern> {
    let d: PatternDescriptor =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("pattern descriptor: {e}")))?;
    BipartitePattern::from_descriptor(&d)
}

pub fn build_pattern(family: PatternFamily) -> Result<BipartitePattern> {
    BipartitePattern::build(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn c4_shape() {
        let p = build_pattern(PatternFamily::EvenCycle(2)).unwrap();
        assert_eq!(p.h(), 4);
        assert_eq!(p.graph().edge_count(), 4);
        assert_eq!((p.x_side().len(), p.y_side().len()), (2, 2));
        let r = p.reduced().unwrap();
        assert!(are_isomorphic(r.graph(), &SimpleGraph::path(3)));
        assert_eq!(r.x_size(), 1);
        assert!(r.is_connected());
    }

    #[test]
    fn theta22_is_c4() {
        let t = build_pattern(PatternFamily::Theta(2, 2)).unwrap();
        assert!(are_isomorphic(t.graph(), &SimpleGraph::cycle(4)));
        let t23 = build_pattern(PatternFamily::Theta(2, 3)).unwrap();
        assert!(are_isomorphic(t23.graph(), &SimpleGraph::cycle(6)));
        let t33 = build_pattern(PatternFamily::Theta(3, 3)).unwrap();
        assert_eq!((t33.h(), t33.graph().edge_count()), (8, 9));
        assert!(t33.reduced().unwrap().graph().is_tree());
    }

    #[test]
    fn k33_reduces_to_k23() {
        let p = build_pattern(PatternFamily::CompleteBipartite(3, 3)).unwrap();
        assert_eq!(p.graph().edge_count(), 9);
        let r = p.reduced().unwrap();
        assert!(are_isomorphic(r.graph(), &SimpleGraph::complete_bipartite(2, 3)));
        assert_eq!((r.x_size(), r.y_size()), (2, 3));
    }

    #[test]
    fn names_parse() {
        assert_eq!("c4".parse::<PatternFamily>().unwrap(), PatternFamily::EvenCycle(2));
        assert_eq!("c6".parse::<PatternFamily>().unwrap(), PatternFamily::EvenCycle(3));
        assert_eq!("k3".parse::<PatternFamily>().unwrap(), PatternFamily::Clique(3));
        assert_eq!("k3,3".parse::<PatternFamily>().unwrap(), PatternFamily::CompleteBipartite(3, 3));
        assert_eq!("theta2,3".parse::<PatternFamily>().unwrap(), PatternFamily::Theta(2, 3));
        assert!("c5".parse::<PatternFamily>().is_err());
        assert!("q".parse::<PatternFamily>().is_err());
        assert!(build_pattern(PatternFamily::Theta(1, 3)).is_err());
        assert!(build_pattern(PatternFamily::CompleteBipartite(3, 2)).is_err());
    }

    #[test]
    fn k3_is_admitted_but_not_bipartite() {
        let k3 = BipartitePattern::parse("k3").unwrap();
        assert!(!k3.is_bipartite());
        assert!(k3.reduced().is_none());
        assert!(matches!(k3.require_reduced(), Err(Error::NonBipartite(_))));
    }

    #[test]
    fn descriptor_c4() {
        let p = parse_pattern(r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]],"X":[0,2],"Y":[1,3],"weak":0}"#).unwrap();
        assert!(are_isomorphic(p.graph(), &SimpleGraph::cycle(4)));
        assert_eq!(p.weak(), Some(0));
    }

    #[test]
    fn descriptor_errors() {
        let e = parse_pattern(r#"{"n":3,"edges":[[0,1],[1,2],[0,2]],"X":[0],"Y":[1,2]}"#).unwrap_err();
        assert!(matches!(e, Error::NotBipartition(..)), "{e}");
        let e = parse_pattern(r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]],"X":[0,2],"Y":[1,3],"weak":1}"#)
            .unwrap_err();
        assert!(matches!(e, Error::InvalidWeakVertex(1)));
    }

    #[test]
    fn descriptor_k23_weak_on_small_side() {
        let p = parse_pattern(
            r#"{"n":5,"edges":[[0,2],[0,3],[0,4],[1,2],[1,3],[1,4]],"X":[0,1],"Y":[2,3,4],"weak":0}"#,
        )
        .unwrap();
        let r = p.reduced().unwrap();
        assert!(are_isomorphic(r.graph(), &SimpleGraph::complete_bipartite(1, 3)));
        assert!(r.is_connected());
    }

    #[test]
    fn even_cycles_are_vertex_transitive() {
        for l in 2..=4 {
            let p = build_pattern(PatternFamily::EvenCycle(l)).unwrap();
            let g = p.graph();
            let n = g.n();
            let autos: Vec<Vec<usize>> = permutations(n).into_iter().filter(|q| &g.permuted(q) == g).collect();
            for v in 0..n {
                assert!(autos.iter().any(|a| a[0] == v), "no automorphism maps 0 to {v}");
            }
            assert_eq!(g.edge_count(), 2 * l);
        }
    }

    #[test]
    fn reduced_equals_weak_deletion() {
        for name in ["c4", "c6", "c8", "k2,2", "k2,3", "k3,3", "k4,7", "theta2,3", "theta3,3", "theta4,2"] {
            let p = BipartitePattern::parse(name).unwrap();
            let w = p.weak().unwrap();
            assert_eq!(p.reduced().unwrap().graph(), &p.graph().remove_vertex(w), "{name}");
            assert!(p.x_side().contains(&w));
        }
    }
}
