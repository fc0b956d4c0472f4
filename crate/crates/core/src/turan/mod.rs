//! Exact Turán numbers `ex(n, H)` and one-sided bipartite numbers
//! `ex*(m, n, H)`, with extremal witnesses and a persistent cache.

mod cache;
mod star;

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use cache::{format_line, parse_line, TuranCache};

use crate::canon::CanonicalCode;
use crate::enumerate::{Canonical, Generator};
use crate::error::{Error, Result};
use crate::graph::{edge_from_index, low_mask, Bits, pair_count, SimpleGraph, MAX_VERTICES};
use crate::pattern::{BipartitePattern, OrientedBipartite, PatternGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TuranKind {
    Ex,
    ExStar,
}

impl TuranKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TuranKind::Ex => "ex",
            TuranKind::ExStar => "exstar",
        }
    }
}

/// A Turán value with extremal witnesses.
///
/// For `Ex`, `m == n` and witnesses are graphs on `n` vertices. For `ExStar`,
/// witnesses live on `m + n` vertices with the m-part first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuranRecord {
    pub fingerprint: String,
    pub kind: TuranKind,
    pub m: usize,
    pub n: usize,
    pub value: usize,
    /// Proven by exhaustive search. When false, `value` is only a lower bound.
    pub exact: bool,
    pub witnesses: Vec<SimpleGraph>,
    /// False if the witness list was truncated.
    pub witnesses_complete: bool,
}

impl TuranRecord {
    pub fn require_exact(self) -> Result<Self> {
        if self.exact {
            Ok(self)
        } else {
            Err(Error::non_exact(format!(
                "{}({}, {}) for {} is only a lower bound ({})",
                self.kind.as_str(),
                self.m,
                self.n,
                self.fingerprint,
                self.value
            )))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TuranConfig {
    /// Largest exact `n` for patterns containing a cycle.
    pub cyclic_ceiling: usize,
    /// Largest exact `n` for forests.
    pub acyclic_ceiling: usize,
    /// Largest exact part size for `ex*`.
    pub star_ceiling: usize,
    /// Work budget per exact search (canonical labelings or search nodes).
    pub node_budget: u64,
    pub witness_cap: usize,
    /// Witnesses kept for `ex*`; collecting more forces non-strict pruning.
    pub star_witness_cap: usize,
    /// Randomized greedy attempts used for lower bounds.
    pub greedy_tries: usize,
}

impl Default for TuranConfig {
    fn default() -> Self {
        TuranConfig {
            cyclic_ceiling: 12,
            acyclic_ceiling: MAX_VERTICES,
            star_ceiling: 32,
            node_budget: 20_000_000,
            witness_cap: 64,
            star_witness_cap: 1,
            greedy_tries: 16,
        }
    }
}

pub fn is_h_free(g: &SimpleGraph, h: &BipartitePattern) -> bool {
    h.forbidden().is_free_in(g)
}

/// `ex(n, H)` with a fresh in-memory solver; refuses non-exact results.
pub fn ex_exact(n: usize, h: &BipartitePattern) -> Result<TuranRecord> {
    TuranSolver::default().ex_exact(n, h.forbidden())
}

/// `ex*(m, n, H')` with a fresh in-memory solver; refuses non-exact results.
pub fn ex_star_exact(m: usize, n: usize, h: &OrientedBipartite) -> Result<TuranRecord> {
    TuranSolver::default().ex_star_exact(m, n, h)
}

#[derive(Debug, Default)]
pub struct TuranSolver {
    config: TuranConfig,
    cache: TuranCache,
}

impl TuranSolver {
    pub fn new(config: TuranConfig) -> Self {
        TuranSolver {
            config,
            cache: TuranCache::in_memory(),
        }
    }

    pub fn with_cache_file(config: TuranConfig, path: impl AsRef<Path>) -> Result<Self> {
        Ok(TuranSolver {
            config,
            cache: TuranCache::open(path)?,
        })
    }

    pub fn config(&self) -> &TuranConfig {
        &self.config
    }

    pub fn cache(&self) -> &TuranCache {
        &self.cache
    }

    /// Best available record; `exact == false` above the ceiling or when the
    /// budget runs out.
    pub fn ex(&self, n: usize, h: &PatternGraph) -> Result<TuranRecord> {
        if n > MAX_VERTICES {
            return Err(Error::ResourceLimit(format!("n={n} exceeds {MAX_VERTICES} vertices")));
        }
        let key = (TuranKind::Ex, h.fingerprint().to_string(), n, n);
        if let Some(r) = self.cache.lookup(&key, |r| validate_ex(r, h)) {
            return Ok(r);
        }
        let ceiling = if h.is_acyclic() {
            self.config.acyclic_ceiling
        } else {
            self.config.cyclic_ceiling
        };
        if n > ceiling {
            if let Some(rec) = self.ex_by_extension(n, h)? {
                self.cache.insert(&rec)?;
                return Ok(rec);
            }
            log::info!("ex({n}, {}) above ceiling {ceiling}: lower bound only", h.fingerprint());
            let rec = self.ex_lower_bound(n, h, Vec::new());
            self.cache.remember(&rec);
            return Ok(rec);
        }
        let rec = self.ex_enumerate(n, h)?;
        Ok(rec)
    }

    pub fn ex_exact(&self, n: usize, h: &PatternGraph) -> Result<TuranRecord> {
        self.ex(n, h)?.require_exact()
    }

    pub fn ex_value(&self, n: usize, h: &PatternGraph) -> Result<usize> {
        Ok(self.ex_exact(n, h)?.value)
    }

    /// `ex*(m, n, H')` where copies must put the X side of `h` into the m-part.
    pub fn ex_star(&self, m: usize, n: usize, h: &OrientedBipartite) -> Result<TuranRecord> {
        if !h.is_connected() {
            return Err(Error::AmbiguousBipartition);
        }
        if m + n > MAX_VERTICES {
            return Err(Error::ResourceLimit(format!("m+n={} exceeds {MAX_VERTICES} vertices", m + n)));
        }
        let key = (TuranKind::ExStar, h.fingerprint().to_string(), m, n);
        if let Some(r) = self.cache.lookup(&key, |r| validate_ex_star(r, h)) {
            return Ok(r);
        }
        let record = |value, exact, witnesses, complete| TuranRecord {
            fingerprint: h.fingerprint().to_string(),
            kind: TuranKind::ExStar,
            m,
            n,
            value,
            exact,
            witnesses,
            witnesses_complete: complete,
        };
        if h.x_size() > m || h.y_size() > n {
            let rec = record(m * n, true, vec![bipartite_complete(m, n)], true);
            self.cache.insert(&rec)?;
            return Ok(rec);
        }
        let greedy = star::greedy(m, n, h, self.config.greedy_tries);
        if m > self.config.star_ceiling || n > self.config.star_ceiling {
            let rec = record(greedy.edge_count(), false, vec![greedy], false);
            self.cache.remember(&rec);
            return Ok(rec);
        }
        let out = star::search(m, n, h, greedy.edge_count(), self.config.node_budget, self.config.star_witness_cap);
        let rec = if out.exhausted || out.witnesses.is_empty() {
            log::info!("ex*({m}, {n}) search budget exhausted: lower bound only");
            let (value, w) = if out.value > greedy.edge_count() && !out.witnesses.is_empty() {
                (out.value, out.witnesses)
            } else {
                (greedy.edge_count(), vec![greedy])
            };
            let rec = record(value, false, w, false);
            self.cache.remember(&rec);
            rec
        } else {
            let rec = record(out.value, true, out.witnesses, out.complete);
            self.cache.insert(&rec)?;
            rec
        };
        Ok(rec)
    }

    pub fn ex_star_exact(&self, m: usize, n: usize, h: &OrientedBipartite) -> Result<TuranRecord> {
        self.ex_star(m, n, h)?.require_exact()
    }

    pub fn ex_star_value(&self, m: usize, n: usize, h: &OrientedBipartite) -> Result<usize> {
        Ok(self.ex_star_exact(m, n, h)?.value)
    }

    /// Enumerates `H`-free graphs level by level, caching every complete level.
    fn ex_enumerate(&self, n: usize, h: &PatternGraph) -> Result<TuranRecord> {
        let plan = h.plan();
        let gen = Generator::new(|g: &SimpleGraph, v: usize| plan.find_through_vertex(g.rows(), v, None).is_none())
            .with_budget(self.config.node_budget);
        let mut records: Vec<TuranRecord> = Vec::new();
        let mut partial_best: Option<SimpleGraph> = None;
        let outcome = gen.run_observed(n, |size, level, complete| {
            if complete {
                records.push(self.level_record(size, h, level));
            } else {
                partial_best = level.iter().max_by_key(|c| c.graph.edge_count()).map(|c| c.graph.clone());
            }
        });
        for rec in &records {
            self.cache.insert(rec)?;
        }
        match outcome {
            Ok(_) => Ok(records.pop().expect("level n was observed")),
            Err(Error::ResourceLimit(msg)) => {
                log::info!("ex({n}, {}): {msg}; lower bound only", h.fingerprint());
                let mut seeds: Vec<SimpleGraph> = partial_best.iter().map(|g| pad(g, n)).collect();
                if let Some(prev) = records.last().and_then(|r| r.witnesses.first()) {
                    seeds.push(pad(prev, n));
                }
                let rec = self.ex_lower_bound(n, h, seeds);
                self.cache.remember(&rec);
                Ok(rec)
            }
            Err(e) => Err(e),
        }
    }

    /// Exact `ex(n, H)` from a complete extremal list on `n - 1` vertices.
    ///
    /// A graph with `e` edges has a vertex of degree `d <= 2e/n`, and deleting
    /// it leaves at most `ex(n-1)` edges, so `d >= e - ex(n-1)`. When the two
    /// bounds meet, every such graph is an extremal `(n-1)`-graph plus a vertex
    /// of degree `d`, and extending the complete list decides `e`. Returns
    /// `None` when some candidate `e` is not decided this way.
    fn ex_by_extension(&self, n: usize, h: &PatternGraph) -> Result<Option<TuranRecord>> {
        if n < 2 {
            return Ok(None);
        }
        let prev = self.ex(n - 1, h)?;
        if !prev.exact || !prev.witnesses_complete {
            return Ok(None);
        }
        let a = prev.value;
        let seeds = prev.witnesses.iter().map(|g| pad(g, n)).collect();
        let lower = self.ex_lower_bound(n, h, seeds);
        let mut e = (lower.value..=pair_count(n))
            .take_while(|&e| e - 2 * e / n <= a)
            .last()
            .unwrap_or(lower.value);
        while e >= lower.value {
            let (dmin, dmax) = (e.saturating_sub(a), 2 * e / n);
            if dmin > dmax {
                e -= 1;
                continue;
            }
            if dmin < dmax {
                if e == lower.value {
                    return Ok(Some(TuranRecord { exact: true, ..lower }));
                }
                log::info!("ex({n}, {}): degree bounds do not meet at e={e}", h.fingerprint());
                return Ok(None);
            }
            let found = self.extend_all(&prev.witnesses, n, dmin, h);
            if !found.is_empty() {
                let complete = found.len() <= self.config.witness_cap;
                return Ok(Some(TuranRecord {
                    fingerprint: h.fingerprint().to_string(),
                    kind: TuranKind::Ex,
                    m: n,
                    n,
                    value: e,
                    exact: true,
                    witnesses: found.into_values().take(self.config.witness_cap).collect(),
                    witnesses_complete: complete,
                }));
            }
            if e == lower.value {
                break;
            }
            e -= 1;
        }
        log::warn!("ex({n}, {}): lower-bound witness not found among extensions", h.fingerprint());
        Ok(None)
    }

    /// All `H`-free graphs obtained by joining a new vertex to `d` vertices of
    /// a base graph, up to isomorphism.
    fn extend_all(&self, bases: &[SimpleGraph], n: usize, d: usize, h: &PatternGraph) -> BTreeMap<CanonicalCode, SimpleGraph> {
        let mut out = BTreeMap::new();
        let v = n - 1;
        let full = low_mask(v);
        for base in bases {
            let mut subset: u64 = low_mask(d);
            while subset & !full == 0 {
                let mut g = pad(base, n);
                for u in Bits(subset) {
                    g.add_edge(u, v);
                }
                if h.plan().find_through_vertex(g.rows(), v, None).is_none() {
                    out.entry(crate::canon::canonical_form(&g)).or_insert(g);
                }
                if subset == 0 {
                    break;
                }
                // Next subset of the same size (Gosper).
                let low = subset & subset.wrapping_neg();
                let ripple = subset + low;
                subset = (((ripple ^ subset) >> 2) / low) | ripple;
            }
        }
        out
    }

    fn level_record(&self, size: usize, h: &PatternGraph, level: &[Canonical]) -> TuranRecord {
        let value = level.iter().map(|c| c.graph.edge_count()).max().unwrap_or(0);
        let mut best: BTreeMap<&CanonicalCode, &SimpleGraph> = BTreeMap::new();
        for c in level.iter().filter(|c| c.graph.edge_count() == value) {
            best.insert(&c.code, &c.graph);
        }
        let complete = best.len() <= self.config.witness_cap;
        TuranRecord {
            fingerprint: h.fingerprint().to_string(),
            kind: TuranKind::Ex,
            m: size,
            n: size,
            value,
            exact: true,
            witnesses: best.into_values().take(self.config.witness_cap).cloned().collect(),
            witnesses_complete: complete,
        }
    }

    /// Seeded randomized greedy completion, keeping the best of the seeds and
    /// several random edge orders.
    fn ex_lower_bound(&self, n: usize, h: &PatternGraph, seeds: Vec<SimpleGraph>) -> TuranRecord {
        let mut starts = seeds;
        starts.push(SimpleGraph::new(n));
        let mut best = SimpleGraph::new(n);
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut order: Vec<usize> = (0..pair_count(n)).collect();
        for start in &starts {
            for _ in 0..self.config.greedy_tries.max(1) {
                order.shuffle(&mut rng);
                let mut g = start.clone();
                for &idx in &order {
                    let (u, v) = edge_from_index(n, idx);
                    if g.has_edge(u, v) {
                        continue;
                    }
                    g.add_edge(u, v);
                    if h.plan().find_through_edge(g.rows(), u, v, None).is_some() {
                        g.remove_edge(u, v);
                    }
                }
                if g.edge_count() > best.edge_count() {
                    best = g;
                }
            }
        }
        TuranRecord {
            fingerprint: h.fingerprint().to_string(),
            kind: TuranKind::Ex,
            m: n,
            n,
            value: best.edge_count(),
            exact: false,
            witnesses: vec![best],
            witnesses_complete: false,
        }
    }
}

fn pad(g: &SimpleGraph, n: usize) -> SimpleGraph {
    let mut out = SimpleGraph::new(n);
    for (u, v) in g.edges() {
        out.add_edge(u, v);
    }
    out
}

fn bipartite_complete(m: usize, n: usize) -> SimpleGraph {
    SimpleGraph::complete_bipartite(m, n)
}

/// Witnesses are `H`-free with exactly `value` edges; exact records need one.
pub fn validate_ex(r: &TuranRecord, h: &PatternGraph) -> bool {
    r.kind == TuranKind::Ex
        && r.m == r.n
        && r.value <= pair_count(r.n)
        && (!r.exact || !r.witnesses.is_empty())
        && r
            .witnesses
            .iter()
            .all(|g| g.n() == r.n && g.edge_count() == r.value && h.is_free_in(g))
}

/// Witnesses are spanning subgraphs of `K_{m,n}` (m-part first) with exactly
/// `value` edges and no oriented copy of `h`.
pub fn validate_ex_star(r: &TuranRecord, h: &OrientedBipartite) -> bool {
    let (m, n) = (r.m, r.n);
    if r.kind != TuranKind::ExStar || r.value > m * n || (r.exact && r.witnesses.is_empty()) {
        return false;
    }
    let rows = low_mask(m);
    let cols = low_mask(m + n) & !rows;
    let domains = h.domains(rows, cols);
    r.witnesses.iter().all(|g| {
        g.n() == m + n
            && g.edge_count() == r.value
            && (0..m).all(|v| g.neighbors(v) & rows == 0)
            && (m..m + n).all(|v| g.neighbors(v) & cols == 0)
            && h.plan().find_any(g.rows(), Some(&domains)).is_none()
    })
}

/// Whether `g` (m-part `0..m`) has a copy of `h` with its X side in the m-part.
pub fn has_oriented_copy(g: &SimpleGraph, m: usize, h: &OrientedBipartite) -> bool {
    let rows = low_mask(m);
    let cols = low_mask(g.n()) & !rows;
    h.plan().find_any(g.rows(), Some(&h.domains(rows, cols))).is_some()
}
