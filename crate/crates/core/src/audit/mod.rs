//! Finite counting checks over the star decomposition of a coloring, and the
//! reducibility classifier.

mod decomposition;
mod k_color;
mod reducibility;
mod two_color;

use serde::{Deserialize, Serialize};

pub use decomposition::{build_star_decomposition, build_star_decomposition_with, Star, StarDecomposition, VectorClass};
pub use k_color::audit_k_color;
pub use reducibility::{is_reducible, kst_reducibility, KstVerdict, Reducibility};
pub use two_color::audit_two_color;

use crate::coloring::EdgeColoring;

/// One inequality `measured <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub scope: String,
    pub measured: u64,
    pub bound: u64,
    pub slack: i64,
    pub pass: bool,
    /// Non-gating checks are reported but do not affect the verdict.
    pub gating: bool,
}

impl ClaimCheck {
    pub fn new(claim: &str, scope: impl Into<String>, measured: u64, bound: u64) -> Self {
        ClaimCheck {
            claim: claim.to_string(),
            scope: scope.into(),
            measured,
            bound,
            slack: bound as i64 - measured as i64,
            pass: measured <= bound,
            gating: true,
        }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub vector: String,
    pub size: usize,
    pub feasible: Vec<u8>,
}

/// Classification of the NIM edges in the multicolor audit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTypes {
    /// Touching `S` or a constant class.
    pub type_i: usize,
    /// Inside a class whose vector uses the edge color.
    pub inside_feasible: usize,
    /// Between classes, one of which uses the edge color.
    pub between_feasible: usize,
    /// Inside a non-constant class avoiding the edge color.
    pub type_ii: usize,
    /// Between non-constant classes both avoiding the edge color.
    pub type_iii: usize,
}

impl EdgeTypes {
    pub fn total(&self) -> usize {
        self.type_i + self.inside_feasible + self.between_feasible + self.type_ii + self.type_iii
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub kind: String,
    pub n: usize,
    pub k: u8,
    pub pattern: String,
    pub h: usize,
    pub t: usize,
    pub nim_total: usize,
    pub nim_per_color: Vec<usize>,
    pub checks: Vec<ClaimCheck>,
    pub classes: Vec<ClassRow>,
    pub edge_types: Option<EdgeTypes>,
    /// `b_i = |B_i|` per color.
    pub b: Option<Vec<usize>>,
    pub n_star: Option<usize>,
    pub pass: bool,
    pub decomposition: StarDecomposition,
    /// The audited coloring, kept when some gating check fails.
    pub counterexample: Option<EdgeColoring>,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &ClaimCheck> {
        self.checks.iter().filter(|c| c.gating && !c.pass)
    }

    /// Smallest slack per claim id, gating checks only.
    pub fn summary(&self) -> Vec<(String, usize, i64, bool)> {
        let mut out: Vec<(String, usize, i64, bool)> = Vec::new();
        for c in self.checks.iter().filter(|c| c.gating) {
            match out.iter_mut().find(|e| e.0 == c.claim) {
                Some(e) => {
                    e.1 += 1;
                    e.2 = e.2.min(c.slack);
                    e.3 &= c.pass;
                }
                None => out.push((c.claim.clone(), 1, c.slack, c.pass)),
            }
        }
        out
    }
}

fn class_rows(d: &StarDecomposition) -> Vec<ClassRow> {
    d.classes
        .iter()
        .map(|c| ClassRow {
            vector: c.vector_string(),
            size: c.members.len(),
            feasible: c.feasible.clone(),
        })
        .collect()
}

fn pow2(e: u32) -> u64 {
    1u64.checked_shl(e).filter(|&v| v != 0 && e < 64).unwrap_or(u64::MAX)
}

/// Rows of the NIM edges of `color` restricted to `color` class edges.
fn nim_color_rows(c: &EdgeColoring, report: &crate::mono::NimReport) -> Vec<Vec<u64>> {
    (1..=c.k()).map(|color| report.nim_rows(c, color)).collect()
}
