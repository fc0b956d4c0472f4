//! Edges in no monochromatic copy of a fixed graph: exact and heuristic search,
//! Turán numbers for small cases, constructions and decomposition audits.

pub mod audit;
pub mod canon;
pub mod coloring;
pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod matching;
pub mod mono;
pub mod pattern;
pub mod sample;
pub mod search;
pub mod turan;

pub use canon::{are_isomorphic, canonical_form, CanonicalCode};
pub use error::{Error, Result};
pub use graph::{edge_from_index, edge_index, pair_count, SimpleGraph};
pub use pattern::{BipartitePattern, OrientedBipartite, PatternDescriptor, PatternFamily, PatternGraph};
pub use coloring::EdgeColoring;
pub use mono::{enumerate_mono_copies, mono_copy_exists, nim_edges, NimReport, NimState};
pub use turan::{is_h_free, TuranConfig, TuranKind, TuranRecord, TuranSolver};
pub use constructions::{extremal_two_coloring, pentagon_three_coloring, permuted_overlay_coloring, OverlayCertificate};
pub use search::{f_exact, f_heuristic, verify_extremal_characterization, SearchMode, SearchReport};
pub use audit::{audit_k_color, audit_two_color, is_reducible, kst_reducibility, AuditReport, ClaimCheck, KstVerdict, Reducibility};
