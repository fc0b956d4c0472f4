use super::decomposition::{build_star_decomposition_with, edges_between, edges_inside};
use super::{class_rows, nim_color_rows, pow2, AuditReport, ClaimCheck};
use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::mono::nim_edges;
use crate::pattern::BipartitePattern;
use crate::turan::TuranSolver;

/// Audits a two-coloring whose NIM edges use both colors.
///
/// Checks: `C1` constant classes have fewer than `h` vertices; `C2` per class
/// and color, NIM edges inside the class are `(H-w)`-free and number at most
/// `ex(|A|, H-w)`, with the totals against `2 ex(|A|, H-w)` and `2 ex(n, H-w)`;
/// `C3` the same between two classes against `ex(|A|+|B|, H-w)` and
/// `2 ex(n, H-w)`; `TOTAL` the closing count.
pub fn audit_two_color(c: &EdgeColoring, h: &BipartitePattern, solver: &TuranSolver) -> Result<AuditReport> {
    if c.k() != 2 {
        return Err(Error::InvalidInput(format!("expected a 2-coloring, got k={}", c.k())));
    }
    h.require_reduced()?;
    let reduced = h.reduced_pattern().expect("checked by require_reduced");
    let report = nim_edges(c, h);
    if report.per_color.contains(&0) {
        return Err(Error::NotApplicable {
            reason: "single-color-nim-set",
            detail: format!(
                "single-color NIM set (per color {:?}): the audit needs NIM edges of both colors",
                report.per_color
            ),
        });
    }
    let n = c.n();
    let hh = h.h();
    let d = build_star_decomposition_with(c, &report, h)?;
    let ex_n = solver.ex_value(n, reduced)? as u64;
    let ex = |size: usize| solver.ex_value(size, reduced).map(|v| v as u64);
    let nim = nim_color_rows(c, &report);
    let mut checks = Vec::new();

    let violations = d.violations(c, &report);
    checks.push(ClaimCheck::new("STRUCT", violations.join("; "), violations.len() as u64, 0));

    for color in 1..=2u8 {
        let size = d.constant_class(color).map_or(0, |cl| cl.members.len());
        checks.push(ClaimCheck::new("C1", format!("constant class of color {color}"), size as u64, hh as u64 - 1));
    }

    let mixed: Vec<_> = d.classes.iter().filter(|cl| !cl.is_constant()).collect();
    for cl in &mixed {
        let a = cl.mask();
        let size = cl.members.len();
        let ex_a = ex(size)?;
        let mut total = 0;
        for color in 1..=2u8 {
            let rows = &nim[color as usize - 1];
            let inside = edges_inside(rows, a) as u64;
            total += inside;
            let scope = format!("class {} color {color}", cl.vector_string());
            checks.push(ClaimCheck::new("C2", scope.clone(), inside, ex_a));
            let restricted: Vec<u64> = rows.iter().enumerate().map(|(v, r)| if a >> v & 1 == 1 { r & a } else { 0 }).collect();
            let copy = reduced.plan().find_any(&restricted, None).is_some();
            checks.push(ClaimCheck::new("C2-free", scope, copy as u64, 0));
        }
        let scope = format!("class {}", cl.vector_string());
        checks.push(ClaimCheck::new("C2-sum", scope.clone(), total, 2 * ex_a));
        checks.push(ClaimCheck::new("C2-literal", scope, total, 2 * ex_n));
    }

    for (i, p) in mixed.iter().enumerate() {
        for q in &mixed[i + 1..] {
            let (a, b) = (p.mask(), q.mask());
            let ex_ab = ex(p.members.len() + q.members.len())?;
            let mut total = 0;
            for color in 1..=2u8 {
                let between = edges_between(&nim[color as usize - 1], a, b) as u64;
                total += between;
                let scope = format!("classes {}|{} color {color}", p.vector_string(), q.vector_string());
                checks.push(ClaimCheck::new("C3", scope, between, ex_ab));
            }
            let scope = format!("classes {}|{}", p.vector_string(), q.vector_string());
            checks.push(ClaimCheck::new("C3-literal", scope, total, 2 * ex_n));
        }
    }

    // Edges touching S or a constant class.
    let mut hub = d.s_mask();
    for color in 1..=2u8 {
        if let Some(cl) = d.constant_class(color) {
            hub |= cl.mask();
        }
    }
    let touching = report
        .flags
        .iter()
        .enumerate()
        .filter(|&(idx, &f)| {
            let (u, v) = crate::graph::edge_from_index(n, idx);
            f && (hub >> u & 1 == 1 || hub >> v & 1 == 1)
        })
        .count() as u64;
    let t = d.t() as u64;
    let nn = n as u64;
    checks.push(ClaimCheck::new("ADJ", "NIM edges touching S and constant classes", touching, (t + 2 * hh as u64) * nn));
    let hh32 = hh as u32;
    let total_bound = ((t + 2 * hh as u64) * nn)
        .saturating_add(pow2(2 * hh32 + 2).saturating_mul(2).saturating_mul(ex_n))
        .saturating_add(pow2(4 * hh32 + 4).saturating_mul(2).saturating_mul(ex_n));
    let e_c = report.total as u64;
    checks.push(ClaimCheck::new("TOTAL", "all NIM edges", e_c, total_bound));
    checks.push(ClaimCheck::new("TOTAL-simplified", "all NIM edges", e_c, pow2(4 * hh32 + 6).saturating_mul(ex_n)).informational());

    let pass = checks.iter().all(|ch| !ch.gating || ch.pass);
    Ok(AuditReport {
        kind: "two-color".into(),
        n,
        k: 2,
        pattern: h.name().to_string(),
        h: hh,
        t: d.t(),
        nim_total: report.total,
        nim_per_color: report.per_color.clone(),
        checks,
        classes: class_rows(&d),
        edge_types: None,
        b: None,
        n_star: None,
        pass,
        decomposition: d,
        counterexample: (!pass).then(|| c.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::extremal_two_coloring;
    use crate::graph::SimpleGraph;

    #[test]
    fn pentagon_two_coloring_passes_for_c4() {
        let c = EdgeColoring::from_red_graph(&SimpleGraph::cycle(5));
        let c4 = BipartitePattern::parse("c4").unwrap();
        let r = audit_two_color(&c, &c4, &TuranSolver::default()).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.nim_total, 10);
    }

    #[test]
    fn extremal_coloring_is_not_applicable() {
        let s = TuranSolver::default();
        let c4 = BipartitePattern::parse("c4").unwrap();
        let c = extremal_two_coloring(8, &c4, &s).unwrap();
        let e = audit_two_color(&c, &c4, &s).unwrap_err();
        assert_eq!(e.reason_code(), "single-color-nim-set");
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn non_bipartite_pattern_is_rejected() {
        let c = EdgeColoring::from_red_graph(&SimpleGraph::cycle(5));
        let k3 = BipartitePattern::parse("k3").unwrap();
        assert!(matches!(audit_two_color(&c, &k3, &TuranSolver::default()), Err(Error::NonBipartite(_))));
    }
}
