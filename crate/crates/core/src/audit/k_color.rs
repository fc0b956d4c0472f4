use std::collections::HashMap;

use super::decomposition::{build_star_decomposition_with, edges_between, edges_inside};
use super::{class_rows, nim_color_rows, AuditReport, ClaimCheck, EdgeTypes};
use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::graph::{bit, edge_from_index};
use crate::mono::nim_edges;
use crate::pattern::BipartitePattern;
use crate::turan::TuranSolver;

/// Audits a `k`-coloring in which every color has a NIM edge.
///
/// Claims: `K1` non-feasible constant classes are small; `K2` NIM `i`-edges
/// inside a class using `i`; `K3` NIM `i`-edges between two classes, one of
/// which uses `i`, against the oriented extremal number; `K4` the remaining
/// edges live in `B_i`; `K5` their count per color and in total; `K6` the
/// size sum of the `B_i`.
pub fn audit_k_color(c: &EdgeColoring, h: &BipartitePattern, solver: &TuranSolver) -> Result<AuditReport> {
    let oriented = h.require_reduced()?;
    let reduced = h.reduced_pattern().expect("checked by require_reduced");
    let report = nim_edges(c, h);
    if let Some(i) = report.per_color.iter().position(|&x| x == 0) {
        return Err(Error::NotApplicable {
            reason: "missing-nim-color",
            detail: format!("color {} has no NIM edge (per color {:?})", i + 1, report.per_color),
        });
    }
    let n = c.n();
    let k = c.k();
    let hh = h.h();
    let d = build_star_decomposition_with(c, &report, h)?;
    let nim = nim_color_rows(c, &report);
    let mut checks = Vec::new();

    let violations = d.violations(c, &report);
    checks.push(ClaimCheck::new("STRUCT", violations.join("; "), violations.len() as u64, 0));

    for color in 1..=k {
        let size = d.constant_class(color).map_or(0, |cl| cl.members.len());
        checks.push(ClaimCheck::new("K1", format!("constant class of color {color}"), size as u64, hh as u64 - 1));
    }

    let mut ex_memo: HashMap<usize, u64> = HashMap::new();
    let mut ex = |size: usize| -> Result<u64> {
        if let Some(&v) = ex_memo.get(&size) {
            return Ok(v);
        }
        let v = solver.ex_value(size, reduced)? as u64;
        ex_memo.insert(size, v);
        Ok(v)
    };
    let ex_n = ex(n)?;
    for cl in &d.classes {
        let a = cl.mask();
        let ex_a = ex(cl.members.len())?;
        for &color in &cl.feasible {
            let inside = edges_inside(&nim[color as usize - 1], a) as u64;
            let scope = format!("class {} color {color}", cl.vector_string());
            checks.push(ClaimCheck::new("K2", scope.clone(), inside, ex_a));
            checks.push(ClaimCheck::new("K2-literal", scope, inside, ex_n));
        }
    }

    // The literal bound ex*(n, n) is only used when it can be computed exactly;
    // it is implied by monotonicity whenever the tight bound holds.
    let literal = match solver.ex_star_value(n, n, oriented) {
        Ok(v) => Some(v as u64),
        Err(Error::Refused { .. }) | Err(Error::ResourceLimit(_)) => None,
        Err(e) => return Err(e),
    };
    if literal.is_none() {
        checks.push(ClaimCheck::new("K3-literal", format!("ex*({n},{n}) not computed exactly; skipped"), 0, 0).informational());
    }
    let mut star_memo: HashMap<(usize, usize), u64> = HashMap::new();
    let mut ex_star = |m: usize, q: usize| -> Result<u64> {
        if let Some(&v) = star_memo.get(&(m, q)) {
            return Ok(v);
        }
        let v = solver.ex_star_value(m, q, oriented)? as u64;
        star_memo.insert((m, q), v);
        Ok(v)
    };
    for (pi, p) in d.classes.iter().enumerate() {
        for q in &d.classes[pi + 1..] {
            let (a, b) = (p.mask(), q.mask());
            let (sp, sq) = (p.members.len(), q.members.len());
            for color in 1..=k {
                let in_p = p.has_color(color);
                let in_q = q.has_color(color);
                if !in_p && !in_q {
                    continue;
                }
                let mut bound = u64::MAX;
                if in_q {
                    bound = bound.min(ex_star(sp, sq)?);
                }
                if in_p {
                    bound = bound.min(ex_star(sq, sp)?);
                }
                let between = edges_between(&nim[color as usize - 1], a, b) as u64;
                let scope = format!("classes {}|{} color {color}", p.vector_string(), q.vector_string());
                checks.push(ClaimCheck::new("K3", scope.clone(), between, bound));
                if let Some(lit) = literal {
                    checks.push(ClaimCheck::new("K3-literal", scope, between, lit));
                }
            }
        }
    }

    let s_mask = d.s_mask();
    let constant: Vec<bool> = d.classes.iter().map(|cl| cl.is_constant()).collect();
    let b_masks: Vec<u64> = (1..=k)
        .map(|color| {
            d.classes
                .iter()
                .filter(|cl| !cl.is_constant() && !cl.has_color(color))
                .fold(0, |m, cl| m | cl.mask())
        })
        .collect();
    let mut types = EdgeTypes::default();
    let mut star_per_color = vec![0u64; k as usize];
    let mut outside_b = 0u64;
    for (idx, _) in report.flags.iter().enumerate().filter(|&(_, &f)| f) {
        let (u, v) = edge_from_index(n, idx);
        let color = c.color_at(idx);
        if s_mask & (bit(u) | bit(v)) != 0 {
            types.type_i += 1;
            continue;
        }
        let (cu, cv) = (d.class_of[u].expect("outside S"), d.class_of[v].expect("outside S"));
        if constant[cu] || constant[cv] {
            types.type_i += 1;
            continue;
        }
        let feasible = d.classes[cu].has_color(color) || d.classes[cv].has_color(color);
        match (cu == cv, feasible) {
            (true, true) => types.inside_feasible += 1,
            (false, true) => types.between_feasible += 1,
            (true, false) => types.type_ii += 1,
            (false, false) => types.type_iii += 1,
        }
        if !feasible {
            star_per_color[color as usize - 1] += 1;
            let bm = b_masks[color as usize - 1];
            if bm & bit(u) == 0 || bm & bit(v) == 0 {
                outside_b += 1;
            }
        }
    }
    checks.push(ClaimCheck::new("TYPES", "classified edges minus NIM edges", (types.total() as u64).abs_diff(report.total as u64), 0));
    checks.push(ClaimCheck::new("K4", "type (ii)/(iii) edges outside B_i", outside_b, 0));

    let b: Vec<usize> = b_masks.iter().map(|m| m.count_ones() as usize).collect();
    let mut ex_h_sum = 0u64;
    for (i, &bi) in b.iter().enumerate() {
        let bound = solver.ex_value(bi, h.forbidden())? as u64;
        ex_h_sum += bound;
        checks.push(ClaimCheck::new("K5", format!("color {} with b={bi}", i + 1), star_per_color[i], bound));
    }
    let n_star = types.type_ii + types.type_iii;
    checks.push(ClaimCheck::new("K5-sum", "N*", n_star as u64, ex_h_sum));
    let multi: usize = d.classes.iter().filter(|cl| cl.feasible.len() >= 2).map(|cl| cl.members.len()).sum();
    checks.push(ClaimCheck::new("K6", "sum of b_i", b.iter().sum::<usize>() as u64, (k as u64 - 2) * multi as u64));

    let pass = checks.iter().all(|ch| !ch.gating || ch.pass);
    Ok(AuditReport {
        kind: "k-color".into(),
        n,
        k,
        pattern: h.name().to_string(),
        h: hh,
        t: d.t(),
        nim_total: report.total,
        nim_per_color: report.per_color.clone(),
        checks,
        classes: class_rows(&d),
        edge_types: Some(types),
        b: Some(b),
        n_star: Some(n_star),
        pass,
        decomposition: d,
        counterexample: (!pass).then(|| c.clone()),
    })
}
