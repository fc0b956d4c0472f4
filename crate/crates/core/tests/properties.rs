use nimh_core::audit::{audit_k_color, audit_two_color, build_star_decomposition_with};
use nimh_core::constructions::overlay_from_graph;
use nimh_core::mono::{nim_edges, same_color_nim_is_h_free};
use nimh_core::sample::{audit_sample, random_coloring};
use nimh_core::turan::{has_oriented_copy, parse_line, validate_ex, validate_ex_star, TuranKind};
use nimh_core::{pair_count, BipartitePattern, NimState, SimpleGraph, TuranConfig, TuranSolver};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn c4() -> &'static BipartitePattern {
    static P: OnceLock<BipartitePattern> = OnceLock::new();
    P.get_or_init(|| BipartitePattern::parse("c4").unwrap())
}

fn solver() -> &'static TuranSolver {
    static S: OnceLock<TuranSolver> = OnceLock::new();
    S.get_or_init(TuranSolver::default)
}

fn patterns() -> Vec<BipartitePattern> {
    ["k3", "c4", "k2,3", "c6"].iter().map(|s| BipartitePattern::parse(s).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nim_flags_follow_relabeling_and_color_permutation(seed in any::<u64>(), n in 2usize..10, pick in 0usize..4) {
        let h = &patterns()[pick];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_coloring(n, &[1.0, 0.7, 0.4], &mut rng).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut colors = vec![1u8, 2, 3];
        colors.shuffle(&mut rng);
        let r = nim_edges(&c, h);
        let moved = c.permute_vertices(&perm).permute_colors(&colors);
        let r2 = nim_edges(&moved, h);
        prop_assert_eq!(r.total, r2.total);
        for idx in 0..pair_count(n) {
            let (u, v) = nimh_core::edge_from_index(n, idx);
            let j = nimh_core::edge_index(n, perm[u].min(perm[v]), perm[u].max(perm[v]));
            prop_assert_eq!(r.flags[idx], r2.flags[j]);
        }
        prop_assert!(same_color_nim_is_h_free(&c, &r, h));
    }

    #[test]
    fn incremental_nim_state_tracks_full_recomputation(seed in any::<u64>(), n in 4usize..10) {
        let h = c4();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_coloring(n, &[1.0, 1.0], &mut rng).unwrap();
        let mut state = NimState::new(c, h.forbidden());
        for _ in 0..20 {
            let idx = rng.random_range(0..pair_count(n));
            state.recolor(idx, rng.random_range(1..=2));
            let full = nim_edges(state.coloring(), h);
            prop_assert_eq!(state.flags(), &full.flags[..]);
        }
    }

    #[test]
    fn ex_star_is_between_any_free_witness_and_mn(seed in any::<u64>(), m in 1usize..6, n in 1usize..6) {
        let h = c4().require_reduced().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = SimpleGraph::new(m + n);
        let mut cells: Vec<(usize, usize)> = (0..m).flat_map(|r| (m..m + n).map(move |c| (r, c))).collect();
        cells.shuffle(&mut rng);
        for (r, c) in cells {
            g.add_edge(r, c);
            if has_oriented_copy(&g, m, h) {
                g.remove_edge(r, c);
            }
        }
        let rec = solver().ex_star_exact(m, n, h).unwrap();
        prop_assert!(g.edge_count() <= rec.value);
        prop_assert!(rec.value <= m * n);
        prop_assert!(validate_ex_star(&rec, h));
    }

    #[test]
    fn overlay_certificates_hold(seed in any::<u64>(), n in 6usize..11, k in 2u8..5) {
        let h = c4();
        let base = &solver().ex_exact(n, h.forbidden()).unwrap().witnesses[0];
        let (c, cert) = overlay_from_graph(base, k, seed, 16).unwrap();
        prop_assert!(cert.invariants_hold());
        for color in 1..k {
            prop_assert!(h.forbidden().is_free_in(&c.class(color)));
        }
        let r = nim_edges(&c, h);
        prop_assert!(r.total + cert.overlap_sum >= (k as usize - 1) * cert.ex_value);
        prop_assert!(same_color_nim_is_h_free(&c, &r, h));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_color_audit_passes(seed in any::<u64>(), n in 6usize..22) {
        let c = audit_sample(n, 2, seed).unwrap();
        let r = audit_two_color(&c, c4(), solver()).unwrap();
        prop_assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        prop_assert!(r.counterexample.is_none());
    }

    #[test]
    fn k_color_audit_passes(seed in any::<u64>(), n in 8usize..18, k in 3u8..5) {
        let c = audit_sample(n, k, seed).unwrap();
        let r = audit_k_color(&c, c4(), solver()).unwrap();
        prop_assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        prop_assert_eq!(r.edge_types.as_ref().unwrap().total(), r.nim_total);
    }

    /// NIM `i`-edges inside a class fully joined in color `i` to some vertex
    /// of `S` contain no copy of `H - w`.
    #[test]
    fn inside_fully_joined_classes_nim_is_reduced_free(seed in any::<u64>(), n in 8usize..20, k in 2u8..4) {
        let h = c4();
        let c = audit_sample(n, k, seed).unwrap();
        let report = nim_edges(&c, h);
        let d = build_star_decomposition_with(&c, &report, h).unwrap();
        prop_assert!(d.violations(&c, &report).is_empty());
        let reduced = h.reduced_pattern().unwrap();
        for cl in &d.classes {
            let a = cl.mask();
            for &color in &cl.feasible {
                let rows = report.nim_rows(&c, color);
                let restricted: Vec<u64> = rows.iter().enumerate().map(|(v, r)| if a >> v & 1 == 1 { r & a } else { 0 }).collect();
                prop_assert!(reduced.plan().find_any(&restricted, None).is_none());
            }
        }
    }
}

#[test]
fn ex_is_monotone_with_bounded_increments() {
    for h in patterns() {
        let values: Vec<usize> = (1..=9).map(|n| solver().ex_value(n, h.forbidden()).unwrap()).collect();
        for (i, w) in values.windows(2).enumerate() {
            let n = i + 1;
            assert!(w[0] <= w[1] && w[1] <= w[0] + n, "{} n={n}: {w:?}", h.name());
        }
    }
}

#[test]
fn every_cached_record_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache");
    {
        let s = TuranSolver::with_cache_file(TuranConfig::default(), &path).unwrap();
        for h in patterns() {
            s.ex(8, h.forbidden()).unwrap();
            if let Ok(r) = h.require_reduced() {
                s.ex_star(3, 4, r).unwrap();
            }
        }
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().count() > 10);
    for line in text.lines() {
        let rec = parse_line(line).unwrap();
        let ok = patterns().iter().any(|h| match rec.kind {
            TuranKind::Ex => rec.fingerprint == h.forbidden().fingerprint() && validate_ex(&rec, h.forbidden()),
            TuranKind::ExStar => h.reduced().is_some_and(|r| rec.fingerprint == r.fingerprint() && validate_ex_star(&rec, r)),
        });
        assert!(ok, "{line}");
    }
    let reopened = TuranSolver::with_cache_file(TuranConfig::default(), &path).unwrap();
    let again = reopened.ex(8, c4().forbidden()).unwrap();
    assert_eq!(again.value, 11);
}
