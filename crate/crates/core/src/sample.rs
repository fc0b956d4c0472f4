//! Seeded random colorings for audits and property tests.

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::graph::{bit, edge_index, pair_count};

/// Each edge independently gets color `i + 1` with probability proportional
/// to `weights[i]`.
pub fn random_coloring<R: Rng>(n: usize, weights: &[f64], rng: &mut R) -> Result<EdgeColoring> {
    if weights.is_empty() || weights.len() > u8::MAX as usize {
        return Err(Error::InvalidInput(format!("{} colors", weights.len())));
    }
    let dist = WeightedIndex::new(weights).map_err(|e| Error::InvalidInput(format!("weights: {e}")))?;
    let colors = (0..pair_count(n)).map(|_| dist.sample(rng) as u8 + 1).collect();
    EdgeColoring::new(n, weights.len() as u8, colors)
}

/// Recolors the edges at `v` so that exactly one of them, to `partner`, has
/// color `color`; edges to vertices in `fixed` keep their color. If the
/// pattern has minimum degree at least two, the edge `v partner` is NIM.
pub fn plant_pendant<R: Rng>(c: &mut EdgeColoring, v: usize, partner: usize, color: u8, fixed: u64, rng: &mut R) {
    let n = c.n();
    let k = c.k();
    for u in (0..n).filter(|&u| u != v && fixed & bit(u) == 0) {
        let idx = edge_index(n, u.min(v), u.max(v));
        if u == partner {
            c.set_color_at(idx, color);
        } else if c.color_at(idx) == color {
            let other = rng.random_range(1..k);
            c.set_color_at(idx, if other >= color { other + 1 } else { other });
        }
    }
}

/// A biased random `k`-coloring of `K_n` with one planted pendant edge per
/// color on distinct hosts. Deterministic in `seed`.
pub fn audit_sample(n: usize, k: u8, seed: u64) -> Result<EdgeColoring> {
    if k < 2 || n < 2 * k as usize {
        return Err(Error::InvalidInput(format!("audit sample needs k >= 2 and n >= 2k, got n={n} k={k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0f64).powi(2)).collect();
    let mut c = random_coloring(n, &weights, &mut rng)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let hosts = &order[..k as usize];
    let others = &order[k as usize..];
    let host_mask = hosts.iter().fold(0, |m, &v| m | bit(v));
    if k == 2 {
        // The edge between the hosts is the pendant edge of the second one.
        c.set_color_at(edge_index(n, hosts[0].min(hosts[1]), hosts[0].max(hosts[1])), 2);
        let p = others[rng.random_range(0..others.len())];
        plant_pendant(&mut c, hosts[0], p, 1, host_mask, &mut rng);
        plant_pendant(&mut c, hosts[1], hosts[0], 2, host_mask & !bit(hosts[0]), &mut rng);
        return Ok(c);
    }
    for i in 0..hosts.len() {
        for j in i + 1..hosts.len() {
            let avoid = |x: u8| x != i as u8 + 1 && x != j as u8 + 1;
            let choices: Vec<u8> = (1..=k).filter(|&x| avoid(x)).collect();
            let (a, b) = (hosts[i].min(hosts[j]), hosts[i].max(hosts[j]));
            c.set_color_at(edge_index(n, a, b), *choices.choose(&mut rng).expect("k >= 3"));
        }
    }
    for (i, &h) in hosts.iter().enumerate() {
        let p = others[rng.random_range(0..others.len())];
        plant_pendant(&mut c, h, p, i as u8 + 1, host_mask, &mut rng);
    }
    Ok(c)
}
