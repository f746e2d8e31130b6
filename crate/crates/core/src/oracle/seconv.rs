//! Exact second-moment quantities for a pair of independent finite chains.

use std::collections::HashMap;

use serde::Serialize;

use super::WeightedPathSet;
use crate::error::{Error, Result};
use crate::intersection::{
    chi_from_erasure, lex_first_hit, paths_intersect, weighted_counts, TimeSpaceSet, WeightTable,
};
use crate::loop_erasure::{loop_erase, loop_erase_with_prefix};

fn pairs<'a>(
    set_x: &'a WeightedPathSet,
    set_y: &'a WeightedPathSet,
) -> impl Iterator<Item = (&'a [usize], &'a [usize], f64)> + 'a {
    set_x.paths.iter().flat_map(move |px| {
        set_y
            .paths
            .iter()
            .map(move |py| (px.states.as_slice(), py.states.as_slice(), px.prob * py.prob))
    })
}

/// `P[hit(A)]`.
pub fn hit_prob_exact(
    set_x: &WeightedPathSet,
    set_y: &WeightedPathSet,
    a: &TimeSpaceSet<usize>,
) -> f64 {
    pairs(set_x, set_y)
        .filter(|(px, py, _)| lex_first_hit(px, py, a).hit)
        .map(|(_, _, p)| p)
        .sum()
}

/// `P[{X_m} ∩ {Y_n} ≠ ∅]`.
pub fn intersect_prob_exact(set_x: &WeightedPathSet, set_y: &WeightedPathSet) -> f64 {
    pairs(set_x, set_y)
        .filter(|(px, py, _)| paths_intersect(px, py))
        .map(|(_, _, p)| p)
        .sum()
}

/// `w(m, x, n, y) = P[τ = m, λ = n | X_m = x, Y_n = y]` for the lexicographic
/// first hit of `A`.
pub fn weight_table_exact(
    set_x: &WeightedPathSet,
    set_y: &WeightedPathSet,
    a: &TimeSpaceSet<usize>,
) -> WeightTable<usize> {
    let mut joint: HashMap<(usize, usize, usize, usize), f64> = HashMap::new();
    for (px, py, p) in pairs(set_x, set_y) {
        let h = lex_first_hit(px, py, a);
        if let (Some(m), Some(n)) = (h.tau, h.lambda) {
            *joint.entry((m, px[m], n, py[n])).or_insert(0.0) += p;
        }
    }
    let mx = set_x.marginals();
    let my = set_y.marginals();
    let mut w = WeightTable::new();
    for ((m, x, n, y), p) in joint {
        let denom = mx[m][x] * my[n][y];
        w.insert(m, x, n, y, p / denom);
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactSwMoments {
    pub e_s: f64,
    pub e_s_sq: f64,
    pub e_upsilon: f64,
    pub e_upsilon_sq: f64,
}

/// Exact `E S_w`, `E S_w²`, `E Υ_w`, `E Υ_w²` with `χ` recomputed on every pair.
pub fn sw_moments_exact(
    set_x: &WeightedPathSet,
    set_y: &WeightedPathSet,
    w: &WeightTable<usize>,
) -> ExactSwMoments {
    let mut out = ExactSwMoments {
        e_s: 0.0,
        e_s_sq: 0.0,
        e_upsilon: 0.0,
        e_upsilon_sq: 0.0,
    };
    for (px, py, p) in pairs(set_x, set_y) {
        let (s, u) = weighted_counts(px, py, &[], w);
        out.e_s += p * s;
        out.e_s_sq += p * s * s;
        out.e_upsilon += p * u;
        out.e_upsilon_sq += p * u * u;
    }
    out
}

/// Everything needed to check the second-moment sandwich on one instance.
#[derive(Debug, Clone, Serialize)]
pub struct SeconvReport {
    pub hit: f64,
    pub moments: ExactSwMoments,
    /// `(E S_w)² / E[S_w²]`.
    pub lower: f64,
    /// `64 (E S_w)² / E[S_w²]`.
    pub upper: f64,
    pub weights: usize,
    pub max_weight: f64,
}

impl SeconvReport {
    pub fn identity_error(&self) -> f64 {
        (self.moments.e_s - self.hit).abs()
    }
}

pub fn seconv_check(
    set_x: &WeightedPathSet,
    set_y: &WeightedPathSet,
    a: &TimeSpaceSet<usize>,
) -> SeconvReport {
    let hit = hit_prob_exact(set_x, set_y, a);
    let w = weight_table_exact(set_x, set_y, a);
    let moments = sw_moments_exact(set_x, set_y, &w);
    let ratio = if moments.e_s_sq > 0.0 {
        moments.e_s * moments.e_s / moments.e_s_sq
    } else {
        0.0
    };
    SeconvReport {
        hit,
        moments,
        lower: ratio,
        upper: 64.0 * ratio,
        weights: w.len(),
        max_weight: w.iter().map(|(_, v)| *v).fold(0.0, f64::max),
    }
}

/// `P[LE(prefix ⧺ X) ∩ {Y} ≠ ∅]`.
pub fn le_hit_prob_exact(
    set_x: &WeightedPathSet,
    set_y: &WeightedPathSet,
    prefix: &[usize],
) -> f64 {
    let erased: Vec<(Vec<usize>, f64)> = set_x
        .paths
        .iter()
        .map(|p| {
            let le = loop_erase_with_prefix(prefix, &p.states).expect("nonempty path");
            (le.states, p.prob)
        })
        .collect();
    let mut total = 0.0;
    for (le, px) in &erased {
        for py in &set_y.paths {
            if paths_intersect(le, &py.states) {
                total += px * py.prob;
            }
        }
    }
    total
}

/// `P[i(m, n) ≤ j(m, n) | X_m = Y_n = x]`.
pub fn chi_conditional_exact(
    set_x: &WeightedPathSet,
    set_y: &WeightedPathSet,
    m: usize,
    n: usize,
    x: usize,
) -> Result<f64> {
    let mx = set_x.marginals();
    let my = set_y.marginals();
    let px_x = mx.get(m).and_then(|r| r.get(x)).copied().unwrap_or(0.0);
    let py_x = my.get(n).and_then(|r| r.get(x)).copied().unwrap_or(0.0);
    let denom = px_x * py_x;
    if denom <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    let mut num = 0.0;
    for px in set_x.paths.iter().filter(|p| p.states.get(m) == Some(&x)) {
        let erased = loop_erase(&px.states[..=m]).expect("nonempty").states;
        for py in set_y.paths.iter().filter(|p| p.states.get(n) == Some(&x)) {
            if chi_from_erasure(&erased, &px.states[m..], &py.states[n..]).chi {
                num += px.prob * py.prob;
            }
        }
    }
    Ok(num / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiCell {
    pub m: usize,
    pub n: usize,
    pub x: usize,
    pub value: f64,
}

/// `chi_conditional_exact` at every `(m, m, x)` with positive conditioning mass.
pub fn chi_half_table(set_x: &WeightedPathSet, set_y: &WeightedPathSet) -> Vec<ChiCell> {
    let mx = set_x.marginals();
    let my = set_y.marginals();
    let horizon = set_x.horizon.min(set_y.horizon);
    let mut out = Vec::new();
    for m in 0..=horizon {
        for x in 0..mx[m].len() {
            if mx[m][x] * my[m][x] > 0.0 {
                let value = chi_conditional_exact(set_x, set_y, m, m, x).expect("positive mass");
                out.push(ChiCell { m, n: m, x, value });
            }
        }
    }
    out
}
