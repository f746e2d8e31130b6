//! Acceptance criteria. Runs as a plain binary and prints one line per criterion.

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use lerw_core::chain::{induce_on_subset, mc_green, sample_path};
use lerw_core::intersection::{mc_hit_ratio, mc_intersection_count, mc_sw_moments};
use lerw_core::loop_erasure::{loop_erase, partial_loop_erase, OnlineEraser};
use lerw_core::oracle::{
    chi_half_table, enumerate_paths, heat_kernel_identity_check, intersect_prob_exact,
    kahane_check, le_hit_prob_exact, moment_identity_check, seconv_check, sw_moments_exact,
    weight_table_exact, WeightedPathSet, DEFAULT_PATH_BUDGET,
};
use lerw_core::rng::task_rng;
use lerw_core::stats::chi_square_uniform;
use lerw_core::wilson::{enumerate_spanning_trees, pemantle_check, wilson_tree, FiniteMultigraph};
use lerw_core::{FiniteChain, GluedGraph, GluedVertex, LatticePoint, LatticeWalk, Result, TimeSpaceSet};

const EXACT_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn sets(chain: &FiniteChain, sx: usize, sy: usize, t: usize) -> (WeightedPathSet, WeightedPathSet) {
    (
        enumerate_paths(chain, sx, t, DEFAULT_PATH_BUDGET).expect("enumeration"),
        enumerate_paths(chain, sy, t, DEFAULT_PATH_BUDGET).expect("enumeration"),
    )
}

/// The three finite instances shared by criteria 1-3.
fn finite_instances() -> Vec<(&'static str, FiniteChain, usize)> {
    vec![
        ("lazy two-state T=4", FiniteChain::lazy_two_state(), 4),
        ("3-state kill 0.2 T=4", FiniteChain::uniform_killed(3, 0.2).unwrap(), 4),
        ("flip kill 1/4 T=5", FiniteChain::flip(0.25).unwrap(), 5),
    ]
}

fn stopping_time_identity() -> Result<Outcome> {
    let lazy = FiniteChain::lazy_two_state();
    let (x, y) = sets(&lazy, 0, 1, 4);
    let r = seconv_check(&x, &y, &TimeSpaceSet::Diagonal);
    let err = r.identity_error();
    Ok(Outcome::new(
        err <= EXACT_TOL,
        format!("E S_w = {:.15}, P[hit] = {:.15}, |diff| = {err:.1e}", r.moments.e_s, r.hit),
    ))
}

fn sandwich() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, chain, t) in finite_instances() {
        let (x, y) = sets(&chain, 0, 1, t);
        let r = seconv_check(&x, &y, &TimeSpaceSet::Diagonal);
        let ok = r.lower <= r.hit + EXACT_TOL
            && r.hit <= r.upper + EXACT_TOL
            && r.moments.e_s_sq <= 64.0 * r.hit + EXACT_TOL;
        pass &= ok;
        parts.push(format!(
            "{name}: {:.4} <= {:.4} <= {:.2}, E S^2 = {:.4} <= {:.2}",
            r.lower,
            r.hit,
            r.upper,
            r.moments.e_s_sq,
            64.0 * r.hit
        ));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn exchangeability() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, chain, t) in finite_instances() {
        // From starts 0 and 1 the flip chain never meets at equal times, so the
        // same-start pair supplies its (m, m, x) cells.
        let mut cells = 0;
        let mut min = f64::INFINITY;
        let mut ratios = Vec::new();
        for (sx, sy) in [(0, 1), (0, 0)] {
            let (x, y) = sets(&chain, sx, sy, t);
            let table = chi_half_table(&x, &y);
            cells += table.len();
            min = table.iter().map(|c| c.value).fold(min, f64::min);
            let w = weight_table_exact(&x, &y, &TimeSpaceSet::Diagonal);
            let m = sw_moments_exact(&x, &y, &w);
            pass &= m.e_upsilon >= 0.5 * m.e_s - EXACT_TOL;
            ratios.push(format!("{:.4}", m.e_upsilon / m.e_s));
        }
        pass &= cells > 0 && min >= 0.5 - EXACT_TOL;
        parts.push(format!(
            "{name}: min chi = {min:.4} over {cells} cells, E Y/E S = {} (starts 0,1 / 0,0)",
            ratios.join(" / ")
        ));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn erased_hit_ratio() -> Result<Outcome> {
    let walk = LatticeWalk::new(3, 0.01)?;
    let threshold = 2f64.powi(-8);
    let origin = LatticePoint::origin();
    let r = mc_hit_ratio(&walk, &origin, &origin, 100_000, 10_000, 4)?;
    let offset = LatticePoint::new(&[4, 0, 0])?;
    let s = mc_hit_ratio(&walk, &origin, &offset, 100_000, 10_000, 5)?;
    let ok = |h: &lerw_core::intersection::HitRatio| h.ratio.is_some() && h.ratio_ci.0 > threshold;
    Ok(Outcome::new(
        ok(&r) && ok(&s) && r.truncated_paths == 0,
        format!(
            "both at origin: ratio {:.4} CI [{:.4}, {:.4}]; Y from (4,0,0): ratio {:.4} CI [{:.4}, {:.4}], hit {:.4}; threshold {threshold:.5}",
            r.ratio.unwrap_or(f64::NAN),
            r.ratio_ci.0,
            r.ratio_ci.1,
            s.ratio.unwrap_or(f64::NAN),
            s.ratio_ci.0,
            s.ratio_ci.1,
            s.hit.estimate
        ),
    ))
}

fn moment_identity() -> Result<Outcome> {
    let c5 = FiniteChain::lazy_cycle(5)?;
    let m = moment_identity_check(&c5, 0, 4, true, DEFAULT_PATH_BUDGET)?;
    let enumerated = m.e_in_enumerated.unwrap_or(f64::NAN);
    let enumerated_sq = m.e_in_sq_enumerated.unwrap_or(f64::NAN);
    let first = (m.sum_green_sq - enumerated).abs() <= EXACT_TOL * m.sum_green_sq
        && (m.e_in_ordered - enumerated).abs() <= EXACT_TOL * m.sum_green_sq;
    let second = (m.e_in_sq - enumerated_sq).abs() <= EXACT_TOL * m.e_in_sq && m.e_in_sq <= m.bound;
    let allz = m.allz_spread() <= EXACT_TOL;
    Ok(Outcome::new(
        first && second && allz,
        format!(
            "sum G^2 = {:.12}, enumerated E I = {enumerated:.12}; E I^2 = {:.6} <= 4(E I)^2 = {:.6}; allz spread {:.1e}",
            m.sum_green_sq,
            m.e_in_sq,
            m.bound,
            m.allz_spread()
        ),
    ))
}

fn anti_concentration() -> Result<Outcome> {
    let c5 = FiniteChain::lazy_cycle(5)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for eps in [0.1, 0.5] {
        let k = kahane_check(&c5, 0, 4, eps, DEFAULT_PATH_BUDGET)?;
        pass &= k.prob >= k.moment_bound - EXACT_TOL && k.moment_bound >= k.quarter_bound - EXACT_TOL;
        parts.push(format!(
            "eps {eps}: P = {:.6} >= {:.6} >= {:.6}",
            k.prob, k.moment_bound, k.quarter_bound
        ));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn heat_kernel() -> Result<Outcome> {
    let c6 = FiniteChain::cycle_walk(6)?;
    let line = FiniteChain::interval_walk(-40, 40)?;
    let origin = line.index_of("0").expect("label 0");
    let a = heat_kernel_identity_check(&c6, 0, 20)?;
    let b = heat_kernel_identity_check(&line, origin, 20)?;
    let (da, db) = (a.max_discrepancy(), b.max_discrepancy());
    Ok(Outcome::new(
        da <= EXACT_TOL * a.pairwise.max(1.0) && db <= EXACT_TOL * b.pairwise.max(1.0),
        format!(
            "C6: {:.12} / {:.12} / {:.12}; Z1 on [-40,40]: {:.12} / {:.12} / {:.12}",
            a.pairwise, a.collapsed, a.weighted, b.pairwise, b.collapsed, b.weighted
        ),
    ))
}

fn dichotomy() -> Result<Outcome> {
    let ns = [100usize, 1_000, 10_000];
    let origin = LatticePoint::origin();
    let estimate = |dim: usize, samples: usize| -> Result<Vec<lerw_core::stats::Estimate>> {
        let walk = LatticeWalk::new(dim, 0.0)?;
        // independent samples per n
        ns.iter()
            .map(|&n| mc_intersection_count(&walk, &origin, n, samples, 1000 * dim as u64 + n as u64))
            .collect()
    };
    let z3 = estimate(3, 2_000)?;
    let z5 = estimate(5, 4_000)?;
    let gap = |a: &lerw_core::stats::Estimate, b: &lerw_core::stats::Estimate| {
        (b.mean - a.mean) / (a.stderr.powi(2) + b.stderr.powi(2)).sqrt()
    };
    let z3_gaps = [gap(&z3[0], &z3[1]), gap(&z3[1], &z3[2])];
    let z5_gap = gap(&z5[1], &z5[2]);
    let fmt = |v: &[lerw_core::stats::Estimate]| {
        v.iter()
            .map(|e| format!("{:.3}±{:.3}", e.mean, e.stderr))
            .collect::<Vec<_>>()
            .join(", ")
    };
    Ok(Outcome::new(
        z3_gaps.iter().all(|g| *g > 3.0) && z5_gap.abs() <= 3.0,
        format!(
            "Z3 E I_n = [{}] (gaps {:.1}σ, {:.1}σ); Z5 E I_n = [{}] (10^3 vs 10^4: {:.2}σ)",
            fmt(&z3),
            z3_gaps[0],
            z3_gaps[1],
            fmt(&z5),
            z5_gap
        ),
    ))
}

fn glued_green_ratio() -> Result<Outcome> {
    let graph = GluedGraph::new(0.0, Some(20))?;
    let targets = [GluedVertex::Hub, GluedVertex::Ray(1)];
    let g = mc_green(&graph, &GluedVertex::Hub, &targets, 200_000, 100_000, 9)?;
    let r = g.ratio(1, 0);
    let target = 1.0 / 6.0;
    Ok(Outcome::new(
        (r.mean - target).abs() <= 0.1 * target,
        format!(
            "G(o,ray:1)/G(o,o) = {:.4} ± {:.4} vs 1/6 = {target:.4}; truncated {:.4}, absorbed {:.4}",
            r.mean,
            r.stderr,
            g.truncated_fraction(),
            g.absorbed_paths as f64 / g.samples as f64
        ),
    ))
}

fn wilson_uniformity() -> Result<Outcome> {
    let k4 = FiniteMultigraph::complete(4);
    let trees = enumerate_spanning_trees(&k4)?;
    let index: HashMap<Vec<usize>, usize> =
        trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut counts = vec![0u64; trees.len()];
    for seed in 0..16_000u64 {
        let t = wilson_tree(&k4, 0, seed)?;
        counts[index[&t.edge_ids()]] += 1;
    }
    let (stat, p) = chi_square_uniform(&counts);

    let tree = FiniteMultigraph::new(6, vec![(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])?;
    let all: Vec<usize> = (0..5).collect();
    let mut identity = true;
    for seed in 0..200u64 {
        for root in 0..6 {
            identity &= wilson_tree(&tree, root, seed)?.edge_ids() == all;
        }
    }
    Ok(Outcome::new(
        trees.len() == 16 && p > 0.01 && identity,
        format!(
            "{} trees, chi2 = {stat:.2}, p = {p:.4}; tree input reproduced: {identity}",
            trees.len()
        ),
    ))
}

fn path_law() -> Result<Outcome> {
    let c4 = pemantle_check(&FiniteMultigraph::cycle(4), 0, 2, 100_000, 200, 12)?;
    let k3 = pemantle_check(&FiniteMultigraph::complete(3), 0, 1, 100_000, 200, 13)?;
    Ok(Outcome::new(
        c4.tv < 0.02 && k3.tv < 0.02,
        format!(
            "C4 opposite: TV = {:.4} (bootstrap se {:.4}, {} paths); triangle adjacent: TV = {:.4} (se {:.4}, {} paths)",
            c4.tv,
            c4.tv_bootstrap_stderr,
            c4.paths.len(),
            k3.tv,
            k3.tv_bootstrap_stderr,
            k3.paths.len()
        ),
    ))
}

fn structural() -> Result<Outcome> {
    let mut rng = task_rng(2718, 0);
    let mut online_ok = 0;
    let mut induced_ok = 0;
    let trials = 10_000;
    for _ in 0..trials {
        let len = rng.random_range(1..60);
        let path: Vec<u8> = (0..len).map(|_| rng.random_range(0..8)).collect();
        let mut eraser = OnlineEraser::new();
        path.iter().for_each(|v| eraser.push(*v));
        if eraser.current() == loop_erase(&path)?.states.as_slice() {
            online_ok += 1;
        }
        let z: HashSet<u8> = (0..8).filter(|_| rng.random_bool(0.5)).collect();
        let induced = induce_on_subset(&path, &z);
        let lhs = if induced.states.is_empty() {
            Vec::new()
        } else {
            loop_erase(&induced.states)?.states
        };
        let rhs: Vec<u8> = partial_loop_erase(&path, &z)?
            .into_iter()
            .filter(|v| z.contains(v))
            .collect();
        if lhs == rhs {
            induced_ok += 1;
        }
    }

    // Estimators against exact oracles, each at 3 standard errors.
    let mut checks: Vec<(&str, f64, f64, f64)> = Vec::new();
    let chain = FiniteChain::uniform_killed(3, 0.2)?;
    let (x, y) = sets(&chain, 0, 1, 4);
    let w = weight_table_exact(&x, &y, &TimeSpaceSet::Diagonal);
    let exact = sw_moments_exact(&x, &y, &w);
    let mc = mc_sw_moments(&chain, &0, &1, &w, 4, 40_000, 21)?;
    checks.push(("E S_w", mc.s_w.mean, mc.s_w.stderr, exact.e_s));
    checks.push(("E S_w^2", mc.s_w_sq.mean, mc.s_w_sq.stderr, exact.e_s_sq));
    checks.push(("E Y_w", mc.upsilon.mean, mc.upsilon.stderr, exact.e_upsilon));
    checks.push(("E Y_w^2", mc.upsilon_sq.mean, mc.upsilon_sq.stderr, exact.e_upsilon_sq));
    let h = mc_hit_ratio(&chain, &0, &1, 4, 40_000, 22)?;
    checks.push(("P[hit]", h.hit.estimate, h.hit.stderr, intersect_prob_exact(&x, &y)));
    checks.push(("P[LE hit]", h.le_hit.estimate, h.le_hit.stderr, le_hit_prob_exact(&x, &y, &[])));
    let flip = FiniteChain::flip(0.25)?;
    let g_exact = flip.green_exact(0)?;
    let g = mc_green(&flip, &0, &[0, 1], 40_000, 10_000, 23)?;
    checks.push(("G(0,0)", g.estimates[0].mean, g.estimates[0].stderr, g_exact[0]));
    checks.push(("G(0,1)", g.estimates[1].mean, g.estimates[1].stderr, g_exact[1]));
    let c5 = FiniteChain::lazy_cycle(5)?;
    let e_in = mc_intersection_count(&c5, &0, 4, 40_000, 24)?;
    let m = moment_identity_check(&c5, 0, 4, true, DEFAULT_PATH_BUDGET)?;
    checks.push(("E I_4", e_in.mean, e_in.stderr, m.sum_green_sq));
    let marg = chain.exact_marginals(0, 4)?;
    let n = 40_000u64;
    let mut at4 = [0u64; 3];
    for stream in 0..n {
        let p = sample_path(&chain, &0, 4, 25, stream)?;
        if let Some(s) = p.states.get(4) {
            at4[*s] += 1;
        }
    }
    for (z, &c) in at4.iter().enumerate() {
        let p = marg[4][z];
        checks.push(("P[X_4 = z]", c as f64 / n as f64, (p * (1.0 - p) / n as f64).sqrt(), p));
    }
    let worst = checks
        .iter()
        .map(|(name, est, se, exact)| ((est - exact).abs() / se, *name))
        .fold((0.0, ""), |a, b| if b.0 > a.0 { b } else { a });
    Ok(Outcome::new(
        online_ok == trials && induced_ok == trials && worst.0 <= 3.0,
        format!(
            "online = naive on {online_ok}/{trials}; induced identity on {induced_ok}/{trials}; {} estimator checks, worst {:.2}σ ({})",
            checks.len(),
            worst.0,
            worst.1
        ),
    ))
}

type Criterion = (&'static str, u64, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("stopping-time identity E S_w = P[hit]", 1, stopping_time_identity),
        ("sandwich with constant 64", 5, sandwich),
        ("exchangeability half bound", 5, exchangeability),
        ("erased-walk hit ratio above 2^-8", 180, erased_hit_ratio),
        ("first moment identity and transitive second moment bound", 10, moment_identity),
        ("anti-concentration of I_n", 10, anti_concentration),
        ("heat-kernel identity", 5, heat_kernel),
        ("Z3 / Z5 dichotomy", 300, dichotomy),
        ("glued graph Green ratio 1/6", 300, glued_green_ratio),
        ("Wilson uniformity on K4", 30, wilson_uniformity),
        ("tree path law equals erased walk law", 60, path_law),
        ("structural properties and oracle agreement", 60, structural),
    ];
    let mut passed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let (pass, detail) = match outcome {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if pass {
            passed += 1;
        }
        println!(
            "{} [{:>2}] {name} ({:.2}s, budget {budget}s): {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
