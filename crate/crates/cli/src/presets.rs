//! One function per named experiment.

use std::collections::HashMap;

use lerw_core::chain::{mc_green, MarkovChain};
use lerw_core::intersection::{mc_hit_ratio, mc_intersection_count};
use lerw_core::oracle::{
    chi_half_table, enumerate_paths, heat_kernel_identity_check, kahane_check,
    moment_identity_check, seconv_check, sw_moments_exact, weight_table_exact, WeightedPathSet,
};
use lerw_core::rng::{derive_seed, task_rng};
use lerw_core::stats::{chi_square_uniform, Estimate};
use lerw_core::wilson::{enumerate_spanning_trees, pemantle_check, wilson_tree, wilson_tree_with_rng};
use lerw_core::{ChainSpec, GluedGraph, GluedVertex, LatticePoint, LatticeWalk, TimeSpaceSet};

use crate::config::*;
use crate::error::{LabError, Result};
use crate::report::{Report, Row, Verdict, EXACT_TOLERANCE};
use crate::triple::{triple_intersection, ZSet};

pub const TWO_TO_MINUS_EIGHT: f64 = 1.0 / 256.0;

pub fn run_preset(config: &ExperimentConfig) -> Result<Report> {
    let seed = config.seed;
    match &config.preset {
        PresetConfig::LemmaIntloop(c) => lemma_intloop(c, seed),
        PresetConfig::SeconvSandwich(c) => seconv_sandwich(c),
        PresetConfig::ChiHalf(c) => chi_half(c),
        PresetConfig::MomentIdentity(c) => moment_identity(c),
        PresetConfig::KahaneBound(c) => kahane_bound(c),
        PresetConfig::HeatKernel(c) => heat_kernel(c),
        PresetConfig::Dichotomy(c) => dichotomy(c, seed),
        PresetConfig::Counterexample(c) => counterexample(c, seed),
        PresetConfig::WilsonUniformity(c) => wilson_uniformity(c, seed),
        PresetConfig::PemantlePath(c) => pemantle_path(c, seed),
        PresetConfig::TripleIntersection(c) => triple(c, seed),
    }
}

fn positive(samples: usize, what: &str) -> Result<()> {
    if samples == 0 {
        return Err(LabError::Budget(format!("{what} must be positive")));
    }
    Ok(())
}

fn intloop_pair<C: MarkovChain>(
    chain: &C,
    pair: &StartPair,
    c: &IntloopConfig,
    seed: u64,
    report: &mut Report,
) -> Result<()> {
    let sx = chain.parse_state(&pair.start_x)?;
    let sy = chain.parse_state(&pair.start_y)?;
    let r = mc_hit_ratio(chain, &sx, &sy, c.horizon, c.samples, seed)?;
    let tag = format!("{}|{}", pair.start_x, pair.start_y);
    report.row(Row::proportion(format!("p_hit[{tag}]"), &r.hit));
    report.row(Row::proportion(format!("p_le_hit[{tag}]"), &r.le_hit));
    let ratio = r.ratio.unwrap_or(f64::NAN);
    report.row(Row {
        quantity: format!("ratio[{tag}]"),
        estimate: ratio,
        stderr: r.ratio_stderr,
        ci_lo: r.ratio_ci.0,
        ci_hi: r.ratio_ci.1,
    });
    report.row(Row::exact(
        format!("truncated_fraction[{tag}]"),
        r.truncated_paths as f64 / (2 * c.samples) as f64,
    ));
    report.verdict(Verdict::at_least(
        format!("ratio CI lower bound >= 2^-8 [{tag}]"),
        if r.ratio.is_some() { r.ratio_ci.0 } else { f64::NAN },
        TWO_TO_MINUS_EIGHT,
        "2^-8",
    ));
    Ok(())
}

fn lemma_intloop(c: &IntloopConfig, seed: u64) -> Result<Report> {
    positive(c.samples, "samples")?;
    let mut report = Report::default();
    for (k, pair) in c.pairs.iter().enumerate() {
        let s = derive_seed(seed, k as u64);
        match &c.chain {
            ChainSpec::Finite(ch) => intloop_pair(ch, pair, c, s, &mut report)?,
            ChainSpec::Lattice(ch) => intloop_pair(ch, pair, c, s, &mut report)?,
            ChainSpec::Glued(ch) => intloop_pair(ch, pair, c, s, &mut report)?,
        }
    }
    Ok(report)
}

fn instance_sets(i: &FiniteInstance, budget: usize) -> Result<(WeightedPathSet, WeightedPathSet)> {
    let chain = i.chain.build()?;
    let sx = state(&chain, &i.start_x)?;
    let sy = state(&chain, &i.start_y)?;
    Ok((
        enumerate_paths(&chain, sx, i.horizon, budget)?,
        enumerate_paths(&chain, sy, i.horizon, budget)?,
    ))
}

fn seconv_sandwich(c: &FiniteInstances) -> Result<Report> {
    let mut report = Report::default();
    for inst in &c.instances {
        let (x, y) = instance_sets(inst, c.budget)?;
        let r = seconv_check(&x, &y, &TimeSpaceSet::Diagonal);
        let n = &inst.name;
        report.row(Row::exact(format!("p_hit[{n}]"), r.hit));
        report.row(Row::exact(format!("e_s[{n}]"), r.moments.e_s));
        report.row(Row::exact(format!("e_s_sq[{n}]"), r.moments.e_s_sq));
        report.row(Row::exact(format!("lower[{n}]"), r.lower));
        report.row(Row::exact(format!("upper[{n}]"), r.upper));
        report.verdict(Verdict::equal(
            format!("E S_w = P[hit] [{n}]"),
            r.moments.e_s,
            r.hit,
            "1",
            EXACT_TOLERANCE,
        ));
        report.verdict(
            Verdict::at_least(format!("P[hit] >= (E S_w)^2 / E S_w^2 [{n}]"), r.hit, r.lower, "1")
                .with_rounding(),
        );
        report.verdict(
            Verdict::at_most(format!("P[hit] <= 64 (E S_w)^2 / E S_w^2 [{n}]"), r.hit, r.upper, "64")
                .with_rounding(),
        );
        report.verdict(
            Verdict::at_most(
                format!("E S_w^2 <= 64 P[hit] [{n}]"),
                r.moments.e_s_sq,
                64.0 * r.hit,
                "64",
            )
            .with_rounding(),
        );
    }
    Ok(report)
}

fn chi_half(c: &FiniteInstances) -> Result<Report> {
    let mut report = Report::default();
    for inst in &c.instances {
        let (x, y) = instance_sets(inst, c.budget)?;
        let n = &inst.name;
        let table = chi_half_table(&x, &y);
        for cell in &table {
            report.row(Row::exact(
                format!("chi[{n}](m={},x={})", cell.m, cell.x),
                cell.value,
            ));
        }
        if let Some(min) = table.iter().map(|c| c.value).reduce(f64::min) {
            report.verdict(
                Verdict::at_least(format!("min P[i <= j | X_m = Y_m = x] >= 1/2 [{n}]"), min, 0.5, "1/2")
                    .with_rounding(),
            );
        }
        let w = weight_table_exact(&x, &y, &TimeSpaceSet::Diagonal);
        let m = sw_moments_exact(&x, &y, &w);
        report.row(Row::exact(format!("e_s[{n}]"), m.e_s));
        report.row(Row::exact(format!("e_upsilon[{n}]"), m.e_upsilon));
        report.verdict(
            Verdict::at_least(format!("E Y_w >= 1/2 E S_w [{n}]"), m.e_upsilon, 0.5 * m.e_s, "1/2")
                .with_rounding(),
        );
    }
    Ok(report)
}

fn moment_identity(c: &MomentConfig) -> Result<Report> {
    let chain = c.chain.build()?;
    let o = state(&chain, &c.origin)?;
    let m = moment_identity_check(&chain, o, c.n, c.transitive, c.budget)?;
    let mut report = Report::default();
    report.row(Row::exact("sum_green_sq", m.sum_green_sq));
    report.row(Row::exact("e_in_ordered", m.e_in_ordered));
    report.row(Row::exact("e_in_sq", m.e_in_sq));
    report.row(Row::exact("intermediate_bound", m.intermediate_bound));
    report.row(Row::exact("allz_spread", m.allz_spread()));
    report.verdict(Verdict::equal(
        "E I_n = sum_z G_n(o,z)^2 (ordered pairs)",
        m.e_in_ordered,
        m.sum_green_sq,
        "1",
        EXACT_TOLERANCE * m.sum_green_sq.max(1.0),
    ));
    match (m.e_in_enumerated, m.e_in_sq_enumerated) {
        (Some(e1), Some(e2)) => {
            report.row(Row::exact("e_in_enumerated", e1));
            report.row(Row::exact("e_in_sq_enumerated", e2));
            report.verdict(Verdict::equal(
                "E I_n = sum_z G_n(o,z)^2 (enumeration)",
                e1,
                m.sum_green_sq,
                "1",
                EXACT_TOLERANCE * m.sum_green_sq.max(1.0),
            ));
            report.verdict(Verdict::equal(
                "E I_n^2 decomposition = enumeration",
                m.e_in_sq,
                e2,
                "1",
                EXACT_TOLERANCE * e2.max(1.0),
            ));
        }
        _ => return Err(LabError::Budget(format!("path enumeration exceeds {}", c.budget))),
    }
    if c.transitive {
        report.verdict(
            Verdict::at_most("E I_n^2 <= 4 (E I_n)^2", m.e_in_sq, m.bound, "4").with_rounding(),
        );
    }
    Ok(report)
}

fn kahane_bound(c: &KahaneConfig) -> Result<Report> {
    let chain = c.chain.build()?;
    let o = state(&chain, &c.origin)?;
    let mut report = Report::default();
    for &eps in &c.eps {
        let k = kahane_check(&chain, o, c.n, eps, c.budget)?;
        report.row(Row::exact(format!("p_in_ge_eps_mean[eps={eps}]"), k.prob));
        report.row(Row::exact(format!("moment_bound[eps={eps}]"), k.moment_bound));
        report.verdict(
            Verdict::at_least(
                format!("P[I_n >= eps E I_n] >= (1-eps)^2 (E I_n)^2 / E I_n^2 [eps={eps}]"),
                k.prob,
                k.moment_bound,
                "(1-eps)^2",
            )
            .with_rounding(),
        );
        report.verdict(
            Verdict::at_least(
                format!("P[I_n >= eps E I_n] >= (1-eps)^2/4 [eps={eps}]"),
                k.prob,
                k.quarter_bound,
                "(1-eps)^2/4",
            )
            .with_rounding(),
        );
    }
    Ok(report)
}

fn heat_kernel(c: &HeatKernelConfig) -> Result<Report> {
    let mut report = Report::default();
    for inst in &c.instances {
        let chain = inst.chain.build()?;
        let x = state(&chain, &inst.x)?;
        let h = heat_kernel_identity_check(&chain, x, inst.horizon)?;
        let n = &inst.name;
        report.row(Row::exact(format!("pairwise[{n}]"), h.pairwise));
        report.row(Row::exact(format!("collapsed[{n}]"), h.collapsed));
        report.row(Row::exact(format!("weighted[{n}]"), h.weighted));
        let tol = EXACT_TOLERANCE * h.pairwise.max(1.0);
        report.verdict(Verdict::equal(
            format!("sum_(m+n<=N) sum_z p_m p_n = sum_(m+n<=N) p_(m+n)(x,x) [{n}]"),
            h.pairwise,
            h.collapsed,
            "1",
            tol,
        ));
        report.verdict(Verdict::equal(
            format!("sum_(m+n<=N) p_(m+n)(x,x) = sum_(k<=N) (k+1) p_k(x,x) [{n}]"),
            h.collapsed,
            h.weighted,
            "1",
            tol,
        ));
    }
    Ok(report)
}

fn dichotomy(c: &DichotomyConfig, seed: u64) -> Result<Report> {
    positive(c.z3_samples.min(c.z5_samples), "samples")?;
    if c.ns.len() < 2 {
        return Err(LabError::Config("dichotomy needs at least two values of n".into()));
    }
    let origin = LatticePoint::origin();
    let run = |dim: usize, samples: usize| -> Result<Vec<Estimate>> {
        let walk = LatticeWalk::new(dim, 0.0)?;
        c.ns.iter()
            .map(|&n| {
                // independent streams for every (dimension, n)
                let s = derive_seed(seed, (dim as u64) << 32 | n as u64);
                Ok(mc_intersection_count(&walk, &origin, n, samples, s)?)
            })
            .collect()
    };
    let (z3, z5) = rayon::join(|| run(3, c.z3_samples), || run(5, c.z5_samples));
    let (z3, z5) = (z3?, z5?);
    let mut report = Report::default();
    for (dim, est) in [(3, &z3), (5, &z5)] {
        for (n, e) in c.ns.iter().zip(est.iter()) {
            report.row(Row::estimate(format!("e_in[Z{dim}](n={n})"), e));
        }
    }
    let gap = |a: &Estimate, b: &Estimate| (b.mean - a.mean) / (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    for k in 1..c.ns.len() {
        report.verdict(Verdict::at_least(
            format!("Z3 increase from n={} to n={} in standard errors", c.ns[k - 1], c.ns[k]),
            gap(&z3[k - 1], &z3[k]),
            3.0,
            "3",
        ));
    }
    let last = c.ns.len() - 1;
    report.verdict(Verdict::at_most(
        format!("|Z5 change from n={} to n={}| in standard errors", c.ns[last - 1], c.ns[last]),
        gap(&z5[last - 1], &z5[last]).abs(),
        3.0,
        "3",
    ));
    Ok(report)
}

fn counterexample(c: &CounterexampleConfig, seed: u64) -> Result<Report> {
    positive(c.samples.min(c.cap), "samples and cap")?;
    let graph = GluedGraph::new(0.0, c.escape_radius)?;
    let targets = [GluedVertex::Hub, GluedVertex::Ray(1)];
    let g = mc_green(&graph, &GluedVertex::Hub, &targets, c.samples, c.cap, seed)?;
    let r = g.ratio(1, 0);
    let mut report = Report::default();
    report.row(Row::estimate("green[o,o]", &g.estimates[0]));
    report.row(Row::estimate("green[o,ray:1]", &g.estimates[1]));
    report.row(Row::estimate("ratio", &r));
    report.row(Row::exact("truncated_fraction", g.truncated_fraction()));
    report.row(Row::exact(
        "absorbed_fraction",
        g.absorbed_paths as f64 / g.samples as f64,
    ));
    let target = 2.0 / 12.0;
    report.verdict(Verdict::equal(
        "G(o,ray:1) / G(o,o) = 2/12",
        r.mean,
        target,
        "1/6",
        c.tolerance * target,
    ));
    Ok(report)
}

fn wilson_uniformity(c: &WilsonConfig, seed: u64) -> Result<Report> {
    positive(c.samples, "samples")?;
    let trees = enumerate_spanning_trees(&c.graph)?;
    let index: HashMap<&[usize], usize> =
        trees.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut counts = vec![0u64; trees.len()];
    for k in 0..c.samples as u64 {
        let t = wilson_tree_with_rng(&c.graph, c.root, &mut task_rng(seed, k))?;
        counts[index[t.edge_ids().as_slice()]] += 1;
    }
    let mut report = Report::default();
    report.row(Row::exact("spanning_trees", trees.len() as f64));
    for (t, count) in trees.iter().zip(&counts) {
        let ids: Vec<String> = t.iter().map(|e| e.to_string()).collect();
        report.row(Row::exact(
            format!("frequency[{}]", ids.join("-")),
            *count as f64 / c.samples as f64,
        ));
    }
    if trees.len() >= 2 {
        let (stat, p) = chi_square_uniform(&counts);
        report.row(Row::exact("chi_square", stat));
        report.verdict(Verdict::at_least("chi-square p-value", p, c.alpha, "alpha"));
    }
    if let Some(tree) = &c.tree {
        if tree.num_edges() + 1 != tree.num_vertices() || !tree.is_connected() {
            return Err(LabError::Config("`tree` is not a tree".into()));
        }
        let all: Vec<usize> = (0..tree.num_edges()).collect();
        let mut reproduced = 0u64;
        let runs = 100u64;
        for k in 0..runs {
            let root = (k as usize) % tree.num_vertices();
            if wilson_tree(tree, root, derive_seed(seed ^ 1, k))?.edge_ids() == all {
                reproduced += 1;
            }
        }
        report.verdict(Verdict::equal(
            "tree input reproduced on every run",
            reproduced as f64 / runs as f64,
            1.0,
            "1",
            0.0,
        ));
    }
    Ok(report)
}

fn pemantle_path(c: &PemantleConfig, seed: u64) -> Result<Report> {
    positive(c.samples, "samples")?;
    let mut report = Report::default();
    for (k, case) in c.cases.iter().enumerate() {
        let r = pemantle_check(&case.graph, case.x, case.y, c.samples, c.bootstrap, derive_seed(seed, k as u64))?;
        let n = &case.name;
        report.row(Row {
            quantity: format!("tv[{n}]"),
            estimate: r.tv,
            stderr: r.tv_bootstrap_stderr,
            ci_lo: (r.tv - 1.96 * r.tv_bootstrap_stderr).max(0.0),
            ci_hi: r.tv + 1.96 * r.tv_bootstrap_stderr,
        });
        for (path, a, b) in &r.paths {
            let label: Vec<String> = path.iter().map(|v| v.to_string()).collect();
            let label = label.join("-");
            report.row(Row::exact(format!("tree_path[{n}]({label})"), *a as f64 / r.samples as f64));
            report.row(Row::exact(format!("erased_walk[{n}]({label})"), *b as f64 / r.samples as f64));
        }
        report.verdict(Verdict::at_most(format!("TV distance [{n}]"), r.tv, c.max_tv, "max_tv"));
    }
    Ok(report)
}

fn triple_on<C: MarkovChain>(chain: &C, c: &TripleConfig, seed: u64) -> Result<Report> {
    let sx = chain.parse_state(&c.start_x)?;
    let sy = chain.parse_state(&c.start_y)?;
    let sz = chain.parse_state(&c.start_z)?;
    let r = triple_intersection(chain, &sx, &sy, &ZSet::Walk(sz), c.horizon, c.samples, seed)?;
    let mut report = Report::default();
    report.row(Row::estimate("mean |X ∩ Y ∩ Z|", &r.mean_xyz));
    report.row(Row::estimate("mean |L_Z(X) ∩ Y ∩ Z|", &r.mean_erased));
    report.row(Row::exact("runs with X ∩ Y ∩ Z nonempty", r.nonempty_xyz as f64));
    match &r.conditional {
        Some(p) => {
            report.row(Row::proportion("conditional nonempty fraction", p));
            report.verdict(Verdict::at_least(
                "P[L_Z(X) ∩ Y ∩ Z nonempty | X ∩ Y ∩ Z nonempty] CI lower bound",
                p.ci_lo,
                TWO_TO_MINUS_EIGHT,
                "2^-8",
            ));
        }
        None => {
            return Err(LabError::Budget(
                "no run produced a nonempty triple intersection".into(),
            ))
        }
    }
    Ok(report)
}

fn triple(c: &TripleConfig, seed: u64) -> Result<Report> {
    positive(c.samples, "samples")?;
    match &c.chain {
        ChainSpec::Finite(ch) => triple_on(ch, c, seed),
        ChainSpec::Lattice(ch) => triple_on(ch, c, seed),
        ChainSpec::Glued(ch) => triple_on(ch, c, seed),
    }
}

