//! The `intersect`, `exact` and `wilson` subcommands.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use lerw_core::chain::MarkovChain;
use lerw_core::intersection::mc_hit_ratio;
use lerw_core::oracle::{
    chi_half_table, enumerate_paths, intersect_prob_exact, le_hit_prob_exact, seconv_check,
};
use lerw_core::rng::task_rng;
use lerw_core::stats::chi_square_uniform;
use lerw_core::wilson::{
    enumerate_spanning_trees, wilson_tree_with_rng, FiniteMultigraph, MAX_ENUMERATION_VERTICES,
};
use lerw_core::{ChainSpec, TimeSpaceSet};
use serde::Serialize;

use crate::cli::{ExactArgs, IntersectArgs, WilsonArgs};
use crate::error::{io_err, LabError, Result};
use crate::presets::TWO_TO_MINUS_EIGHT;
use crate::report::{Report, Row, Verdict, EXACT_TOLERANCE};

pub fn load_spec(path: &Path, kill: f64) -> Result<ChainSpec> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let spec = ChainSpec::from_json(&text)?;
    if kill > 0.0 {
        Ok(spec.with_additional_kill(kill)?)
    } else {
        Ok(spec)
    }
}

fn intersect_on<C: MarkovChain>(chain: &C, args: &IntersectArgs) -> Result<Report> {
    let sx = chain.parse_state(&args.start_x)?;
    let sy = chain.parse_state(&args.start_y)?;
    if args.samples == 0 {
        return Err(LabError::Budget("samples must be positive".into()));
    }
    let r = mc_hit_ratio(chain, &sx, &sy, args.horizon, args.samples, args.seed)?;
    let mut report = Report::default();
    report.row(Row::proportion("p_hit", &r.hit));
    report.row(Row::proportion("p_le_hit", &r.le_hit));
    report.row(Row {
        quantity: "ratio".into(),
        estimate: r.ratio.unwrap_or(f64::NAN),
        stderr: r.ratio_stderr,
        ci_lo: r.ratio_ci.0,
        ci_hi: r.ratio_ci.1,
    });
    report.row(Row::exact(
        "truncated_fraction",
        r.truncated_paths as f64 / (2 * args.samples) as f64,
    ));
    Ok(report)
}

/// Monte Carlo hit and erased-hit probabilities; returns the CSV bytes.
pub fn intersect(args: &IntersectArgs) -> Result<Vec<u8>> {
    let spec = load_spec(&args.spec, args.kill)?;
    let report = match &spec {
        ChainSpec::Finite(c) => intersect_on(c, args)?,
        ChainSpec::Lattice(c) => intersect_on(c, args)?,
        ChainSpec::Glued(c) => intersect_on(c, args)?,
    };
    report.csv_bytes()
}

#[derive(Debug, Serialize)]
pub struct ExactReport {
    pub quantities: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
}

fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [m, n] => match (m.parse(), n.parse()) {
            (Ok(m), Ok(n)) => Ok((m, n)),
            _ => Err(LabError::Config(format!("bad window `{text}`"))),
        },
        _ => Err(LabError::Config(format!("window must be `M,N`, got `{text}`"))),
    }
}

/// Exact oracle report for a finite chain.
pub fn exact(args: &ExactArgs) -> Result<ExactReport> {
    let chain = match load_spec(&args.spec, args.kill)? {
        ChainSpec::Finite(c) => c,
        other => {
            return Err(LabError::Config(format!(
                "`exact` needs a finite chain, got a {} chain",
                other.kind()
            )))
        }
    };
    let sx = chain.parse_state(&args.start_x)?;
    let sy = chain.parse_state(&args.start_y)?;
    let prefix = args
        .prefix
        .iter()
        .map(|l| chain.parse_state(l))
        .collect::<lerw_core::Result<Vec<_>>>()?;
    let a = match &args.window {
        Some(w) => {
            let (max_m, max_n) = parse_pair(w)?;
            TimeSpaceSet::WindowedDiagonal { max_m, max_n }
        }
        None => TimeSpaceSet::Diagonal,
    };
    let x = enumerate_paths(&chain, sx, args.horizon, args.budget)?;
    let y = enumerate_paths(&chain, sy, args.horizon, args.budget)?;
    let r = seconv_check(&x, &y, &a);
    let p_intersect = intersect_prob_exact(&x, &y);
    let p_le = le_hit_prob_exact(&x, &y, &prefix);
    let chi = chi_half_table(&x, &y);

    let mut q = BTreeMap::new();
    q.insert("p_hit".to_string(), r.hit);
    q.insert("e_s".to_string(), r.moments.e_s);
    q.insert("e_s_sq".to_string(), r.moments.e_s_sq);
    q.insert("e_upsilon".to_string(), r.moments.e_upsilon);
    q.insert("e_upsilon_sq".to_string(), r.moments.e_upsilon_sq);
    q.insert("weights".to_string(), r.weights as f64);
    q.insert("max_weight".to_string(), r.max_weight);
    q.insert("p_intersect".to_string(), p_intersect);
    q.insert("p_le_hit".to_string(), p_le);

    let mut v = vec![
        Verdict::equal("E S_w = P[hit]", r.moments.e_s, r.hit, "1", EXACT_TOLERANCE),
        Verdict::at_least("P[hit] >= (E S_w)^2 / E S_w^2", r.hit, r.lower, "1").with_rounding(),
        Verdict::at_most("P[hit] <= 64 (E S_w)^2 / E S_w^2", r.hit, r.upper, "64").with_rounding(),
        Verdict::at_most("E S_w^2 <= 64 P[hit]", r.moments.e_s_sq, 64.0 * r.hit, "64")
            .with_rounding(),
        Verdict::at_least(
            "E Y_w >= 1/2 E S_w",
            r.moments.e_upsilon,
            0.5 * r.moments.e_s,
            "1/2",
        )
        .with_rounding(),
        Verdict::at_least(
            "P[LE(prefix + X) meets Y] >= 2^-8 P[X meets Y]",
            p_le,
            TWO_TO_MINUS_EIGHT * p_intersect,
            "2^-8",
        )
        .with_rounding(),
    ];
    if let Some(min) = chi.iter().map(|c| c.value).reduce(f64::min) {
        q.insert("min_chi_equal_times".to_string(), min);
        v.push(Verdict::at_least("min P[i <= j | X_m = Y_m = x] >= 1/2", min, 0.5, "1/2").with_rounding());
    }
    let all_pass = v.iter().all(|x| x.pass);
    Ok(ExactReport {
        quantities: q,
        verdicts: v,
        all_pass,
    })
}

#[derive(Debug, Serialize)]
pub struct TreeOut {
    pub root: usize,
    /// `(child, parent)` pairs.
    pub edges: Vec<(usize, usize)>,
    pub edge_ids: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct Frequency {
    pub edge_ids: Vec<usize>,
    pub count: u64,
}

#[derive(Debug, Serialize)]
pub struct WilsonReport {
    pub graph: FiniteMultigraph,
    pub root: usize,
    pub seed: u64,
    pub samples: usize,
    pub trees: Vec<TreeOut>,
    /// Present when the graph is small enough to enumerate its spanning trees.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequencies: Option<Vec<Frequency>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_square_p: Option<f64>,
}

/// Samples `samples` uniform spanning trees; sample `k` uses stream `k` of `seed`.
pub fn wilson(args: &WilsonArgs) -> Result<WilsonReport> {
    let text = fs::read_to_string(&args.graph).map_err(io_err(&args.graph))?;
    let graph: FiniteMultigraph = serde_json::from_str(&text)?;
    if args.samples == 0 {
        return Err(LabError::Budget("samples must be positive".into()));
    }
    let trees = (0..args.samples as u64)
        .map(|k| wilson_tree_with_rng(&graph, args.root, &mut task_rng(args.seed, k)))
        .collect::<lerw_core::Result<Vec<_>>>()?;
    let (frequencies, chi_square_p) = if graph.num_vertices() <= MAX_ENUMERATION_VERTICES {
        let all = enumerate_spanning_trees(&graph)?;
        let index: HashMap<&[usize], usize> =
            all.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let mut counts = vec![0u64; all.len()];
        let ids: Vec<Vec<usize>> = trees.iter().map(|t| t.edge_ids()).collect();
        for t in &ids {
            counts[index[t.as_slice()]] += 1;
        }
        let p = (all.len() >= 2).then(|| chi_square_uniform(&counts).1);
        let freq = all
            .into_iter()
            .zip(counts)
            .map(|(edge_ids, count)| Frequency { edge_ids, count })
            .collect();
        (Some(freq), p)
    } else {
        (None, None)
    };
    Ok(WilsonReport {
        root: args.root,
        seed: args.seed,
        samples: args.samples,
        trees: trees
            .iter()
            .map(|t| TreeOut {
                root: t.root(),
                edges: t.edge_list(),
                edge_ids: t.edge_ids(),
            })
            .collect(),
        graph,
        frequencies,
        chi_square_p,
    })
}
