use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::loop_erasure::loop_erase;
use crate::rng::task_rng;
use crate::stats::tv_distance;

use super::{wilson_tree_with_rng, FiniteMultigraph};

/// Comparison of the tree path between `x` and `y` in a uniform spanning tree
/// with the loop-erasure of simple random walk from `x` stopped at `y`.
#[derive(Debug, Clone, Serialize)]
pub struct PemantleReport {
    pub x: usize,
    pub y: usize,
    pub samples: usize,
    pub tree_root: usize,
    /// Each distinct path with its tree and walk counts, sorted by path.
    pub paths: Vec<(Vec<usize>, u64, u64)>,
    pub tv: f64,
    pub tv_bootstrap_stderr: f64,
}

pub fn pemantle_check(
    graph: &FiniteMultigraph,
    x: usize,
    y: usize,
    samples: usize,
    bootstrap_reps: usize,
    seed: u64,
) -> Result<PemantleReport> {
    let n = graph.num_vertices();
    if x >= n || y >= n {
        return Err(Error::InvalidArgument("endpoint not in graph".into()));
    }
    if x == y {
        return Err(Error::InvalidArgument("endpoints must differ".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let tree_root = (0..n).find(|v| *v != x && *v != y).unwrap_or(y);

    let tree_paths: Vec<Vec<usize>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, 2 * i as u64);
            let tree = wilson_tree_with_rng(graph, tree_root, &mut rng)?;
            tree.tree_path(x, y)
        })
        .collect::<Result<_>>()?;
    let walk_paths: Vec<Vec<usize>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, 2 * i as u64 + 1);
            loop_erase(&srw_until(graph, x, y, &mut rng)).map(|le| le.states)
        })
        .collect::<Result<_>>()?;

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut keys: Vec<Vec<usize>> = tree_paths.iter().chain(&walk_paths).cloned().collect();
    keys.sort();
    keys.dedup();
    for (i, k) in keys.iter().enumerate() {
        index.insert(k.clone(), i);
    }
    let a: Vec<usize> = tree_paths.iter().map(|p| index[p]).collect();
    let b: Vec<usize> = walk_paths.iter().map(|p| index[p]).collect();
    let k = keys.len();
    let ca = histogram(&a, k);
    let cb = histogram(&b, k);
    let tv = tv_distance(&ca, &cb);

    let boot: Vec<f64> = (0..bootstrap_reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = task_rng(seed ^ 0xb007, r as u64);
            let ra = resample(&a, k, &mut rng);
            let rb = resample(&b, k, &mut rng);
            tv_distance(&ra, &rb)
        })
        .collect();
    let tv_bootstrap_stderr = if boot.len() > 1 {
        let mean = boot.iter().sum::<f64>() / boot.len() as f64;
        (boot.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (boot.len() - 1) as f64).sqrt()
    } else {
        f64::NAN
    };

    let paths = keys
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, ca[i], cb[i]))
        .collect();
    Ok(PemantleReport {
        x,
        y,
        samples,
        tree_root,
        paths,
        tv,
        tv_bootstrap_stderr,
    })
}

fn srw_until<R: Rng + ?Sized>(graph: &FiniteMultigraph, x: usize, y: usize, rng: &mut R) -> Vec<usize> {
    let mut path = vec![x];
    let mut u = x;
    while u != y {
        let inc = graph.incident(u);
        u = inc[rng.random_range(0..inc.len())].1;
        path.push(u);
    }
    path
}

fn histogram(cats: &[usize], k: usize) -> Vec<u64> {
    let mut h = vec![0; k];
    for &c in cats {
        h[c] += 1;
    }
    h
}

fn resample<R: Rng + ?Sized>(cats: &[usize], k: usize, rng: &mut R) -> Vec<u64> {
    let mut h = vec![0; k];
    for _ in 0..cats.len() {
        h[cats[rng.random_range(0..cats.len())]] += 1;
    }
    h
}
