use std::collections::HashMap;

use rayon::prelude::*;

use super::{walk, MarkovChain, Termination};
use crate::error::{Error, Result};
use crate::rng::task_rng;
use crate::stats::Estimate;

pub const DEFAULT_GREEN_CAP: usize = 100_000;

/// Monte Carlo Green function estimates `G(o, t)` for a list of targets.
///
/// Each path is truncated at the step cap; `truncated_paths` counts how many
/// samples hit the cap, which bounds the downward bias of every estimate.
#[derive(Debug, Clone)]
pub struct MonteCarloGreen<S> {
    pub targets: Vec<S>,
    pub estimates: Vec<Estimate>,
    pub samples: usize,
    pub cap: usize,
    pub truncated_paths: usize,
    pub absorbed_paths: usize,
    // visits[i][t]: visits of sample i to target t.
    visits: Vec<Vec<u32>>,
}

impl<S> MonteCarloGreen<S> {
    /// Ratio `G(o, targets[num]) / G(o, targets[den])` of sample means with a
    /// delta-method standard error.
    pub fn ratio(&self, num: usize, den: usize) -> Estimate {
        let n = self.samples as f64;
        let (mut sa, mut sb) = (0.0, 0.0);
        for v in &self.visits {
            sa += v[num] as f64;
            sb += v[den] as f64;
        }
        let (ma, mb) = (sa / n, sb / n);
        if mb == 0.0 {
            return Estimate::exact(f64::NAN);
        }
        let r = ma / mb;
        // Var of mean of (a - r b), divided by mb^2.
        let ss: f64 = self
            .visits
            .iter()
            .map(|v| {
                let d = v[num] as f64 - r * v[den] as f64;
                d * d
            })
            .sum();
        let se = if self.samples > 1 {
            (ss / (n - 1.0) / n).sqrt() / mb
        } else {
            0.0
        };
        Estimate::with_stderr(r, se)
    }

    pub fn truncated_fraction(&self) -> f64 {
        self.truncated_paths as f64 / self.samples as f64
    }
}

/// Estimates `G(o, ·)` at `targets` from `samples` independent paths of at most
/// `cap` steps, sample `i` using stream `i` of `seed`.
pub fn mc_green<C: MarkovChain>(
    chain: &C,
    o: &C::State,
    targets: &[C::State],
    samples: usize,
    cap: usize,
    seed: u64,
) -> Result<MonteCarloGreen<C::State>> {
    if samples == 0 || cap == 0 {
        return Err(Error::InvalidArgument("samples and cap must be positive".into()));
    }
    if !chain.contains(o) {
        return Err(Error::InvalidState(format!("{o:?}")));
    }
    let index: HashMap<&C::State, usize> = targets.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let runs: Vec<(Vec<u32>, Termination)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let (path, cause) = walk(chain, o, cap, &mut rng);
            let mut counts = vec![0u32; targets.len()];
            for s in &path {
                if let Some(&t) = index.get(s) {
                    counts[t] += 1;
                }
            }
            (counts, cause)
        })
        .collect();

    let truncated_paths = runs
        .iter()
        .filter(|(_, c)| *c == Termination::HorizonReached)
        .count();
    let absorbed_paths = runs.iter().filter(|(_, c)| *c == Termination::Absorbed).count();
    let visits: Vec<Vec<u32>> = runs.into_iter().map(|(v, _)| v).collect();
    let estimates = (0..targets.len())
        .map(|t| {
            let xs: Vec<f64> = visits.iter().map(|v| v[t] as f64).collect();
            Estimate::from_samples(&xs)
        })
        .collect();
    Ok(MonteCarloGreen {
        targets: targets.to_vec(),
        estimates,
        samples,
        cap,
        truncated_paths,
        absorbed_paths,
        visits,
    })
}
