//! Triple intersections `X ∩ Y ∩ Z` and `L_Z(X) ∩ Y ∩ Z`.

use std::collections::HashSet;
use std::hash::Hash;

use lerw_core::chain::{walk, MarkovChain};
use lerw_core::loop_erasure::{loop_erase, partial_loop_erase};
use lerw_core::rng::task_rng;
use lerw_core::stats::{Estimate, Proportion};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};

/// Where the set `Z` comes from.
#[derive(Debug, Clone)]
pub enum ZSet<S> {
    /// The trace of an independent walk from this state, resampled per run.
    Walk(S),
    Fixed(HashSet<S>),
    /// Every state; `L_Z` is then the full loop-erasure.
    Everything,
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleReport {
    pub samples: usize,
    /// Mean of `|X ∩ Y ∩ Z|` as a set of states.
    pub mean_xyz: Estimate,
    /// Mean of `|L_Z(X) ∩ Y ∩ Z|`.
    pub mean_erased: Estimate,
    pub nonempty_xyz: u64,
    pub nonempty_erased: u64,
    /// Fraction of runs with `L_Z(X) ∩ Y ∩ Z ≠ ∅` among runs with `X ∩ Y ∩ Z ≠ ∅`.
    pub conditional: Option<Proportion>,
}

fn triple_counts<S: Clone + Eq + Hash>(
    x: &[S],
    y: &[S],
    z: Option<&HashSet<S>>,
) -> Result<(usize, usize)> {
    let ys: HashSet<&S> = y.iter().collect();
    let in_z = |s: &S| z.is_none_or(|set| set.contains(s));
    let xs: HashSet<&S> = x.iter().filter(|s| in_z(s) && ys.contains(s)).collect();
    let erased = match z {
        Some(set) => partial_loop_erase(x, set)?,
        None => loop_erase(x)?.states,
    };
    let es: HashSet<&S> = erased.iter().filter(|s| in_z(s) && ys.contains(s)).collect();
    Ok((xs.len(), es.len()))
}

pub fn triple_intersection<C: MarkovChain>(
    chain: &C,
    start_x: &C::State,
    start_y: &C::State,
    z: &ZSet<C::State>,
    horizon: usize,
    samples: usize,
    seed: u64,
) -> Result<TripleReport> {
    if samples == 0 {
        return Err(LabError::Budget("samples must be positive".into()));
    }
    let counts: Vec<(usize, usize)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let (px, _) = walk(chain, start_x, horizon, &mut rng);
            let (py, _) = walk(chain, start_y, horizon, &mut rng);
            match z {
                ZSet::Walk(start_z) => {
                    let (pz, _) = walk(chain, start_z, horizon, &mut rng);
                    let set: HashSet<C::State> = pz.into_iter().collect();
                    triple_counts(&px, &py, Some(&set))
                }
                ZSet::Fixed(set) => triple_counts(&px, &py, Some(set)),
                ZSet::Everything => triple_counts(&px, &py, None),
            }
        })
        .collect::<Result<_>>()?;
    let col = |f: fn(&(usize, usize)) -> usize| -> Vec<f64> {
        counts.iter().map(|c| f(c) as f64).collect()
    };
    let nonempty_xyz = counts.iter().filter(|c| c.0 > 0).count() as u64;
    let nonempty_erased = counts.iter().filter(|c| c.1 > 0).count() as u64;
    Ok(TripleReport {
        samples,
        mean_xyz: Estimate::from_samples(&col(|c| c.0)),
        mean_erased: Estimate::from_samples(&col(|c| c.1)),
        nonempty_xyz,
        nonempty_erased,
        conditional: (nonempty_xyz > 0).then(|| Proportion::new(nonempty_erased, nonempty_xyz)),
    })
}
