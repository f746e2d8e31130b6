//! Exhaustive ground truth on finite chains and finite horizons.
//!
//! Every path of a [`FiniteChain`] up to horizon `T` is enumerated with its exact
//! probability, including paths killed before `T`. Quantities over two independent
//! chains are exact sums over the product of two such sets.

mod moments;
mod seconv;

pub use moments::{
    heat_kernel_identity_check, kahane_check, moment_identity_check, HeatKernelCheck,
    KahaneCheck, MomentIdentity,
};
pub use seconv::{
    chi_conditional_exact, chi_half_table, hit_prob_exact, intersect_prob_exact,
    le_hit_prob_exact, seconv_check, sw_moments_exact, weight_table_exact, ChiCell,
    ExactSwMoments, SeconvReport,
};

use crate::chain::{FiniteChain, Termination};
use crate::error::{Error, Result};

pub const DEFAULT_PATH_BUDGET: usize = 1_000_000;

// Row deficits below this are rounding noise of a stochastic row.
const DEFICIT_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath {
    pub states: Vec<usize>,
    pub prob: f64,
    pub cause: Termination,
}

/// All paths of one chain up to a horizon, with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPathSet {
    pub start: usize,
    pub horizon: usize,
    pub paths: Vec<WeightedPath>,
    n_states: usize,
}

impl WeightedPathSet {
    pub fn total_probability(&self) -> f64 {
        self.paths.iter().map(|p| p.prob).sum()
    }

    /// `P[X_m = x]` for `m = 0..=horizon` (zero mass once killed).
    pub fn marginals(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_states]; self.horizon + 1];
        for p in &self.paths {
            for (m, &x) in p.states.iter().enumerate() {
                out[m][x] += p.prob;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Enumerates every path from `start` of at most `horizon` steps.
pub fn enumerate_paths(
    chain: &FiniteChain,
    start: usize,
    horizon: usize,
    budget: usize,
) -> Result<WeightedPathSet> {
    if start >= chain.len() {
        return Err(Error::InvalidState(start.to_string()));
    }
    let mut paths = Vec::new();
    let mut stack = vec![(vec![start], 1.0f64)];
    while let Some((states, prob)) = stack.pop() {
        let x = *states.last().expect("nonempty");
        if states.len() == horizon + 1 {
            push_path(&mut paths, budget, states, prob, Termination::HorizonReached)?;
            continue;
        }
        let deficit = chain.deficit(x);
        if deficit > DEFICIT_FLOOR {
            push_path(&mut paths, budget, states.clone(), prob * deficit, Termination::Killed)?;
        }
        // Reverse so that successors pop in increasing state order.
        for &(y, p) in chain.successors(x).iter().rev() {
            let mut next = states.clone();
            next.push(y);
            stack.push((next, prob * p));
        }
    }
    Ok(WeightedPathSet {
        start,
        horizon,
        paths,
        n_states: chain.len(),
    })
}

fn push_path(
    paths: &mut Vec<WeightedPath>,
    budget: usize,
    states: Vec<usize>,
    prob: f64,
    cause: Termination,
) -> Result<()> {
    if paths.len() >= budget {
        return Err(Error::BudgetExceeded { budget });
    }
    paths.push(WeightedPath {
        states,
        prob,
        cause,
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_horizon_is_start_only() {
        let c = FiniteChain::uniform_killed(3, 0.2).unwrap();
        let s = enumerate_paths(&c, 2, 0, DEFAULT_PATH_BUDGET).unwrap();
        assert_eq!(s.paths.len(), 1);
        assert_eq!(s.paths[0].states, vec![2]);
        assert_eq!(s.paths[0].prob, 1.0);
    }

    #[test]
    fn flip_chain_one_step() {
        let c = FiniteChain::flip(0.0).unwrap();
        let s = enumerate_paths(&c, 0, 1, DEFAULT_PATH_BUDGET).unwrap();
        assert_eq!(s.paths.len(), 1);
        assert_eq!(s.paths[0].states, vec![0, 1]);
        assert_eq!(s.paths[0].prob, 1.0);
    }

    #[test]
    fn killed_single_state() {
        let c = FiniteChain::single_state(0.5).unwrap();
        let s = enumerate_paths(&c, 0, 1, DEFAULT_PATH_BUDGET).unwrap();
        assert_eq!(s.paths.len(), 2);
        assert_eq!(s.paths[0].states, vec![0]);
        assert_eq!(s.paths[0].cause, Termination::Killed);
        assert_eq!(s.paths[0].prob, 0.5);
        assert_eq!(s.paths[1].states, vec![0, 0]);
        assert_eq!(s.paths[1].prob, 0.5);
    }

    #[test]
    fn budget_is_enforced() {
        let c = FiniteChain::uniform_killed(3, 0.0).unwrap();
        assert!(matches!(
            enumerate_paths(&c, 0, 6, 100),
            Err(Error::BudgetExceeded { budget: 100 })
        ));
    }

    #[test]
    fn marginals_match_kernel_powers() {
        let c = FiniteChain::uniform_killed(3, 0.2).unwrap();
        let s = enumerate_paths(&c, 0, 4, DEFAULT_PATH_BUDGET).unwrap();
        assert!((s.total_probability() - 1.0).abs() < 1e-12);
        let exact = c.exact_marginals(0, 4).unwrap();
        for (a, b) in s.marginals().iter().zip(&exact) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
