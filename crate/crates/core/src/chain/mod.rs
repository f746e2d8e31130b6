//! State spaces, substochastic kernels and path sampling.
//!
//! Killing is evaluated before every move: from state `x` the walk dies with the
//! row deficit `1 - Σ_y p(x, y)` (for lattice walks, the kill probability `q`) and
//! otherwise moves. A path therefore always contains its start state, and the
//! one-state path has probability equal to the deficit at the start.

mod finite;
mod glued;
mod green;
mod induce;
mod lattice;
mod spec;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::task_rng;

pub use finite::{FiniteChain, TRANSIENCE_TOLERANCE};
pub use glued::{GluedGraph, GluedVertex, BULK_DIM};
pub use green::{mc_green, MonteCarloGreen, DEFAULT_GREEN_CAP};
pub use induce::{induce_on_subset, InducedPath};
pub use lattice::{LatticePoint, LatticeWalk, MAX_DIM};
pub use spec::ChainSpec;

/// Largest horizon accepted by [`sample_path`].
pub const HORIZON_CAP: usize = 100_000_000;

/// Outcome of one attempted transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<S> {
    Move(S),
    Killed,
    Absorbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Killed,
    HorizonReached,
    Absorbed,
}

/// A discrete-time, possibly killed, Markov chain.
pub trait MarkovChain: Sync {
    type State: Clone + Eq + Hash + Debug + Send + Sync;

    fn contains(&self, state: &Self::State) -> bool;

    /// One transition attempt from `from`: absorption check, killing, then a move.
    fn step<R: Rng + ?Sized>(&self, from: &Self::State, rng: &mut R) -> Step<Self::State>;

    fn transition_prob(&self, from: &Self::State, to: &Self::State) -> f64;

    fn parse_state(&self, label: &str) -> Result<Self::State>;

    fn state_label(&self, state: &Self::State) -> String;
}

/// One realized trajectory together with its RNG provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSample<S> {
    pub states: Vec<S>,
    pub cause: Termination,
    pub seed: u64,
    pub stream: u64,
}

impl<S> PathSample<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn start(&self) -> &S {
        &self.states[0]
    }
}

/// Runs the chain from `start` for at most `horizon` steps using `rng`.
pub fn walk<C, R>(chain: &C, start: &C::State, horizon: usize, rng: &mut R) -> (Vec<C::State>, Termination)
where
    C: MarkovChain + ?Sized,
    R: Rng + ?Sized,
{
    let mut states = Vec::with_capacity(horizon.min(1024) + 1);
    states.push(start.clone());
    for _ in 0..horizon {
        let current = states.last().expect("path is nonempty");
        match chain.step(current, rng) {
            Step::Move(next) => states.push(next),
            Step::Killed => return (states, Termination::Killed),
            Step::Absorbed => return (states, Termination::Absorbed),
        }
    }
    (states, Termination::HorizonReached)
}

/// Samples one path on the deterministic stream `(seed, stream)`.
pub fn sample_path<C: MarkovChain + ?Sized>(
    chain: &C,
    start: &C::State,
    horizon: usize,
    seed: u64,
    stream: u64,
) -> Result<PathSample<C::State>> {
    if !chain.contains(start) {
        return Err(Error::InvalidState(format!("{start:?}")));
    }
    if horizon > HORIZON_CAP {
        return Err(Error::HorizonTooLarge {
            horizon,
            cap: HORIZON_CAP,
        });
    }
    let mut rng = task_rng(seed, stream);
    let (states, cause) = walk(chain, start, horizon, &mut rng);
    Ok(PathSample {
        states,
        cause,
        seed,
        stream,
    })
}

/// True when every consecutive pair of `states` has positive transition probability.
pub fn is_kernel_path<C: MarkovChain + ?Sized>(chain: &C, states: &[C::State]) -> bool {
    states
        .windows(2)
        .all(|w| chain.transition_prob(&w[0], &w[1]) > 0.0)
}
