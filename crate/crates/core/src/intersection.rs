//! Path-pair statistics and the Monte Carlo estimators built on them.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{walk, MarkovChain, Termination};
use crate::error::{Error, Result};
use crate::loop_erasure::{loop_erase, loop_erase_with_prefix};
use crate::rng::task_rng;
use crate::stats::{Estimate, Proportion};

type Predicate<S> = Arc<dyn Fn(usize, &S, usize, &S) -> bool + Send + Sync>;

/// A set `A` of time-space quadruples `(m, x, n, y)`.
pub enum TimeSpaceSet<S> {
    Empty,
    /// `{(m, x, n, x)}`: both chains at the same state.
    Diagonal,
    /// `{(m, x, n, x) : m ≤ max_m, n ≤ max_n}`.
    WindowedDiagonal { max_m: usize, max_n: usize },
    Custom(Predicate<S>),
}

impl<S> Clone for TimeSpaceSet<S> {
    fn clone(&self) -> Self {
        match self {
            Self::Empty => Self::Empty,
            Self::Diagonal => Self::Diagonal,
            Self::WindowedDiagonal { max_m, max_n } => Self::WindowedDiagonal {
                max_m: *max_m,
                max_n: *max_n,
            },
            Self::Custom(p) => Self::Custom(Arc::clone(p)),
        }
    }
}

impl<S> fmt::Debug for TimeSpaceSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "Empty"),
            Self::Diagonal => write!(f, "Diagonal"),
            Self::WindowedDiagonal { max_m, max_n } => {
                write!(f, "WindowedDiagonal(m <= {max_m}, n <= {max_n})")
            }
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl<S: Eq> TimeSpaceSet<S> {
    pub fn from_fn(f: impl Fn(usize, &S, usize, &S) -> bool + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn contains(&self, m: usize, x: &S, n: usize, y: &S) -> bool {
        match self {
            Self::Empty => false,
            Self::Diagonal => x == y,
            Self::WindowedDiagonal { max_m, max_n } => m <= *max_m && n <= *max_n && x == y,
            Self::Custom(p) => p(m, x, n, y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HitRecord {
    pub tau: Option<usize>,
    pub lambda: Option<usize>,
    pub hit: bool,
}

impl HitRecord {
    pub fn miss() -> Self {
        Self {
            tau: None,
            lambda: None,
            hit: false,
        }
    }

    pub fn at(tau: usize, lambda: usize) -> Self {
        Self {
            tau: Some(tau),
            lambda: Some(lambda),
            hit: true,
        }
    }
}

/// Sparse nonnegative weights `w(m, x, n, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable<S: Eq + Hash> {
    weights: HashMap<(usize, S, usize, S), f64>,
}

impl<S: Clone + Eq + Hash> Default for WeightTable<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Clone + Eq + Hash> WeightTable<S> {
    pub fn new() -> Self {
        Self {
            weights: HashMap::new(),
        }
    }

    pub fn insert(&mut self, m: usize, x: S, n: usize, y: S, w: f64) {
        assert!(w >= 0.0, "weights are nonnegative");
        if w > 0.0 {
            self.weights.insert((m, x, n, y), w);
        }
    }

    pub fn get(&self, m: usize, x: &S, n: usize, y: &S) -> f64 {
        // Avoids cloning the states for the lookup when the table is empty.
        if self.weights.is_empty() {
            return 0.0;
        }
        self.weights
            .get(&(m, x.clone(), n, y.clone()))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, S, usize, S), &f64)> {
        self.weights.iter()
    }

    /// Largest time index carrying positive weight, on either chain.
    pub fn max_time(&self) -> usize {
        self.weights
            .keys()
            .map(|(m, _, n, _)| *m.max(n))
            .max()
            .unwrap_or(0)
    }

    pub fn vanishes_outside(&self, a: &TimeSpaceSet<S>) -> bool {
        self.weights
            .keys()
            .all(|(m, x, n, y)| a.contains(*m, x, *n, y))
    }
}

/// Number of index pairs `(k, m)` with `X_k = Y_m`.
pub fn count_intersections<S: Eq + Hash>(px: &[S], py: &[S]) -> u64 {
    let mut counts: HashMap<&S, u64> = HashMap::with_capacity(px.len());
    for s in px {
        *counts.entry(s).or_insert(0) += 1;
    }
    py.iter().map(|s| counts.get(s).copied().unwrap_or(0)).sum()
}

/// True when the two paths share a state.
pub fn paths_intersect<S: Eq + Hash>(px: &[S], py: &[S]) -> bool {
    let set: HashSet<&S> = px.iter().collect();
    py.iter().any(|s| set.contains(s))
}

/// Lexicographically minimal `(τ, λ)` with `(τ, X_τ, λ, Y_λ) ∈ A`.
pub fn lex_first_hit<S: Eq + Hash>(px: &[S], py: &[S], a: &TimeSpaceSet<S>) -> HitRecord {
    match a {
        TimeSpaceSet::Empty => HitRecord::miss(),
        TimeSpaceSet::Diagonal | TimeSpaceSet::WindowedDiagonal { .. } => {
            let (max_m, max_n) = match a {
                TimeSpaceSet::WindowedDiagonal { max_m, max_n } => (*max_m, *max_n),
                _ => (usize::MAX, usize::MAX),
            };
            let mut first: HashMap<&S, usize> = HashMap::with_capacity(py.len());
            for (n, y) in py.iter().enumerate().take(max_n.saturating_add(1)) {
                first.entry(y).or_insert(n);
            }
            px.iter()
                .enumerate()
                .take(max_m.saturating_add(1))
                .find_map(|(m, x)| first.get(x).map(|&n| HitRecord::at(m, n)))
                .unwrap_or_else(HitRecord::miss)
        }
        TimeSpaceSet::Custom(p) => {
            for (m, x) in px.iter().enumerate() {
                for (n, y) in py.iter().enumerate() {
                    if p(m, x, n, y) {
                        return HitRecord::at(m, n);
                    }
                }
            }
            HitRecord::miss()
        }
    }
}

/// The indices `i(m, n)`, `j(m, n)` and `χ(m, n) = 1{i ≤ j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chi {
    pub i: usize,
    pub j: usize,
    pub chi: bool,
}

/// With `L = LE(prefix ⧺ X_0..X_m)`: `j` is the least index of `L` visited by
/// `X_m, X_{m+1}, ...`, `i` the least index visited by `Y_n, Y_{n+1}, ...`.
/// When `X_m ≠ Y_n` the result is `(0, 0, χ = 1)`. Indices count from the start
/// of the prefix.
pub fn chi_indicator<S: Clone + Eq + Hash>(
    full_x: &[S],
    full_y: &[S],
    prefix: &[S],
    m: usize,
    n: usize,
) -> Result<Chi> {
    if m >= full_x.len() || n >= full_y.len() {
        return Err(Error::IndexOutOfRange(format!(
            "(m, n) = ({m}, {n}) with path lengths ({}, {})",
            full_x.len(),
            full_y.len()
        )));
    }
    if full_x[m] != full_y[n] {
        return Ok(Chi {
            i: 0,
            j: 0,
            chi: true,
        });
    }
    let erased = loop_erase_with_prefix(prefix, &full_x[..=m])?;
    Ok(chi_from_erasure(&erased.states, &full_x[m..], &full_y[n..]))
}

pub(crate) fn chi_from_erasure<S: Eq + Hash>(erased: &[S], x_cont: &[S], y_cont: &[S]) -> Chi {
    let first_hit = |cont: &[S]| {
        let set: HashSet<&S> = cont.iter().collect();
        erased
            .iter()
            .position(|s| set.contains(s))
            .expect("the continuation starts at the erased path's tip")
    };
    let j = first_hit(x_cont);
    let i = first_hit(y_cont);
    Chi { i, j, chi: i <= j }
}

/// `S_w = Σ w(m, X_m, n, Y_n)` and `Υ_w = Σ w(m, X_m, n, Y_n) χ(m, n)` for one pair.
pub fn weighted_counts<S: Clone + Eq + Hash>(
    px: &[S],
    py: &[S],
    prefix: &[S],
    w: &WeightTable<S>,
) -> (f64, f64) {
    let mut s = 0.0;
    let mut upsilon = 0.0;
    if w.is_empty() {
        return (s, upsilon);
    }
    for (m, x) in px.iter().enumerate() {
        let mut erased: Option<Vec<S>> = None;
        for (n, y) in py.iter().enumerate() {
            let weight = w.get(m, x, n, y);
            if weight == 0.0 {
                continue;
            }
            s += weight;
            let chi = if x != y {
                true
            } else {
                let l = erased.get_or_insert_with(|| {
                    loop_erase_with_prefix(prefix, &px[..=m])
                        .expect("nonempty")
                        .states
                });
                chi_from_erasure(l, &px[m..], &py[n..]).chi
            };
            if chi {
                upsilon += weight;
            }
        }
    }
    (s, upsilon)
}

#[derive(Debug, Clone, Serialize)]
pub struct SwMoments {
    pub s_w: Estimate,
    pub s_w_sq: Estimate,
    pub upsilon: Estimate,
    pub upsilon_sq: Estimate,
    pub samples: usize,
    /// Pairs with `Υ_w > S_w`; always zero.
    pub dominance_violations: usize,
}

/// Monte Carlo moments of `S_w` and `Υ_w` over independent path pairs of at most
/// `horizon` steps.
pub fn mc_sw_moments<C: MarkovChain>(
    chain: &C,
    start_x: &C::State,
    start_y: &C::State,
    w: &WeightTable<C::State>,
    horizon: usize,
    samples: usize,
    seed: u64,
) -> Result<SwMoments> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if w.max_time() > horizon {
        return Err(Error::InvalidArgument(format!(
            "weights reach time {} beyond horizon {horizon}",
            w.max_time()
        )));
    }
    for s in [start_x, start_y] {
        if !chain.contains(s) {
            return Err(Error::InvalidState(format!("{s:?}")));
        }
    }
    let per_pair: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let (px, _) = walk(chain, start_x, horizon, &mut rng);
            let (py, _) = walk(chain, start_y, horizon, &mut rng);
            weighted_counts(&px, &py, &[], w)
        })
        .collect();
    let col = |f: fn(&(f64, f64)) -> f64| -> Vec<f64> { per_pair.iter().map(f).collect() };
    Ok(SwMoments {
        s_w: Estimate::from_samples(&col(|p| p.0)),
        s_w_sq: Estimate::from_samples(&col(|p| p.0 * p.0)),
        upsilon: Estimate::from_samples(&col(|p| p.1)),
        upsilon_sq: Estimate::from_samples(&col(|p| p.1 * p.1)),
        samples,
        dominance_violations: per_pair.iter().filter(|(s, u)| u > s).count(),
    })
}

/// Estimates of `P[X ∩ Y ≠ ∅]`, `P[LE(X) ∩ Y ≠ ∅]` and their ratio.
#[derive(Debug, Clone, Serialize)]
pub struct HitRatio {
    pub hit: Proportion,
    pub le_hit: Proportion,
    /// `None` when no pair intersected.
    pub ratio: Option<f64>,
    pub ratio_stderr: f64,
    /// Conservative interval `[le.lo / hit.hi, le.hi / hit.lo]`, clipped to `[0, 1]`.
    pub ratio_ci: (f64, f64),
    /// Paths stopped by the horizon rather than by killing or absorption.
    pub truncated_paths: usize,
}

/// Both probabilities are estimated on the same `samples` independent pairs; X and
/// Y share `chain`, hence their transition probabilities.
pub fn mc_hit_ratio<C: MarkovChain>(
    chain: &C,
    start_x: &C::State,
    start_y: &C::State,
    horizon: usize,
    samples: usize,
    seed: u64,
) -> Result<HitRatio> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    for s in [start_x, start_y] {
        if !chain.contains(s) {
            return Err(Error::InvalidState(format!("{s:?}")));
        }
    }
    let outcomes: Vec<(bool, bool, usize)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let (px, cx) = walk(chain, start_x, horizon, &mut rng);
            let (py, cy) = walk(chain, start_y, horizon, &mut rng);
            let truncated = [cx, cy]
                .iter()
                .filter(|c| **c == Termination::HorizonReached)
                .count();
            let hit = paths_intersect(&px, &py);
            let le_hit = hit && {
                let le = loop_erase(&px).expect("nonempty");
                paths_intersect(&le.states, &py)
            };
            (hit, le_hit, truncated)
        })
        .collect();
    let hits = outcomes.iter().filter(|o| o.0).count() as u64;
    let le_hits = outcomes.iter().filter(|o| o.1).count() as u64;
    let truncated_paths = outcomes.iter().map(|o| o.2).sum();
    let hit = Proportion::new(hits, samples as u64);
    let le_hit = Proportion::new(le_hits, samples as u64);
    let (ratio, ratio_stderr, ratio_ci) = if hits == 0 {
        (None, f64::NAN, (0.0, 1.0))
    } else {
        let r = le_hits as f64 / hits as f64;
        // LE(X) ⊂ X, so the ratio is the conditional proportion P[LE hit | hit].
        let se = (r * (1.0 - r) / hits as f64).sqrt();
        let lo = if hit.ci_hi > 0.0 { le_hit.ci_lo / hit.ci_hi } else { 0.0 };
        let hi = if hit.ci_lo > 0.0 {
            (le_hit.ci_hi / hit.ci_lo).min(1.0)
        } else {
            1.0
        };
        (Some(r), se, (lo.clamp(0.0, 1.0), hi))
    };
    Ok(HitRatio {
        hit,
        le_hit,
        ratio,
        ratio_stderr,
        ratio_ci,
        truncated_paths,
    })
}

/// Monte Carlo `E I_n` with `I_n = Σ_{k,m ≤ n} 1{X_k = Y_m}` for two independent
/// chains started at `start`; pair `i` uses stream `i` of `seed`.
pub fn mc_intersection_count<C: MarkovChain>(
    chain: &C,
    start: &C::State,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if !chain.contains(start) {
        return Err(Error::InvalidState(format!("{start:?}")));
    }
    let counts: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let (px, _) = walk(chain, start, n, &mut rng);
            let (py, _) = walk(chain, start, n, &mut rng);
            count_intersections(&px, &py) as f64
        })
        .collect();
    Ok(Estimate::from_samples(&counts))
}
