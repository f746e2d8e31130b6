//! Intersection-count moments of two chains started at the same state.

use serde::Serialize;

use super::enumerate_paths;
use crate::chain::FiniteChain;
use crate::error::{Error, Result};
use crate::intersection::count_intersections;

const TRANSITIVITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct MomentIdentity {
    pub n: usize,
    /// `Σ_z G_n(o, z)²`.
    pub sum_green_sq: f64,
    /// `E I_n` from `Σ_{k,m} Σ_z P[X_k = z] P[Y_m = z]` over ordered time pairs.
    pub e_in_ordered: f64,
    /// `E I_n` by path-pair enumeration, when the budget allows.
    pub e_in_enumerated: Option<f64>,
    /// `E I_n²` from the `k ≤ i` / `k > i` decomposition with kernel powers.
    pub e_in_sq: f64,
    pub e_in_sq_enumerated: Option<f64>,
    /// `4 Σ_{z,w} G_n(o,z)² G_n(z,w)²`.
    pub intermediate_bound: f64,
    /// `4 (E I_n)²`.
    pub bound: f64,
    /// `Σ_w G_n(z, w)²` for every `z`.
    pub allz: Vec<f64>,
    pub transitive: bool,
}

impl MomentIdentity {
    pub fn allz_spread(&self) -> f64 {
        let max = self.allz.iter().cloned().fold(f64::MIN, f64::max);
        let min = self.allz.iter().cloned().fold(f64::MAX, f64::min);
        max - min
    }
}

/// Checks the first-moment identity and, for transitive kernels, `E I_n² ≤ 4 (E I_n)²`.
///
/// `transitive` asserts vertex-transitivity; it is validated by requiring
/// `Σ_w G_n(z, w)²` to be the same for every `z`.
pub fn moment_identity_check(
    chain: &FiniteChain,
    o: usize,
    n: usize,
    transitive: bool,
    budget: usize,
) -> Result<MomentIdentity> {
    let size = chain.len();
    if o >= size {
        return Err(Error::InvalidState(o.to_string()));
    }
    let green: Vec<Vec<f64>> = (0..size)
        .map(|z| chain.green_truncated(z, n))
        .collect::<Result<_>>()?;
    let allz: Vec<f64> = green.iter().map(|row| row.iter().map(|g| g * g).sum()).collect();
    if transitive {
        let scale = allz.iter().cloned().fold(0.0, f64::max).max(1.0);
        for (z, s) in allz.iter().enumerate() {
            if (s - allz[o]).abs() > TRANSITIVITY_TOLERANCE * scale {
                return Err(Error::NotTransitive(format!(
                    "Σ_w G_n({z}, w)² = {s} differs from {} at the origin",
                    allz[o]
                )));
            }
        }
    }
    let sum_green_sq = allz[o];

    let dist = chain.exact_marginals(o, n)?;
    let mut e_in_ordered = 0.0;
    for dk in &dist {
        for dm in &dist {
            e_in_ordered += dk.iter().zip(dm).map(|(a, b)| a * b).sum::<f64>();
        }
    }

    // cumulative[r] = Σ_{j=0}^r P^j
    let powers = chain.kernel_powers(n);
    let mut cumulative = Vec::with_capacity(n + 1);
    let mut acc = powers[0].clone();
    cumulative.push(acc.clone());
    for p in &powers[1..] {
        acc += p;
        cumulative.push(acc.clone());
    }
    // pair[z][w] = Σ_{k,i ≤ n} P[X_k = z, X_i = w]
    let mut e_in_sq = 0.0;
    for z in 0..size {
        for w in 0..size {
            let mut pair = 0.0;
            for (k, d) in dist.iter().enumerate() {
                // k ≤ i: from z at time k, reach w within n - k further steps.
                pair += d[z] * cumulative[n - k][(z, w)];
                // i < k: from w at time i, reach z in 1..=n-i steps.
                let strict = cumulative[n - k][(w, z)] - if w == z { 1.0 } else { 0.0 };
                pair += d[w] * strict;
            }
            e_in_sq += pair * pair;
        }
    }

    let intermediate_bound = 4.0
        * (0..size)
            .map(|z| green[o][z] * green[o][z] * allz[z])
            .sum::<f64>();

    let law = intersection_law(chain, o, n, budget).ok();
    let e_in_enumerated = law
        .as_ref()
        .map(|l| l.iter().map(|(i, p)| *i as f64 * p).sum());
    let e_in_sq_enumerated = law
        .as_ref()
        .map(|l| l.iter().map(|(i, p)| (*i as f64).powi(2) * p).sum());

    Ok(MomentIdentity {
        n,
        sum_green_sq,
        e_in_ordered,
        e_in_enumerated,
        e_in_sq,
        e_in_sq_enumerated,
        intermediate_bound,
        bound: 4.0 * sum_green_sq * sum_green_sq,
        allz,
        transitive,
    })
}

/// Exact law of `I_n` for two independent chains from `o`, as `(value, probability)`.
fn intersection_law(
    chain: &FiniteChain,
    o: usize,
    n: usize,
    budget: usize,
) -> Result<Vec<(u64, f64)>> {
    let set = enumerate_paths(chain, o, n, budget)?;
    let mut law: Vec<(u64, f64)> = Vec::new();
    for px in &set.paths {
        for py in &set.paths {
            let i = count_intersections(&px.states, &py.states);
            match law.iter_mut().find(|(v, _)| *v == i) {
                Some(entry) => entry.1 += px.prob * py.prob,
                None => law.push((i, px.prob * py.prob)),
            }
        }
    }
    law.sort_by_key(|(v, _)| *v);
    Ok(law)
}

#[derive(Debug, Clone, Serialize)]
pub struct KahaneCheck {
    pub eps: f64,
    pub e_in: f64,
    pub e_in_sq: f64,
    /// `P[I_n ≥ ε E I_n]`.
    pub prob: f64,
    /// `(1 - ε)² (E I_n)² / E[I_n²]`.
    pub moment_bound: f64,
    /// `(1 - ε)² / 4`.
    pub quarter_bound: f64,
}

/// Exact anti-concentration of `I_n` by enumeration.
pub fn kahane_check(
    chain: &FiniteChain,
    o: usize,
    n: usize,
    eps: f64,
    budget: usize,
) -> Result<KahaneCheck> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("ε = {eps} outside [0, 1)")));
    }
    let law = intersection_law(chain, o, n, budget)?;
    let e_in: f64 = law.iter().map(|(i, p)| *i as f64 * p).sum();
    let e_in_sq: f64 = law.iter().map(|(i, p)| (*i as f64).powi(2) * p).sum();
    let prob = law
        .iter()
        .filter(|(i, _)| *i as f64 >= eps * e_in)
        .map(|(_, p)| p)
        .sum();
    let c = (1.0 - eps) * (1.0 - eps);
    Ok(KahaneCheck {
        eps,
        e_in,
        e_in_sq,
        prob,
        moment_bound: c * e_in * e_in / e_in_sq,
        quarter_bound: c / 4.0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HeatKernelCheck {
    pub horizon: usize,
    /// `Σ_{m+n ≤ N} Σ_z P_x[X_m = z] P_x[Y_n = z]`.
    pub pairwise: f64,
    /// `Σ_{m+n ≤ N} P_x[X_{m+n} = x]`.
    pub collapsed: f64,
    /// `Σ_{k ≤ N} (k + 1) P_x[X_k = x]`.
    pub weighted: f64,
}

impl HeatKernelCheck {
    pub fn max_discrepancy(&self) -> f64 {
        let a = (self.pairwise - self.collapsed).abs();
        let b = (self.collapsed - self.weighted).abs();
        a.max(b)
    }
}

/// The three forms of the return-probability sum over the triangle `m + n ≤ N`.
/// Requires a symmetric kernel.
pub fn heat_kernel_identity_check(
    chain: &FiniteChain,
    x: usize,
    horizon: usize,
) -> Result<HeatKernelCheck> {
    if let Some((i, j)) = chain.is_symmetric() {
        return Err(Error::NotSymmetric(i, j));
    }
    let dist = chain.exact_marginals(x, horizon)?;
    let mut pairwise = 0.0;
    let mut collapsed = 0.0;
    for m in 0..=horizon {
        for n in 0..=(horizon - m) {
            pairwise += dist[m].iter().zip(&dist[n]).map(|(a, b)| a * b).sum::<f64>();
            collapsed += dist[m + n][x];
        }
    }
    let weighted = (0..=horizon).map(|k| (k + 1) as f64 * dist[k][x]).sum();
    Ok(HeatKernelCheck {
        horizon,
        pairwise,
        collapsed,
        weighted,
    })
}
