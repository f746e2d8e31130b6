use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::{MarkovChain, Step};
use crate::error::{Error, Result};

/// Spectral-radius tolerance used to decide transience of a finite kernel.
pub const TRANSIENCE_TOLERANCE: f64 = 1e-10;

const ROW_SUM_SLACK: f64 = 1e-12;
const POWER_ITERATION_LIMIT: usize = 200_000;

/// A Markov chain on `{0, .., n-1}` with a row-substochastic kernel.
///
/// The deficit `1 - Σ_y p(x, y)` of row `x` is the probability of being killed
/// before the next move from `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteChain {
    labels: Vec<String>,
    kernel: Vec<Vec<f64>>,
    // Positive entries of each row, for sampling.
    support: Vec<Vec<(usize, f64)>>,
    row_sums: Vec<f64>,
}

impl FiniteChain {
    pub fn new(labels: Vec<String>, kernel: Vec<Vec<f64>>) -> Result<Self> {
        let n = kernel.len();
        if n == 0 {
            return Err(Error::InvalidSpec("kernel has no states".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidSpec(format!(
                "{} labels for {} kernel rows",
                labels.len(),
                n
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidSpec(format!("duplicate state id {a:?}")));
            }
        }
        let mut row_sums = Vec::with_capacity(n);
        let mut support = Vec::with_capacity(n);
        for (i, row) in kernel.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSpec(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(p) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidSpec(format!("row {i} has entry {p} outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if sum > 1.0 + ROW_SUM_SLACK {
                return Err(Error::InvalidSpec(format!("row {i} sums to {sum} > 1")));
            }
            row_sums.push(sum);
            support.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(j, &p)| (j, p))
                    .collect(),
            );
        }
        Ok(Self {
            labels,
            kernel,
            support,
            row_sums,
        })
    }

    /// Kernel with labels `"0"`, `"1"`, ...
    pub fn from_kernel(kernel: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..kernel.len()).map(|i| i.to_string()).collect();
        Self::new(labels, kernel)
    }

    /// Two states that swap deterministically except for a per-step kill probability.
    pub fn flip(kill: f64) -> Result<Self> {
        let p = 1.0 - kill;
        Self::from_kernel(vec![vec![0.0, p], vec![p, 0.0]])
    }

    /// Two states; stay or move with probability ½ each.
    pub fn lazy_two_state() -> Self {
        Self::from_kernel(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).expect("valid kernel")
    }

    /// `n` states, every transition probability `(1 - kill) / n`.
    pub fn uniform_killed(n: usize, kill: f64) -> Result<Self> {
        let p = (1.0 - kill) / n as f64;
        Self::from_kernel(vec![vec![p; n]; n])
    }

    /// One state with self-loop probability `p` and kill probability `1 - p`.
    pub fn single_state(p: f64) -> Result<Self> {
        Self::from_kernel(vec![vec![p]])
    }

    /// Lazy walk on the cycle `C_n`: stay ½, each neighbour ¼.
    pub fn lazy_cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSpec("cycle needs at least 3 vertices".into()));
        }
        let mut k = vec![vec![0.0; n]; n];
        for (i, row) in k.iter_mut().enumerate() {
            row[i] = 0.5;
            row[(i + 1) % n] += 0.25;
            row[(i + n - 1) % n] += 0.25;
        }
        Self::from_kernel(k)
    }

    /// Simple random walk on the cycle `C_n`.
    pub fn cycle_walk(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSpec("cycle needs at least 3 vertices".into()));
        }
        let mut k = vec![vec![0.0; n]; n];
        for (i, row) in k.iter_mut().enumerate() {
            row[(i + 1) % n] += 0.5;
            row[(i + n - 1) % n] += 0.5;
        }
        Self::from_kernel(k)
    }

    /// Simple random walk on `Z` restricted to `[lo, hi]`, killed on stepping outside.
    /// Labels are the integer coordinates.
    pub fn interval_walk(lo: i64, hi: i64) -> Result<Self> {
        if hi <= lo {
            return Err(Error::InvalidSpec("empty interval".into()));
        }
        let n = (hi - lo + 1) as usize;
        let mut k = vec![vec![0.0; n]; n];
        for (i, row) in k.iter_mut().enumerate() {
            if i > 0 {
                row[i - 1] = 0.5;
            }
            if i + 1 < n {
                row[i + 1] = 0.5;
            }
        }
        let labels = (lo..=hi).map(|x| x.to_string()).collect();
        Self::new(labels, k)
    }

    pub fn len(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernel.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kernel(&self) -> &[Vec<f64>] {
        &self.kernel
    }

    pub fn p(&self, x: usize, y: usize) -> f64 {
        self.kernel[x][y]
    }

    /// Positive entries `(y, p(x, y))` of row `x`.
    pub fn successors(&self, x: usize) -> &[(usize, f64)] {
        &self.support[x]
    }

    /// Probability of being killed before the next move from `x`.
    pub fn deficit(&self, x: usize) -> f64 {
        (1.0 - self.row_sums[x]).max(0.0)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn check_state(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidState(x.to_string()))
        }
    }

    pub fn is_symmetric(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for i in 0..n {
            for j in 0..i {
                if (self.kernel[i][j] - self.kernel[j][i]).abs() > 1e-15 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Row vector times kernel.
    pub fn push_forward(&self, dist: &[f64]) -> Vec<f64> {
        let mut next = vec![0.0; self.len()];
        for (x, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(y, p) in &self.support[x] {
                next[y] += mass * p;
            }
        }
        next
    }

    /// `P[X_k = ·]` for `k = 0..=n`, starting from `start`.
    pub fn exact_marginals(&self, start: usize, n: usize) -> Result<Vec<Vec<f64>>> {
        self.check_state(start)?;
        let mut dists = Vec::with_capacity(n + 1);
        let mut d = vec![0.0; self.len()];
        d[start] = 1.0;
        dists.push(d);
        for k in 0..n {
            let next = self.push_forward(&dists[k]);
            dists.push(next);
        }
        Ok(dists)
    }

    /// `G_n(o, ·) = Σ_{k=0}^n P_o[X_k = ·]`.
    pub fn green_truncated(&self, o: usize, n: usize) -> Result<Vec<f64>> {
        let dists = self.exact_marginals(o, n)?;
        let mut g = vec![0.0; self.len()];
        for d in &dists {
            for (acc, p) in g.iter_mut().zip(d) {
                *acc += p;
            }
        }
        Ok(g)
    }

    /// Upper Collatz–Wielandt bound on the spectral radius, refined by power
    /// iteration on the lazy kernel `(I + P)/2` until it certifies transience,
    /// stagnates, or the iteration budget runs out.
    pub fn spectral_radius_bound(&self) -> f64 {
        let n = self.len();
        let mut v = vec![1.0; n];
        let mut upper = f64::INFINITY;
        for _ in 0..POWER_ITERATION_LIMIT {
            let pv = self.apply(&v);
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for (a, b) in pv.iter().zip(&v) {
                let r = a / b;
                lo = lo.min(r);
                hi = hi.max(r);
            }
            upper = upper.min(hi);
            if upper < 1.0 - TRANSIENCE_TOLERANCE || hi - lo < TRANSIENCE_TOLERANCE {
                break;
            }
            let mut next: Vec<f64> = v.iter().zip(&pv).map(|(a, b)| 0.5 * (a + b)).collect();
            let norm = next.iter().cloned().fold(0.0, f64::max);
            next.iter_mut().for_each(|x| *x /= norm);
            v = next;
        }
        upper
    }

    // Kernel times column vector.
    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.support
            .iter()
            .map(|row| row.iter().map(|&(j, p)| p * v[j]).sum())
            .collect()
    }

    pub fn is_transient(&self) -> bool {
        self.spectral_radius_bound() < 1.0 - TRANSIENCE_TOLERANCE
    }

    /// `G(o, ·)` as row `o` of the fundamental matrix `(I - P)^{-1}`.
    pub fn green_exact(&self, o: usize) -> Result<Vec<f64>> {
        self.check_state(o)?;
        let radius = self.spectral_radius_bound();
        if radius >= 1.0 - TRANSIENCE_TOLERANCE {
            return Err(Error::NotTransient { radius });
        }
        let n = self.len();
        // Row o of (I - P)^{-1} solves (I - P)^T g = e_o.
        let a = DMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            id - self.kernel[j][i]
        });
        let mut e = DVector::zeros(n);
        e[o] = 1.0;
        let g = a
            .lu()
            .solve(&e)
            .ok_or(Error::NotTransient { radius })?;
        Ok(g.iter().copied().collect())
    }

    /// Matrix powers `P^0, ..., P^n`.
    pub fn kernel_powers(&self, n: usize) -> Vec<DMatrix<f64>> {
        let k = self.len();
        let p = DMatrix::from_fn(k, k, |i, j| self.kernel[i][j]);
        let mut powers = Vec::with_capacity(n + 1);
        powers.push(DMatrix::identity(k, k));
        for i in 0..n {
            let next = &powers[i] * &p;
            powers.push(next);
        }
        powers
    }
}

impl MarkovChain for FiniteChain {
    type State = usize;

    fn contains(&self, state: &usize) -> bool {
        *state < self.len()
    }

    fn step<R: Rng + ?Sized>(&self, from: &usize, rng: &mut R) -> Step<usize> {
        let row = &self.support[*from];
        let total = self.row_sums[*from];
        if row.is_empty() {
            return Step::Killed;
        }
        // A numerically stochastic row never kills.
        let scale = if total >= 1.0 - ROW_SUM_SLACK { total } else { 1.0 };
        let u: f64 = rng.random::<f64>() * scale;
        let mut acc = 0.0;
        for &(y, p) in row {
            acc += p;
            if u < acc {
                return Step::Move(y);
            }
        }
        if scale == total {
            Step::Move(row[row.len() - 1].0)
        } else {
            Step::Killed
        }
    }

    fn transition_prob(&self, from: &usize, to: &usize) -> f64 {
        self.kernel
            .get(*from)
            .and_then(|r| r.get(*to))
            .copied()
            .unwrap_or(0.0)
    }

    fn parse_state(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::InvalidState(label.to_string()))
    }

    fn state_label(&self, state: &usize) -> String {
        self.labels[*state].clone()
    }
}
