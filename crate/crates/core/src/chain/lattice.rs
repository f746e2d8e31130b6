use std::fmt;

use rand::Rng;

use super::{MarkovChain, Step};
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;

/// A point of `Z^d`, `d ≤ MAX_DIM`; unused coordinates stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LatticePoint([i32; MAX_DIM]);

impl LatticePoint {
    pub fn origin() -> Self {
        Self::default()
    }

    pub fn new(coords: &[i32]) -> Result<Self> {
        if coords.len() > MAX_DIM {
            return Err(Error::InvalidState(format!("{coords:?}")));
        }
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Self(c))
    }

    pub fn coords(&self) -> &[i32; MAX_DIM] {
        &self.0
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|&c| c as i64 * c as i64).sum()
    }

    pub fn l1_dist(&self, other: &Self) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (*a as i64 - *b as i64).abs())
            .sum()
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

/// Simple random walk on `Z^d`, killed with probability `q` before each move.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeWalk {
    dim: usize,
    kill_prob: f64,
}

impl LatticeWalk {
    /// Rejects walks that are not transient (`q = 0` and `d ≤ 2`).
    pub fn new(dim: usize, kill_prob: f64) -> Result<Self> {
        let walk = Self::horizon_limited(dim, kill_prob)?;
        if kill_prob == 0.0 && dim < 3 {
            return Err(Error::InvalidSpec(format!(
                "simple random walk on Z^{dim} without killing is recurrent"
            )));
        }
        Ok(walk)
    }

    /// Like [`LatticeWalk::new`] but accepts recurrent walks; only meaningful when
    /// every use is bounded by an explicit horizon.
    pub fn horizon_limited(dim: usize, kill_prob: f64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidSpec(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        if !(0.0..1.0).contains(&kill_prob) {
            return Err(Error::InvalidSpec(format!("kill probability {kill_prob} outside [0, 1)")));
        }
        Ok(Self { dim, kill_prob })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kill_prob(&self) -> f64 {
        self.kill_prob
    }

    pub fn is_transient(&self) -> bool {
        self.kill_prob > 0.0 || self.dim >= 3
    }
}

impl MarkovChain for LatticeWalk {
    type State = LatticePoint;

    fn contains(&self, state: &LatticePoint) -> bool {
        state.0[self.dim..].iter().all(|&c| c == 0)
    }

    fn step<R: Rng + ?Sized>(&self, from: &LatticePoint, rng: &mut R) -> Step<LatticePoint> {
        if self.kill_prob > 0.0 && rng.random::<f64>() < self.kill_prob {
            return Step::Killed;
        }
        let k = rng.random_range(0..2 * self.dim);
        let mut next = *from;
        if k % 2 == 0 {
            next.0[k / 2] += 1;
        } else {
            next.0[k / 2] -= 1;
        }
        Step::Move(next)
    }

    fn transition_prob(&self, from: &LatticePoint, to: &LatticePoint) -> f64 {
        if self.contains(from) && self.contains(to) && from.l1_dist(to) == 1 {
            (1.0 - self.kill_prob) / (2 * self.dim) as f64
        } else {
            0.0
        }
    }

    fn parse_state(&self, label: &str) -> Result<LatticePoint> {
        let coords = label
            .split(',')
            .map(|t| t.trim().parse::<i32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidState(label.to_string()))?;
        if coords.len() != self.dim {
            return Err(Error::InvalidState(label.to_string()));
        }
        LatticePoint::new(&coords)
    }

    fn state_label(&self, state: &LatticePoint) -> String {
        state.0[..self.dim]
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}
