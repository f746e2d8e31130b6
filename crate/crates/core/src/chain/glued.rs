use rand::Rng;

use super::{MarkovChain, Step};
use crate::error::{Error, Result};

pub const BULK_DIM: usize = 5;

/// Vertex of `Z^5 ∨ Z`: the shared vertex, a nonzero point of the `Z^5` copy, or a
/// nonzero point of the `Z` copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GluedVertex {
    Hub,
    Bulk([i32; BULK_DIM]),
    Ray(i64),
}

impl GluedVertex {
    pub fn degree(&self) -> usize {
        match self {
            GluedVertex::Hub => 2 * BULK_DIM + 2,
            GluedVertex::Bulk(_) => 2 * BULK_DIM,
            GluedVertex::Ray(_) => 2,
        }
    }

    fn bulk_coords(&self) -> [i32; BULK_DIM] {
        match self {
            GluedVertex::Bulk(c) => *c,
            _ => [0; BULK_DIM],
        }
    }

    fn ray_coord(&self) -> i64 {
        match self {
            GluedVertex::Ray(k) => *k,
            _ => 0,
        }
    }

    fn from_bulk(c: [i32; BULK_DIM]) -> Self {
        if c == [0; BULK_DIM] {
            GluedVertex::Hub
        } else {
            GluedVertex::Bulk(c)
        }
    }

    fn from_ray(k: i64) -> Self {
        if k == 0 {
            GluedVertex::Hub
        } else {
            GluedVertex::Ray(k)
        }
    }

    /// All neighbours with multiplicity one each.
    pub fn neighbors(&self) -> Vec<GluedVertex> {
        let mut out = Vec::with_capacity(self.degree());
        if !matches!(self, GluedVertex::Ray(_)) {
            let c = self.bulk_coords();
            for i in 0..BULK_DIM {
                for d in [1, -1] {
                    let mut n = c;
                    n[i] += d;
                    out.push(Self::from_bulk(n));
                }
            }
        }
        if !matches!(self, GluedVertex::Bulk(_)) {
            let k = self.ray_coord();
            out.push(Self::from_ray(k + 1));
            out.push(Self::from_ray(k - 1));
        }
        out
    }
}

/// Simple random walk on the graph formed by `Z^5` and `Z` sharing their origin.
///
/// Optional killing `q` before each move, and an optional escape radius: a walk
/// standing on a `Z^5` vertex at Euclidean distance `≥ R` from the hub is absorbed.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedGraph {
    kill_prob: f64,
    escape_radius: Option<u32>,
}

impl GluedGraph {
    pub fn new(kill_prob: f64, escape_radius: Option<u32>) -> Result<Self> {
        if !(0.0..1.0).contains(&kill_prob) {
            return Err(Error::InvalidSpec(format!("kill probability {kill_prob} outside [0, 1)")));
        }
        if escape_radius == Some(0) {
            return Err(Error::InvalidSpec("escape radius must be positive".into()));
        }
        Ok(Self {
            kill_prob,
            escape_radius,
        })
    }

    pub fn escape_radius(&self) -> Option<u32> {
        self.escape_radius
    }

    pub fn kill_prob(&self) -> f64 {
        self.kill_prob
    }

    fn escaped(&self, v: &GluedVertex) -> bool {
        match (self.escape_radius, v) {
            (Some(r), GluedVertex::Bulk(c)) => {
                let n2: i64 = c.iter().map(|&x| x as i64 * x as i64).sum();
                n2 >= r as i64 * r as i64
            }
            _ => false,
        }
    }
}

impl MarkovChain for GluedGraph {
    type State = GluedVertex;

    fn contains(&self, state: &GluedVertex) -> bool {
        match state {
            GluedVertex::Hub => true,
            GluedVertex::Bulk(c) => *c != [0; BULK_DIM],
            GluedVertex::Ray(k) => *k != 0,
        }
    }

    fn step<R: Rng + ?Sized>(&self, from: &GluedVertex, rng: &mut R) -> Step<GluedVertex> {
        if self.escaped(from) {
            return Step::Absorbed;
        }
        if self.kill_prob > 0.0 && rng.random::<f64>() < self.kill_prob {
            return Step::Killed;
        }
        let k = rng.random_range(0..from.degree());
        let next = match from {
            GluedVertex::Ray(x) => GluedVertex::from_ray(if k == 0 { x + 1 } else { x - 1 }),
            _ if k >= 2 * BULK_DIM => GluedVertex::from_ray(if k == 2 * BULK_DIM { 1 } else { -1 }),
            _ => {
                let mut c = from.bulk_coords();
                c[k / 2] += if k % 2 == 0 { 1 } else { -1 };
                GluedVertex::from_bulk(c)
            }
        };
        Step::Move(next)
    }

    fn transition_prob(&self, from: &GluedVertex, to: &GluedVertex) -> f64 {
        if !self.contains(from) || self.escaped(from) {
            return 0.0;
        }
        let hits = from.neighbors().iter().filter(|n| *n == to).count();
        hits as f64 * (1.0 - self.kill_prob) / from.degree() as f64
    }

    /// Labels: `o`, `ray:<k>`, `bulk:<c1>,...,<c5>`.
    fn parse_state(&self, label: &str) -> Result<GluedVertex> {
        let bad = || Error::InvalidState(label.to_string());
        let label = label.trim();
        if label == "o" {
            return Ok(GluedVertex::Hub);
        }
        if let Some(k) = label.strip_prefix("ray:") {
            return Ok(GluedVertex::from_ray(k.trim().parse().map_err(|_| bad())?));
        }
        if let Some(rest) = label.strip_prefix("bulk:") {
            let v = rest
                .split(',')
                .map(|t| t.trim().parse::<i32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            let c: [i32; BULK_DIM] = v.try_into().map_err(|_| bad())?;
            return Ok(GluedVertex::from_bulk(c));
        }
        Err(bad())
    }

    fn state_label(&self, state: &GluedVertex) -> String {
        match state {
            GluedVertex::Hub => "o".into(),
            GluedVertex::Ray(k) => format!("ray:{k}"),
            GluedVertex::Bulk(c) => format!(
                "bulk:{}",
                c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}
