//! Shared fixtures for the benchmarks.

use lerw_core::{FiniteMultigraph, LatticePoint, LatticeWalk, PathSample};

/// A simple random walk path on `Z^dim` with exactly `len` steps.
pub fn lattice_path(dim: usize, len: usize, seed: u64) -> PathSample<LatticePoint> {
    let walk = LatticeWalk::horizon_limited(dim, 0.0).expect("valid dimension");
    lerw_core::chain::sample_path(&walk, &LatticePoint::origin(), len, seed, 0).expect("origin is a state")
}

/// The `side × side` grid with its boundary wired to a single vertex.
pub fn wired_grid(side: usize) -> FiniteMultigraph {
    let grid = FiniteMultigraph::grid(side, side);
    let boundary: Vec<usize> = (0..side * side)
        .filter(|v| {
            let (r, c) = (v / side, v % side);
            r == 0 || c == 0 || r + 1 == side || c + 1 == side
        })
        .collect();
    grid.wire_boundary(&boundary).expect("nonempty proper boundary").graph
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_requested_size() {
        assert_eq!(lattice_path(3, 500, 1).states.len(), 501);
        assert_eq!(wired_grid(5).num_vertices(), 9 + 1);
    }
}
