//! Loop-erasure and intersection statistics for pairs of independent random walks.
//!
//! The crate is organised around five pieces:
//!
//! - [`chain`]: state spaces, substochastic kernels, path sampling and Green functions
//!   for finite chains, killed lattice walks and the glued graph `Z^5 ∨ Z`.
//! - [`loop_erasure`]: chronological loop-erasure, an online eraser, and partial
//!   erasure restricted to a state set.
//! - [`intersection`]: path-pair statistics (intersection counts, the lexicographic
//!   first hit, the `i/j/χ` construction) and Monte Carlo estimators built on them.
//! - [`oracle`]: exhaustive path enumeration and exact linear algebra used as ground
//!   truth for every estimator.
//! - [`wilson`]: Wilson's algorithm on finite multigraphs, wired boundaries and
//!   spanning-tree enumeration.

pub mod chain;
pub mod error;
pub mod intersection;
pub mod loop_erasure;
pub mod oracle;
pub mod rng;
pub mod stats;
pub mod wilson;

pub use chain::{
    ChainSpec, FiniteChain, GluedGraph, GluedVertex, LatticePoint, LatticeWalk, MarkovChain,
    PathSample, Step, Termination,
};
pub use error::{Error, Result};
pub use intersection::{HitRecord, TimeSpaceSet, WeightTable};
pub use loop_erasure::{loop_erase, LoopErasedPath, OnlineEraser};
pub use oracle::WeightedPathSet;
pub use wilson::{FiniteMultigraph, SpanningTree};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
