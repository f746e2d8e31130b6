//! Uniform spanning trees of finite multigraphs.

mod enumerate;
mod graph;
mod pemantle;
mod tree;

pub use enumerate::{enumerate_spanning_trees, matrix_tree_count, MAX_ENUMERATION_VERTICES};
pub use graph::{AdjacencyDoc, EdgeListDoc, FiniteMultigraph, GraphDoc, WiredGraph};
pub use pemantle::{pemantle_check, PemantleReport};
pub use tree::SpanningTree;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::task_rng;

/// Wilson's algorithm: grow the tree from `root` by loop-erased random walks
/// started at every vertex not yet in the tree, in increasing vertex order.
pub fn wilson_tree(graph: &FiniteMultigraph, root: usize, seed: u64) -> Result<SpanningTree> {
    let mut rng = task_rng(seed, 0);
    wilson_tree_with_rng(graph, root, &mut rng)
}

pub fn wilson_tree_with_rng<R: Rng + ?Sized>(
    graph: &FiniteMultigraph,
    root: usize,
    rng: &mut R,
) -> Result<SpanningTree> {
    let n = graph.num_vertices();
    if root >= n {
        return Err(Error::InvalidGraph(format!("root {root} not in graph")));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut in_tree = vec![false; n];
    in_tree[root] = true;
    // Last exit (neighbour, edge) of each vertex on the current walk; following
    // these pointers from the start traces the loop-erasure of the walk.
    let mut next: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
    let mut parent = vec![None; n];
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let incident = graph.incident(u);
            let (edge, w) = incident[rng.random_range(0..incident.len())];
            next[u] = (w, edge);
            u = w;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            parent[u] = Some(next[u]);
            u = next[u].0;
        }
    }
    Ok(SpanningTree::from_parents(root, parent))
}
