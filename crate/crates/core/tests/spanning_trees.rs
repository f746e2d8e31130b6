use std::collections::HashMap;

use proptest::prelude::*;

use lerw_core::rng::task_rng;
use lerw_core::stats::chi_square_uniform;
use lerw_core::wilson::{
    enumerate_spanning_trees, matrix_tree_count, wilson_tree, wilson_tree_with_rng,
    FiniteMultigraph,
};

#[test]
fn multigraph_trees_are_uniform() {
    // triangle with a doubled edge: 5 spanning trees
    let g = FiniteMultigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (0, 2)]).unwrap();
    let trees = enumerate_spanning_trees(&g).unwrap();
    let index: HashMap<Vec<usize>, usize> =
        trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut counts = vec![0u64; trees.len()];
    let mut rng = task_rng(19, 0);
    for _ in 0..10_000 {
        let t = wilson_tree_with_rng(&g, 2, &mut rng).unwrap();
        counts[index[&t.edge_ids()]] += 1;
    }
    let (_, p) = chi_square_uniform(&counts);
    assert!(p > 0.001, "counts {counts:?}");
}

#[test]
fn wired_grid_trees_are_uniform() {
    let grid = FiniteMultigraph::grid(4, 4);
    let wired = grid
        .wire_boundary(&FiniteMultigraph::grid_boundary(4, 4))
        .unwrap();
    // four interior vertices plus the wired vertex
    assert_eq!(wired.graph.num_vertices(), 5);
    let trees = enumerate_spanning_trees(&wired.graph).unwrap();
    assert_eq!(trees.len() as f64, matrix_tree_count(&wired.graph).round());
    let index: HashMap<Vec<usize>, usize> =
        trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut counts = vec![0u64; trees.len()];
    let mut rng = task_rng(23, 0);
    for _ in 0..trees.len() * 100 {
        let t = wilson_tree_with_rng(&wired.graph, wired.wired, &mut rng).unwrap();
        counts[index[&t.edge_ids()]] += 1;
    }
    let (_, p) = chi_square_uniform(&counts);
    assert!(p > 0.001);
}

#[test]
fn same_seed_same_tree() {
    let g = FiniteMultigraph::grid(5, 5);
    assert_eq!(wilson_tree(&g, 0, 4).unwrap(), wilson_tree(&g, 0, 4).unwrap());
}

fn connected_multigraph() -> impl Strategy<Value = FiniteMultigraph> {
    (2usize..7).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..10).prop_map(move |extra| {
            // a spanning path keeps the graph connected
            let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
            edges.extend(extra.into_iter().filter(|(u, v)| u != v));
            FiniteMultigraph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn enumeration_matches_matrix_tree(g in connected_multigraph()) {
        let trees = enumerate_spanning_trees(&g).unwrap();
        prop_assert_eq!(trees.len() as f64, matrix_tree_count(&g).round());
    }

    #[test]
    fn wilson_output_is_a_spanning_tree(g in connected_multigraph(), seed in any::<u64>()) {
        let root = (seed as usize) % g.num_vertices();
        let t = wilson_tree(&g, root, seed).unwrap();
        prop_assert!(t.is_spanning_tree_of(&g));
        let trees = enumerate_spanning_trees(&g).unwrap();
        prop_assert!(trees.contains(&t.edge_ids()));
        let path = t.tree_path(0, g.num_vertices() - 1).unwrap();
        prop_assert_eq!(path.first(), Some(&0));
        prop_assert_eq!(path.last(), Some(&(g.num_vertices() - 1)));
    }
}

#[test]
fn triangle_trees_have_equal_frequency() {
    let k3 = FiniteMultigraph::complete(3);
    let mut counts = [0u64; 3];
    let mut rng = task_rng(31, 0);
    let n = 30_000;
    for _ in 0..n {
        let t = wilson_tree_with_rng(&k3, 0, &mut rng).unwrap();
        // the tree is determined by the one missing edge
        let missing = (0..3).find(|e| !t.edge_ids().contains(e)).unwrap();
        counts[missing] += 1;
    }
    let se = (1.0f64 / 3.0 * 2.0 / 3.0 / n as f64).sqrt();
    for c in counts {
        assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 4.0 * se, "{counts:?}");
    }
}

#[test]
fn wired_centre_edge_is_uniform_over_parallel_edges() {
    let grid = FiniteMultigraph::grid(3, 3);
    let wired = grid
        .wire_boundary(&FiniteMultigraph::grid_boundary(3, 3))
        .unwrap();
    assert_eq!(wired.graph.num_edges(), 4);
    let mut counts = vec![0u64; 4];
    let mut rng = task_rng(37, 0);
    for _ in 0..8_000 {
        let t = wilson_tree_with_rng(&wired.graph, wired.wired, &mut rng).unwrap();
        counts[t.edge_ids()[0]] += 1;
    }
    let (_, p) = chi_square_uniform(&counts);
    assert!(p > 0.001, "{counts:?}");
}
