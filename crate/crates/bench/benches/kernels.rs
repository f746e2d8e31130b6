use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use lerw_bench::{lattice_path, wired_grid};
use lerw_core::intersection::mc_hit_ratio;
use lerw_core::loop_erasure::{loop_erase, OnlineEraser};
use lerw_core::oracle::{enumerate_paths, seconv_check, DEFAULT_PATH_BUDGET};
use lerw_core::wilson::wilson_tree;
use lerw_core::{FiniteChain, LatticePoint, LatticeWalk, TimeSpaceSet};

const PATH_LENGTHS: [usize; 3] = [1_000, 10_000, 100_000];

fn erasure(c: &mut Criterion) {
    let mut group = c.benchmark_group("loop_erase");
    for &len in PATH_LENGTHS.iter() {
        let path = lattice_path(3, len, 7).states;
        group.bench_with_input(BenchmarkId::new("last_visit", len), &path, |b, p| {
            b.iter(|| loop_erase(black_box(p)).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("online", len), &path, |b, p| {
            b.iter(|| {
                let mut e = OnlineEraser::new();
                p.iter().for_each(|v| e.push(*v));
                e.current().len()
            });
        });
    }
    group.finish();
}

fn wilson(c: &mut Criterion) {
    let mut group = c.benchmark_group("wilson_tree");
    for side in [8usize, 16, 32] {
        let g = wired_grid(side);
        let root = g.num_vertices() - 1;
        let mut seed = 0u64;
        group.bench_function(BenchmarkId::from_parameter(side), |b| {
            b.iter(|| {
                seed += 1;
                wilson_tree(&g, root, seed).unwrap()
            });
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let chain = FiniteChain::uniform_killed(3, 0.2).unwrap();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    for t in [3usize, 4, 5] {
        group.bench_function(BenchmarkId::new("enumerate_paths", t), |b| {
            b.iter(|| enumerate_paths(&chain, 0, t, DEFAULT_PATH_BUDGET).unwrap());
        });
        let x = enumerate_paths(&chain, 0, t, DEFAULT_PATH_BUDGET).unwrap();
        let y = enumerate_paths(&chain, 1, t, DEFAULT_PATH_BUDGET).unwrap();
        group.bench_function(BenchmarkId::new("seconv_check", t), |b| {
            b.iter(|| seconv_check(&x, &y, &TimeSpaceSet::Diagonal));
        });
    }
    group.finish();
}

fn hit_ratio(c: &mut Criterion) {
    let walk = LatticeWalk::new(3, 0.01).unwrap();
    let o = LatticePoint::origin();
    let y = LatticePoint::new(&[4, 0, 0]).unwrap();
    let mut group = c.benchmark_group("mc_hit_ratio");
    group.sample_size(10);
    group.bench_function("z3_kill_0.01_1000_pairs", |b| {
        b.iter(|| mc_hit_ratio(&walk, &o, &y, 100_000, 1_000, 4).unwrap());
    });
    group.finish();
}

criterion_group!(benches, erasure, wilson, oracle, hit_ratio);
criterion_main!(benches);
