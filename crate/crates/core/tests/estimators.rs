use lerw_core::chain::{mc_green, sample_path};
use lerw_core::intersection::{mc_hit_ratio, mc_sw_moments};
use lerw_core::oracle::{
    enumerate_paths, intersect_prob_exact, le_hit_prob_exact, weight_table_exact, sw_moments_exact,
    DEFAULT_PATH_BUDGET,
};
use lerw_core::{FiniteChain, TimeSpaceSet};

fn within(estimate: f64, stderr: f64, exact: f64, k: f64) -> bool {
    (estimate - exact).abs() <= k * stderr.max(1e-12)
}

#[test]
fn sampled_marginals_match_exact_marginals() {
    let chain = FiniteChain::uniform_killed(3, 0.2).unwrap();
    let horizon = 4;
    let n = 100_000;
    let exact = chain.exact_marginals(0, horizon).unwrap();
    let mut counts = vec![vec![0u64; 3]; horizon + 1];
    for stream in 0..n {
        let p = sample_path(&chain, &0, horizon, 77, stream).unwrap();
        for (t, s) in p.states.iter().enumerate() {
            counts[t][*s] += 1;
        }
    }
    for t in 0..=horizon {
        for z in 0..3 {
            let p = exact[t][z];
            let est = counts[t][z] as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!(within(est, se, p, 4.0), "t={t} z={z}: {est} vs {p}");
        }
    }
}

#[test]
fn sw_moments_agree_with_oracle() {
    let chain = FiniteChain::uniform_killed(3, 0.2).unwrap();
    let x = enumerate_paths(&chain, 0, 4, DEFAULT_PATH_BUDGET).unwrap();
    let y = enumerate_paths(&chain, 1, 4, DEFAULT_PATH_BUDGET).unwrap();
    let w = weight_table_exact(&x, &y, &TimeSpaceSet::Diagonal);
    let exact = sw_moments_exact(&x, &y, &w);
    let mc = mc_sw_moments(&chain, &0, &1, &w, 4, 40_000, 3).unwrap();
    assert_eq!(mc.dominance_violations, 0);
    assert!(within(mc.s_w.mean, mc.s_w.stderr, exact.e_s, 3.0));
    assert!(within(mc.s_w_sq.mean, mc.s_w_sq.stderr, exact.e_s_sq, 3.0));
    assert!(within(mc.upsilon.mean, mc.upsilon.stderr, exact.e_upsilon, 3.0));
    assert!(within(mc.upsilon_sq.mean, mc.upsilon_sq.stderr, exact.e_upsilon_sq, 3.0));
}

#[test]
fn hit_ratio_agrees_with_oracle() {
    let chain = FiniteChain::uniform_killed(3, 0.2).unwrap();
    let x = enumerate_paths(&chain, 0, 4, DEFAULT_PATH_BUDGET).unwrap();
    let y = enumerate_paths(&chain, 1, 4, DEFAULT_PATH_BUDGET).unwrap();
    let r = mc_hit_ratio(&chain, &0, &1, 4, 40_000, 11).unwrap();
    assert!(within(r.hit.estimate, r.hit.stderr, intersect_prob_exact(&x, &y), 3.0));
    assert!(within(r.le_hit.estimate, r.le_hit.stderr, le_hit_prob_exact(&x, &y, &[]), 3.0));
    let (lo, hi) = r.ratio_ci;
    let ratio = r.ratio.unwrap();
    assert!(lo <= ratio && ratio <= hi);
}

#[test]
fn disjoint_components_never_intersect() {
    let chain = FiniteChain::from_kernel(vec![
        vec![0.5, 0.0],
        vec![0.0, 0.5],
    ])
    .unwrap();
    let r = mc_hit_ratio(&chain, &0, &1, 10, 500, 1).unwrap();
    assert_eq!(r.hit.successes, 0);
    assert_eq!(r.le_hit.successes, 0);
    assert!(r.ratio.is_none());
}

#[test]
fn green_estimate_agrees_with_linear_solve() {
    let chain = FiniteChain::flip(0.25).unwrap();
    let exact = chain.green_exact(0).unwrap();
    let g = mc_green(&chain, &0, &[0, 1], 50_000, 10_000, 8).unwrap();
    assert_eq!(g.truncated_paths, 0);
    for (e, x) in g.estimates.iter().zip(&exact) {
        assert!(within(e.mean, e.stderr, *x, 3.0), "{} vs {x}", e.mean);
    }
}
