//! Small statistical helpers shared by the estimators.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Normal quantile used for all two-sided 95% intervals.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Sample mean with its standard error and a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self::exact(0.0);
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        Self::with_stderr(mean, stderr)
    }

    pub fn with_stderr(mean: f64, stderr: f64) -> Self {
        Self {
            mean,
            stderr,
            ci_lo: mean - Z95 * stderr,
            ci_hi: mean + Z95 * stderr,
        }
    }

    pub fn exact(value: f64) -> Self {
        Self::with_stderr(value, 0.0)
    }

    /// Number of standard errors between the estimate and `target`.
    /// Zero-error estimates are compared exactly.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Binomial proportion with a Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64) -> Self {
        assert!(successes <= trials);
        if trials == 0 {
            return Self {
                successes,
                trials,
                estimate: 0.0,
                stderr: 0.0,
                ci_lo: 0.0,
                ci_hi: 1.0,
            };
        }
        let n = trials as f64;
        let p = successes as f64 / n;
        let (lo, hi) = wilson_interval(successes, trials, Z95);
        Self {
            successes,
            trials,
            estimate: p,
            stderr: (p * (1.0 - p) / n).sqrt(),
            ci_lo: lo,
            ci_hi: hi,
        }
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Pearson chi-square goodness of fit against uniform expected counts.
/// Returns `(statistic, p_value)`.
pub fn chi_square_uniform(counts: &[u64]) -> (f64, f64) {
    let k = counts.len();
    assert!(k >= 2, "need at least two categories");
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / k as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    (stat, 1.0 - dist.cdf(stat))
}

/// Total-variation distance between two empirical laws given as counts over the
/// same categories.
pub fn tv_distance(a: &[u64], b: &[u64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return 0.0;
    }
    0.5 * a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x as f64 / na as f64 - y as f64 / nb as f64).abs())
        .sum::<f64>()
}
