#![allow(dead_code)]

use nanorelay::OutageEstimate;

/// Single-relay AF outage by brute force: the unit square of the two hop
/// CDFs is cut into `n x n` cells, each cell's midpoint is mapped back to
/// exponential SNRs by inverse CDF, and cells whose branch SNR is below
/// `t` are counted.
pub fn brute_force_outage(mean1: f64, mean2: f64, t: f64, n: usize) -> f64 {
    let inv = |mean: f64| -> Vec<f64> {
        (0..n)
            .map(|i| -mean * (-(i as f64 + 0.5) / n as f64).ln_1p())
            .collect()
    };
    let g1 = inv(mean1);
    let g2 = inv(mean2);
    let mut below = 0u64;
    for &a in &g1 {
        below += g2
            .iter()
            .map(|&b| u64::from(a * b / (a + b + 1.0) < t))
            .sum::<u64>();
    }
    below as f64 / (n as f64 * n as f64)
}

/// `a <= b` unless their 95% intervals are disjoint in the wrong order.
pub fn le_ci(a: &OutageEstimate, b: &OutageEstimate) -> bool {
    a.ci_low <= b.ci_high
}
