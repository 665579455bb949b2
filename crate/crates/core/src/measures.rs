//! Weight-only concentration measures and network density.

use crate::types::{BinaryGraph, WeightVector};

/// Herfindahl–Hirschman index `Σ wᵢ²`.
pub fn hhi(w: &WeightVector) -> f64 {
    w.values().iter().map(|v| v * v).sum()
}

/// Gini coefficient as the relative mean absolute difference,
/// `Σᵢ Σⱼ |wᵢ − wⱼ| / (2 N Σ w)`, without small-sample correction.
///
/// Evaluated in `O(N log N)` from the sorted weights using
/// `Σᵢ Σⱼ |xᵢ − xⱼ| = 2 Σₖ (2k − N − 1) x₍ₖ₎` (1-based ranks, ascending).
pub fn gini(w: &WeightVector) -> f64 {
    let mut sorted = w.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let total: f64 = sorted.iter().sum();
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(k, x)| (2.0 * (k as f64 + 1.0) - n - 1.0) * x)
        .sum();
    (weighted / (n * total)).max(0.0)
}

/// Fraction of node pairs that are linked, `2|E| / (N(N − 1))`.
pub fn density(g: &BinaryGraph) -> f64 {
    let n = g.node_count();
    if n < 2 {
        return 0.0;
    }
    2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64
}
