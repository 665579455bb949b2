//! Reference implementations written independently of the library, used as
//! oracles by the integration tests.
#![allow(dead_code)]

/// `Σ_{i≠j} A_ij w_i w_j / Σ_{i≠j} w_i w_j`, summed pair by pair.
pub fn psi(w: &[f64], edges: &[(usize, usize)]) -> f64 {
    let num: f64 = edges.iter().map(|&(i, j)| 2.0 * w[i] * w[j]).sum();
    num / off_diagonal_mass(w)
}

/// `Σ_{i≠j} w_i w_j` as an explicit double sum.
pub fn off_diagonal_mass(w: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..w.len() {
        for j in 0..w.len() {
            if i != j {
                s += w[i] * w[j];
            }
        }
    }
    s
}

pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Every labelled tree on `n ≥ 2` nodes, decoded from all Prüfer sequences.
pub fn all_spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut trees = Vec::with_capacity(total);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges.sort();
        trees.push(edges);
    }
    trees
}

/// Maximum of `Σ_{edges} 2 w_i w_j` over all simple graphs with degrees `d`,
/// by exhaustive backtracking over pairs. `None` when no graph exists.
pub fn max_over_realizations(w: &[f64], d: &[usize]) -> Option<f64> {
    let pairs = all_pairs(d.len());
    let mut residual = d.to_vec();
    let mut best = None;
    search(&pairs, 0, &mut residual, 0.0, w, &mut best);
    best
}

fn search(pairs: &[(usize, usize)], k: usize, residual: &mut [usize], acc: f64, w: &[f64], best: &mut Option<f64>) {
    if residual.iter().all(|&r| r == 0) {
        if best.is_none_or(|b| acc > b) {
            *best = Some(acc);
        }
        return;
    }
    if k == pairs.len() {
        return;
    }
    let (i, j) = pairs[k];
    // Node i can no longer gain edges once all its pairs are behind us.
    if residual[i] > 0 && pairs[k..].iter().filter(|p| p.0 == i).count() < residual[i] {
        return;
    }
    if residual[i] > 0 && residual[j] > 0 {
        residual[i] -= 1;
        residual[j] -= 1;
        search(pairs, k + 1, residual, acc + 2.0 * w[i] * w[j], w, best);
        residual[i] += 1;
        residual[j] += 1;
    }
    search(pairs, k + 1, residual, acc, w, best);
}
