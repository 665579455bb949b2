//! Domain types shared by every index: weights on the simplex, binary graphs,
//! symmetric interaction matrices and degree sequences.

use serde::Serialize;

use crate::error::{NciError, Result};

/// Largest deviation of the raw weight sum from 1 that is silently renormalized.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

/// Nonnegative node weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    values: Vec<f64>,
}

impl WeightVector {
    /// Validates and renormalizes `values`.
    ///
    /// Sums within [`WEIGHT_SUM_TOLERANCE`] of one are rescaled to sum to one
    /// exactly (up to rounding); anything further off is rejected.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(NciError::TooFewNodes(values.len()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(NciError::InvalidWeight { index, value });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(NciError::UnnormalizedWeights { sum });
        }
        let values = if sum == 1.0 {
            values
        } else {
            values.into_iter().map(|v| v / sum).collect()
        };
        Ok(WeightVector { values })
    }

    /// Scales arbitrary nonnegative magnitudes (value added, market caps) to shares.
    pub fn from_magnitudes(magnitudes: &[f64]) -> Result<Self> {
        for (index, &value) in magnitudes.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(NciError::InvalidWeight { index, value });
            }
        }
        let total: f64 = magnitudes.iter().sum();
        if total <= 0.0 {
            return Err(NciError::UnnormalizedWeights { sum: total });
        }
        WeightVector::new(magnitudes.iter().map(|m| m / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(NciError::TooFewNodes(n));
        }
        Ok(WeightVector { values: vec![1.0 / n as f64; n] })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Returns `P w`: entry `perm[i]` of the result is entry `i` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut values = vec![0.0; self.values.len()];
        for (i, &target) in perm.iter().enumerate() {
            values[target] = self.values[i];
        }
        WeightVector { values }
    }
}

#[inline]
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // Row-major offset into the strict upper triangle.
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Undirected simple graph stored as a strict upper-triangle bitmap, so the
/// adjacency matrix is symmetric with a zero diagonal by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryGraph {
    n: usize,
    upper: Vec<bool>,
    edge_count: usize,
}

impl BinaryGraph {
    pub fn empty(n: usize) -> Self {
        BinaryGraph { n, upper: vec![false; n * n.saturating_sub(1) / 2], edge_count: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        BinaryGraph { n, upper: vec![true; pairs], edge_count: pairs }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = BinaryGraph::empty(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn max_edges(&self) -> usize {
        self.upper.len()
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        for node in [i, j] {
            if node >= self.n {
                return Err(NciError::NodeOutOfRange { node, n: self.n });
            }
        }
        if i == j {
            return Err(NciError::SelfLoop(i));
        }
        Ok(())
    }

    /// Adds `{i, j}`; returns whether the edge was new.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        self.check(i, j)?;
        let k = pair_index(self.n, i.min(j), i.max(j));
        let added = !self.upper[k];
        if added {
            self.upper[k] = true;
            self.edge_count += 1;
        }
        Ok(added)
    }

    /// Removes `{i, j}`; returns whether the edge was present.
    pub fn remove_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        self.check(i, j)?;
        let k = pair_index(self.n, i.min(j), i.max(j));
        let removed = self.upper[k];
        if removed {
            self.upper[k] = false;
            self.edge_count -= 1;
        }
        Ok(removed)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j || i >= self.n || j >= self.n {
            return false;
        }
        self.upper[pair_index(self.n, i.min(j), i.max(j))]
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.upper.iter())
            .filter_map(|(pair, &present)| present.then_some(pair))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for (i, j) in self.edges() {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }

    /// Relabels node `i` as `perm[i]`, giving `P A Pᵀ`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut g = BinaryGraph::empty(self.n);
        for (i, j) in self.edges() {
            g.add_edge(perm[i], perm[j]).expect("permutation keeps edges valid");
        }
        g
    }

    /// `wᵀ A w = 2 Σ_{i<j} A_ij w_i w_j`.
    pub fn quadratic_form(&self, w: &WeightVector) -> f64 {
        let w = w.values();
        2.0 * self.edges().map(|(i, j)| w[i] * w[j]).sum::<f64>()
    }

    /// Edge-wise union of two graphs on the same node set.
    pub fn union(&self, other: &BinaryGraph) -> Result<Self> {
        if self.n != other.n {
            return Err(NciError::DimensionMismatch { expected: self.n, found: other.n });
        }
        let upper: Vec<bool> = self.upper.iter().zip(&other.upper).map(|(a, b)| *a || *b).collect();
        let edge_count = upper.iter().filter(|&&b| b).count();
        Ok(BinaryGraph { n: self.n, upper, edge_count })
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u).collect::<Vec<_>>() {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Symmetric nonnegative matrix with zero diagonal (interaction intensities).
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix {
    n: usize,
    data: Vec<f64>,
}

impl InteractionMatrix {
    /// Builds from a dense row-major `n × n` buffer, checking every invariant.
    pub fn from_dense(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(NciError::NonSquare { rows: n, cols: data.len() / n.max(1) });
        }
        for i in 0..n {
            for j in 0..n {
                let v = data[i * n + j];
                if !v.is_finite() || v < 0.0 || (i == j && v != 0.0) {
                    return Err(NciError::InvalidEntry { row: i, col: j, value: v });
                }
                if data[j * n + i] != v {
                    return Err(NciError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(InteractionMatrix { n, data })
    }

    /// Fills the matrix from `f(i, j)` for `i < j`, mirroring the result.
    pub fn from_upper_fn<F>(n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(NciError::InvalidEntry { row: i, col: j, value: v });
                }
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(InteractionMatrix { n, data })
    }

    pub fn from_graph(g: &BinaryGraph) -> Self {
        let n = g.node_count();
        let mut data = vec![0.0; n * n];
        for (i, j) in g.edges() {
            data[i * n + j] = 1.0;
            data[j * n + i] = 1.0;
        }
        InteractionMatrix { n, data }
    }

    /// The complete-network benchmark `𝟙𝟙ᵀ − I`.
    pub fn complete(n: usize) -> Self {
        InteractionMatrix::from_graph(&BinaryGraph::complete(n))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        InteractionMatrix::from_upper_fn(self.n, |i, j| c * self.get(i, j))
    }

    /// Applies `f` to every off-diagonal entry.
    pub fn map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> f64,
    {
        InteractionMatrix::from_upper_fn(self.n, |i, j| f(self.get(i, j)))
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[perm[i] * n + perm[j]] = self.data[i * n + j];
            }
        }
        InteractionMatrix { n, data }
    }

    /// `wᵀ M w`, summing the upper triangle once and doubling.
    pub fn quadratic_form(&self, w: &WeightVector) -> f64 {
        let w = w.values();
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut inner = 0.0;
            for j in i + 1..n {
                inner += row[j] * w[j];
            }
            acc += w[i] * inner;
        }
        2.0 * acc
    }
}

/// Node degrees that some simple graph realizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if is_graphical(&degrees) {
            Ok(DegreeSequence { degrees })
        } else {
            Err(NciError::NonGraphicalSequence(degrees))
        }
    }

    pub fn of_graph(g: &BinaryGraph) -> Self {
        DegreeSequence { degrees: g.degrees() }
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }
}

/// Erdős–Gallai test.
pub fn is_graphical(degrees: &[usize]) -> bool {
    let n = degrees.len();
    let total: usize = degrees.iter().sum();
    if total % 2 == 1 || degrees.iter().any(|&d| d >= n) {
        return false;
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut prefix = 0usize;
    for k in 1..=n {
        prefix += sorted[k - 1];
        let tail: usize = sorted[k..].iter().map(|&d| d.min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

/// One row of index values for a `(w, network)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub hhi: f64,
    pub gini: f64,
    pub density: f64,
    pub psi: f64,
    pub psi_dens: f64,
    pub psi_null: Option<f64>,
    pub z_null: Option<f64>,
    pub psi_deg: Option<f64>,
    pub psi_weighted: Option<f64>,
    pub psi_transformed: Option<f64>,
    pub psi_multilayer: Option<f64>,
}
