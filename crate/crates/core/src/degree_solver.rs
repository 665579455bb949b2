//! Degree-constrained benchmark `Λ(w; 𝒢(d)) = max_{B ∈ 𝒢(d)} wᵀBw`.
//!
//! Three solvers are provided: a greedy pass over pairs ranked by `wᵢwⱼ`
//! (with a repair step so every graphical sequence is realized), hill-climbing
//! over degree-preserving double-edge swaps, and exhaustive branch-and-bound
//! for small graphs, which certifies the optimum.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{NciError, Result};
use crate::indices::DEGENERATE_TOLERANCE;
use crate::types::{is_graphical, BinaryGraph, DegreeSequence, WeightVector};

/// Largest graph the exact solver accepts unless told otherwise.
pub const DEFAULT_NODE_LIMIT: usize = 9;

/// Accepted swaps before rewiring gives up.
pub const DEFAULT_REWIRE_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SolverMode {
    Greedy,
    GreedyRewire,
    Exact,
}

impl fmt::Display for SolverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverMode::Greedy => "greedy",
            SolverMode::GreedyRewire => "greedy+rewire",
            SolverMode::Exact => "exact",
        })
    }
}

impl FromStr for SolverMode {
    type Err = NciError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(SolverMode::Greedy),
            "greedy+rewire" | "greedy-rewire" | "rewire" => Ok(SolverMode::GreedyRewire),
            "exact" => Ok(SolverMode::Exact),
            _ => Err(NciError::InvalidParameter(format!(
                "unknown solver mode `{s}` (greedy, greedy+rewire, exact)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    /// `wᵀBw` of `graph`.
    pub lambda: f64,
    pub graph: BinaryGraph,
    pub method: SolverMode,
    pub is_certified_optimal: bool,
}

fn check_dims(w: &WeightVector, d: &DegreeSequence) -> Result<()> {
    if w.len() != d.len() {
        return Err(NciError::DimensionMismatch { expected: w.len(), found: d.len() });
    }
    Ok(())
}

/// Greedy benchmark: link pairs in decreasing order of `wᵢwⱼ` (ties by
/// lexicographic pair) while both endpoints have spare degree, then repair.
pub fn greedy_max(w: &WeightVector, d: &DegreeSequence) -> Result<SolverResult> {
    check_dims(w, d)?;
    let n = d.len();
    let wv = w.values();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.sort_by(|&(a, b), &(c, e)| (wv[c] * wv[e]).total_cmp(&(wv[a] * wv[b])).then((a, b).cmp(&(c, e))));

    let mut residual = d.degrees().to_vec();
    let mut g = BinaryGraph::empty(n);
    for (i, j) in pairs {
        if residual[i] > 0 && residual[j] > 0 {
            g.add_edge(i, j)?;
            residual[i] -= 1;
            residual[j] -= 1;
        }
    }
    if residual.iter().any(|&r| r > 0) && !repair(&mut g, &mut residual, wv) {
        log::debug!("greedy repair stalled; realizing {:?} by Havel–Hakimi", d.degrees());
        g = havel_hakimi(d, wv);
    }
    debug_assert_eq!(g.degrees(), d.degrees());
    Ok(SolverResult { lambda: g.quadratic_form(w), graph: g, method: SolverMode::Greedy, is_certified_optimal: false })
}

/// Completes a partial realization by direct links or by splitting an existing
/// edge `(x, y)` into `(u, x), (v, y)`. Returns false if it gets stuck.
fn repair(g: &mut BinaryGraph, residual: &mut [usize], w: &[f64]) -> bool {
    let n = residual.len();
    while let Some(u) = (0..n).filter(|&k| residual[k] > 0).max_by(|&a, &b| {
        residual[a].cmp(&residual[b]).then(w[a].total_cmp(&w[b])).then(b.cmp(&a))
    }) {
        let direct = (0..n)
            .filter(|&v| v != u && residual[v] > 0 && !g.has_edge(u, v))
            .max_by(|&a, &b| w[a].total_cmp(&w[b]).then(b.cmp(&a)));
        if let Some(v) = direct {
            g.add_edge(u, v).expect("valid pair");
            residual[u] -= 1;
            residual[v] -= 1;
            continue;
        }

        let mut best: Option<(f64, usize, usize, usize)> = None;
        for v in (0..n).filter(|&v| residual[v] > 0 && (v != u || residual[u] >= 2)) {
            let edges: Vec<(usize, usize)> = g.edges().collect();
            for (a, b) in edges {
                for (x, y) in [(a, b), (b, a)] {
                    if [x, y].iter().any(|&z| z == u || z == v) || g.has_edge(u, x) || g.has_edge(v, y) {
                        continue;
                    }
                    if u == v && x == y {
                        continue;
                    }
                    let delta = w[u] * w[x] + w[v] * w[y] - w[x] * w[y];
                    if best.is_none_or(|(bd, ..)| delta > bd) {
                        best = Some((delta, v, x, y));
                    }
                }
            }
        }
        let Some((_, v, x, y)) = best else {
            return false;
        };
        g.remove_edge(x, y).expect("valid pair");
        g.add_edge(u, x).expect("valid pair");
        g.add_edge(v, y).expect("valid pair");
        residual[u] -= 1;
        residual[v] -= 1;
    }
    true
}

/// Havel–Hakimi realization; ties among equal residual degrees go to heavier nodes.
fn havel_hakimi(d: &DegreeSequence, w: &[f64]) -> BinaryGraph {
    let n = d.len();
    let mut residual = d.degrees().to_vec();
    let mut g = BinaryGraph::empty(n);
    let order = |residual: &[usize], a: usize, b: usize| {
        residual[b].cmp(&residual[a]).then(w[b].total_cmp(&w[a])).then(a.cmp(&b))
    };
    loop {
        let mut nodes: Vec<usize> = (0..n).filter(|&k| residual[k] > 0).collect();
        if nodes.is_empty() {
            break;
        }
        nodes.sort_by(|&a, &b| order(&residual, a, b));
        let u = nodes[0];
        let r = residual[u];
        residual[u] = 0;
        for &v in nodes[1..].iter().take(r) {
            g.add_edge(u, v).expect("graphical sequence realizes");
            residual[v] -= 1;
        }
    }
    g
}

/// Hill-climbs over double-edge swaps `(a,b),(c,d) → (a,c),(b,d)` or
/// `(a,d),(b,c)`, accepting only strict improvements. Stops after `max_iter`
/// accepted swaps or a full pass without one.
pub fn rewire_refine(start: &SolverResult, w: &WeightVector, max_iter: usize) -> SolverResult {
    rewire_refine_traced(start, w, max_iter).0
}

/// [`rewire_refine`], also returning `λ` after each accepted swap.
pub fn rewire_refine_traced(start: &SolverResult, w: &WeightVector, max_iter: usize) -> (SolverResult, Vec<f64>) {
    let wv = w.values();
    let mut g = start.graph.clone();
    let mut trace = vec![g.quadratic_form(w)];
    let mut accepted = 0;
    'outer: while accepted < max_iter {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        for (k, &(a, b)) in edges.iter().enumerate() {
            for &(c, e) in &edges[k + 1..] {
                if a == c || a == e || b == c || b == e {
                    continue;
                }
                let current = wv[a] * wv[b] + wv[c] * wv[e];
                for [(p, q), (r, s)] in [[(a, c), (b, e)], [(a, e), (b, c)]] {
                    if g.has_edge(p, q) || g.has_edge(r, s) {
                        continue;
                    }
                    let gain = wv[p] * wv[q] + wv[r] * wv[s] - current;
                    if gain > 1e-15 * current.max(f64::MIN_POSITIVE) && gain > 0.0 {
                        g.remove_edge(a, b).expect("present");
                        g.remove_edge(c, e).expect("present");
                        g.add_edge(p, q).expect("absent");
                        g.add_edge(r, s).expect("absent");
                        accepted += 1;
                        trace.push(g.quadratic_form(w));
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    let method = match start.method {
        SolverMode::Greedy => SolverMode::GreedyRewire,
        m => m,
    };
    let lambda = g.quadratic_form(w);
    let certified = start.is_certified_optimal;
    (SolverResult { lambda, graph: g, method, is_certified_optimal: certified }, trace)
}

/// Exhaustive branch-and-bound over all graphs realizing `d`.
pub fn exact_max(w: &WeightVector, d: &DegreeSequence, node_limit: usize) -> Result<SolverResult> {
    check_dims(w, d)?;
    let n = d.len();
    if n > node_limit {
        return Err(NciError::TooLarge { n, limit: node_limit });
    }
    let seed = rewire_refine(&greedy_max(w, d)?, w, DEFAULT_REWIRE_ITERATIONS);
    let mut search = Search {
        w: w.values(),
        residual: d.degrees().to_vec(),
        graph: BinaryGraph::empty(n),
        best_value: seed.lambda,
        best: seed.graph,
    };
    search.node(0, 0.0);
    let lambda = search.best.quadratic_form(w);
    Ok(SolverResult { lambda, graph: search.best, method: SolverMode::Exact, is_certified_optimal: true })
}

struct Search<'a> {
    w: &'a [f64],
    residual: Vec<usize>,
    graph: BinaryGraph,
    best_value: f64,
    best: BinaryGraph,
}

impl Search<'_> {
    fn bound(&self) -> f64 {
        // Every new edge {i,j} adds wᵢwⱼ from each endpoint's side.
        let open: Vec<usize> = (0..self.w.len()).filter(|&k| self.residual[k] > 0).collect();
        open.iter()
            .map(|&k| {
                let partner = open.iter().filter(|&&j| j != k).map(|&j| self.w[j]).fold(0.0, f64::max);
                self.residual[k] as f64 * self.w[k] * partner
            })
            .sum()
    }

    fn node(&mut self, i: usize, value: f64) {
        let n = self.w.len();
        if i == n {
            if value > self.best_value {
                self.best_value = value;
                self.best = self.graph.clone();
            }
            return;
        }
        if value + self.bound() <= self.best_value * (1.0 + 1e-12) {
            return;
        }
        if !is_graphical(&self.residual[i..]) {
            return;
        }
        let need = self.residual[i];
        let candidates: Vec<usize> = (i + 1..n).filter(|&j| self.residual[j] > 0).collect();
        if candidates.len() < need {
            return;
        }
        self.residual[i] = 0;
        let mut chosen = Vec::with_capacity(need);
        self.choose(i, &candidates, 0, need, value, &mut chosen);
        self.residual[i] = need;
    }

    fn choose(&mut self, i: usize, candidates: &[usize], from: usize, need: usize, value: f64, chosen: &mut Vec<usize>) {
        if need == 0 {
            self.node(i + 1, value);
            return;
        }
        for k in from..=candidates.len() - need {
            let j = candidates[k];
            self.graph.add_edge(i, j).expect("valid pair");
            self.residual[j] -= 1;
            chosen.push(j);
            self.choose(i, candidates, k + 1, need - 1, value + 2.0 * self.w[i] * self.w[j], chosen);
            chosen.pop();
            self.residual[j] += 1;
            self.graph.remove_edge(i, j).expect("valid pair");
        }
    }
}

/// Benchmark for `mode`.
pub fn solve(w: &WeightVector, d: &DegreeSequence, mode: SolverMode, node_limit: usize) -> Result<SolverResult> {
    match mode {
        SolverMode::Greedy => greedy_max(w, d),
        SolverMode::GreedyRewire => Ok(rewire_refine(&greedy_max(w, d)?, w, DEFAULT_REWIRE_ITERATIONS)),
        SolverMode::Exact => exact_max(w, d, node_limit),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeConstrained {
    pub psi_deg: f64,
    /// Benchmark actually used in the denominator.
    pub benchmark: f64,
    /// True when the solver's `λ` fell below the observed `wᵀAw` and the
    /// observed value was used instead.
    pub fallback: bool,
    pub solver: SolverResult,
}

/// `ψ^(deg) = wᵀAw / max_{B ∈ 𝒢(d)} wᵀBw` with `d` the degrees of `g`.
pub fn degree_constrained(w: &WeightVector, g: &BinaryGraph, mode: SolverMode, node_limit: usize) -> Result<DegreeConstrained> {
    if w.len() != g.node_count() {
        return Err(NciError::DimensionMismatch { expected: w.len(), found: g.node_count() });
    }
    let d = DegreeSequence::of_graph(g);
    let solver = solve(w, &d, mode, node_limit)?;
    let observed = g.quadratic_form(w);
    let mut benchmark = solver.lambda;
    let fallback = benchmark < observed;
    if fallback {
        log::debug!("{mode} benchmark {benchmark} below observed {observed}; using observed");
        benchmark = observed;
    }
    if benchmark <= DEGENERATE_TOLERANCE {
        return Err(NciError::DegenerateBenchmark { value: benchmark });
    }
    Ok(DegreeConstrained { psi_deg: observed / benchmark, benchmark, fallback, solver })
}

pub fn nci_degree_constrained(w: &WeightVector, g: &BinaryGraph, mode: SolverMode) -> Result<f64> {
    Ok(degree_constrained(w, g, mode, DEFAULT_NODE_LIMIT)?.psi_deg)
}

/// Degree-preserving randomization: `attempts` random double-edge swaps.
pub fn random_rewire<R: Rng + ?Sized>(g: &BinaryGraph, attempts: usize, rng: &mut R) -> BinaryGraph {
    let mut g = g.clone();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.len() < 2 {
        return g;
    }
    for _ in 0..attempts {
        let k1 = rng.gen_range(0..edges.len());
        let k2 = rng.gen_range(0..edges.len());
        if k1 == k2 {
            continue;
        }
        let (a, b) = edges[k1];
        let (mut c, mut d) = edges[k2];
        if rng.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        if a == c || a == d || b == c || b == d || g.has_edge(a, c) || g.has_edge(b, d) {
            continue;
        }
        g.remove_edge(a, b).expect("present");
        g.remove_edge(c, d).expect("present");
        g.add_edge(a, c).expect("absent");
        g.add_edge(b, d).expect("absent");
        edges[k1] = (a.min(c), a.max(c));
        edges[k2] = (b.min(d), b.max(d));
    }
    g
}
