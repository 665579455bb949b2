//! Seeded generators: the ten-node reference scenarios, Erdős–Rényi graphs,
//! uniform random graphs with a fixed edge count and uniform simplex weights.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{NciError, Result};
use crate::netbuild::Panel;
use crate::rng::{seeded, StreamRng};
use crate::types::{BinaryGraph, WeightVector};

/// Reference weights for the ten-node scenarios.
pub const OMEGA_REF: [f64; 10] = [0.30, 0.20, 0.15, 0.10, 0.08, 0.06, 0.04, 0.03, 0.02, 0.02];

/// Link probability used for the random scenario (the reference density, rounded).
pub const SCENARIO_P: f64 = 0.267;

pub const SCENARIO_NODES: usize = 10;

/// Zero-based node sets of the reference scenarios.
const CORE: [usize; 4] = [0, 1, 2, 3];
const CLUSTER_A: [usize; 3] = [4, 5, 6];
const CLUSTER_B: [usize; 3] = [7, 8, 9];
const PERIPHERY: [usize; 6] = [4, 5, 6, 7, 8, 9];

pub fn omega_ref() -> WeightVector {
    WeightVector::new(OMEGA_REF.to_vec()).expect("reference weights are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ScenarioKind {
    CorePeriphery,
    Peripheral,
    Random,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::CorePeriphery, ScenarioKind::Peripheral, ScenarioKind::Random];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::CorePeriphery => "core_periphery",
            ScenarioKind::Peripheral => "peripheral",
            ScenarioKind::Random => "er_random",
        }
    }

    /// One draw from the randomized version of the mechanism.
    pub fn sample(&self, rng: &mut StreamRng) -> BinaryGraph {
        match self {
            ScenarioKind::CorePeriphery => random_core_periphery_with(rng),
            ScenarioKind::Peripheral => random_peripheral_with(rng),
            ScenarioKind::Random => erdos_renyi_with(SCENARIO_NODES, SCENARIO_P, rng),
        }
    }

    pub(crate) fn stream_tag(&self) -> u64 {
        *self as u64
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = NciError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core_periphery" | "core-periphery" => Ok(ScenarioKind::CorePeriphery),
            "peripheral" => Ok(ScenarioKind::Peripheral),
            "er_random" | "random" => Ok(ScenarioKind::Random),
            _ => Err(NciError::InvalidParameter(format!("unknown scenario `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub n: usize,
    pub p: Option<f64>,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(NciError::TooFewNodes(self.n));
        }
        if self.kind == ScenarioKind::Random {
            match self.p {
                Some(p) if p > 0.0 && p < 1.0 => {}
                Some(p) => return Err(NciError::InvalidProbability(p)),
                None => return Err(NciError::InvalidParameter("random scenario needs p".into())),
            }
        }
        Ok(())
    }

    /// Deterministic graph for the structured kinds, a seeded draw for `Random`.
    pub fn generate(&self) -> Result<BinaryGraph> {
        self.validate()?;
        match self.kind {
            ScenarioKind::CorePeriphery => scenario_core_periphery(self.n),
            ScenarioKind::Peripheral => scenario_peripheral(self.n),
            ScenarioKind::Random => erdos_renyi(self.n, self.p.expect("validated"), self.seed),
        }
    }
}

fn require_ten(n: usize) -> Result<()> {
    if n != SCENARIO_NODES {
        return Err(NciError::UnsupportedSize(n));
    }
    Ok(())
}

fn clique(g: &mut BinaryGraph, nodes: &[usize]) {
    for (k, &i) in nodes.iter().enumerate() {
        for &j in &nodes[k + 1..] {
            g.add_edge(i, j).expect("valid pair");
        }
    }
}

fn periphery_pairs() -> Vec<(usize, usize)> {
    PERIPHERY
        .iter()
        .enumerate()
        .flat_map(|(k, &i)| PERIPHERY[k + 1..].iter().map(move |&j| (i, j)))
        .collect()
}

/// Clique on the four heaviest nodes plus two disjoint triangles; 12 edges.
pub fn scenario_core_periphery(n: usize) -> Result<BinaryGraph> {
    require_ten(n)?;
    let mut g = BinaryGraph::empty(n);
    clique(&mut g, &CORE);
    clique(&mut g, &CLUSTER_A);
    clique(&mut g, &CLUSTER_B);
    Ok(g)
}

/// Twelve edges among the six lightest nodes, keeping the pairs with the
/// smallest `ω_ref` products (ties by lexicographic pair). Nodes 1–4 are isolated.
pub fn scenario_peripheral(n: usize) -> Result<BinaryGraph> {
    require_ten(n)?;
    let mut pairs = periphery_pairs();
    let w = OMEGA_REF;
    // Rank by decreasing product, then drop the first three.
    pairs.sort_by(|&(a, b), &(c, d)| (w[c] * w[d]).total_cmp(&(w[a] * w[b])).then((a, b).cmp(&(c, d))));
    BinaryGraph::from_edges(n, pairs.into_iter().skip(3))
}

/// Core clique fixed; the six peripheral edges placed uniformly among the
/// 15 pairs of nodes 5–10.
pub fn random_core_periphery_with<R: Rng + ?Sized>(rng: &mut R) -> BinaryGraph {
    let mut g = BinaryGraph::empty(SCENARIO_NODES);
    clique(&mut g, &CORE);
    let pairs = periphery_pairs();
    for k in index::sample(rng, pairs.len(), 6) {
        let (i, j) = pairs[k];
        g.add_edge(i, j).expect("valid pair");
    }
    g
}

/// Twelve edges placed uniformly among the 15 pairs of nodes 5–10.
pub fn random_peripheral_with<R: Rng + ?Sized>(rng: &mut R) -> BinaryGraph {
    let pairs = periphery_pairs();
    let mut g = BinaryGraph::empty(SCENARIO_NODES);
    for k in index::sample(rng, pairs.len(), 12) {
        let (i, j) = pairs[k];
        g.add_edge(i, j).expect("valid pair");
    }
    g
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<BinaryGraph> {
    if !(p > 0.0 && p < 1.0) {
        return Err(NciError::InvalidProbability(p));
    }
    Ok(erdos_renyi_with(n, p, &mut seeded(seed)))
}

/// Each unordered pair, in lexicographic order, is linked with probability `p`.
pub fn erdos_renyi_with<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> BinaryGraph {
    let mut g = BinaryGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(i, j).expect("valid pair");
            }
        }
    }
    g
}

/// Uniform graph with exactly `m` edges.
pub fn random_graph_with_edges<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> BinaryGraph {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut g = BinaryGraph::empty(n);
    for k in index::sample(rng, pairs.len(), m.min(pairs.len())) {
        let (i, j) = pairs[k];
        g.add_edge(i, j).expect("valid pair");
    }
    g
}

pub fn sample_simplex_uniform(n: usize, seed: u64) -> Result<WeightVector> {
    if n < 2 {
        return Err(NciError::TooFewNodes(n));
    }
    Ok(sample_simplex_with(n, &mut seeded(seed)))
}

/// Uniform draw from the simplex: gaps between the order statistics of
/// `n − 1` uniforms on `[0, 1]`.
pub fn sample_simplex_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WeightVector {
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.push(1.0);
    let mut prev = 0.0;
    let gaps = cuts
        .into_iter()
        .map(|u| {
            let gap = u - prev;
            prev = u;
            gap
        })
        .collect();
    WeightVector::new(gaps).expect("gaps are nonnegative and telescope to 1")
}

/// Synthetic daily log-returns from one common factor: asset `i` loads
/// `loading · (0.5 + i / (n − 1))` on the factor plus independent noise, all
/// scaled by 1%. Observations are i.i.d. over time.
pub fn factor_returns(t: usize, n: usize, loading: f64, seed: u64) -> Panel {
    let mut rng = seeded(seed);
    let betas: Vec<f64> = (0..n).map(|i| loading * (0.5 + i as f64 / (n.max(2) - 1) as f64)).collect();
    let rows = (0..t)
        .map(|_| {
            let f: f64 = rng.sample(StandardNormal);
            betas
                .iter()
                .map(|b| {
                    let e: f64 = rng.sample(StandardNormal);
                    0.01 * (b * f + e)
                })
                .collect()
        })
        .collect();
    Panel::from_rows(rows).expect("rows are finite and rectangular")
}
