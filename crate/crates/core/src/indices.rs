//! The network concentration index family `Ψ(w; M, B) = wᵀMw / wᵀBw` and its
//! named members.
//!
//! The baseline index takes `M = A` (binary adjacency) and the complete-network
//! benchmark `B = 𝟙𝟙ᵀ − I`, for which `wᵀBw = 1 − HHI`. The remaining variants
//! either swap the benchmark (density, null model, degree class) or the
//! interaction matrix (intensities, transformed data, layer aggregates).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{NciError, Result};
use crate::measures::{density, hhi};
use crate::types::{BinaryGraph, InteractionMatrix, WeightVector};

/// Benchmarks at or below this value are treated as zero.
pub const DEGENERATE_TOLERANCE: f64 = 1e-12;

/// Default number of draws for Monte Carlo null-model benchmarks.
pub const DEFAULT_NULL_REPLICATIONS: usize = 2000;

fn check_len(w: &WeightVector, n: usize) -> Result<()> {
    if w.len() != n {
        return Err(NciError::DimensionMismatch { expected: w.len(), found: n });
    }
    Ok(())
}

/// `1 − Σ wᵢ²`, the interaction available under a complete network.
pub fn complete_benchmark(w: &WeightVector) -> Result<f64> {
    let lambda = 1.0 - hhi(w);
    if lambda <= DEGENERATE_TOLERANCE {
        return Err(NciError::DegenerateBenchmark { value: lambda });
    }
    Ok(lambda)
}

/// General ratio of quadratic forms `wᵀMw / wᵀBw`.
pub fn psi_general(w: &WeightVector, m: &InteractionMatrix, b: &InteractionMatrix) -> Result<f64> {
    check_len(w, m.node_count())?;
    check_len(w, b.node_count())?;
    let denominator = b.quadratic_form(w);
    if denominator <= DEGENERATE_TOLERANCE {
        return Err(NciError::DegenerateBenchmark { value: denominator });
    }
    Ok(m.quadratic_form(w) / denominator)
}

/// Baseline index `wᵀAw / (1 − HHI)`, in `[0, 1]`.
pub fn nci_baseline(w: &WeightVector, g: &BinaryGraph) -> Result<f64> {
    check_len(w, g.node_count())?;
    let lambda = complete_benchmark(w)?;
    Ok(g.quadratic_form(w) / lambda)
}

/// Baseline index divided by density; equals the assortative-connectivity
/// ratio `E[wᵢwⱼ | Aᵢⱼ = 1] / E[wᵢwⱼ]`.
pub fn nci_density_adjusted(w: &WeightVector, g: &BinaryGraph) -> Result<f64> {
    let delta = density(g);
    if g.edge_count() == 0 {
        return Err(NciError::EmptyGraph);
    }
    Ok(nci_baseline(w, g)? / delta)
}

/// Observed interaction against a random-graph expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NullResult {
    pub psi_null: f64,
    pub z: Option<f64>,
    pub expected: f64,
    pub variance: f64,
}

/// `Var(wᵀAw)` when every pair is an independent Bernoulli(`p`) edge:
/// `p(1 − p) Σ_{i<j} (2wᵢwⱼ)²`.
pub fn erdos_renyi_variance(w: &WeightVector, p: f64) -> f64 {
    let w = w.values();
    let mut acc = 0.0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let c = 2.0 * w[i] * w[j];
            acc += c * c;
        }
    }
    p * (1.0 - p) * acc
}

fn check_probability(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(NciError::InvalidProbability(p));
    }
    Ok(())
}

/// Null-model index under an Erdős–Rényi(`p`) benchmark, with its Z-score.
///
/// The expectation is `p (1 − HHI)`, so `psi_null = ψ / p`.
pub fn nci_null_model(w: &WeightVector, g: &BinaryGraph, p: f64) -> Result<NullResult> {
    check_probability(p)?;
    check_len(w, g.node_count())?;
    let lambda = complete_benchmark(w)?;
    let observed = g.quadratic_form(w);
    let expected = p * lambda;
    let variance = erdos_renyi_variance(w, p);
    let z = (variance > 0.0).then(|| (observed - expected) / variance.sqrt());
    Ok(NullResult { psi_null: observed / expected, z, expected, variance })
}

/// Random-graph benchmark for the null-model index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NullModel {
    /// Independent edges with probability `p`; evaluated in closed form.
    ErdosRenyi { p: f64 },
    /// Uniform graphs with the observed edge count, estimated by simulation.
    DensityPreserving { replications: usize, seed: u64 },
    /// Degree-preserving rewirings of the observed graph, estimated by simulation.
    DegreePreserving { replications: usize, seed: u64 },
}

impl NullModel {
    pub fn name(&self) -> &'static str {
        match self {
            NullModel::ErdosRenyi { .. } => "erdos-renyi",
            NullModel::DensityPreserving { .. } => "density-preserving",
            NullModel::DegreePreserving { .. } => "degree-preserving",
        }
    }
}

/// Null-model index for any [`NullModel`].
///
/// Simulation-based benchmarks draw `replications` graphs from seeded streams
/// (one stream per draw) and use the sample mean and variance of `wᵀAw`.
pub fn nci_null(w: &WeightVector, g: &BinaryGraph, model: &NullModel) -> Result<NullResult> {
    let (replications, seed) = match *model {
        NullModel::ErdosRenyi { p } => return nci_null_model(w, g, p),
        NullModel::DensityPreserving { replications, seed }
        | NullModel::DegreePreserving { replications, seed } => (replications, seed),
    };
    if replications < 2 {
        return Err(NciError::InvalidParameter(format!(
            "null model needs at least 2 replications, got {replications}"
        )));
    }
    check_len(w, g.node_count())?;
    complete_benchmark(w)?;
    let observed = g.quadratic_form(w);
    let m = g.edge_count();
    let swaps = 10 * m.max(1);
    let draws: Vec<f64> = (0..replications as u64)
        .map(|k| {
            let mut rng = crate::rng::stream(seed, k);
            let sample = match model {
                NullModel::DensityPreserving { .. } => {
                    crate::netgen::random_graph_with_edges(g.node_count(), m, &mut rng)
                }
                _ => crate::degree_solver::random_rewire(g, swaps, &mut rng),
            };
            sample.quadratic_form(w)
        })
        .collect();
    let expected = crate::stats::mean(&draws);
    if expected <= DEGENERATE_TOLERANCE {
        return Err(NciError::DegenerateBenchmark { value: expected });
    }
    let sd = crate::stats::std_dev(&draws);
    let variance = sd * sd;
    let z = (variance > 0.0).then(|| (observed - expected) / sd);
    Ok(NullResult { psi_null: observed / expected, z, expected, variance })
}

/// Weighted index `wᵀWw / (1 − HHI)` for nonnegative intensities `W`.
pub fn nci_weighted(w: &WeightVector, m: &InteractionMatrix) -> Result<f64> {
    check_len(w, m.node_count())?;
    let lambda = complete_benchmark(w)?;
    Ok(m.quadratic_form(w) / lambda)
}

/// Elementwise transformation applied to data before a network is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transformation {
    Square,
    Absolute,
    Sqrt,
    /// Indicator `𝟏{x > τ}`.
    Exceedance(f64),
}

impl Transformation {
    pub fn exceedance(threshold: f64) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(NciError::InvalidParameter(format!(
                "exceedance threshold must be finite, got {threshold}"
            )));
        }
        Ok(Transformation::Exceedance(threshold))
    }

    /// `Sqrt` maps negative inputs to `NaN`; callers feed it nonnegative data.
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            Transformation::Square => x * x,
            Transformation::Absolute => x.abs(),
            Transformation::Sqrt => x.sqrt(),
            Transformation::Exceedance(tau) => {
                if x > tau {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transformation::Square => f.write_str("square"),
            Transformation::Absolute => f.write_str("abs"),
            Transformation::Sqrt => f.write_str("sqrt"),
            Transformation::Exceedance(t) => write!(f, "exceedance:{t}"),
        }
    }
}

impl FromStr for Transformation {
    type Err = NciError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Transformation::Square),
            "abs" | "absolute" => Ok(Transformation::Absolute),
            "sqrt" => Ok(Transformation::Sqrt),
            _ => match s.strip_prefix("exceedance:") {
                Some(t) => Transformation::exceedance(t.parse().map_err(|_| {
                    NciError::InvalidParameter(format!("bad exceedance threshold `{t}`"))
                })?),
                None => Err(NciError::InvalidParameter(format!(
                    "unknown transformation `{s}` (square, abs, sqrt, exceedance:<tau>)"
                ))),
            },
        }
    }
}

/// Transformed-data index on a graph already built from transformed signals.
/// The arithmetic is the baseline index; only the graph differs.
pub fn nci_transformed(w: &WeightVector, g_transformed: &BinaryGraph) -> Result<f64> {
    nci_baseline(w, g_transformed)
}

/// Transformed-data index where the observed data are link intensities:
/// `t` is applied to every linked pair's intensity (unlinked pairs stay 0) and
/// the result is scored like the weighted index.
pub fn nci_transformed_intensities(
    w: &WeightVector,
    m: &InteractionMatrix,
    t: Transformation,
) -> Result<f64> {
    let transformed = m.map(|x| if x > 0.0 { t.apply(x) } else { 0.0 })?;
    nci_weighted(w, &transformed)
}

/// Convex layer weights `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerWeights {
    alphas: Vec<f64>,
}

impl LayerWeights {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(NciError::InvalidParameter("at least one layer weight is required".into()));
        }
        if alphas.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(NciError::InvalidParameter(format!(
                "layer weights must be nonnegative, got {alphas:?}"
            )));
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(NciError::InvalidParameter(format!("layer weights sum to {sum}, not 1")));
        }
        Ok(LayerWeights { alphas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultilayerResult {
    /// `wᵀA^(α)w / (1 − HHI)` evaluated on the aggregated matrix.
    pub value: f64,
    /// Baseline index of each layer.
    pub layer_values: Vec<f64>,
    /// `Σ α_ℓ ψ_ℓ`.
    pub combination: f64,
}

/// Multi-layer index on `A^(α) = Σ α_ℓ A^(ℓ)`.
pub fn nci_multilayer(
    w: &WeightVector,
    layers: &[BinaryGraph],
    alphas: &LayerWeights,
) -> Result<MultilayerResult> {
    if layers.len() != alphas.len() {
        return Err(NciError::InvalidParameter(format!(
            "{} layers but {} layer weights",
            layers.len(),
            alphas.len()
        )));
    }
    let n = w.len();
    for (layer, g) in layers.iter().enumerate() {
        if g.node_count() != n {
            return Err(NciError::LayerMismatch { layer, expected: n, found: g.node_count() });
        }
    }
    let lambda = complete_benchmark(w)?;
    let aggregated = InteractionMatrix::from_upper_fn(n, |i, j| {
        layers
            .iter()
            .zip(alphas.alphas())
            .map(|(g, a)| if g.has_edge(i, j) { *a } else { 0.0 })
            .sum()
    })?;
    let value = aggregated.quadratic_form(w) / lambda;
    let layer_values: Vec<f64> = layers.iter().map(|g| g.quadratic_form(w) / lambda).collect();
    let combination = layer_values.iter().zip(alphas.alphas()).map(|(v, a)| v * a).sum();
    Ok(MultilayerResult { value, layer_values, combination })
}

/// The seven named members of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    Baseline,
    DensityAdjusted,
    NullModel,
    DegreeConstrained,
    Weighted,
    TransformedData,
    MultiLayer,
}

/// Which structural results a variant inherits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VariantProperties {
    pub weighted_average: bool,
    pub normalization: bool,
    pub assortative: bool,
    pub random_benchmark: bool,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Baseline,
        Variant::DensityAdjusted,
        Variant::NullModel,
        Variant::DegreeConstrained,
        Variant::Weighted,
        Variant::TransformedData,
        Variant::MultiLayer,
    ];

    pub fn column(&self) -> &'static str {
        match self {
            Variant::Baseline => "psi",
            Variant::DensityAdjusted => "psi_dens",
            Variant::NullModel => "psi_null",
            Variant::DegreeConstrained => "psi_deg",
            Variant::Weighted => "psi_weighted",
            Variant::TransformedData => "psi_transformed",
            Variant::MultiLayer => "psi_multilayer",
        }
    }

    /// Property matrix: weighted-average representation, complete-network
    /// normalization, assortative decomposition, `E[ψ] = p` under Erdős–Rényi.
    pub fn properties(&self) -> VariantProperties {
        let (weighted_average, normalization, assortative, random_benchmark) = match self {
            Variant::Baseline => (true, true, true, true),
            Variant::DensityAdjusted => (true, false, true, false),
            Variant::NullModel | Variant::DegreeConstrained => (true, false, false, false),
            Variant::Weighted | Variant::TransformedData | Variant::MultiLayer => {
                (true, true, false, false)
            }
        };
        VariantProperties { weighted_average, normalization, assortative, random_benchmark }
    }

    /// Whether the benchmark is the complete network `𝟙𝟙ᵀ − I`.
    pub fn uses_complete_benchmark(&self) -> bool {
        self.properties().normalization
    }

    pub fn value(&self, report: &crate::types::IndexReport) -> Option<f64> {
        match self {
            Variant::Baseline => Some(report.psi),
            Variant::DensityAdjusted => Some(report.psi_dens),
            Variant::NullModel => report.psi_null,
            Variant::DegreeConstrained => report.psi_deg,
            Variant::Weighted => report.psi_weighted,
            Variant::TransformedData => report.psi_transformed,
            Variant::MultiLayer => report.psi_multilayer,
        }
    }
}

/// Random symmetric zero-diagonal matrix with entries in `[0, scale)`.
pub fn random_interaction_matrix<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> InteractionMatrix {
    InteractionMatrix::from_upper_fn(n, |_, _| rng.gen::<f64>() * scale).expect("entries are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{omega_ref, scenario_core_periphery, scenario_peripheral};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn general_ratio_edge_cases() {
        let w = omega_ref();
        let b = InteractionMatrix::complete(10);
        assert_close(psi_general(&w, &b, &b).unwrap(), 1.0, 1e-15);
        let half = b.scaled(0.5).unwrap();
        assert_close(psi_general(&w, &half, &b).unwrap(), 0.5, 1e-15);
        let a = InteractionMatrix::from_graph(&scenario_core_periphery(10).unwrap());
        assert_close(psi_general(&w, &a, &b).unwrap(), 0.424 / 0.8242, 1e-12);

        let point = WeightVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            psi_general(&point, &InteractionMatrix::complete(3), &InteractionMatrix::complete(3)),
            Err(NciError::DegenerateBenchmark { .. })
        ));
    }

    #[test]
    fn baseline_scenario_one() {
        // Core clique {1..4} and clusters {5,6,7}, {8,9,10}: Σ_{edges} wᵢwⱼ = 0.212.
        let g = scenario_core_periphery(10).unwrap();
        let psi = nci_baseline(&omega_ref(), &g).unwrap();
        assert_close(psi, 0.424 / 0.8242, 1e-12);
        assert_close(psi, 0.5144, 5e-5);
    }

    #[test]
    fn baseline_limits() {
        let w = omega_ref();
        assert_close(nci_baseline(&w, &BinaryGraph::complete(10)).unwrap(), 1.0, 1e-12);
        assert_eq!(nci_baseline(&w, &BinaryGraph::empty(10)).unwrap(), 0.0);
        let uniform = WeightVector::uniform(10).unwrap();
        let g = scenario_core_periphery(10).unwrap();
        assert_close(nci_baseline(&uniform, &g).unwrap(), density(&g), 1e-12);
        let point = WeightVector::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            nci_baseline(&point, &BinaryGraph::complete(2)),
            Err(NciError::DegenerateBenchmark { .. })
        ));
        assert!(matches!(
            nci_baseline(&w, &BinaryGraph::complete(4)),
            Err(NciError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_adjusted_values() {
        let w = omega_ref();
        let core = scenario_core_periphery(10).unwrap();
        assert_close(nci_density_adjusted(&w, &core).unwrap(), 1.929, 0.002);
        let uniform = WeightVector::uniform(10).unwrap();
        assert_close(nci_density_adjusted(&uniform, &core).unwrap(), 1.0, 1e-12);
        assert_eq!(nci_density_adjusted(&w, &BinaryGraph::empty(10)), Err(NciError::EmptyGraph));
        // Deterministic peripheral edge set: Σ_{edges} wᵢwⱼ = 0.0142, frozen.
        let peripheral = scenario_peripheral(10).unwrap();
        assert_close(nci_baseline(&w, &peripheral).unwrap(), 0.0284 / 0.8242, 1e-12);
    }

    #[test]
    fn null_model_matches_expectation() {
        let w = WeightVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        // wᵀAw for the single edge {0,1} is 0.3; with p chosen so p(1 − HHI) = 0.3.
        let g = BinaryGraph::from_edges(3, [(0, 1)]).unwrap();
        let lambda = 1.0 - hhi(&w);
        let p = 0.3 / lambda;
        let r = nci_null_model(&w, &g, p).unwrap();
        assert_close(r.psi_null, 1.0, 1e-12);
        assert_close(r.z.unwrap(), 0.0, 1e-12);
        assert_eq!(nci_null_model(&w, &g, 0.0), Err(NciError::InvalidProbability(0.0)));
        assert_eq!(nci_null_model(&w, &g, 1.0), Err(NciError::InvalidProbability(1.0)));
    }

    #[test]
    fn null_model_is_psi_over_p() {
        let mut rng = crate::rng::seeded(11);
        for _ in 0..200 {
            let w = crate::netgen::sample_simplex_with(8, &mut rng);
            let g = crate::netgen::erdos_renyi_with(8, 0.4, &mut rng);
            let p = rng.gen_range(0.01..0.99);
            let Ok(psi) = nci_baseline(&w, &g) else { continue };
            let direct = g.quadratic_form(&w) / (p * (1.0 - hhi(&w)));
            let r = nci_null_model(&w, &g, p).unwrap();
            assert_close(r.psi_null, psi / p, 1e-12);
            assert_close(r.psi_null, direct, 1e-12);
        }
    }

    #[test]
    fn erdos_renyi_variance_matches_simulation() {
        let w = omega_ref();
        let p = 0.3;
        let mut rng = crate::rng::seeded(5);
        let draws: Vec<f64> = (0..40_000)
            .map(|_| crate::netgen::erdos_renyi_with(10, p, &mut rng).quadratic_form(&w))
            .collect();
        let sd = crate::stats::std_dev(&draws);
        let var = sd * sd;
        let exact = erdos_renyi_variance(&w, p);
        // Relative SE of a sample variance is about sqrt(2/n) plus kurtosis; 5% is > 3 SE here.
        assert!((var - exact).abs() / exact < 0.05, "{var} vs {exact}");
        let mean = crate::stats::mean(&draws);
        let se = sd / (draws.len() as f64).sqrt();
        assert!((mean - p * (1.0 - hhi(&w))).abs() < 3.0 * se);
    }

    #[test]
    fn simulated_null_models_agree_with_closed_forms() {
        let w = omega_ref();
        let g = scenario_core_periphery(10).unwrap();
        // Uniform graphs with m edges: every pair is linked with probability m / C(N,2).
        let model = NullModel::DensityPreserving { replications: 4000, seed: 3 };
        let r = nci_null(&w, &g, &model).unwrap();
        let exact = (12.0 / 45.0) * (1.0 - hhi(&w));
        let se = (r.variance / 4000.0).sqrt();
        assert!((r.expected - exact).abs() < 3.0 * se, "{} vs {exact}", r.expected);
        assert!(r.z.unwrap() > 0.0);

        let deg = nci_null(&w, &g, &NullModel::DegreePreserving { replications: 500, seed: 3 }).unwrap();
        assert!(deg.expected > 0.0 && deg.psi_null > 0.0);
        let again = nci_null(&w, &g, &NullModel::DegreePreserving { replications: 500, seed: 3 }).unwrap();
        assert_eq!(deg, again);
        assert!(nci_null(&w, &g, &NullModel::DensityPreserving { replications: 1, seed: 0 }).is_err());
    }

    #[test]
    fn weighted_index() {
        let w = omega_ref();
        assert_close(nci_weighted(&w, &InteractionMatrix::complete(10)).unwrap(), 1.0, 1e-12);
        let g = scenario_core_periphery(10).unwrap();
        let doubled = InteractionMatrix::from_graph(&g).scaled(2.0).unwrap();
        assert_close(nci_weighted(&w, &doubled).unwrap(), 2.0 * nci_baseline(&w, &g).unwrap(), 1e-12);
    }

    #[test]
    fn transformed_index() {
        let w = omega_ref();
        let g = scenario_core_periphery(10).unwrap();
        assert_eq!(nci_transformed(&w, &g).unwrap(), nci_baseline(&w, &g).unwrap());
        assert_eq!(nci_transformed(&w, &BinaryGraph::empty(10)).unwrap(), 0.0);

        let m = InteractionMatrix::from_graph(&g).scaled(0.25).unwrap();
        let sqrt = nci_transformed_intensities(&w, &m, Transformation::Sqrt).unwrap();
        assert_close(sqrt, 0.5 * nci_baseline(&w, &g).unwrap(), 1e-12);
        // Exceedance below every intensity recovers the binary graph; unlinked pairs stay unlinked.
        let exceed = nci_transformed_intensities(&w, &m, Transformation::Exceedance(-1.0)).unwrap();
        assert_close(exceed, nci_baseline(&w, &g).unwrap(), 1e-12);
    }

    #[test]
    fn transformation_parsing_and_values() {
        let xs = [-1.0, 2.0, -3.0];
        let sq: Vec<f64> = xs.iter().map(|&x| Transformation::Square.apply(x)).collect();
        assert_eq!(sq, vec![1.0, 4.0, 9.0]);
        let ex: Vec<f64> = xs.iter().map(|&x| Transformation::Exceedance(0.0).apply(x)).collect();
        assert_eq!(ex, vec![0.0, 1.0, 0.0]);
        assert_eq!("sqrt".parse::<Transformation>().unwrap(), Transformation::Sqrt);
        assert_eq!("exceedance:0.5".parse::<Transformation>().unwrap(), Transformation::Exceedance(0.5));
        assert!("exceedance:inf".parse::<Transformation>().is_err());
        assert!("cube".parse::<Transformation>().is_err());
        assert!(Transformation::exceedance(f64::NAN).is_err());
    }

    #[test]
    fn multilayer_cases() {
        let w = omega_ref();
        let core = scenario_core_periphery(10).unwrap();
        let one = LayerWeights::new(vec![1.0]).unwrap();
        let r = nci_multilayer(&w, std::slice::from_ref(&core), &one).unwrap();
        assert_close(r.value, nci_baseline(&w, &core).unwrap(), 1e-12);

        let two = LayerWeights::new(vec![0.6, 0.4]).unwrap();
        let r = nci_multilayer(&w, &[core.clone(), core.clone()], &two).unwrap();
        assert_close(r.value, nci_baseline(&w, &core).unwrap(), 1e-12);
        assert_close(r.value, r.combination, 1e-12);

        let err = nci_multilayer(&w, &[core.clone(), BinaryGraph::empty(9)], &two).unwrap_err();
        assert_eq!(err, NciError::LayerMismatch { layer: 1, expected: 10, found: 9 });
        assert!(nci_multilayer(&w, &[core], &two).is_err());
        assert!(LayerWeights::new(vec![0.5, 0.6]).is_err());
        assert!(LayerWeights::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn property_matrix() {
        use Variant::*;
        let holds = |v: Variant| {
            let p = v.properties();
            [p.weighted_average, p.normalization, p.assortative, p.random_benchmark]
        };
        assert_eq!(holds(Baseline), [true, true, true, true]);
        assert_eq!(holds(DensityAdjusted), [true, false, true, false]);
        assert_eq!(holds(NullModel), [true, false, false, false]);
        assert_eq!(holds(DegreeConstrained), [true, false, false, false]);
        for v in [Weighted, TransformedData, MultiLayer] {
            assert_eq!(holds(v), [true, true, false, false]);
        }
        assert!(Variant::ALL.iter().all(|v| v.properties().weighted_average));
    }
}
