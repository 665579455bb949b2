//! Simulation experiments: the fixed-weight and joint Monte Carlo designs on
//! the ten-node scenarios, the Erdős–Rényi benchmark grid, threshold sweeps
//! and the rolling-window bootstrap.
//!
//! Every replication draws from its own seeded stream, so results do not
//! depend on the number of threads; aggregation follows replication order.

use chrono::NaiveDate;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::degree_solver::{degree_constrained, SolverMode, DEFAULT_NODE_LIMIT};
use crate::error::{NciError, Result};
use crate::indices::{
    nci_baseline, nci_density_adjusted, nci_multilayer, nci_null_model, nci_transformed_intensities, nci_weighted,
    LayerWeights, MultilayerResult, Transformation, Variant,
};
use crate::measures::{density, gini, hhi};
use crate::netbuild::{correlation_mst, correlation_of_rows, mst, DistanceMatrix, Panel};
use crate::netgen::{erdos_renyi_with, omega_ref, sample_simplex_with, ScenarioKind, SCENARIO_NODES, SCENARIO_P};
use crate::rng::{derive_seed, seeded, StreamRng};
use crate::stats::{pearson, quantile_sorted, Summary};
use crate::types::{BinaryGraph, IndexReport, InteractionMatrix, WeightVector};

pub const FIXED_REPLICATIONS: usize = 5000;
pub const JOINT_REPLICATIONS: usize = 800;
pub const ER_REPLICATIONS: usize = 5000;
/// Runs abort when more than this fraction of replications fails.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

/// Link intensities in the simulated networks are uniform on this range.
pub const INTENSITY_RANGE: (f64, f64) = (0.4, 1.0);
/// Links with intensity above this value form the strong-tie layer.
pub const STRONG_TIE_THRESHOLD: f64 = 0.7;
/// Weights of the (all links, strong ties) layers.
pub const LAYER_ALPHAS: [f64; 2] = [0.6, 0.4];
/// Transformation applied to intensities for the transformed-data index.
pub const SIMULATION_TRANSFORM: Transformation = Transformation::Sqrt;

pub const ROLLING_WINDOW: usize = 252;
pub const ROLLING_STEP: usize = 63;
pub const BOOTSTRAP_RESAMPLES: usize = 500;

const TAG_FIXED: u64 = 1;
const TAG_JOINT: u64 = 2;
const TAG_ER: u64 = 3;
const TAG_WEIGHTS: u64 = 0xFFFF;

/// `p ∈ {0.05, 0.10, …, 0.95}`.
pub fn default_p_grid() -> Vec<f64> {
    (1..=19).map(|k| k as f64 / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    /// Seed of this replication's own generator; rerunning the replication
    /// with it reproduces the record.
    pub seed: u64,
    pub scenario: ScenarioKind,
    pub hhi: f64,
    /// `None` when the replication failed.
    pub report: Option<IndexReport>,
    pub multilayer: Option<MultilayerResult>,
    pub failure: Option<String>,
}

impl ReplicationRecord {
    pub fn failed(&self) -> bool {
        self.report.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub scenario: ScenarioKind,
    pub variant: Variant,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    /// Grouped by mechanism in [`ScenarioKind::ALL`] order, then by replication.
    pub records: Vec<ReplicationRecord>,
    pub failed: usize,
}

impl Experiment {
    pub fn failure_fraction(&self) -> f64 {
        if self.records.is_empty() {
            0.0
        } else {
            self.failed as f64 / self.records.len() as f64
        }
    }

    /// Values of `variant` over the successful replications of `scenario`
    /// (all mechanisms when `None`).
    pub fn values(&self, scenario: Option<ScenarioKind>, variant: Variant) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| scenario.is_none_or(|s| r.scenario == s))
            .filter_map(|r| r.report.as_ref().and_then(|rep| variant.value(rep)))
            .collect()
    }

    /// Mean, spread and quantiles of every variant per mechanism.
    pub fn summaries(&self) -> Vec<VariantSummary> {
        let mut out = Vec::new();
        for scenario in ScenarioKind::ALL {
            for variant in Variant::ALL {
                let xs = self.values(Some(scenario), variant);
                if !xs.is_empty() {
                    out.push(VariantSummary { scenario, variant, summary: Summary::of(&xs) });
                }
            }
        }
        out
    }

    /// Pearson correlations between variants over the successful replications
    /// of all mechanisms pooled, in [`Variant::ALL`] order.
    pub fn correlation_matrix(&self) -> Vec<Vec<f64>> {
        let ok: Vec<&IndexReport> = self.records.iter().filter_map(|r| r.report.as_ref()).collect();
        let cols: Vec<Vec<f64>> = Variant::ALL
            .iter()
            .map(|v| ok.iter().map(|rep| v.value(rep).unwrap_or(f64::NAN)).collect())
            .collect();
        cols.iter().map(|a| cols.iter().map(|b| pearson(a, b)).collect()).collect()
    }
}

/// Intensities on the links of `g`, uniform on [`INTENSITY_RANGE`], drawn
/// pair by pair in lexicographic order.
pub fn random_intensities<R: Rng + ?Sized>(g: &BinaryGraph, rng: &mut R) -> InteractionMatrix {
    let (lo, hi) = INTENSITY_RANGE;
    let draws: Vec<((usize, usize), f64)> = g.edges().map(|e| (e, rng.gen_range(lo..hi))).collect();
    let mut k = 0;
    InteractionMatrix::from_upper_fn(g.node_count(), |i, j| {
        if k < draws.len() && draws[k].0 == (i, j) {
            k += 1;
            draws[k - 1].1
        } else {
            0.0
        }
    })
    .expect("intensities are finite")
}

/// Every variant of the family for one simulated network.
///
/// Intensities are drawn on the links, the transformed-data index applies
/// [`SIMULATION_TRANSFORM`] to them, the multi-layer index combines the graph
/// with its strong-tie layer, the null model is Erdős–Rényi with the scenario
/// probability and the degree benchmark comes from greedy search with rewiring.
pub fn evaluate_all(w: &WeightVector, g: &BinaryGraph, rng: &mut StreamRng) -> Result<(IndexReport, MultilayerResult)> {
    let intensities = random_intensities(g, rng);
    let strong = BinaryGraph::from_edges(
        g.node_count(),
        g.edges().filter(|&(i, j)| intensities.get(i, j) > STRONG_TIE_THRESHOLD),
    )?;
    let alphas = LayerWeights::new(LAYER_ALPHAS.to_vec())?;
    let multilayer = nci_multilayer(w, &[g.clone(), strong], &alphas)?;
    let null = nci_null_model(w, g, SCENARIO_P)?;
    let deg = degree_constrained(w, g, SolverMode::GreedyRewire, DEFAULT_NODE_LIMIT)?;
    let report = IndexReport {
        hhi: hhi(w),
        gini: gini(w),
        density: density(g),
        psi: nci_baseline(w, g)?,
        psi_dens: nci_density_adjusted(w, g)?,
        psi_null: Some(null.psi_null),
        z_null: null.z,
        psi_deg: Some(deg.psi_deg),
        psi_weighted: Some(nci_weighted(w, &intensities)?),
        psi_transformed: Some(nci_transformed_intensities(w, &intensities, SIMULATION_TRANSFORM)?),
        psi_multilayer: Some(multilayer.value),
    };
    Ok((report, multilayer))
}

fn record(replication: usize, seed: u64, scenario: ScenarioKind, w: &WeightVector) -> ReplicationRecord {
    let mut rng = seeded(seed);
    let g = scenario.sample(&mut rng);
    let (report, multilayer, failure) = match evaluate_all(w, &g, &mut rng) {
        Ok((rep, ml)) => (Some(rep), Some(ml), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    ReplicationRecord { replication, seed, scenario, hhi: hhi(w), report, multilayer, failure }
}

fn check_failures(records: Vec<ReplicationRecord>) -> Result<Experiment> {
    let failed = records.iter().filter(|r| r.failed()).count();
    let total = records.len();
    if failed as f64 > MAX_FAILURE_FRACTION * total as f64 {
        return Err(NciError::TooManyFailures { failed, total });
    }
    if failed > 0 {
        log::info!("{failed} of {total} replications failed and are excluded");
    }
    Ok(Experiment { records, failed })
}

fn require_replications(r: usize) -> Result<()> {
    if r == 0 {
        return Err(NciError::InvalidParameter("need at least one replication".into()));
    }
    Ok(())
}

/// Weights fixed at the reference vector; `r` random networks per mechanism.
pub fn experiment_fixed_weights(r: usize, seed: u64) -> Result<Experiment> {
    require_replications(r)?;
    let w = omega_ref();
    let records = ScenarioKind::ALL
        .iter()
        .flat_map(|&kind| (0..r).map(move |k| (kind, k)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(kind, k)| record(k, derive_seed(seed, &[TAG_FIXED, kind.stream_tag(), k as u64]), kind, &w))
        .collect();
    check_failures(records)
}

/// A fresh simplex-uniform weight vector per replication, shared by the
/// three mechanisms, each of which draws its own network.
pub fn experiment_joint(r: usize, seed: u64) -> Result<Experiment> {
    require_replications(r)?;
    let weights: Vec<WeightVector> = (0..r)
        .into_par_iter()
        .map(|k| sample_simplex_with(SCENARIO_NODES, &mut seeded(derive_seed(seed, &[TAG_JOINT, TAG_WEIGHTS, k as u64]))))
        .collect();
    let records = ScenarioKind::ALL
        .iter()
        .flat_map(|&kind| (0..r).map(move |k| (kind, k)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(kind, k)| record(k, derive_seed(seed, &[TAG_JOINT, kind.stream_tag(), k as u64]), kind, &weights[k]))
        .collect();
    check_failures(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErValidationRow {
    pub p: f64,
    pub mean_psi: f64,
    pub sd: f64,
    pub se: f64,
    /// `mean_psi − p`.
    pub deviation: f64,
}

/// Mean baseline index over `r` Erdős–Rényi(`p`) graphs with reference weights.
pub fn validate_er_benchmark(p_grid: &[f64], r: usize, seed: u64) -> Result<Vec<ErValidationRow>> {
    require_replications(r)?;
    if let Some(&p) = p_grid.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return Err(NciError::InvalidProbability(p));
    }
    let w = omega_ref();
    p_grid
        .iter()
        .enumerate()
        .map(|(gi, &p)| {
            let psis: Vec<f64> = (0..r)
                .into_par_iter()
                .map(|k| {
                    let mut rng = seeded(derive_seed(seed, &[TAG_ER, gi as u64, k as u64]));
                    nci_baseline(&w, &erdos_renyi_with(SCENARIO_NODES, p, &mut rng))
                })
                .collect::<Result<_>>()?;
            let s = Summary::of(&psis);
            Ok(ErValidationRow { p, mean_psi: s.mean, sd: s.sd, se: s.se, deviation: s.mean - p })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub edges: usize,
    pub nci: f64,
    pub hhi: f64,
    pub gini: f64,
}

/// Baseline index of the thresholded network at each `θ` (ascending).
pub fn theta_sweep(m: &InteractionMatrix, w: &WeightVector, thetas: &[f64]) -> Result<Vec<SweepRow>> {
    if m.node_count() != w.len() {
        return Err(NciError::DimensionMismatch { expected: w.len(), found: m.node_count() });
    }
    if thetas.windows(2).any(|p| p[0].is_nan() || p[1].is_nan() || p[0] > p[1]) {
        return Err(NciError::InvalidParameter("theta grid must be sorted ascending".into()));
    }
    let (h, gi) = (hhi(w), gini(w));
    thetas
        .par_iter()
        .map(|&theta| {
            let g = crate::netbuild::threshold_graph(m, theta)?;
            Ok(SweepRow { theta, edges: g.edge_count(), nci: nci_baseline(w, &g)?, hhi: h, gini: gi })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RollingResult {
    pub window_start: NaiveDate,
    pub window_end: NaiveDate,
    pub nci: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub hhi: f64,
    pub gini: f64,
    /// False when the percentile interval excludes the point estimate.
    pub covers_estimate: bool,
    /// Resamples whose correlation matrix was undefined (a constant column).
    pub failed_resamples: usize,
}

/// Windows `[start, start + window)` for `start = 0, step, …` that fit in `t` rows.
pub fn window_starts(t: usize, window: usize, step: usize) -> Vec<usize> {
    if window > t || step == 0 {
        return Vec::new();
    }
    (0..=(t - window)).step_by(step).collect()
}

/// Index of the correlation MST of each window, with a percentile 95%
/// interval from `b` resamples of the window's rows drawn with replacement.
pub fn rolling_nci(
    panel: &Panel,
    w: &WeightVector,
    window: usize,
    step: usize,
    b: usize,
    seed: u64,
) -> Result<Vec<RollingResult>> {
    if w.len() != panel.cols() {
        return Err(NciError::DimensionMismatch { expected: panel.cols(), found: w.len() });
    }
    if window > panel.rows() {
        return Err(NciError::InsufficientData { needed: window, available: panel.rows() });
    }
    if step == 0 || b == 0 {
        return Err(NciError::InvalidParameter("step and resample count must be positive".into()));
    }
    let (h, gi) = (hhi(w), gini(w));
    window_starts(panel.rows(), window, step)
        .into_par_iter()
        .enumerate()
        .map(|(k, start)| {
            let sub = panel.window(start, start + window);
            let nci = nci_baseline(w, &correlation_mst(&sub)?)?;
            let mut rng = crate::rng::stream(seed, k as u64);
            let mut values = Vec::with_capacity(b);
            let mut failed_resamples = 0;
            let mut rows = vec![0; window];
            for _ in 0..b {
                for r in rows.iter_mut() {
                    *r = rng.gen_range(0..window);
                }
                let tree = correlation_of_rows(&sub, &rows)
                    .and_then(|c| DistanceMatrix::from_correlation(&c))
                    .and_then(|d| mst(&d));
                match tree {
                    Ok(tree) => values.push(nci_baseline(w, &tree)?),
                    Err(NciError::ZeroVariance(_)) => failed_resamples += 1,
                    Err(e) => return Err(e),
                }
            }
            if values.is_empty() {
                return Err(NciError::TooManyFailures { failed: failed_resamples, total: b });
            }
            values.sort_by(f64::total_cmp);
            let ci_low = quantile_sorted(&values, 0.025);
            let ci_high = quantile_sorted(&values, 0.975);
            Ok(RollingResult {
                window_start: sub.dates()[0],
                window_end: sub.dates()[window - 1],
                nci,
                ci_low,
                ci_high,
                hhi: h,
                gini: gi,
                covers_estimate: ci_low <= nci && nci <= ci_high,
                failed_resamples,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::factor_returns;

    #[test]
    fn fixed_experiment_shape_and_determinism() {
        let a = experiment_fixed_weights(1, 9).unwrap();
        assert_eq!(a.records.len(), 3);
        for (rec, kind) in a.records.iter().zip(ScenarioKind::ALL) {
            assert_eq!(rec.scenario, kind);
        }
        assert_eq!(a, experiment_fixed_weights(1, 9).unwrap());
        assert_ne!(a, experiment_fixed_weights(1, 10).unwrap());
    }

    #[test]
    fn fixed_random_mechanism_centres_on_p() {
        // With ω fixed, E[ψ] over ER draws is p exactly.
        let e = experiment_fixed_weights(2000, 4).unwrap();
        let s = Summary::of(&e.values(Some(ScenarioKind::Random), Variant::Baseline));
        assert!((s.mean - SCENARIO_P).abs() < 3.0 * s.se, "{} ± {}", s.mean, s.se);
        let cp = Summary::of(&e.values(Some(ScenarioKind::CorePeriphery), Variant::Baseline));
        assert!(cp.mean > 0.45 && cp.sd < 0.05, "{cp:?}");
    }

    #[test]
    fn record_seed_reproduces_replication() {
        let e = experiment_fixed_weights(5, 3).unwrap();
        let rec = &e.records[7];
        assert_eq!(&record(rec.replication, rec.seed, rec.scenario, &omega_ref()), rec);
    }

    #[test]
    fn multilayer_identity_holds_in_records() {
        let e = experiment_joint(30, 5).unwrap();
        for ml in e.records.iter().filter_map(|r| r.multilayer.as_ref()) {
            assert!((ml.value - ml.combination).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_shares_weights_across_mechanisms() {
        let e = experiment_joint(4, 1).unwrap();
        assert_eq!(e.records.len(), 12);
        for k in 0..4 {
            let hs: Vec<f64> = e.records.iter().filter(|r| r.replication == k).map(|r| r.hhi).collect();
            assert!(hs.iter().all(|&h| h == hs[0]));
        }
        assert_eq!(e, experiment_joint(4, 1).unwrap());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| experiment_joint(20, 77).unwrap());
        assert_eq!(serial, experiment_joint(20, 77).unwrap());
    }

    #[test]
    fn er_validation_limits() {
        let rows = validate_er_benchmark(&[1.0 - 1e-9], 1, 0).unwrap();
        assert!((rows[0].mean_psi - 1.0).abs() < 1e-12);
        assert!(validate_er_benchmark(&[0.0], 1, 0).is_err());
        assert_eq!(default_p_grid().len(), 19);
    }

    #[test]
    fn sweep_hand_computed() {
        let w = WeightVector::new(vec![0.4, 0.3, 0.2, 0.05, 0.05]).unwrap();
        let entries = [(0, 1, 0.9), (0, 2, 0.5), (1, 2, 0.3), (2, 3, 0.2), (3, 4, 0.1)];
        let m = InteractionMatrix::from_upper_fn(5, |i, j| {
            entries.iter().find(|e| (e.0, e.1) == (i, j)).map_or(0.0, |e| e.2)
        })
        .unwrap();
        // Direct quadratic forms: 1 − HHI = 1 − (.16 + .09 + .04 + .0025 + .0025) = 0.705.
        let lambda = 0.705;
        let expected = [
            (0.25, 2.0 * (0.12 + 0.08 + 0.06) / lambda),
            (0.4, 2.0 * (0.12 + 0.08) / lambda),
            (0.6, 2.0 * 0.12 / lambda),
        ];
        let rows = theta_sweep(&m, &w, &expected.map(|e| e.0)).unwrap();
        for (row, (_, v)) in rows.iter().zip(expected) {
            assert!((row.nci - v).abs() < 1e-12);
        }
        let rows = theta_sweep(&m, &w, &[0.0, 1.0]).unwrap();
        assert_eq!(rows[1].nci, 0.0);
        assert!(theta_sweep(&m, &w, &[0.5, 0.1]).is_err());

        let positive = InteractionMatrix::from_upper_fn(5, |i, j| 0.1 + (i * j) as f64).unwrap();
        assert!((theta_sweep(&positive, &w, &[0.0]).unwrap()[0].nci - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rolling_windows() {
        let panel = factor_returns(300, 6, 0.5, 2);
        let w = WeightVector::uniform(6).unwrap();
        let one = rolling_nci(&panel, &w, 300, 17, 50, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].ci_low <= one[0].ci_high);
        let many = rolling_nci(&panel, &w, 100, 50, 40, 1).unwrap();
        assert_eq!(many.len(), 5);
        assert!(many.iter().all(|r| r.hhi == many[0].hhi && r.gini == many[0].gini));
        assert_eq!(many, rolling_nci(&panel, &w, 100, 50, 40, 1).unwrap());
        assert!(matches!(
            rolling_nci(&panel, &w, 301, 10, 10, 1),
            Err(NciError::InsufficientData { needed: 301, available: 300 })
        ));
    }

    #[test]
    fn duplicated_assets_stay_adjacent() {
        let base = factor_returns(260, 5, 0.3, 8);
        let rows: Vec<Vec<f64>> = (0..base.rows())
            .map(|t| {
                let mut r = base.row(t).to_vec();
                r.push(r[0]);
                r
            })
            .collect();
        let panel = Panel::from_rows(rows).unwrap();
        for start in window_starts(panel.rows(), 120, 20) {
            let tree = correlation_mst(&panel.window(start, start + 120)).unwrap();
            assert!(tree.has_edge(0, 5));
        }
    }
}
