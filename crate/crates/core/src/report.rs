//! One-call assembly of an [`IndexReport`] from a weight vector, a network
//! and the optional inputs the extra variants need.

use crate::degree_solver::{degree_constrained, SolverMode, DEFAULT_NODE_LIMIT};
use crate::error::{NciError, Result};
use crate::indices::{
    nci_baseline, nci_density_adjusted, nci_multilayer, nci_null, nci_transformed, nci_transformed_intensities,
    nci_weighted, LayerWeights, NullModel, Transformation,
};
use crate::measures::{density, gini, hhi};
use crate::types::{BinaryGraph, IndexReport, InteractionMatrix, WeightVector};

/// Optional variants. Anything left `None` is reported as missing.
#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub null_model: Option<NullModel>,
    pub degree_mode: Option<SolverMode>,
    pub node_limit: Option<usize>,
    /// Link intensities for the weighted index.
    pub intensities: Option<InteractionMatrix>,
    /// Applied to the intensities when present, otherwise requires `transformed_graph`.
    pub transformation: Option<Transformation>,
    /// Graph built from transformed observations.
    pub transformed_graph: Option<BinaryGraph>,
    pub layers: Option<(Vec<BinaryGraph>, LayerWeights)>,
}

/// What to do when a denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degenerate {
    /// Return the error.
    Raise,
    /// Report 0 for the affected index and record a warning.
    Zero,
}

fn is_degenerate(e: &NciError) -> bool {
    matches!(e, NciError::DegenerateBenchmark { .. } | NciError::EmptyGraph)
}

fn settle(name: &str, r: Result<f64>, policy: Degenerate, warnings: &mut Vec<String>) -> Result<f64> {
    match r {
        Err(e) if policy == Degenerate::Zero && is_degenerate(&e) => {
            warnings.push(format!("{name}: {e}; reported as 0"));
            Ok(0.0)
        }
        other => other,
    }
}

/// Computes every requested index; returns the report and any warnings.
pub fn build_report(
    w: &WeightVector,
    g: &BinaryGraph,
    opts: &ReportOptions,
    policy: Degenerate,
) -> Result<(IndexReport, Vec<String>)> {
    let mut warnings = Vec::new();
    let psi = settle("psi", nci_baseline(w, g), policy, &mut warnings)?;
    let psi_dens = settle("psi_dens", nci_density_adjusted(w, g), policy, &mut warnings)?;

    let (psi_null, z_null) = match &opts.null_model {
        Some(model) => match nci_null(w, g, model) {
            Ok(r) => (Some(r.psi_null), r.z),
            Err(e) if policy == Degenerate::Zero && is_degenerate(&e) => {
                warnings.push(format!("psi_null: {e}; reported as 0"));
                (Some(0.0), None)
            }
            Err(e) => return Err(e),
        },
        None => (None, None),
    };

    let psi_deg = match opts.degree_mode {
        Some(mode) => {
            let limit = opts.node_limit.unwrap_or(DEFAULT_NODE_LIMIT);
            let r = degree_constrained(w, g, mode, limit).map(|d| d.psi_deg);
            Some(settle("psi_deg", r, policy, &mut warnings)?)
        }
        None => None,
    };

    let psi_weighted = match &opts.intensities {
        Some(m) => Some(settle("psi_weighted", nci_weighted(w, m), policy, &mut warnings)?),
        None => None,
    };

    let psi_transformed = match (&opts.transformed_graph, opts.transformation, &opts.intensities) {
        (Some(gt), _, _) => Some(settle("psi_transformed", nci_transformed(w, gt), policy, &mut warnings)?),
        (None, Some(t), Some(m)) => {
            Some(settle("psi_transformed", nci_transformed_intensities(w, m, t), policy, &mut warnings)?)
        }
        (None, Some(_), None) => {
            return Err(NciError::InvalidParameter(
                "a transformation needs link intensities or a transformed graph".into(),
            ))
        }
        _ => None,
    };

    let psi_multilayer = match &opts.layers {
        Some((layers, alphas)) => {
            let r = nci_multilayer(w, layers, alphas).map(|m| m.value);
            Some(settle("psi_multilayer", r, policy, &mut warnings)?)
        }
        None => None,
    };

    let report = IndexReport {
        hhi: hhi(w),
        gini: gini(w),
        density: density(g),
        psi,
        psi_dens,
        psi_null,
        z_null,
        psi_deg,
        psi_weighted,
        psi_transformed,
        psi_multilayer,
    };
    Ok((report, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{omega_ref, scenario_core_periphery};

    #[test]
    fn baseline_only() {
        let (r, warnings) =
            build_report(&omega_ref(), &scenario_core_periphery(10).unwrap(), &ReportOptions::default(), Degenerate::Raise)
                .unwrap();
        assert!((r.psi - 0.514_44).abs() < 1e-4);
        assert!((r.psi_dens - 1.929).abs() < 2e-3);
        assert!(r.psi_null.is_none() && r.psi_deg.is_none() && r.psi_multilayer.is_none());
        assert!(warnings.is_empty());
    }

    #[test]
    fn all_variants() {
        let w = omega_ref();
        let g = scenario_core_periphery(10).unwrap();
        let m = InteractionMatrix::from_graph(&g).scaled(0.5).unwrap();
        let opts = ReportOptions {
            null_model: Some(NullModel::ErdosRenyi { p: 0.267 }),
            degree_mode: Some(SolverMode::Exact),
            node_limit: Some(10),
            intensities: Some(m),
            transformation: Some(Transformation::Square),
            transformed_graph: None,
            layers: Some((vec![g.clone(), g.clone()], LayerWeights::new(vec![0.5, 0.5]).unwrap())),
        };
        let (r, _) = build_report(&w, &g, &opts, Degenerate::Raise).unwrap();
        assert!((r.psi_null.unwrap() - r.psi / 0.267).abs() < 1e-12);
        assert!((r.psi_deg.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.psi_weighted.unwrap() - 0.5 * r.psi).abs() < 1e-12);
        assert!((r.psi_transformed.unwrap() - 0.25 * r.psi).abs() < 1e-12);
        assert!((r.psi_multilayer.unwrap() - r.psi).abs() < 1e-12);
    }

    #[test]
    fn degenerate_policy() {
        let w = WeightVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        let g = BinaryGraph::complete(3);
        assert!(matches!(
            build_report(&w, &g, &ReportOptions::default(), Degenerate::Raise),
            Err(NciError::DegenerateBenchmark { .. })
        ));
        let (r, warnings) = build_report(&w, &g, &ReportOptions::default(), Degenerate::Zero).unwrap();
        assert_eq!((r.psi, r.psi_dens), (0.0, 0.0));
        assert_eq!(warnings.len(), 2);

        let empty = BinaryGraph::empty(3);
        let (r, warnings) =
            build_report(&WeightVector::uniform(3).unwrap(), &empty, &ReportOptions::default(), Degenerate::Zero)
                .unwrap();
        assert_eq!(r.psi, 0.0);
        assert_eq!(r.psi_dens, 0.0);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn transformation_without_data_is_rejected() {
        let opts = ReportOptions { transformation: Some(Transformation::Sqrt), ..Default::default() };
        assert!(build_report(&omega_ref(), &BinaryGraph::complete(10), &opts, Degenerate::Raise).is_err());
    }
}
