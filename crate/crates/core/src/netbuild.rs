//! Building analysis networks from raw data: thresholded symmetrized
//! coefficient matrices, and minimum spanning trees of correlation distances.

use chrono::NaiveDate;

use crate::error::{NciError, Result};
use crate::indices::Transformation;
use crate::types::{BinaryGraph, InteractionMatrix};

/// Directed coefficients `a_hk` (flow from `h` to `k` over the output of `k`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    labels: Vec<String>,
    n: usize,
    data: Vec<f64>,
}

impl CoefficientMatrix {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if labels.len() != n {
            return Err(NciError::NonSquare { rows: n, cols: labels.len() });
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(NciError::NonSquare { rows: n, cols: row.len() });
            }
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(NciError::InvalidEntry { row: i, col: j, value: v });
                }
                data.push(v);
            }
        }
        Ok(CoefficientMatrix { labels, n, data })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, h: usize, k: usize) -> f64 {
        self.data[h * self.n + k]
    }
}

/// `ã_hk = (a_hk + a_kh) / 2`, with the diagonal dropped.
pub fn symmetrize(c: &CoefficientMatrix) -> InteractionMatrix {
    InteractionMatrix::from_upper_fn(c.n, |h, k| 0.5 * (c.get(h, k) + c.get(k, h)))
        .expect("coefficients are finite and nonnegative")
}

/// Links every pair whose entry is strictly above `theta`.
pub fn threshold_graph(m: &InteractionMatrix, theta: f64) -> Result<BinaryGraph> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(NciError::InvalidParameter(format!("threshold must be finite and >= 0, got {theta}")));
    }
    let n = m.node_count();
    let mut g = BinaryGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j) > theta {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Dated `T × N` table, used for both prices and returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    labels: Vec<String>,
    dates: Vec<NaiveDate>,
    n: usize,
    data: Vec<f64>,
}

pub type ReturnPanel = Panel;

impl Panel {
    pub fn new(labels: Vec<String>, dates: Vec<NaiveDate>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if dates.len() != rows.len() {
            return Err(NciError::DimensionMismatch { expected: rows.len(), found: dates.len() });
        }
        let mut data = Vec::with_capacity(rows.len() * n);
        for (t, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(NciError::DimensionMismatch { expected: n, found: row.len() });
            }
            for (i, v) in row.into_iter().enumerate() {
                if !v.is_finite() {
                    return Err(NciError::InvalidEntry { row: t, col: i, value: v });
                }
                data.push(v);
            }
        }
        Ok(Panel { labels, dates, n, data })
    }

    /// Panel with generated labels `A0, A1, …` and consecutive daily dates.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        let start = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
        let dates = (0..rows.len()).map(|t| start + chrono::Days::new(t as u64)).collect();
        Panel::new((0..n).map(|i| format!("A{i}")).collect(), dates, rows)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn rows(&self) -> usize {
        self.dates.len()
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, t: usize, i: usize) -> f64 {
        self.data[t * self.n + i]
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.n..(t + 1) * self.n]
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.rows()).map(|t| self.get(t, i)).collect()
    }

    /// Rows `start..end`.
    pub fn window(&self, start: usize, end: usize) -> Panel {
        Panel {
            labels: self.labels.clone(),
            dates: self.dates[start..end].to_vec(),
            n: self.n,
            data: self.data[start * self.n..end * self.n].to_vec(),
        }
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Panel {
        Panel { data: self.data.iter().map(|&x| f(x)).collect(), ..self.clone() }
    }
}

/// `r_it = log(P_it / P_i,t−1)`; the result has one row fewer.
pub fn log_returns(prices: &Panel) -> Result<ReturnPanel> {
    if prices.rows() < 2 {
        return Err(NciError::InsufficientData { needed: 2, available: prices.rows() });
    }
    for t in 0..prices.rows() {
        for (i, &p) in prices.row(t).iter().enumerate() {
            if p.is_nan() || p <= 0.0 {
                return Err(NciError::NonPositivePrice { row: t, col: i, value: p });
            }
        }
    }
    let n = prices.cols();
    let mut data = Vec::with_capacity((prices.rows() - 1) * n);
    for t in 1..prices.rows() {
        for i in 0..n {
            data.push((prices.get(t, i) / prices.get(t - 1, i)).ln());
        }
    }
    Ok(Panel { labels: prices.labels.clone(), dates: prices.dates[1..].to_vec(), n, data })
}

/// Symmetric matrix with unit diagonal and entries in `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Pearson correlations of the panel's columns.
pub fn correlation_matrix(panel: &Panel) -> Result<CorrelationMatrix> {
    let rows: Vec<usize> = (0..panel.rows()).collect();
    correlation_of_rows(panel, &rows)
}

/// Pearson correlations over the given rows (repeats allowed, as in a bootstrap resample).
pub fn correlation_of_rows(panel: &Panel, rows: &[usize]) -> Result<CorrelationMatrix> {
    let t = rows.len();
    if t < 3 {
        return Err(NciError::InsufficientData { needed: 3, available: t });
    }
    let n = panel.cols();
    let mut means = vec![0.0; n];
    for &r in rows {
        for (m, x) in means.iter_mut().zip(panel.row(r)) {
            *m += x;
        }
    }
    for m in &mut means {
        *m /= t as f64;
    }
    let mut cross = vec![0.0; n * n];
    let mut centered = vec![0.0; n];
    for &r in rows {
        for ((c, x), m) in centered.iter_mut().zip(panel.row(r)).zip(&means) {
            *c = x - m;
        }
        for i in 0..n {
            let ci = centered[i];
            let out = &mut cross[i * n..(i + 1) * n];
            for j in i..n {
                out[j] += ci * centered[j];
            }
        }
    }
    let scale: Vec<f64> = (0..n).map(|i| cross[i * n + i].sqrt()).collect();
    for (i, &s) in scale.iter().enumerate() {
        // Relative to the column's magnitude so that rounding noise on a
        // constant column still counts as zero variance.
        let magnitude = means[i].abs().max(f64::MIN_POSITIVE);
        if s.is_nan() || s <= 1e-12 * magnitude * (t as f64).sqrt() {
            return Err(NciError::ZeroVariance(i));
        }
    }
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        data[i * n + i] = 1.0;
        for j in i + 1..n {
            let rho = (cross[i * n + j] / (scale[i] * scale[j])).clamp(-1.0, 1.0);
            data[i * n + j] = rho;
            data[j * n + i] = rho;
        }
    }
    Ok(CorrelationMatrix { n, data })
}

/// `d = √(2(1 − ρ))`.
pub fn mantegna_distance(rho: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(NciError::OutOfRange(rho));
    }
    Ok((2.0 * (1.0 - rho)).sqrt())
}

/// Symmetric matrix of finite pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_dense(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(NciError::NonSquare { rows: n, cols: data.len() / n.max(1) });
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !data[i * n + j].is_finite() {
                    return Err(NciError::NonFinite { row: i, col: j });
                }
                if i != j && data[i * n + j] != data[j * n + i] {
                    return Err(NciError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    pub fn from_correlation(c: &CorrelationMatrix) -> Result<Self> {
        let n = c.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = mantegna_distance(c.get(i, j))?;
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        DistanceMatrix::from_dense(self.n, self.data.iter().map(|&d| f(d)).collect())
    }
}

/// Prim's algorithm. Among equal distances the lexicographically smallest
/// pair `(min, max)` wins, so the tree is deterministic even with ties.
pub fn mst(dist: &DistanceMatrix) -> Result<BinaryGraph> {
    let n = dist.n;
    if n < 2 {
        return Err(NciError::TooFewNodes(n));
    }
    let key = |u: usize, v: usize| (dist.get(u, v), u.min(v), u.max(v));
    let better = |a: (f64, usize, usize), b: (f64, usize, usize)| {
        a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)).is_lt()
    };
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<(f64, usize, usize)>> = vec![None; n];
    let mut g = BinaryGraph::empty(n);
    in_tree[0] = true;
    for (v, b) in best.iter_mut().enumerate().skip(1) {
        *b = Some(key(0, v));
    }
    for _ in 1..n {
        let v = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| {
                let (ka, kb) = (best[a].expect("set"), best[b].expect("set"));
                if better(ka, kb) {
                    std::cmp::Ordering::Less
                } else if better(kb, ka) {
                    std::cmp::Ordering::Greater
                } else {
                    a.cmp(&b)
                }
            })
            .expect("a vertex remains");
        let (_, i, j) = best[v].expect("set");
        g.add_edge(i, j)?;
        in_tree[v] = true;
        for u in 0..n {
            if !in_tree[u] {
                let candidate = key(v, u);
                if better(candidate, best[u].expect("set")) {
                    best[u] = Some(candidate);
                }
            }
        }
    }
    Ok(g)
}

/// Correlation, Mantegna distance, then the minimum spanning tree.
pub fn correlation_mst(panel: &Panel) -> Result<BinaryGraph> {
    mst(&DistanceMatrix::from_correlation(&correlation_matrix(panel)?)?)
}

/// Elementwise transformation of every observation.
pub fn apply_transformation(panel: &Panel, t: Transformation) -> Panel {
    panel.map(|x| t.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn coeffs(rows: Vec<Vec<f64>>) -> CoefficientMatrix {
        let labels = (0..rows.len()).map(|i| format!("s{i}")).collect();
        CoefficientMatrix::new(labels, rows).unwrap()
    }

    #[test]
    fn symmetrize_averages() {
        let c = coeffs(vec![vec![0.9, 0.4], vec![0.2, 0.7]]);
        let m = symmetrize(&c);
        assert!((m.get(0, 1) - 0.3).abs() < 1e-15);
        assert_eq!(m.get(0, 0), 0.0);

        let mut rng = crate::rng::seeded(8);
        let rows: Vec<Vec<f64>> = (0..6).map(|_| (0..6).map(|_| rng.gen::<f64>()).collect()).collect();
        let m = symmetrize(&coeffs(rows.clone()));
        for (h, row) in rows.iter().enumerate() {
            for (k, &a) in row.iter().enumerate() {
                assert_eq!(m.get(h, k), m.get(k, h));
                if h != k {
                    assert_eq!(m.get(h, k), 0.5 * (a + rows[k][h]));
                }
            }
        }
        let sym = coeffs(vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        assert_eq!(symmetrize(&sym).get(0, 1), 0.5);
    }

    #[test]
    fn coefficient_matrix_validation() {
        assert!(matches!(
            CoefficientMatrix::new(vec!["a".into(), "b".into()], vec![vec![0.0, 1.0], vec![0.0]]),
            Err(NciError::NonSquare { .. })
        ));
        assert!(matches!(
            CoefficientMatrix::new(vec!["a".into(), "b".into()], vec![vec![0.0, -1.0], vec![0.0, 0.0]]),
            Err(NciError::InvalidEntry { .. })
        ));
    }

    #[test]
    fn thresholds() {
        let m = InteractionMatrix::from_upper_fn(5, |i, j| 0.1 * (i + j) as f64 + 0.05).unwrap();
        assert_eq!(threshold_graph(&m, 0.0).unwrap(), BinaryGraph::complete(5));
        assert_eq!(threshold_graph(&m, 10.0).unwrap().edge_count(), 0);
        // Strict inequality: an entry equal to θ is not a link.
        let exact = m.get(0, 1);
        assert!(!threshold_graph(&m, exact).unwrap().has_edge(0, 1));
        assert!(threshold_graph(&m, -0.1).is_err());
        let mut last = usize::MAX;
        for k in 0..40 {
            let e = threshold_graph(&m, k as f64 * 0.025).unwrap().edge_count();
            assert!(e <= last);
            last = e;
        }
    }

    #[test]
    fn log_return_cases() {
        let flat = Panel::from_rows(vec![vec![5.0, 2.0]; 4]).unwrap();
        let r = log_returns(&flat).unwrap();
        assert_eq!(r.rows(), 3);
        assert!((0..3).all(|t| r.row(t).iter().all(|&x| x == 0.0)));

        let doubling = Panel::from_rows((0..5).map(|t| vec![2f64.powi(t)]).collect()).unwrap();
        let r = log_returns(&doubling).unwrap();
        assert!(r.column(0).iter().all(|x| (x - 2f64.ln()).abs() < 1e-15));
        assert_eq!(r.dates()[0], doubling.dates()[1]);

        let bad = Panel::from_rows(vec![vec![1.0], vec![0.0]]).unwrap();
        assert!(matches!(log_returns(&bad), Err(NciError::NonPositivePrice { row: 1, .. })));
        let short = Panel::from_rows(vec![vec![1.0]]).unwrap();
        assert!(matches!(log_returns(&short), Err(NciError::InsufficientData { .. })));
    }

    #[test]
    fn log_returns_round_trip() {
        let mut rng = crate::rng::seeded(4);
        let mut price = 100.0;
        let prices: Vec<Vec<f64>> = (0..50)
            .map(|_| {
                price *= (rng.gen::<f64>() - 0.5).exp() * 1.0;
                vec![price]
            })
            .collect();
        let panel = Panel::from_rows(prices.clone()).unwrap();
        let r = log_returns(&panel).unwrap();
        let mut acc = 0.0;
        for t in 1..prices.len() {
            acc += r.get(t - 1, 0);
            assert!((acc.exp() - prices[t][0] / prices[0][0]).abs() < 1e-9);
        }
    }

    #[test]
    fn correlation_cases() {
        let mut rng = crate::rng::seeded(21);
        let xs: Vec<f64> = (0..200).map(|_| rng.gen::<f64>()).collect();
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, -x, x]).collect();
        let c = correlation_matrix(&Panel::from_rows(rows).unwrap()).unwrap();
        assert_eq!(c.get(0, 0), 1.0);
        assert!((c.get(0, 1) + 1.0).abs() < 1e-12);
        assert!((c.get(0, 2) - 1.0).abs() < 1e-12);

        let constant: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 0.3]).collect();
        assert_eq!(correlation_matrix(&Panel::from_rows(constant).unwrap()), Err(NciError::ZeroVariance(1)));

        let t = 10_000;
        let rows: Vec<Vec<f64>> = (0..t).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect();
        let c = correlation_matrix(&Panel::from_rows(rows).unwrap()).unwrap();
        assert!(c.get(0, 1).abs() < 3.0 / (t as f64).sqrt());

        let short = Panel::from_rows(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(correlation_matrix(&short), Err(NciError::InsufficientData { .. })));
    }

    #[test]
    fn mantegna_values() {
        assert_eq!(mantegna_distance(1.0).unwrap(), 0.0);
        assert_eq!(mantegna_distance(-1.0).unwrap(), 2.0);
        assert!((mantegna_distance(0.0).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(mantegna_distance(1.5), Err(NciError::OutOfRange(1.5)));
        assert!(mantegna_distance(f64::NAN).is_err());
        let grid: Vec<f64> = (0..=20).map(|k| -1.0 + 0.1 * k as f64).collect();
        for p in grid.windows(2) {
            assert!(mantegna_distance(p[0].min(1.0)).unwrap() > mantegna_distance(p[1].min(1.0)).unwrap());
        }
    }

    #[test]
    fn mst_small_cases() {
        let d = DistanceMatrix::from_dense(3, vec![0.0, 1.0, 2.0, 1.0, 0.0, 3.0, 2.0, 3.0, 0.0]).unwrap();
        let t = mst(&d).unwrap();
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
        let bad = DistanceMatrix::from_dense(2, vec![0.0, f64::INFINITY, f64::INFINITY, 0.0]);
        assert!(matches!(bad, Err(NciError::NonFinite { .. })));
        // All ties: lexicographic preference yields the star on node 0.
        let ties = DistanceMatrix::from_dense(4, {
            let mut v = vec![1.0; 16];
            for i in 0..4 {
                v[i * 4 + i] = 0.0;
            }
            v
        })
        .unwrap();
        assert_eq!(mst(&ties).unwrap().edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn transformations_on_panels() {
        let p = Panel::from_rows(vec![vec![-1.0, 2.0, -3.0]]).unwrap();
        assert_eq!(apply_transformation(&p, Transformation::Square).row(0), &[1.0, 4.0, 9.0]);
        assert_eq!(apply_transformation(&p, Transformation::Exceedance(0.0)).row(0), &[0.0, 1.0, 0.0]);
        let pos = Panel::from_rows(vec![vec![1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(apply_transformation(&pos, Transformation::Absolute), pos);
    }
}
