//! CSV input formats and the edge-list writer.
//!
//! * weights: header `node,weight`; canonical node order is sorted labels.
//! * edge list: `source,target[,intensity]`.
//! * coefficient matrix: dense, with a header row and a first column of labels.
//! * panel: `date` first column (ISO 8601), one column per asset.
//!
//! Errors carry the 1-based line number of the offending record.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};

use chrono::NaiveDate;
use csv::{ReaderBuilder, StringRecord, Trim};

use crate::error::{NciError, Result};
use crate::netbuild::{CoefficientMatrix, Panel};
use crate::types::{BinaryGraph, InteractionMatrix, WeightVector, WEIGHT_SUM_TOLERANCE};

/// Fixed six-decimal, locale-independent rendering used in every output table.
pub fn format_value(x: f64) -> String {
    format!("{x:.6}")
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    ReaderBuilder::new().trim(Trim::All).flexible(true).comment(Some(b'#')).from_reader(r)
}

fn line_of(rec: &StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn csv_error(e: csv::Error) -> NciError {
    let line = e.position().map_or(0, |p| p.line());
    NciError::parse(line, e.to_string())
}

fn expect_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<StringRecord> {
    let header = rdr.headers().map_err(csv_error)?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names.len() < expected.len() || !names.iter().zip(expected).all(|(a, b)| a.eq_ignore_ascii_case(b)) {
        return Err(NciError::parse(1, format!("expected header `{}`, found `{}`", expected.join(","), names.join(","))));
    }
    Ok(header)
}

fn number(rec: &StringRecord, field: usize, name: &str) -> Result<f64> {
    let raw = rec.get(field).unwrap_or("");
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| NciError::parse(line_of(rec), format!("{name} `{raw}` is not a finite number")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightsFile {
    /// Sorted node labels; position `i` is node `i` everywhere downstream.
    pub labels: Vec<String>,
    pub weights: WeightVector,
    /// True when the raw weights did not sum to exactly 1 and were rescaled.
    pub renormalized: bool,
}

impl WeightsFile {
    pub fn index(&self) -> HashMap<&str, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }
}

pub fn read_weights<R: Read>(r: R) -> Result<WeightsFile> {
    let mut rdr = reader(r);
    expect_header(&mut rdr, &["node", "weight"])?;
    let mut by_label = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = line_of(&rec);
        if rec.len() != 2 {
            return Err(NciError::parse(line, format!("expected 2 fields, found {}", rec.len())));
        }
        let label = rec[0].to_string();
        if label.is_empty() {
            return Err(NciError::parse(line, "empty node label"));
        }
        let weight = number(&rec, 1, "weight")?;
        if weight < 0.0 {
            return Err(NciError::parse(line, format!("weight of `{label}` is negative ({weight})")));
        }
        if by_label.insert(label.clone(), weight).is_some() {
            return Err(NciError::parse(line, format!("node `{label}` appears twice")));
        }
    }
    let sum: f64 = by_label.values().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(NciError::UnnormalizedWeights { sum });
    }
    let (labels, values): (Vec<String>, Vec<f64>) = by_label.into_iter().unzip();
    Ok(WeightsFile { labels, weights: WeightVector::new(values)?, renormalized: sum != 1.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub graph: BinaryGraph,
    /// Present when the file has an `intensity` column.
    pub intensities: Option<InteractionMatrix>,
}

/// Reads an edge list over the given node labels. Every label must be known;
/// unknown ones are reported together.
pub fn read_edge_list<R: Read>(r: R, labels: &[String]) -> Result<EdgeList> {
    let mut rdr = reader(r);
    let header = expect_header(&mut rdr, &["source", "target"])?;
    let weighted = match header.len() {
        2 => false,
        3 if header[2].eq_ignore_ascii_case("intensity") => true,
        _ => {
            return Err(NciError::parse(1, "expected header `source,target` or `source,target,intensity`"));
        }
    };
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let n = labels.len();
    let mut graph = BinaryGraph::empty(n);
    let mut values = vec![0.0; n * n];
    let mut unknown = BTreeSet::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = line_of(&rec);
        if rec.len() != header.len() {
            return Err(NciError::parse(line, format!("expected {} fields, found {}", header.len(), rec.len())));
        }
        let (Some(&i), Some(&j)) = (index.get(&rec[0]), index.get(&rec[1])) else {
            for l in [&rec[0], &rec[1]] {
                if !index.contains_key(l) {
                    unknown.insert(l.to_string());
                }
            }
            continue;
        };
        if i == j {
            return Err(NciError::parse(line, format!("self-loop on `{}`", &rec[0])));
        }
        if !graph.add_edge(i, j)? {
            return Err(NciError::parse(line, format!("edge `{}`–`{}` appears twice", &rec[0], &rec[1])));
        }
        if weighted {
            let v = number(&rec, 2, "intensity")?;
            if v < 0.0 {
                return Err(NciError::parse(line, format!("intensity is negative ({v})")));
            }
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    if !unknown.is_empty() {
        return Err(NciError::LabelMismatch(unknown.into_iter().collect()));
    }
    let intensities = if weighted { Some(InteractionMatrix::from_dense(n, values)?) } else { None };
    Ok(EdgeList { graph, intensities })
}

/// Writes edges in lexicographic node order, with intensities when given.
pub fn write_edge_list<W: Write>(
    out: W,
    g: &BinaryGraph,
    labels: &[String],
    intensities: Option<&InteractionMatrix>,
) -> Result<()> {
    let io_err = |e: std::io::Error| NciError::InvalidParameter(format!("write failed: {e}"));
    let mut wtr = csv::Writer::from_writer(out);
    let header: &[&str] = if intensities.is_some() { &["source", "target", "intensity"] } else { &["source", "target"] };
    wtr.write_record(header).map_err(|e| io_err(e.into()))?;
    for (i, j) in g.edges() {
        let mut row = vec![labels[i].clone(), labels[j].clone()];
        if let Some(m) = intensities {
            // Shortest string that parses back to the same value.
            row.push(format!("{}", m.get(i, j)));
        }
        wtr.write_record(&row).map_err(|e| io_err(e.into()))?;
    }
    wtr.flush().map_err(io_err)
}

/// Dense square matrix; the first header cell is ignored and the row labels
/// must repeat the column labels in the same order.
pub fn read_coefficient_matrix<R: Read>(r: R) -> Result<CoefficientMatrix> {
    let mut rdr = reader(r);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if labels.is_empty() {
        return Err(NciError::parse(1, "header has no column labels"));
    }
    if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
        return Err(NciError::parse(1, "duplicate column label"));
    }
    let mut rows = Vec::with_capacity(labels.len());
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = line_of(&rec);
        let k = rows.len();
        if k >= labels.len() {
            return Err(NciError::parse(line, "more rows than columns"));
        }
        if rec.len() != labels.len() + 1 {
            return Err(NciError::parse(line, format!("expected {} fields, found {}", labels.len() + 1, rec.len())));
        }
        if rec[0] != labels[k] {
            return Err(NciError::parse(line, format!("row label `{}` does not match column `{}`", &rec[0], labels[k])));
        }
        let row = (1..rec.len())
            .map(|f| {
                let v = number(&rec, f, "coefficient")?;
                if v < 0.0 {
                    return Err(NciError::parse(line, format!("coefficient is negative ({v})")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.len() != labels.len() {
        return Err(NciError::NonSquare { rows: rows.len(), cols: labels.len() });
    }
    CoefficientMatrix::new(labels, rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelFile {
    pub panel: Panel,
    /// Dates dropped because at least one value was missing.
    pub dropped: Vec<NaiveDate>,
}

fn is_missing(s: &str) -> bool {
    s.is_empty() || ["na", "nan", "null"].iter().any(|m| s.eq_ignore_ascii_case(m))
}

/// Dated panel of prices or returns. Rows with a missing value are dropped,
/// never imputed; dates must be strictly increasing.
pub fn read_panel<R: Read>(r: R) -> Result<PanelFile> {
    let mut rdr = reader(r);
    let header = expect_header(&mut rdr, &["date"])?;
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if labels.is_empty() {
        return Err(NciError::parse(1, "no asset columns"));
    }
    let mut dates = Vec::new();
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    let mut last: Option<NaiveDate> = None;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = line_of(&rec);
        if rec.len() != header.len() {
            return Err(NciError::parse(line, format!("expected {} fields, found {}", header.len(), rec.len())));
        }
        let date = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d")
            .map_err(|_| NciError::parse(line, format!("`{}` is not an ISO date", &rec[0])))?;
        if last.is_some_and(|d| d >= date) {
            return Err(NciError::parse(line, format!("date {date} is not after the previous row")));
        }
        last = Some(date);
        if rec.iter().skip(1).any(is_missing) {
            dropped.push(date);
            continue;
        }
        let row = (1..rec.len()).map(|f| number(&rec, f, "value")).collect::<Result<Vec<f64>>>()?;
        dates.push(date);
        rows.push(row);
    }
    Ok(PanelFile { panel: Panel::new(labels, dates, rows)?, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn weights_sorted_and_renormalized() {
        let f = read_weights("node,weight\nb,0.5\na,0.499999\n".as_bytes()).unwrap();
        assert_eq!(f.labels, labels(&["a", "b"]));
        assert!(f.renormalized);
        assert!((f.weights.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let exact = read_weights("node,weight\na,0.25\nb,0.75\n".as_bytes()).unwrap();
        assert!(!exact.renormalized);
    }

    #[test]
    fn weights_errors_name_the_line() {
        let e = read_weights("node,weight\na,0.5\nb,-0.1\nc,0.6\n".as_bytes()).unwrap_err();
        assert!(matches!(e, NciError::Parse { line: 3, .. }), "{e}");
        let e = read_weights("node,weight\na,x\n".as_bytes()).unwrap_err();
        assert!(matches!(e, NciError::Parse { line: 2, .. }));
        assert!(matches!(read_weights("n,w\na,1\n".as_bytes()), Err(NciError::Parse { line: 1, .. })));
        assert!(matches!(read_weights("node,weight\na,0.5\na,0.5\n".as_bytes()), Err(NciError::Parse { .. })));
        assert!(matches!(
            read_weights("node,weight\na,0.5\nb,0.4\n".as_bytes()),
            Err(NciError::UnnormalizedWeights { .. })
        ));
    }

    #[test]
    fn edge_lists() {
        let ls = labels(&["a", "b", "c"]);
        let e = read_edge_list("source,target\na,b\nc,b\n".as_bytes(), &ls).unwrap();
        assert_eq!(e.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(e.intensities.is_none());
        let e = read_edge_list("source,target,intensity\na,c,0.5\n".as_bytes(), &ls).unwrap();
        assert_eq!(e.intensities.unwrap().get(2, 0), 0.5);
        assert_eq!(
            read_edge_list("source,target\na,x\ny,b\n".as_bytes(), &ls),
            Err(NciError::LabelMismatch(labels(&["x", "y"])))
        );
        assert!(matches!(read_edge_list("source,target\na,a\n".as_bytes(), &ls), Err(NciError::Parse { line: 2, .. })));
        assert!(matches!(
            read_edge_list("source,target\na,b\nb,a\n".as_bytes(), &ls),
            Err(NciError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let ls = labels(&["n0", "n1", "n2", "n3", "n4"]);
        let g = BinaryGraph::from_edges(5, [(0, 3), (1, 2), (2, 4), (0, 1)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g, &ls, None).unwrap();
        assert_eq!(read_edge_list(buf.as_slice(), &ls).unwrap().graph, g);

        let m = InteractionMatrix::from_upper_fn(5, |i, j| if g.has_edge(i, j) { 0.1 * (i + j) as f64 + 1.0 / 3.0 } else { 0.0 })
            .unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g, &ls, Some(&m)).unwrap();
        let back = read_edge_list(buf.as_slice(), &ls).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.intensities.unwrap(), m);
    }

    #[test]
    fn coefficient_matrices() {
        let c = read_coefficient_matrix("sector,x,y\nx,0.1,0.4\ny,0.2,0.0\n".as_bytes()).unwrap();
        assert_eq!(c.get(0, 1), 0.4);
        assert_eq!(c.labels(), &labels(&["x", "y"])[..]);
        assert!(matches!(
            read_coefficient_matrix("sector,x,y\ny,0.1,0.4\nx,0.2,0.0\n".as_bytes()),
            Err(NciError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_coefficient_matrix("sector,x,y\nx,0.1,0.4\n".as_bytes()),
            Err(NciError::NonSquare { .. })
        ));
    }

    #[test]
    fn panels_drop_missing_rows() {
        let text = "date,A,B\n2024-01-02,1.0,2.0\n2024-01-03,,2.1\n2024-01-04,1.1,NA\n2024-01-05,1.2,2.2\n";
        let f = read_panel(text.as_bytes()).unwrap();
        assert_eq!(f.panel.rows(), 2);
        assert_eq!(f.dropped.len(), 2);
        assert_eq!(f.panel.row(1), &[1.2, 2.2]);
        assert!(matches!(
            read_panel("date,A\n2024-01-02,1\n2024-01-01,1\n".as_bytes()),
            Err(NciError::Parse { line: 3, .. })
        ));
        assert!(matches!(read_panel("date,A\n02/01/2024,1\n".as_bytes()), Err(NciError::Parse { line: 2, .. })));
    }

    #[test]
    fn six_decimals() {
        assert_eq!(format_value(0.514_436_3), "0.514436");
        assert_eq!(format_value(1.0), "1.000000");
    }
}
