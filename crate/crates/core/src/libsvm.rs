//! LIBSVM text format for binary classification data.

use std::fmt::Write as _;
use std::io::BufRead;

use nalgebra::DVector;

use crate::domain::ProjectionDomain;
use crate::error::{Error, Result};
use crate::problem::{Features, ProblemSpec, SparseRows};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    pub label: f64,
    /// (1-based index, value), strictly increasing in index.
    pub features: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseDataset {
    pub rows: Vec<SparseRow>,
    pub dim: usize,
    /// Distinct labels as they appeared in the input, ascending.
    pub raw_labels: Vec<f64>,
}

impl SparseDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Widens the feature dimension, e.g. to a dataset's published size.
    pub fn with_dim(mut self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::Input(format!("dimension {dim} below max index {}", self.dim)));
        }
        self.dim = dim;
        Ok(self)
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn parse_line(line_no: usize, text: &str) -> Result<Option<SparseRow>> {
    let content = text.split('#').next().unwrap_or("");
    let mut tokens = content
        .char_indices()
        .filter(|&(i, c)| !c.is_whitespace() && (i == 0 || content[..i].ends_with(char::is_whitespace)))
        .map(|(i, _)| {
            let rest = &content[i..];
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            (i + 1, &rest[..end])
        });

    let Some((col, label_tok)) = tokens.next() else {
        return Ok(None);
    };
    let label: f64 = label_tok
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| parse_error(line_no, col, format!("malformed label {label_tok:?}")))?;

    let mut features = Vec::new();
    let mut last = 0usize;
    for (col, tok) in tokens {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| parse_error(line_no, col, format!("expected index:value, got {tok:?}")))?;
        let idx: usize = idx
            .parse()
            .ok()
            .filter(|i| *i >= 1)
            .ok_or_else(|| parse_error(line_no, col, format!("malformed index {idx:?}")))?;
        let val: f64 = val
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| parse_error(line_no, col + tok.find(':').unwrap_or(0) + 1, format!("malformed value {val:?}")))?;
        if idx <= last {
            let what = if idx == last { "duplicate" } else { "decreasing" };
            return Err(parse_error(line_no, col, format!("{what} feature index {idx} after {last}")));
        }
        last = idx;
        features.push((idx, val));
    }
    Ok(Some(SparseRow { label, features }))
}

/// Maps the observed binary alphabet onto {−1, +1}.
fn normalize_labels(rows: &mut [SparseRow]) -> Result<Vec<f64>> {
    let mut observed: Vec<f64> = rows.iter().map(|r| r.label).collect();
    observed.sort_by(|a, b| a.partial_cmp(b).expect("labels are finite"));
    observed.dedup();
    let within = |set: [f64; 2]| observed.iter().all(|l| set.contains(l));
    let map: fn(f64) -> f64 = if within([-1.0, 1.0]) {
        |l| l
    } else if within([0.0, 1.0]) {
        |l| if l == 1.0 { 1.0 } else { -1.0 }
    } else if within([1.0, 2.0]) {
        |l| if l == 1.0 { 1.0 } else { -1.0 }
    } else {
        return Err(Error::LabelAlphabet { observed });
    };
    for row in rows.iter_mut() {
        row.label = map(row.label);
    }
    Ok(observed)
}

pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<SparseDataset> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(row) = parse_line(i + 1, line.trim_end_matches('\r'))? {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(Error::Input("dataset has no rows".into()));
    }
    let raw_labels = normalize_labels(&mut rows)?;
    let dim = rows.iter().filter_map(|r| r.features.last().map(|f| f.0)).max().unwrap_or(0);
    Ok(SparseDataset { rows, dim, raw_labels })
}

pub fn parse_libsvm_str(text: &str) -> Result<SparseDataset> {
    parse_libsvm(text.as_bytes())
}

/// Writes labels as ±1 and values in shortest round-trip form.
pub fn serialize_libsvm(dataset: &SparseDataset) -> String {
    let mut out = String::new();
    for row in &dataset.rows {
        out.push_str(if row.label > 0.0 { "+1" } else { "-1" });
        for (i, v) in &row.features {
            let _ = write!(out, " {i}:{v:?}");
        }
        out.push('\n');
    }
    out
}

/// Regularized logistic regression over the ball of the given radius.
pub fn to_problem(dataset: &SparseDataset, mu: f64, radius: f64) -> Result<ProblemSpec> {
    if dataset.dim == 0 {
        return Err(Error::Degenerate("dataset has no features".into()));
    }
    if dataset.is_empty() {
        return Err(Error::Degenerate("dataset has no rows".into()));
    }
    let rows = dataset.rows.iter().map(|r| r.features.iter().map(|&(i, v)| (i - 1, v)).collect::<Vec<_>>());
    let features = Features::Sparse(SparseRows::from_rows(dataset.dim, rows)?);
    let labels = DVector::from_iterator(dataset.len(), dataset.rows.iter().map(|r| r.label));
    ProblemSpec::logistic(features, labels, mu, ProjectionDomain::origin_ball(dataset.dim, radius)?)
}
