//! Sparse binary-classification data in LIBSVM text format.
//!
//! Each line reads `<label> <index>:<value> ...` with 1-based indices.
//! Labels `+1`/`1` map to 1 and `-1`/`0` map to 0.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Feature vector stored as sorted `(index, value)` pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseRow {
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseRow {
    /// Builds a row from `(index, value)` pairs; indices must be distinct.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Option<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        let (indices, values) = pairs.into_iter().unzip();
        Some(Self { indices, values })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&i, &v)| v * x[i])
            .sum()
    }

    /// `out += alpha * row`.
    #[inline]
    pub fn axpy(&self, alpha: f64, out: &mut [f64]) {
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            out[i] += alpha * v;
        }
    }

    pub fn sq_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    fn max_index(&self) -> Option<usize> {
        self.indices.last().copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<SparseRow>,
    labels: Vec<bool>,
    dim: usize,
}

impl Dataset {
    /// `dim` is raised to cover every feature index present.
    pub fn new(rows: Vec<SparseRow>, labels: Vec<bool>, dim: usize) -> Self {
        assert_eq!(rows.len(), labels.len(), "one label per row");
        let needed = rows
            .iter()
            .filter_map(SparseRow::max_index)
            .max()
            .map_or(0, |m| m + 1);
        Self {
            rows,
            labels,
            dim: dim.max(needed),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SparseRow, bool)> {
        self.rows.iter().zip(self.labels.iter().copied())
    }

    /// First `count` points, keeping the feature dimension.
    pub fn head(&self, count: usize) -> Self {
        let count = count.min(self.len());
        Self {
            rows: self.rows[..count].to_vec(),
            labels: self.labels[..count].to_vec(),
            dim: self.dim,
        }
    }
}

pub fn parse_libsvm<R: BufRead>(reader: R, dim_hint: Option<usize>) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            reason: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let (label, row) = parse_line(&line).map_err(|reason| Error::Parse {
            line: lineno,
            reason,
        })?;
        rows.push(row);
        labels.push(label);
    }
    Ok(Dataset::new(rows, labels, dim_hint.unwrap_or(0)))
}

pub fn parse_libsvm_str(text: &str, dim_hint: Option<usize>) -> Result<Dataset> {
    parse_libsvm(text.as_bytes(), dim_hint)
}

pub fn read_libsvm(path: impl AsRef<Path>, dim_hint: Option<usize>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_libsvm(BufReader::new(file), dim_hint)
}

fn parse_line(line: &str) -> std::result::Result<(bool, SparseRow), String> {
    let mut tokens = line.split_whitespace();
    let label_tok = tokens.next().ok_or("missing label")?;
    let label = match label_tok.parse::<f64>() {
        Ok(1.0) => true,
        Ok(v) if v == -1.0 || v == 0.0 => false,
        Ok(v) => return Err(format!("label must be one of -1, 0, +1, got {v}")),
        Err(_) => return Err(format!("non-numeric label `{label_tok}`")),
    };

    let mut pairs = Vec::new();
    for tok in tokens {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| format!("expected `index:value`, got `{tok}`"))?;
        let idx: i64 = idx
            .parse()
            .map_err(|_| format!("non-numeric feature index `{idx}`"))?;
        if idx <= 0 {
            return Err(format!("feature index must be >= 1, got {idx}"));
        }
        let val: f64 = val
            .parse()
            .map_err(|_| format!("non-numeric feature value `{val}`"))?;
        if !val.is_finite() {
            return Err(format!("non-finite feature value `{val}`"));
        }
        pairs.push((idx as usize - 1, val));
    }
    let row = SparseRow::from_pairs(pairs).ok_or("duplicate feature index")?;
    Ok((label, row))
}
