//! Immutable feature tables with ±1 labels, and CSV ingestion.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::label::Label;

/// An `N × F` table of finite reals with one label per row.
///
/// Stored row-major. Construction validates every invariant, so nothing
/// downstream re-checks finiteness or label alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n_features: usize,
    labels: Vec<Label>,
    feature_names: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from row vectors.
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        let n_features = rows.first().map(Vec::len).unwrap_or(0);
        let mut flat = Vec::with_capacity(rows.len() * n_features);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has {} features, expected {n_features}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(flat, n_features, labels)
    }

    /// Builds a dataset from a row-major buffer.
    pub fn from_flat(features: Vec<f64>, n_features: usize, labels: Vec<Label>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidDataset("dataset has no rows".into()));
        }
        if n_features == 0 {
            return Err(Error::InvalidDataset("dataset has no features".into()));
        }
        if features.len() != labels.len() * n_features {
            return Err(Error::LengthMismatch {
                expected: labels.len() * n_features,
                actual: features.len(),
            });
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value {} at row {}, feature {}",
                features[pos],
                pos / n_features,
                pos % n_features
            )));
        }
        Ok(Dataset {
            features,
            n_features,
            labels,
            feature_names: None,
        })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_features {
            return Err(Error::LengthMismatch {
                expected: self.n_features,
                actual: names.len(),
            });
        }
        self.feature_names = Some(names);
        Ok(self)
    }

    /// Number of rows `N`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    #[inline]
    pub fn value(&self, i: usize, feature: usize) -> f64 {
        self.features[i * self.n_features + feature]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features)
    }

    pub fn column(&self, feature: usize) -> impl Iterator<Item = f64> + '_ {
        self.features
            .iter()
            .skip(feature)
            .step_by(self.n_features)
            .copied()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        if indices.is_empty() {
            return Err(Error::Empty("subset indices"));
        }
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::InvalidDataset(format!(
                    "row index {i} out of range for {} rows",
                    self.len()
                )));
            }
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Ok(Dataset {
            features,
            n_features: self.n_features,
            labels,
            feature_names: self.feature_names.clone(),
        })
    }
}

/// Which CSV column holds the label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum LabelColumn {
    #[default]
    Last,
    Index(usize),
    Name(String),
}

impl LabelColumn {
    /// Parses a command-line value: a header name, or a 0-based index when
    /// the text is a non-negative integer.
    pub fn parse(text: &str) -> LabelColumn {
        match text.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(text.to_string()),
        }
    }

    fn resolve(&self, header: &[String]) -> Result<usize> {
        match self {
            LabelColumn::Last => Ok(header.len() - 1),
            LabelColumn::Index(i) if *i < header.len() => Ok(*i),
            LabelColumn::Index(i) => Err(Error::InvalidDataset(format!(
                "label column index {i} out of range for {} columns",
                header.len()
            ))),
            LabelColumn::Name(name) => {
                if let Some(i) = header.iter().position(|h| h == name) {
                    Ok(i)
                } else {
                    Err(Error::InvalidDataset(format!("no column named {name:?}")))
                }
            }
        }
    }
}

/// Ingestion options for [`load_csv`].
#[derive(Debug, Clone, Default)]
pub struct CsvOptions {
    pub label_column: LabelColumn,
    /// Explicit raw label → ±1 mapping. Rows whose raw label is missing
    /// from the mapping are an error.
    pub label_mapping: Option<BTreeMap<String, Label>>,
    /// Keep only rows whose raw label is listed. Without an explicit
    /// mapping and with exactly two entries, the first maps to −1 and the
    /// second to +1.
    pub filter_labels: Option<Vec<String>>,
}

/// Loads a comma-separated file with a header row.
///
/// Without a mapping the label alphabet must be a subset of `{0, 1}`
/// (mapped to `{−1, +1}`) or of `{−1, +1}` (passed through).
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, options)
}

/// [`load_csv`] over any reader.
pub fn read_csv<R: Read>(reader: R, options: &CsvOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.len() < 2 {
        return Err(Error::InvalidDataset(
            "need at least one feature column and one label column".into(),
        ));
    }
    let label_col = options.label_column.resolve(&header)?;
    let filter: Option<BTreeSet<&str>> = options
        .filter_labels
        .as_ref()
        .map(|f| f.iter().map(String::as_str).collect());

    let n_features = header.len() - 1;
    let mut features = Vec::new();
    let mut raw_labels: Vec<(usize, String)> = Vec::new();

    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::Ingest {
                row,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let raw_label = &record[label_col];
        if let Some(keep) = &filter {
            if !keep.contains(raw_label) {
                continue;
            }
        }
        for (col, cell) in record.iter().enumerate() {
            if col == label_col {
                continue;
            }
            if cell.is_empty() {
                return Err(Error::Ingest {
                    row,
                    message: format!("missing value in column {:?}", header[col]),
                });
            }
            let value: f64 = cell.parse().map_err(|_| Error::Ingest {
                row,
                message: format!("non-numeric value {cell:?} in column {:?}", header[col]),
            })?;
            if !value.is_finite() {
                return Err(Error::Ingest {
                    row,
                    message: format!("non-finite value {cell:?} in column {:?}", header[col]),
                });
            }
            features.push(value);
        }
        raw_labels.push((row, raw_label.to_string()));
    }

    if raw_labels.is_empty() {
        return Err(Error::InvalidDataset("no data rows".into()));
    }
    let labels = map_labels(&raw_labels, options)?;
    let names = header
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_col)
        .map(|(_, h)| h.clone())
        .collect();
    Dataset::from_flat(features, n_features, labels)?.with_feature_names(names)
}

fn map_labels(raw: &[(usize, String)], options: &CsvOptions) -> Result<Vec<Label>> {
    let derived;
    let mapping = match (&options.label_mapping, &options.filter_labels) {
        (Some(m), _) => Some(m),
        (None, Some(f)) if f.len() == 2 => {
            derived = BTreeMap::from([
                (f[0].clone(), Label::Negative),
                (f[1].clone(), Label::Positive),
            ]);
            Some(&derived)
        }
        _ => None,
    };

    if let Some(mapping) = mapping {
        return raw
            .iter()
            .map(|(row, s)| {
                mapping.get(s).copied().ok_or_else(|| Error::Ingest {
                    row: *row,
                    message: format!("label {s:?} is not in the label mapping"),
                })
            })
            .collect();
    }

    // Auto alphabet: {0,1} or {-1,+1}.
    let mut values = Vec::with_capacity(raw.len());
    for (row, s) in raw {
        let v: f64 = s.parse().map_err(|_| Error::Ingest {
            row: *row,
            message: format!("label {s:?} is not numeric; pass an explicit label mapping"),
        })?;
        if v != 0.0 && v != 1.0 && v != -1.0 {
            return Err(Error::Ingest {
                row: *row,
                message: format!("label {s:?} is outside {{0,1}} and {{-1,+1}}"),
            });
        }
        values.push((*row, v));
    }
    let has_zero = values.iter().any(|&(_, v)| v == 0.0);
    if has_zero {
        if let Some(&(row, _)) = values.iter().find(|&&(_, v)| v == -1.0) {
            return Err(Error::Ingest {
                row,
                message: "labels mix the {0,1} and {-1,+1} alphabets".into(),
            });
        }
    }
    Ok(values
        .into_iter()
        .map(|(_, v)| if v > 0.0 { Label::Positive } else { Label::Negative })
        .collect())
}
