//! Experiment orchestration for the `poeboost` command.
//!
//! An experiment trains one algorithm on repeated random train/test splits
//! of one dataset (or on a fixed train/test pair) and reports mean and
//! population standard deviation of test accuracy and mean test
//! log-likelihood. Repeats run in parallel; results are assembled in
//! repeat order so output bytes depend only on the inputs.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use poeboost::boosters::TrainedModel;
use poeboost::model_io::write_trace_csv;
use poeboost::{load_csv, train_test_split, Algorithm, BoostConfig, CsvOptions, Dataset, EvalResult, SplitScore, SplitSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Ingest(#[source] poeboost::Error),
    #[error("training failed on every split of {dataset}: {first}")]
    AllSplitsFailed { dataset: String, first: String },
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Ingest(_) | CliError::Output { .. } => 2,
            CliError::AllSplitsFailed { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn usage(e: poeboost::Error) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub dataset: PathBuf,
    /// Fixed test set; replaces the random splits with a single
    /// train-on-`dataset`, test-on-`test_file` run.
    pub test_file: Option<PathBuf>,
    pub algorithm: Algorithm,
    pub boost: BoostConfig,
    pub split: SplitSpec,
    pub csv: CsvOptions,
    /// Directory for per-split round traces.
    pub trace_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(dataset: impl Into<PathBuf>, algorithm: Algorithm) -> Self {
        ExperimentSpec {
            dataset: dataset.into(),
            test_file: None,
            algorithm,
            boost: BoostConfig::default(),
            split: SplitSpec::default(),
            csv: CsvOptions::default(),
            trace_dir: None,
        }
    }

    pub fn dataset_name(&self) -> String {
        dataset_name(&self.dataset)
    }
}

/// File stem of a dataset path.
pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub repeat: usize,
    pub accuracy: f64,
    pub loglik: f64,
    pub rounds_completed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitFailure {
    pub repeat: usize,
    pub error: String,
}

/// One experiment's outcome. Aggregates cover successful splits only and
/// are null when every split failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub rounds: usize,
    pub seed: u64,
    pub accuracy_mean: Option<f64>,
    pub accuracy_std: Option<f64>,
    pub loglik_mean: Option<f64>,
    pub loglik_std: Option<f64>,
    pub splits: Vec<SplitRecord>,
    pub failures: Vec<SplitFailure>,
}

impl ResultRecord {
    pub fn eval(&self) -> Option<EvalResult> {
        let scores = self
            .splits
            .iter()
            .map(|s| SplitScore {
                accuracy: s.accuracy,
                loglik: s.loglik,
            })
            .collect();
        EvalResult::from_splits(scores).ok()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "dataset",
        "algorithm",
        "rounds",
        "seed",
        "accuracy_mean",
        "accuracy_std",
        "loglik_mean",
        "loglik_std",
        "splits",
        "failures",
    ];

    fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.dataset.clone(),
            self.algorithm.to_string(),
            self.rounds.to_string(),
            self.seed.to_string(),
            opt(self.accuracy_mean),
            opt(self.accuracy_std),
            opt(self.loglik_mean),
            opt(self.loglik_std),
            self.splits.len().to_string(),
            self.failures.len().to_string(),
        ]
    }
}

/// Writes records as CSV, one summary row each.
pub fn write_records_csv<W: Write>(records: &[ResultRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ResultRecord::CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_dataset(path: &Path, options: &CsvOptions) -> Result<Dataset> {
    load_csv(path, options).map_err(CliError::Ingest)
}

/// Loads the spec's files and runs it.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultRecord> {
    let data = load_dataset(&spec.dataset, &spec.csv)?;
    let test = match &spec.test_file {
        Some(p) => Some(load_dataset(p, &spec.csv)?),
        None => None,
    };
    run_on_data(&spec.dataset_name(), &data, test.as_ref(), spec)
}

/// Runs `spec` on already-loaded data; the spec's paths are ignored except
/// for the trace directory.
pub fn run_on_data(name: &str, data: &Dataset, test: Option<&Dataset>, spec: &ExperimentSpec) -> Result<ResultRecord> {
    spec.boost.validate().map_err(usage)?;
    spec.split.validate().map_err(usage)?;
    if let Some(t) = test {
        if t.n_features() != data.n_features() {
            return Err(CliError::Usage(format!(
                "test file has {} features, training file has {}",
                t.n_features(),
                data.n_features()
            )));
        }
    }

    let repeats = if test.is_some() { 1 } else { spec.split.repeats };
    let outcomes: Vec<std::result::Result<(SplitRecord, TrainedModel), String>> = (0..repeats)
        .into_par_iter()
        .map(|repeat| {
            let (train, test) = match test {
                Some(t) => (data.clone(), t.clone()),
                None => train_test_split(data, &spec.split, repeat).map_err(|e| e.to_string())?,
            };
            let model = spec.algorithm.train(&train, &spec.boost).map_err(|e| e.to_string())?;
            let score = model.evaluate(&test).map_err(|e| e.to_string())?;
            Ok((
                SplitRecord {
                    repeat,
                    accuracy: score.accuracy,
                    loglik: score.loglik,
                    rounds_completed: model.traces.len(),
                },
                model,
            ))
        })
        .collect();

    let mut splits = Vec::new();
    let mut failures = Vec::new();
    for (repeat, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok((record, model)) => {
                if let Some(dir) = &spec.trace_dir {
                    let path = dir.join(format!("{name}.{}.{repeat}.csv", spec.algorithm));
                    emit_trace(&model, &path)?;
                }
                splits.push(record);
            }
            Err(error) => failures.push(SplitFailure { repeat, error }),
        }
    }

    let mut record = ResultRecord {
        dataset: name.to_string(),
        algorithm: spec.algorithm,
        rounds: spec.boost.rounds,
        seed: spec.split.seed,
        accuracy_mean: None,
        accuracy_std: None,
        loglik_mean: None,
        loglik_std: None,
        splits,
        failures,
    };
    if let Some(e) = record.eval() {
        record.accuracy_mean = Some(e.accuracy_mean);
        record.accuracy_std = Some(e.accuracy_std);
        record.loglik_mean = Some(e.loglik_mean);
        record.loglik_std = Some(e.loglik_std);
    }
    Ok(record)
}

/// Writes the model's round traces as CSV.
pub fn emit_trace(model: &TrainedModel, path: &Path) -> Result<()> {
    write_trace_csv(&model.traces, path).map_err(|e| CliError::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Datasets × algorithms summary. Cells are `mean(std)`; a trailing `*`
/// marks the best mean in the row for that metric, every tied algorithm
/// included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub algorithms: Vec<Algorithm>,
    pub rows: Vec<ComparisonRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub dataset: String,
    pub accuracy: Vec<Cell>,
    pub loglik: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub best: bool,
}

impl Cell {
    pub fn render(&self) -> String {
        match (self.mean, self.std) {
            (Some(m), Some(s)) => format!("{m:.2}({s:.2}){}", if self.best { "*" } else { "" }),
            _ => "-".to_string(),
        }
    }
}

fn mark_best(cells: &mut [Cell]) {
    let best = cells.iter().filter_map(|c| c.mean).fold(f64::NEG_INFINITY, f64::max);
    for c in cells {
        c.best = c.mean == Some(best);
    }
}

/// Runs every spec and tabulates them. All specs must share one split
/// specification so that every algorithm sees the same splits.
pub fn compare(specs: &[ExperimentSpec]) -> Result<(ComparisonTable, Vec<ResultRecord>)> {
    if specs.len() < 2 {
        return Err(CliError::Usage("compare needs at least two experiments".into()));
    }
    let first = &specs[0];
    if let Some(s) = specs.iter().find(|s| s.split != first.split || s.test_file.is_some() != first.test_file.is_some()) {
        return Err(CliError::Usage(format!(
            "split specifications differ: {:?} vs {:?}",
            first.split, s.split
        )));
    }
    let records: Vec<ResultRecord> = specs
        .par_iter()
        .map(run_experiment)
        .collect::<Result<Vec<_>>>()?;
    Ok((tabulate(&records), records))
}

/// Builds the table from records, keeping first-appearance order of
/// datasets and algorithms.
pub fn tabulate(records: &[ResultRecord]) -> ComparisonTable {
    let mut algorithms: Vec<Algorithm> = Vec::new();
    let mut datasets: Vec<&str> = Vec::new();
    let mut by_key: BTreeMap<(usize, usize), &ResultRecord> = BTreeMap::new();
    for r in records {
        let a = algorithms.iter().position(|x| *x == r.algorithm).unwrap_or_else(|| {
            algorithms.push(r.algorithm);
            algorithms.len() - 1
        });
        let d = datasets.iter().position(|x| *x == r.dataset).unwrap_or_else(|| {
            datasets.push(&r.dataset);
            datasets.len() - 1
        });
        by_key.entry((d, a)).or_insert(r);
    }
    let rows = datasets
        .iter()
        .enumerate()
        .map(|(d, name)| {
            let cell = |a: usize, acc: bool| {
                let r = by_key.get(&(d, a));
                Cell {
                    mean: r.and_then(|r| if acc { r.accuracy_mean } else { r.loglik_mean }),
                    std: r.and_then(|r| if acc { r.accuracy_std } else { r.loglik_std }),
                    best: false,
                }
            };
            let mut accuracy: Vec<Cell> = (0..algorithms.len()).map(|a| cell(a, true)).collect();
            let mut loglik: Vec<Cell> = (0..algorithms.len()).map(|a| cell(a, false)).collect();
            mark_best(&mut accuracy);
            mark_best(&mut loglik);
            ComparisonRow {
                dataset: name.to_string(),
                accuracy,
                loglik,
            }
        })
        .collect();
    ComparisonTable { algorithms, rows }
}

impl ComparisonTable {
    fn header(&self) -> Vec<String> {
        let mut h = vec!["dataset".to_string()];
        for a in &self.algorithms {
            h.push(format!("{a} accuracy"));
            h.push(format!("{a} loglik"));
        }
        h
    }

    fn cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let mut row = vec![r.dataset.clone()];
                for (acc, ll) in r.accuracy.iter().zip(&r.loglik) {
                    row.push(acc.render());
                    row.push(ll.render());
                }
                row
            })
            .collect()
    }

    /// Aligned plain-text table.
    pub fn render_text(&self) -> String {
        let header = self.header();
        let body = self.cells();
        let widths: Vec<usize> = (0..header.len())
            .map(|c| body.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |cols: &[String]| {
            let mut s = cols
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            s.truncate(s.trim_end().len());
            s.push('\n');
            s
        };
        let mut out = line(&header);
        for r in &body {
            out.push_str(&line(r));
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for r in self.cells() {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(dataset: &str, algorithm: Algorithm, acc: f64, ll: f64) -> ResultRecord {
        ResultRecord {
            dataset: dataset.into(),
            algorithm,
            rounds: 10,
            seed: 0,
            accuracy_mean: Some(acc),
            accuracy_std: Some(0.01),
            loglik_mean: Some(ll),
            loglik_std: Some(0.02),
            splits: vec![],
            failures: vec![],
        }
    }

    #[test]
    fn table_marks_best_and_keeps_order() {
        let t = tabulate(&[
            record("b", Algorithm::RealAdaBoost, 0.9, -0.3),
            record("b", Algorithm::PoeboostCs, 0.95, -0.3),
            record("a", Algorithm::RealAdaBoost, 0.8, -0.2),
            record("a", Algorithm::PoeboostCs, 0.7, -0.5),
        ]);
        assert_eq!(t.algorithms, vec![Algorithm::RealAdaBoost, Algorithm::PoeboostCs]);
        assert_eq!(t.rows[0].dataset, "b");
        assert_eq!(t.rows[1].dataset, "a");
        assert_eq!(t.rows[0].accuracy.iter().map(|c| c.best).collect::<Vec<_>>(), [false, true]);
        assert_eq!(t.rows[0].loglik.iter().map(|c| c.best).collect::<Vec<_>>(), [true, true]);
        assert_eq!(t.rows[1].accuracy[0].render(), "0.80(0.01)*");
        assert_eq!(t.rows[1].loglik[1].render(), "-0.50(0.02)");
    }

    #[test]
    fn missing_cells_render_as_dash() {
        let mut r = record("a", Algorithm::AdaBoost, 0.5, -1.0);
        r.accuracy_mean = None;
        r.accuracy_std = None;
        let t = tabulate(&[r, record("b", Algorithm::PoeboostDs, 0.6, -0.9)]);
        assert_eq!(t.rows[0].accuracy[0].render(), "-");
        assert_eq!(t.rows[0].accuracy[1].render(), "-");
        assert!(t.render_text().starts_with("dataset"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::Ingest(poeboost::Error::Empty("rows")).exit_code(), 2);
        assert_eq!(
            CliError::AllSplitsFailed {
                dataset: "d".into(),
                first: "e".into()
            }
            .exit_code(),
            3
        );
    }
}
