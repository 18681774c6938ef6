use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use poeboost::bounds::{check_bound, epsilon_c_root_check};
use poeboost::model_io::{load_model, save_model};
use poeboost::{Algorithm, BoostConfig, CsvOptions, Label, LabelColumn, SplitSpec, WeightDistribution};
use poeboost_cli::{compare, emit_trace, load_dataset, run_experiment, write_records_csv, CliError, ExperimentSpec, Result};

#[derive(Parser)]
#[command(name = "poeboost", version, about = "Product-of-experts boosting benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train and evaluate one algorithm on repeated splits of a dataset.
    Run {
        dataset: PathBuf,
        #[arg(long, default_value = "poeboost-cs", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Run several algorithms on the same splits of one or more datasets.
    Compare {
        #[arg(required = true)]
        datasets: Vec<PathBuf>,
        /// Comma-separated algorithm names.
        #[arg(long, value_delimiter = ',', default_value = "adaboost,real-adaboost,poeboost-ds,poeboost-cs", value_parser = parse_algorithm)]
        algorithms: Vec<Algorithm>,
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Train on a whole dataset and save the model as JSON.
    Train {
        dataset: PathBuf,
        #[arg(long, default_value = "poeboost-cs", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[arg(long)]
        model: PathBuf,
        /// Round trace CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        boost: BoostArgs,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Score a dataset with a saved model: one CSV row per input row.
    Predict {
        model: PathBuf,
        dataset: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Sweep the error parameter and report the bound on the weighted
    /// reciprocal sum. Input columns: weight, p (probability of the true
    /// label).
    Bounds {
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    boost: BoostArgs,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 0.75)]
    train_fraction: f64,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed test set; disables the random splits.
    #[arg(long)]
    test_file: Option<PathBuf>,
    /// Directory for per-split round trace CSVs.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct BoostArgs {
    #[arg(long, default_value_t = 200)]
    rounds: usize,
    /// Lower bound on the expert error parameter.
    #[arg(long, default_value_t = poeboost::poe::DEFAULT_P_E_FLOOR)]
    p_e_floor: f64,
    /// Gradient step for the logistic base learners.
    #[arg(long, default_value_t = 1.0)]
    logistic_step: f64,
    /// Keep going (absorbing a no-op expert) when no candidate beats chance.
    #[arg(long)]
    no_early_stop: bool,
}

#[derive(Args)]
struct DataArgs {
    /// Label column: header name or 0-based index. Default: last column.
    #[arg(long)]
    label_column: Option<String>,
    /// Explicit mapping such as `B=-1,M=1`.
    #[arg(long, value_delimiter = ',')]
    label_map: Vec<String>,
    /// Keep only rows with these raw labels; with two entries and no map,
    /// the first becomes -1 and the second +1.
    #[arg(long, value_delimiter = ',')]
    filter_labels: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: poeboost::Error| e.to_string())
}

impl BoostArgs {
    fn config(&self) -> Result<BoostConfig> {
        let cfg = BoostConfig {
            rounds: self.rounds,
            p_e_floor: self.p_e_floor,
            stop_on_weak_failure: !self.no_early_stop,
            logistic_step: self.logistic_step,
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

impl DataArgs {
    fn options(&self) -> Result<CsvOptions> {
        let label_mapping = if self.label_map.is_empty() {
            None
        } else {
            let mut m = BTreeMap::new();
            for entry in &self.label_map {
                let (raw, v) = entry
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("label map entry {entry:?} is not RAW=VALUE")))?;
                let label = match v.trim() {
                    "-1" | "0" => Label::Negative,
                    "1" | "+1" => Label::Positive,
                    other => return Err(CliError::Usage(format!("label value {other:?} is not -1 or 1"))),
                };
                m.insert(raw.trim().to_string(), label);
            }
            Some(m)
        };
        Ok(CsvOptions {
            label_column: self.label_column.as_deref().map(LabelColumn::parse).unwrap_or_default(),
            label_mapping,
            filter_labels: (!self.filter_labels.is_empty()).then(|| self.filter_labels.clone()),
        })
    }
}

impl ExperimentArgs {
    fn spec(&self, dataset: &Path, algorithm: Algorithm) -> Result<ExperimentSpec> {
        let split = SplitSpec::new(self.train_fraction, self.repeats, self.seed).map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(dir) = &self.trace {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Output {
                path: dir.clone(),
                message: e.to_string(),
            })?;
        }
        Ok(ExperimentSpec {
            dataset: dataset.to_path_buf(),
            test_file: self.test_file.clone(),
            algorithm,
            boost: self.boost.config()?,
            split,
            csv: self.data.options()?,
            trace_dir: self.trace.clone(),
        })
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Output {
            path: p.to_path_buf(),
            message: e.to_string(),
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_all(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let mut out = open_output(path)?;
    f(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Output {
            path: path.map(Path::to_path_buf).unwrap_or_else(|| "<stdout>".into()),
            message: e.to_string(),
        })
}

fn csv_io(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { dataset, algorithm, exp } => {
            let spec = exp.spec(&dataset, algorithm)?;
            let record = run_experiment(&spec)?;
            write_all(exp.output.as_deref(), |w| match exp.format {
                Format::Json => w.write_all(record.to_json().as_bytes()),
                Format::Csv | Format::Text => write_records_csv(std::slice::from_ref(&record), w).map_err(csv_io),
            })?;
            if record.splits.is_empty() {
                return Err(CliError::AllSplitsFailed {
                    dataset: record.dataset,
                    first: record.failures.first().map(|f| f.error.clone()).unwrap_or_default(),
                });
            }
            Ok(())
        }
        Command::Compare { datasets, algorithms, exp } => {
            let mut specs = Vec::new();
            for d in &datasets {
                for &a in &algorithms {
                    specs.push(exp.spec(d, a)?);
                }
            }
            let (table, records) = compare(&specs)?;
            write_all(exp.output.as_deref(), |w| match exp.format {
                Format::Json => {
                    let doc = serde_json::json!({ "table": table, "records": records });
                    let mut s = serde_json::to_string_pretty(&doc).map_err(io::Error::other)?;
                    s.push('\n');
                    w.write_all(s.as_bytes())
                }
                Format::Csv => table.write_csv(w).map_err(csv_io),
                Format::Text => w.write_all(table.render_text().as_bytes()),
            })?;
            if let Some(r) = records.iter().find(|r| r.splits.is_empty()) {
                return Err(CliError::AllSplitsFailed {
                    dataset: r.dataset.clone(),
                    first: r.failures.first().map(|f| f.error.clone()).unwrap_or_default(),
                });
            }
            Ok(())
        }
        Command::Train {
            dataset,
            algorithm,
            model,
            trace,
            boost,
            data,
        } => {
            let cfg = boost.config()?;
            let d = load_dataset(&dataset, &data.options()?)?;
            let m = algorithm.train(&d, &cfg).map_err(|e| CliError::AllSplitsFailed {
                dataset: poeboost_cli::dataset_name(&dataset),
                first: e.to_string(),
            })?;
            save_model(&m, &model).map_err(|e| CliError::Output {
                path: model.clone(),
                message: e.to_string(),
            })?;
            if let Some(t) = trace {
                emit_trace(&m, &t)?;
            }
            Ok(())
        }
        Command::Predict {
            model,
            dataset,
            output,
            data,
        } => {
            let m = load_model(&model).map_err(CliError::Ingest)?;
            let d = load_dataset(&dataset, &data.options()?)?;
            let mut rows = Vec::with_capacity(d.len());
            for x in d.rows() {
                let label = m.predict(x).map_err(|e| CliError::Usage(e.to_string()))?;
                let p = m
                    .ensemble
                    .posterior_of(x, Label::Positive)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                rows.push((label, p));
            }
            write_all(output.as_deref(), |w| {
                let mut c = csv::Writer::from_writer(w);
                c.write_record(["row", "label", "posterior_positive"]).map_err(csv_io)?;
                for (i, (label, p)) in rows.iter().enumerate() {
                    c.write_record([i.to_string(), label.to_string(), p.to_string()]).map_err(csv_io)?;
                }
                c.flush()
            })
        }
        Command::Bounds { input, steps, output } => bounds_sweep(&input, steps, output.as_deref()),
    }
}

fn bounds_sweep(input: &Path, steps: usize, output: Option<&Path>) -> Result<()> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be positive".into()));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(input)
        .map_err(|e| CliError::Ingest(e.into()))?;
    let mut weights = Vec::new();
    let mut probs = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Ingest(e.into()))?;
        let field = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    CliError::Ingest(poeboost::Error::Ingest {
                        row,
                        message: format!("column {k} is not a finite number"),
                    })
                })
        };
        weights.push(field(0)?);
        let p = field(1)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::Ingest(poeboost::Error::Ingest {
                row,
                message: format!("p = {p} is outside [0, 1]"),
            }));
        }
        probs.push(p);
    }
    let w = WeightDistribution::from_unnormalized(weights).map_err(CliError::Ingest)?;
    let root = epsilon_c_root_check(&w, &probs).map_err(CliError::Ingest)?;
    let mut grid: Vec<f64> = (1..=steps).map(|k| 0.5 * k as f64 / steps as f64).collect();
    if root.epsilon_c > 0.0 && root.epsilon_c < 0.5 {
        grid.push(root.epsilon_c);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
    }
    let mut reports = Vec::with_capacity(grid.len());
    for &p_e in &grid {
        reports.push((p_e, check_bound(p_e, &w, &probs).map_err(CliError::Ingest)?));
    }
    write_all(output, |out| {
        let mut c = csv::Writer::from_writer(out);
        c.write_record(["p_e", "lhs", "rhs", "slack", "satisfied", "is_epsilon_c"]).map_err(csv_io)?;
        for (p_e, r) in &reports {
            c.write_record([
                p_e.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.slack.to_string(),
                r.satisfied.to_string(),
                (*p_e == root.epsilon_c).to_string(),
            ])
            .map_err(csv_io)?;
        }
        c.flush()
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
