//! Experiment orchestration: CSV ingestion, seeded splits, the active-learning
//! loop, results files and summaries.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::acquisition::{BaldSettings, SelectionContext, SelectionStrategy, Strategy};
use crate::coreset::acs_fw_projected;
use crate::error::{Error, Result};
use crate::models::{Model, ModelSpec, Task};

/// Added to the run seed when drawing the initial labeled set.
pub const INIT_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

/// Header of the CSV results file.
pub const RESULTS_HEADER: &str = "seed,iteration,labeled_count,queried_count,metric,batch_time_s,total_time_s";

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// N×d design matrix.
    pub inputs: DMatrix<f64>,
    pub targets: Vec<f64>,
    pub name: String,
}

impl Dataset {
    pub fn new(inputs: DMatrix<f64>, targets: Vec<f64>, name: impl Into<String>) -> Result<Self> {
        if inputs.nrows() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: inputs.nrows(),
                found: targets.len(),
            });
        }
        if inputs.nrows() == 0 {
            return Err(Error::Data("dataset has no rows".into()));
        }
        if inputs.iter().chain(&targets).any(|v| !v.is_finite()) {
            return Err(Error::Data("dataset contains non-finite values".into()));
        }
        Ok(Dataset {
            inputs,
            targets,
            name: name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs.ncols()
    }

    /// Rows `indices` in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            inputs: self.inputs.select_rows(indices),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            name: self.name.clone(),
        }
    }
}

/// Reads a numeric CSV with a header row; `target` names the label column and
/// every other column becomes an input feature.
pub fn load_csv(path: impl AsRef<Path>, target: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_owned)
        .collect::<Vec<_>>();
    let target_col = headers
        .iter()
        .position(|h| h == target)
        .ok_or_else(|| Error::Data(format!("{}: no column named `{target}`", path.display())))?;
    let d = headers.len() - 1;
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = i + 1;
        if record.len() != headers.len() {
            return Err(Error::Data(format!(
                "{}: row {row} has {} fields, expected {}",
                path.display(),
                record.len(),
                headers.len()
            )));
        }
        for (j, cell) in record.iter().enumerate() {
            let value = cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                row,
                column: headers[j].clone(),
                value: cell.to_owned(),
            })?;
            if j == target_col {
                targets.push(value);
            } else {
                inputs.push(value);
            }
        }
    }
    let name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    Dataset::new(DMatrix::from_row_slice(targets.len(), d, &inputs), targets, name)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Data(format!("{}: {other:?}", path.display())),
    }
}

/// Seeded random train/test split with `floor(N · test_fraction)` test rows.
/// Both halves keep the original row order.
pub fn split(dataset: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("test fraction {test_fraction} not in (0, 1)")));
    }
    let n = dataset.len();
    let n_test = (n as f64 * test_fraction).floor() as usize;
    if n_test == 0 || n_test >= n {
        return Err(Error::Data(format!(
            "cannot split {n} rows with test fraction {test_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test = rand::seq::index::sample(&mut rng, n, n_test).into_vec();
    test.sort_unstable();
    let mut in_test = vec![false; n];
    for &i in &test {
        in_test[i] = true;
    }
    let train: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
    Ok((dataset.subset(&train), dataset.subset(&test)))
}

/// Per-column affine map to zero mean and unit variance. Columns with zero
/// spread keep scale 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Statistics of the columns of `data` (population standard deviation).
    pub fn fit(data: &DMatrix<f64>) -> Self {
        let n = data.nrows().max(1) as f64;
        let (mut mean, mut std) = (Vec::new(), Vec::new());
        for col in data.column_iter() {
            let m = col.sum() / n;
            let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
            let s = var.sqrt();
            mean.push(m);
            std.push(if s > 0.0 && s.is_finite() { s } else { 1.0 });
        }
        Standardizer { mean, std }
    }

    pub fn identity(dim: usize) -> Self {
        Standardizer {
            mean: vec![0.0; dim],
            std: vec![1.0; dim],
        }
    }

    pub fn transform(&self, data: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = data.clone();
        for (j, mut col) in out.column_iter_mut().enumerate() {
            col.apply(|v| *v = (*v - self.mean[j]) / self.std[j]);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct TargetScale {
    mean: f64,
    std: f64,
}

impl TargetScale {
    fn fit(y: &[f64]) -> Self {
        let s = Standardizer::fit(&DMatrix::from_column_slice(y.len(), 1, y));
        TargetScale {
            mean: s.mean[0],
            std: s.std[0],
        }
    }

    const IDENTITY: TargetScale = TargetScale { mean: 0.0, std: 1.0 };
}

#[derive(Debug, Clone, PartialEq)]
pub struct ALConfig {
    pub task: Task,
    pub strategy: Strategy,
    pub init_labeled: usize,
    pub batch_size: usize,
    /// Total number of points to query per seed.
    pub budget: usize,
    pub projections: usize,
    pub noise_variance: f64,
    pub prior_variance: f64,
    pub seeds: Vec<u64>,
    pub test_fraction: f64,
    /// Standardize inputs with training-split statistics and regression
    /// targets with labeled-set statistics.
    pub standardize: bool,
    /// Posterior samples for probit BALD.
    pub bald_samples: usize,
    /// Record wall-clock times; when false every time is written as 0.
    pub timing: bool,
}

impl Default for ALConfig {
    fn default() -> Self {
        ALConfig {
            task: Task::Regression,
            strategy: Strategy::AcsFwProjected,
            init_labeled: 20,
            batch_size: 10,
            budget: 100,
            projections: 10,
            noise_variance: 1.0,
            prior_variance: 1.0,
            seeds: (0..20).collect(),
            test_fraction: 0.2,
            standardize: true,
            bald_samples: 1000,
            timing: true,
        }
    }
}

impl ALConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.batch_size == 0 {
            return bad("batch size must be >= 1".into());
        }
        if self.budget < self.batch_size {
            return bad(format!("budget {} is smaller than batch size {}", self.budget, self.batch_size));
        }
        if self.init_labeled == 0 {
            return bad("init-labeled must be >= 1".into());
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return bad(format!("test fraction {} not in (0, 1)", self.test_fraction));
        }
        if self.strategy == Strategy::AcsFwProjected && self.projections == 0 {
            return bad("projections must be >= 1".into());
        }
        if self.strategy == Strategy::Bald && self.task == Task::Probit && self.bald_samples == 0 {
            return bad("BALD needs at least one posterior sample".into());
        }
        for (name, v) in [("noise variance", self.noise_variance), ("prior variance", self.prior_variance)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if self.seeds.is_empty() {
            return bad("no seeds given".into());
        }
        Ok(())
    }

    pub fn model_spec(&self) -> ModelSpec {
        ModelSpec {
            task: self.task,
            noise_variance: self.noise_variance,
            prior_variance: self.prior_variance,
        }
    }
}

/// One active-learning iteration of one seed. Iteration 0 is the model fitted
/// on the initial labeled set. A failed iteration has `metric = NaN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ALRecord {
    pub seed: u64,
    pub iteration: usize,
    pub labeled_count: usize,
    pub queried_count: usize,
    #[serde(deserialize_with = "nan_from_null")]
    pub metric: f64,
    pub batch_time_s: f64,
    pub total_time_s: f64,
}

impl ALRecord {
    pub fn is_failure(&self) -> bool {
        self.metric.is_nan()
    }
}

fn nan_from_null<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Deterministic per-iteration seed for the selection strategy.
pub fn iteration_seed(seed: u64, iteration: usize) -> u64 {
    let mut z = seed ^ (iteration as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs the active-learning loop for every distinct seed in `config.seeds`
/// (in parallel) and returns all records ordered by seed, then iteration.
pub fn run_al(config: &ALConfig, dataset: &Dataset) -> Result<Vec<ALRecord>> {
    config.validate()?;
    if config.task == Task::Probit && dataset.targets.iter().any(|&y| y != 0.0 && y != 1.0) {
        return Err(Error::Data("probit targets must be 0 or 1".into()));
    }
    let n_test = (dataset.len() as f64 * config.test_fraction).floor() as usize;
    let n_train = dataset.len().saturating_sub(n_test);
    if n_test == 0 || n_train == 0 {
        return Err(Error::Data(format!(
            "cannot split {} rows with test fraction {}",
            dataset.len(),
            config.test_fraction
        )));
    }
    if config.init_labeled + config.budget > n_train {
        return Err(Error::Data(format!(
            "init-labeled {} plus budget {} exceeds the {n_train} training rows",
            config.init_labeled, config.budget
        )));
    }
    let mut seeds = config.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();
    let runs: Vec<Vec<ALRecord>> = seeds
        .par_iter()
        .map(|&seed| run_seed(config, dataset, seed))
        .collect::<Result<_>>()?;
    Ok(runs.into_iter().flatten().collect())
}

struct SeedState {
    spec: ModelSpec,
    train_x: DMatrix<f64>,
    train_y: Vec<f64>,
    test_x: DMatrix<f64>,
    test_y: Vec<f64>,
    labeled: Vec<usize>,
    pool: Vec<usize>,
    standardize: bool,
}

struct Fitted {
    model: Model,
    scale: TargetScale,
    labeled_x: DMatrix<f64>,
    labeled_y: Vec<f64>,
}

impl SeedState {
    fn fit(&self) -> Result<Fitted> {
        let labeled_x = self.train_x.select_rows(&self.labeled);
        let raw: Vec<f64> = self.labeled.iter().map(|&i| self.train_y[i]).collect();
        let scale = if self.standardize && self.spec.task == Task::Regression {
            TargetScale::fit(&raw)
        } else {
            TargetScale::IDENTITY
        };
        let labeled_y: Vec<f64> = raw.iter().map(|y| (y - scale.mean) / scale.std).collect();
        let model = self.spec.fit(&labeled_x, &labeled_y)?;
        Ok(Fitted {
            model,
            scale,
            labeled_x,
            labeled_y,
        })
    }

    /// Test RMSE in original target units, or test accuracy for probit.
    fn evaluate(&self, fitted: &Fitted) -> Result<f64> {
        let n = self.test_y.len() as f64;
        let mut acc = 0.0;
        for (row, &y) in self.test_x.row_iter().zip(&self.test_y) {
            let x: Vec<f64> = row.iter().copied().collect();
            let p = fitted.model.predict_point(&x)?;
            acc += match self.spec.task {
                Task::Regression => {
                    let e = p * fitted.scale.std + fitted.scale.mean - y;
                    e * e
                }
                Task::Probit => f64::from(((p >= 0.5) as u8 as f64) == y),
            };
        }
        Ok(match self.spec.task {
            Task::Regression => (acc / n).sqrt(),
            Task::Probit => acc / n,
        })
    }
}

fn seconds(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    }
}

fn run_seed(config: &ALConfig, dataset: &Dataset, seed: u64) -> Result<Vec<ALRecord>> {
    let (train, test) = split(dataset, config.test_fraction, seed)?;
    let scaler = if config.standardize {
        Standardizer::fit(&train.inputs)
    } else {
        Standardizer::identity(train.dim())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(INIT_SEED_OFFSET));
    let mut labeled = rand::seq::index::sample(&mut rng, train.len(), config.init_labeled).into_vec();
    labeled.sort_unstable();
    let pool: Vec<usize> = (0..train.len()).filter(|i| labeled.binary_search(i).is_err()).collect();
    let mut state = SeedState {
        spec: config.model_spec(),
        train_x: scaler.transform(&train.inputs),
        train_y: train.targets,
        test_x: scaler.transform(&test.inputs),
        test_y: test.targets,
        labeled,
        pool,
        standardize: config.standardize,
    };

    let mut records = Vec::new();
    let failure = |iteration, labeled_count, queried_count, err: Error| {
        log::warn!("seed {seed}, iteration {iteration}: {err}");
        ALRecord {
            seed,
            iteration,
            labeled_count,
            queried_count,
            metric: f64::NAN,
            batch_time_s: 0.0,
            total_time_s: 0.0,
        }
    };

    let start = Instant::now();
    let mut fitted = match state.fit().and_then(|f| state.evaluate(&f).map(|m| (f, m))) {
        Ok((f, metric)) => {
            records.push(ALRecord {
                seed,
                iteration: 0,
                labeled_count: state.labeled.len(),
                queried_count: 0,
                metric,
                batch_time_s: 0.0,
                total_time_s: seconds(start, config.timing),
            });
            f
        }
        Err(e) => {
            records.push(failure(0, state.labeled.len(), 0, e));
            return Ok(records);
        }
    };

    let mut queried = 0;
    let mut iteration = 0;
    while queried < config.budget && !state.pool.is_empty() {
        iteration += 1;
        let step_budget = config.batch_size.min(config.budget - queried);
        let start = Instant::now();
        let pool_x = state.train_x.select_rows(&state.pool);
        let pool_y: Vec<f64> = state
            .pool
            .iter()
            .map(|&i| (state.train_y[i] - fitted.scale.mean) / fitted.scale.std)
            .collect();
        let ctx = SelectionContext {
            model: &fitted.model,
            spec: &state.spec,
            labeled_x: &fitted.labeled_x,
            labeled_y: &fitted.labeled_y,
            pool_x: &pool_x,
            pool_y: Some(&pool_y),
            projections: config.projections,
            bald: BaldSettings {
                samples: config.bald_samples,
                seed: 0,
            },
        };
        let picked = match config.strategy.select_batch(&ctx, step_budget, iteration_seed(seed, iteration)) {
            Ok(p) => p,
            Err(e) => {
                records.push(failure(iteration, state.labeled.len(), 0, e));
                break;
            }
        };
        let batch_time = seconds(start, config.timing);

        let mut chosen: Vec<usize> = picked.iter().map(|&p| state.pool[p]).collect();
        chosen.sort_unstable();
        state.pool.retain(|i| chosen.binary_search(i).is_err());
        state.labeled.extend_from_slice(&chosen);
        queried += chosen.len();

        match state.fit().and_then(|f| state.evaluate(&f).map(|m| (f, m))) {
            Ok((f, metric)) => {
                records.push(ALRecord {
                    seed,
                    iteration,
                    labeled_count: state.labeled.len(),
                    queried_count: chosen.len(),
                    metric,
                    batch_time_s: batch_time,
                    total_time_s: seconds(start, config.timing),
                });
                fitted = f;
            }
            Err(e) => {
                records.push(failure(iteration, state.labeled.len(), chosen.len(), e));
                break;
            }
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl OutputFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => OutputFormat::Jsonl,
            _ => OutputFormat::Csv,
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}`"))),
        }
    }
}

pub fn write_results(records: &[ALRecord], path: impl AsRef<Path>, format: OutputFormat) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{RESULTS_HEADER}").map_err(io)?;
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{},{:?},{:?},{:?}",
                    r.seed, r.iteration, r.labeled_count, r.queried_count, r.metric, r.batch_time_s, r.total_time_s
                )
                .map_err(io)?;
            }
        }
        OutputFormat::Jsonl => {
            for r in records {
                let line = serde_json::to_string(r).map_err(|e| Error::Data(e.to_string()))?;
                writeln!(out, "{line}").map_err(io)?;
            }
        }
    }
    out.flush().map_err(io)
}

pub fn read_results(path: impl AsRef<Path>, format: OutputFormat) -> Result<Vec<ALRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    match format {
        OutputFormat::Csv => {
            let mut reader = csv::Reader::from_reader(file);
            let header = reader.headers().map_err(|e| csv_error(path, e))?.iter().collect::<Vec<_>>().join(",");
            if header != RESULTS_HEADER {
                return Err(Error::Data(format!("{}: unexpected header `{header}`", path.display())));
            }
            reader
                .deserialize()
                .map(|r| r.map_err(|e| csv_error(path, e)))
                .collect()
        }
        OutputFormat::Jsonl => BufReader::new(file)
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
            .map(|(i, line)| {
                let line = line.map_err(|e| Error::io(path, e))?;
                serde_json::from_str(&line)
                    .map_err(|e| Error::Data(format!("{}: line {}: {e}", path.display(), i + 1)))
            })
            .collect(),
    }
}

/// Aggregate of one results file.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub label: String,
    pub seeds: usize,
    /// Mean over seeds of the final-iteration metric.
    pub final_metric_mean: f64,
    /// Standard error `sd / √n` of the final metric (sample sd, 0 for one seed).
    pub final_metric_stderr: f64,
    /// Mean batch-construction time per acquisition iteration.
    pub batch_time_mean: f64,
    /// Mean total time per acquisition iteration.
    pub total_time_mean: f64,
    /// Mean over seeds of the cumulative total time.
    pub cumulative_time: f64,
    pub mean_iterations: f64,
}

/// Summarizes the seeds that completed without a failure row.
pub fn summarize(label: &str, records: &[ALRecord]) -> Result<Summary> {
    let mut seeds: Vec<u64> = records.iter().map(|r| r.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let mut finals = Vec::new();
    let (mut bt, mut tt, mut its) = (Vec::new(), Vec::new(), Vec::new());
    let mut cumulative = Vec::new();
    for seed in seeds {
        let mut run: Vec<&ALRecord> = records.iter().filter(|r| r.seed == seed).collect();
        if run.iter().any(|r| r.is_failure()) {
            continue;
        }
        run.sort_by_key(|r| r.iteration);
        finals.push(run.last().map_or(f64::NAN, |r| r.metric));
        let steps: Vec<&&ALRecord> = run.iter().filter(|r| r.iteration > 0).collect();
        bt.extend(steps.iter().map(|r| r.batch_time_s));
        tt.extend(steps.iter().map(|r| r.total_time_s));
        its.push(steps.len() as f64);
        cumulative.push(run.iter().map(|r| r.total_time_s).sum::<f64>());
    }
    if finals.is_empty() {
        return Err(Error::Data(format!("{label}: no seed completed")));
    }
    let n = finals.len() as f64;
    let mean = mean_of(&finals);
    let stderr = if finals.len() > 1 {
        let var = finals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(Summary {
        label: label.to_owned(),
        seeds: finals.len(),
        final_metric_mean: mean,
        final_metric_stderr: stderr,
        batch_time_mean: mean_of(&bt),
        total_time_mean: mean_of(&tt),
        cumulative_time: mean_of(&cumulative),
        mean_iterations: mean_of(&its),
    })
}

fn mean_of(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

const SUMMARY_COLUMNS: [&str; 8] = [
    "label",
    "seeds",
    "final_metric_mean",
    "final_metric_stderr",
    "bt_per_it_s",
    "tt_per_it_s",
    "total_time_s",
    "iterations",
];

fn summary_cells(s: &Summary) -> [String; 8] {
    [
        s.label.clone(),
        s.seeds.to_string(),
        format!("{:.6}", s.final_metric_mean),
        format!("{:.6}", s.final_metric_stderr),
        format!("{:.6}", s.batch_time_mean),
        format!("{:.6}", s.total_time_mean),
        format!("{:.6}", s.cumulative_time),
        format!("{:.1}", s.mean_iterations),
    ]
}

/// Aligned plain-text table.
pub fn format_summary_table(rows: &[Summary]) -> String {
    let cells: Vec<[String; 8]> = rows.iter().map(summary_cells).collect();
    let widths: Vec<usize> = (0..8)
        .map(|j| cells.iter().map(|c| c[j].len()).chain([SUMMARY_COLUMNS[j].len()]).max().unwrap_or(0))
        .collect();
    let line = |row: Vec<&str>| {
        row.iter()
            .enumerate()
            .map(|(j, c)| if j == 0 { format!("{c:<w$}", w = widths[j]) } else { format!("{c:>w$}", w = widths[j]) })
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(SUMMARY_COLUMNS.to_vec());
    out.push('\n');
    for c in &cells {
        out.push_str(&line(c.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

pub fn write_summary_csv(rows: &[Summary], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(SUMMARY_COLUMNS).map_err(|e| csv_error(path, e))?;
    for s in rows {
        w.write_record(summary_cells(s)).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Linear-regression data `y = θᵀx + ε` with standard normal inputs, `θ`
/// drawn from the standard normal and `ε ~ N(0, noise_variance)`.
/// Returns the dataset and the true `θ`.
pub fn synthetic_linreg(n: usize, d: usize, noise_variance: f64, seed: u64) -> Result<(Dataset, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let theta: Vec<f64> = (0..d).map(|_| normal()).collect();
    let x = DMatrix::from_fn(n, d, |_, _| normal());
    let noise = noise_variance.max(0.0).sqrt();
    let y = (0..n)
        .map(|i| (0..d).map(|j| x[(i, j)] * theta[j]).sum::<f64>() + noise * normal())
        .collect();
    Ok((Dataset::new(x, y, "synthetic")?, theta))
}

/// Median batch-construction time of projected ACS-FW per pool size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub pool_size: usize,
    pub median_s: f64,
    pub batch_len: usize,
}

/// Times `acs_fw_projected` on synthetic 10-dimensional regression pools.
pub fn bench(pool_sizes: &[usize], projections: usize, batch_size: usize, repeats: usize) -> Result<Vec<BenchRow>> {
    if projections == 0 || batch_size == 0 || repeats == 0 {
        return Err(Error::InvalidArgument("projections, batch size and repeats must be >= 1".into()));
    }
    let d = 10;
    let (train, _) = synthetic_linreg(50, d, 0.1, 7)?;
    let model = Model::fit(Task::Regression, &train.inputs, &train.targets, 0.1, 1.0)?;
    let mut rows = Vec::new();
    for &m in pool_sizes {
        let (pool, _) = synthetic_linreg(m.max(1), d, 0.1, m as u64)?;
        acs_fw_projected(&model, &pool.inputs, batch_size, projections, 0)?;
        let mut times = Vec::new();
        let mut batch_len = 0;
        for r in 0..repeats {
            let start = Instant::now();
            let batch = acs_fw_projected(&model, &pool.inputs, batch_size, projections, r as u64)?;
            times.push(start.elapsed().as_secs_f64());
            batch_len = batch.len();
        }
        times.sort_by(f64::total_cmp);
        rows.push(BenchRow {
            pool_size: m,
            median_s: times[times.len() / 2],
            batch_len,
        });
    }
    Ok(rows)
}

pub fn format_bench_table(rows: &[BenchRow]) -> String {
    let mut out = format!("{:>10}  {:>12}  {:>9}  {:>6}\n", "pool_size", "median_s", "ratio", "batch");
    for (i, r) in rows.iter().enumerate() {
        let ratio = if i == 0 { 1.0 } else { r.median_s / rows[i - 1].median_s };
        out.push_str(&format!("{:>10}  {:>12.6}  {:>9.3}  {:>6}\n", r.pool_size, r.median_s, ratio, r.batch_len));
    }
    out
}
