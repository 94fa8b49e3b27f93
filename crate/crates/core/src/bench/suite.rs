//! Experiment grids from a TOML file, executed on a bounded worker pool and
//! reported as CSV.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::capability::{learning_capability, CapabilityConfig};
use crate::bench::classify::{run_classification, ClassificationConfig, LabelledTable};
use crate::encodings::Family;
use crate::error::{Error, Result};
use crate::model::AnsatzMode;
use crate::pipeline::fmt_f64;
use crate::seeds::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Desk,
    Paper,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Preset::Desk),
            "paper" => Ok(Preset::Paper),
            other => Err(Error::Config(format!("unknown preset {other:?} (expected desk or paper)"))),
        }
    }
}

/// Default protocol values for a preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetValues {
    pub population: usize,
    pub regression_epochs: usize,
    pub regression_eta: f64,
    pub points: usize,
    pub classification_epochs: usize,
    pub classification_eta: f64,
    pub batch_size: usize,
}

impl Preset {
    pub fn values(self) -> PresetValues {
        match self {
            Preset::Desk => PresetValues {
                population: 10,
                regression_epochs: 800,
                regression_eta: 0.05,
                points: 1000,
                classification_epochs: 300,
                classification_eta: 0.005,
                batch_size: 64,
            },
            Preset::Paper => PresetValues {
                population: 100,
                regression_epochs: 3000,
                regression_eta: 0.05,
                points: 4000,
                classification_epochs: 3000,
                classification_eta: 0.001,
                batch_size: 64,
            },
        }
    }
}

const TOP_KEYS: &[&str] = &["master_seed", "workers", "preset", "record_wall_time", "regression", "classification"];
const REGRESSION_KEYS: &[&str] = &["families", "shapes", "k", "eta", "replicates", "population", "epochs", "points"];
const CLASSIFICATION_KEYS: &[&str] =
    &["datasets", "families", "shapes", "ansatz", "eta", "replicates", "epochs", "batch"];

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct RawRegression {
    families: Vec<String>,
    shapes: Vec<[usize; 2]>,
    k: Vec<usize>,
    eta: Option<Vec<f64>>,
    replicates: Option<usize>,
    population: Option<usize>,
    epochs: Option<usize>,
    points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct RawClassification {
    datasets: Vec<String>,
    families: Vec<String>,
    shapes: Vec<[usize; 2]>,
    ansatz: Option<String>,
    eta: Option<Vec<f64>>,
    replicates: Option<usize>,
    epochs: Option<usize>,
    batch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct RawSuite {
    master_seed: Option<u64>,
    workers: Option<usize>,
    preset: Option<String>,
    record_wall_time: Option<bool>,
    regression: Option<RawRegression>,
    classification: Option<RawClassification>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionGrid {
    pub families: Vec<Family>,
    pub shapes: Vec<(usize, usize)>,
    pub k: Vec<usize>,
    pub eta: Vec<f64>,
    pub replicates: usize,
    pub population: usize,
    pub epochs: usize,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationGrid {
    /// Directories holding train.csv and test.csv.
    pub datasets: Vec<PathBuf>,
    pub families: Vec<Family>,
    pub shapes: Vec<(usize, usize)>,
    pub ansatz: AnsatzMode,
    pub eta: Vec<f64>,
    pub replicates: usize,
    pub epochs: usize,
    pub batch_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub master_seed: u64,
    pub workers: usize,
    pub preset: Preset,
    pub record_wall_time: bool,
    pub regression: Option<RegressionGrid>,
    pub classification: Option<ClassificationGrid>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SuiteOverrides {
    pub master_seed: Option<u64>,
    pub workers: Option<usize>,
    pub preset: Option<Preset>,
    pub record_wall_time: Option<bool>,
}

fn unknown_keys(table: &toml::Table, allowed: &[&str], prefix: &str, out: &mut Vec<String>) {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            out.push(format!("{prefix}{key}"));
        }
    }
}

fn families(names: &[String]) -> Result<Vec<Family>> {
    if names.is_empty() {
        return Err(Error::Config("families list is empty".into()));
    }
    names.iter().map(|n| n.parse()).collect()
}

fn shapes(raw: &[[usize; 2]]) -> Result<Vec<(usize, usize)>> {
    if raw.is_empty() {
        return Err(Error::Config("shapes list is empty".into()));
    }
    raw.iter()
        .map(|&[r, l]| {
            if r == 0 || l == 0 {
                Err(Error::Config(format!("shape [{r}, {l}] must be positive")))
            } else {
                Ok((r, l))
            }
        })
        .collect()
}

fn positive_etas(eta: Option<Vec<f64>>, default: f64) -> Result<Vec<f64>> {
    let eta = eta.unwrap_or_else(|| vec![default]);
    if eta.is_empty() || eta.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Config(format!("eta values must be positive, got {eta:?}")));
    }
    Ok(eta)
}

impl SuiteConfig {
    /// Parses TOML text; relative dataset paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path, overrides: SuiteOverrides) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let mut unknown = Vec::new();
        unknown_keys(&table, TOP_KEYS, "", &mut unknown);
        for (section, allowed) in [("regression", REGRESSION_KEYS), ("classification", CLASSIFICATION_KEYS)] {
            if let Some(toml::Value::Table(t)) = table.get(section) {
                unknown_keys(t, allowed, &format!("{section}."), &mut unknown);
            }
        }
        if !unknown.is_empty() {
            return Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))));
        }
        let raw: RawSuite = table
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;

        let preset = match overrides.preset {
            Some(p) => p,
            None => raw.preset.as_deref().unwrap_or("desk").parse()?,
        };
        let pv = preset.values();
        let regression = raw
            .regression
            .map(|r| -> Result<RegressionGrid> {
                if r.k.is_empty() {
                    return Err(Error::Config("regression.k is empty".into()));
                }
                Ok(RegressionGrid {
                    families: families(&r.families)?,
                    shapes: shapes(&r.shapes)?,
                    k: r.k,
                    eta: positive_etas(r.eta, pv.regression_eta)?,
                    replicates: r.replicates.unwrap_or(1),
                    population: r.population.unwrap_or(pv.population),
                    epochs: r.epochs.unwrap_or(pv.regression_epochs),
                    points: r.points.unwrap_or(pv.points),
                })
            })
            .transpose()?;
        let classification = raw
            .classification
            .map(|c| -> Result<ClassificationGrid> {
                if c.datasets.is_empty() {
                    return Err(Error::Config("classification.datasets is empty".into()));
                }
                Ok(ClassificationGrid {
                    datasets: c.datasets.iter().map(|d| base_dir.join(d)).collect(),
                    families: families(&c.families)?,
                    shapes: shapes(&c.shapes)?,
                    ansatz: c.ansatz.as_deref().unwrap_or("sequential").parse()?,
                    eta: positive_etas(c.eta, pv.classification_eta)?,
                    replicates: c.replicates.unwrap_or(1),
                    epochs: c.epochs.unwrap_or(pv.classification_epochs),
                    batch_size: c.batch.unwrap_or(pv.batch_size),
                })
            })
            .transpose()?;
        if regression.is_none() && classification.is_none() {
            return Err(Error::Config("config defines neither [regression] nor [classification]".into()));
        }
        let workers = overrides.workers.or(raw.workers).unwrap_or(1);
        if workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(Self {
            master_seed: overrides.master_seed.or(raw.master_seed).unwrap_or(0),
            workers,
            preset,
            record_wall_time: overrides.record_wall_time.or(raw.record_wall_time).unwrap_or(false),
            regression,
            classification,
        })
    }

    pub fn load(path: &Path, overrides: SuiteOverrides) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, overrides)
    }

    /// Grid cells in report order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        if let Some(g) = &self.regression {
            for &family in &g.families {
                for &(r, l) in &g.shapes {
                    for &k in &g.k {
                        for &eta in &g.eta {
                            for rep in 0..g.replicates {
                                cells.push(Cell {
                                    task: Task::Regression { k },
                                    family,
                                    qubits: r,
                                    layers: l,
                                    eta,
                                    replicate: rep,
                                    seed: derive_seed(self.master_seed, &[REGRESSION_STREAM, rep as u64]),
                                });
                            }
                        }
                    }
                }
            }
        }
        if let Some(g) = &self.classification {
            for (d, _) in g.datasets.iter().enumerate() {
                for &family in &g.families {
                    for &(r, l) in &g.shapes {
                        for &eta in &g.eta {
                            for rep in 0..g.replicates {
                                let fam = Family::ALL.iter().position(|&f| f == family).unwrap_or(0);
                                let coords = [
                                    CLASSIFICATION_STREAM,
                                    d as u64,
                                    fam as u64,
                                    r as u64,
                                    l as u64,
                                    eta.to_bits(),
                                    rep as u64,
                                ];
                                cells.push(Cell {
                                    task: Task::Classification { dataset: d },
                                    family,
                                    qubits: r,
                                    layers: l,
                                    eta,
                                    replicate: rep,
                                    seed: derive_seed(self.master_seed, &coords),
                                });
                            }
                        }
                    }
                }
            }
        }
        cells
    }
}

const REGRESSION_STREAM: u64 = 0x7265_6772;
const CLASSIFICATION_STREAM: u64 = 0x636c_6173;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Regression { k: usize },
    Classification { dataset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub task: Task,
    pub family: Family,
    pub qubits: usize,
    pub layers: usize,
    pub eta: f64,
    pub replicate: usize,
    /// Regression: master seed of the target population. Classification:
    /// initialization and shuffling seed.
    pub seed: u64,
}

impl Cell {
    pub fn id(&self, cfg: &SuiteConfig) -> String {
        let task = match self.task {
            Task::Regression { k } => format!("K{k}"),
            Task::Classification { dataset } => format!("{}", dataset_id(cfg, dataset)),
        };
        format!(
            "{}_R{}_L{}_{}_eta{}_r{}",
            self.family,
            self.qubits,
            self.layers,
            task,
            fmt_f64(self.eta),
            self.replicate
        )
    }
}

fn dataset_id(cfg: &SuiteConfig, index: usize) -> String {
    cfg.classification
        .as_ref()
        .and_then(|g| g.datasets.get(index))
        .and_then(|p| p.file_name())
        .map_or_else(|| format!("dataset{index}"), |n| n.to_string_lossy().into_owned())
}

/// One results row; `None` cells are written blank.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentRecord {
    pub family: String,
    pub area: usize,
    pub qubits: usize,
    pub layers: usize,
    pub k_or_dataset: String,
    pub eta: f64,
    pub epochs: usize,
    pub seed: u64,
    pub final_loss: Option<f64>,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub roc_auc: Option<f64>,
    pub mu: Option<f64>,
    pub q25: Option<f64>,
    pub q75: Option<f64>,
    pub wall_time: Option<f64>,
    pub loss_history: Vec<f64>,
    pub error: Option<String>,
}

pub const RESULTS_HEADER: &str = "family,area,R,L,K_or_dataset,eta,epochs,seed,final_loss,accuracy,precision,recall,f1,roc_auc,mu_K,q25,q75,wall_time_s";

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.area,
            self.qubits,
            self.layers,
            self.k_or_dataset,
            fmt_f64(self.eta),
            self.epochs,
            self.seed,
            opt(self.final_loss),
            opt(self.accuracy),
            opt(self.precision),
            opt(self.recall),
            opt(self.f1),
            opt(self.roc_auc),
            opt(self.mu),
            opt(self.q25),
            opt(self.q75),
            opt(self.wall_time),
        )
    }
}

fn run_cell(cfg: &SuiteConfig, cell: &Cell, datasets: &[Result<(LabelledTable, LabelledTable), String>]) -> ExperimentRecord {
    let mut rec = ExperimentRecord {
        family: cell.family.to_string(),
        area: cell.qubits * cell.layers,
        qubits: cell.qubits,
        layers: cell.layers,
        eta: cell.eta,
        seed: cell.seed,
        ..Default::default()
    };
    let start = Instant::now();
    let outcome: Result<()> = match cell.task {
        Task::Regression { k } => {
            let g = cfg.regression.as_ref().expect("regression cell without grid");
            rec.k_or_dataset = k.to_string();
            rec.epochs = g.epochs;
            let cc = CapabilityConfig {
                family: cell.family,
                qubits: cell.qubits,
                layers: cell.layers,
                k_max: k,
                population: g.population,
                points: g.points,
                learning_rate: cell.eta,
                epochs: g.epochs,
                master_seed: cell.seed,
            };
            learning_capability(&cc).map(|r| {
                rec.final_loss = Some(r.mu);
                rec.mu = Some(r.mu);
                rec.q25 = Some(r.q25);
                rec.q75 = Some(r.q75);
                rec.loss_history = r.mean_history();
            })
        }
        Task::Classification { dataset } => {
            let g = cfg.classification.as_ref().expect("classification cell without grid");
            rec.k_or_dataset = dataset_id(cfg, dataset);
            rec.epochs = g.epochs;
            match &datasets[dataset] {
                Err(msg) => Err(Error::Config(msg.clone())),
                Ok((train, test)) => {
                    let cc = ClassificationConfig {
                        family: cell.family,
                        qubits: cell.qubits,
                        layers: cell.layers,
                        ansatz: g.ansatz,
                        learning_rate: cell.eta,
                        epochs: g.epochs,
                        batch_size: g.batch_size,
                        seed: cell.seed,
                    };
                    run_classification(&cc, train, test).map(|o| {
                        rec.final_loss = Some(o.final_loss);
                        rec.accuracy = Some(o.metrics.accuracy);
                        rec.precision = Some(o.metrics.precision);
                        rec.recall = Some(o.metrics.recall);
                        rec.f1 = Some(o.metrics.f1);
                        rec.roc_auc = o.metrics.roc_auc;
                        rec.loss_history = o.loss_history;
                    })
                }
            }
        }
    };
    if let Err(e) = outcome {
        rec.error = Some(e.to_string());
    }
    if cfg.record_wall_time {
        rec.wall_time = Some(start.elapsed().as_secs_f64());
    }
    rec
}

/// Paths written by [`run_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub results: PathBuf,
    pub failures: Option<PathBuf>,
    pub plots: Vec<PathBuf>,
    pub records: Vec<ExperimentRecord>,
}

/// Runs every grid cell and writes `results.csv`, one `plots/<cell>.csv`
/// per successful cell and, when any cell failed, `failures.csv`.
pub fn run_suite(cfg: &SuiteConfig, out: &Path) -> Result<SuiteReport> {
    let cells = cfg.cells();
    let datasets: Vec<Result<(LabelledTable, LabelledTable), String>> = cfg
        .classification
        .as_ref()
        .map(|g| {
            g.datasets
                .iter()
                .map(|d| LabelledTable::read_split(d).map_err(|e| e.to_string()))
                .collect()
        })
        .unwrap_or_default();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let records: Vec<ExperimentRecord> =
        pool.install(|| cells.par_iter().map(|c| run_cell(cfg, c, &datasets)).collect());

    fs::create_dir_all(out.join("plots"))?;
    let mut results = String::from(RESULTS_HEADER);
    results.push('\n');
    let mut failures = String::new();
    let mut plots = Vec::new();
    let mut seen = BTreeSet::new();
    for (cell, rec) in cells.iter().zip(&records) {
        results.push_str(&rec.csv_row());
        results.push('\n');
        let id = cell.id(cfg);
        if let Some(err) = &rec.error {
            let _ = writeln!(failures, "{id},\"{}\"", err.replace('"', "\"\""));
            continue;
        }
        if !seen.insert(id.clone()) {
            continue;
        }
        let mut plot = String::from("epoch,loss\n");
        for (e, v) in rec.loss_history.iter().enumerate() {
            let _ = writeln!(plot, "{},{}", e + 1, fmt_f64(*v));
        }
        let path = out.join("plots").join(format!("{id}.csv"));
        fs::write(&path, plot)?;
        plots.push(path);
    }
    let results_path = out.join("results.csv");
    fs::write(&results_path, results)?;
    let failures_path = out.join("failures.csv");
    let failures = if failures.is_empty() {
        if failures_path.exists() {
            fs::remove_file(&failures_path)?;
        }
        None
    } else {
        fs::write(&failures_path, format!("cell,error\n{failures}"))?;
        Some(failures_path)
    };
    Ok(SuiteReport {
        results: results_path,
        failures,
        plots,
        records,
    })
}
