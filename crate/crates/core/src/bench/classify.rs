//! Multivariate binary classification runs on labelled feature tables.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bench::metrics::{classification_metrics, ClassificationMetrics};
use crate::encodings::Family;
use crate::error::{Error, Result};
use crate::model::{build, AnsatzMode, ArchitectureSpec};
use crate::training::{predict, sigmoid, train, Dataset, TrainConfig};

/// Feature rows with 0/1 labels, as written by the preprocessing step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabelledTable {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

impl LabelledTable {
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Reads a CSV with a header line and the label in the last column.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let err = |line: usize, message: String| Error::Format {
            file: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate();
        let header = lines
            .next()
            .ok_or_else(|| err(1, "missing header".into()))?
            .1
            .split(',')
            .count();
        if header < 2 {
            return Err(err(1, "need at least one feature and a label column".into()));
        }
        let mut table = LabelledTable::default();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != header {
                return Err(err(i + 1, format!("{} cells, expected {header}", cells.len())));
            }
            let row = cells[..header - 1]
                .iter()
                .map(|c| c.trim().parse::<f64>().map_err(|_| err(i + 1, format!("non-numeric cell {c:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let label = match cells[header - 1].trim() {
                "0" => 0,
                "1" => 1,
                other => return Err(err(i + 1, format!("label {other:?} is not 0 or 1"))),
            };
            table.rows.push(row);
            table.labels.push(label);
        }
        if table.rows.is_empty() {
            return Err(err(2, "no data rows".into()));
        }
        Ok(table)
    }

    /// Loads `train.csv` and `test.csv` from a prepared directory.
    pub fn read_split(dir: &Path) -> Result<(Self, Self)> {
        let train = Self::read_csv(&dir.join("train.csv"))?;
        let test = Self::read_csv(&dir.join("test.csv"))?;
        if train.width() != test.width() {
            return Err(Error::contract("train and test feature counts differ"));
        }
        Ok((train, test))
    }

    fn to_dataset(&self) -> Result<Dataset> {
        Dataset::new(self.rows.clone(), self.labels.iter().map(|&l| f64::from(l)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationConfig {
    pub family: Family,
    pub qubits: usize,
    pub layers: usize,
    pub ansatz: AnsatzMode,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationOutcome {
    pub final_loss: f64,
    pub metrics: ClassificationMetrics,
    pub loss_history: Vec<f64>,
    pub test_scores: Vec<f64>,
    pub wall_time: f64,
}

/// Trains with BCE on `train` and evaluates σ(gain·z) scores on `test`.
pub fn run_classification(
    cfg: &ClassificationConfig,
    train_set: &LabelledTable,
    test_set: &LabelledTable,
) -> Result<ClassificationOutcome> {
    let spec = ArchitectureSpec::multivariate(cfg.family, cfg.qubits, cfg.layers, train_set.width(), cfg.ansatz);
    let circuit = build(&spec)?;
    let tc = TrainConfig::classification(cfg.learning_rate, cfg.epochs, cfg.batch_size, cfg.seed);
    let model = train(&circuit, &train_set.to_dataset()?, &tc)?;
    let z = predict(&circuit, &model.theta, &test_set.rows)?;
    let test_scores: Vec<f64> = z.iter().map(|&v| sigmoid(tc.sigmoid_gain * v)).collect();
    let metrics = classification_metrics(&test_set.labels, &test_scores, 0.5)?;
    Ok(ClassificationOutcome {
        final_loss: model.loss_history.last().copied().unwrap_or(f64::NAN),
        metrics,
        loss_history: model.loss_history,
        test_scores,
        wall_time: model.wall_time,
    })
}
