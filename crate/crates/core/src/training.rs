//! Losses, output mapping and plain gradient-descent training loops.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::init_params;
use crate::seeds::derive_seed;
use crate::simulator::Circuit;

/// Probabilities are kept this far from 0 and 1 inside the log.
pub const PROBABILITY_CLAMP: f64 = 1e-12;
pub const DEFAULT_SIGMOID_GAIN: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    Mse,
    Bce,
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossKind::Mse => "mse",
            LossKind::Bce => "bce",
        })
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mse" => Ok(LossKind::Mse),
            "bce" => Ok(LossKind::Bce),
            other => Err(Error::Config(format!("unknown loss {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Batch {
    Full,
    Mini(usize),
}

impl Batch {
    /// 0 means full batch.
    pub fn from_size(size: usize) -> Self {
        if size == 0 {
            Batch::Full
        } else {
            Batch::Mini(size)
        }
    }

    pub fn size(self) -> usize {
        match self {
            Batch::Full => 0,
            Batch::Mini(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub loss: LossKind,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch: Batch,
    pub seed: u64,
    pub sigmoid_gain: f64,
}

impl TrainConfig {
    pub fn regression(learning_rate: f64, epochs: usize, seed: u64) -> Self {
        Self {
            loss: LossKind::Mse,
            learning_rate,
            epochs,
            batch: Batch::Full,
            seed,
            sigmoid_gain: DEFAULT_SIGMOID_GAIN,
        }
    }

    pub fn classification(learning_rate: f64, epochs: usize, batch_size: usize, seed: u64) -> Self {
        Self {
            loss: LossKind::Bce,
            learning_rate,
            epochs,
            batch: Batch::from_size(batch_size),
            seed,
            sigmoid_gain: DEFAULT_SIGMOID_GAIN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::contract(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::contract("epochs must be at least 1"));
        }
        if self.batch == Batch::Mini(0) {
            return Err(Error::contract("mini-batch size must be at least 1"));
        }
        if !self.sigmoid_gain.is_finite() {
            return Err(Error::contract("sigmoid gain must be finite"));
        }
        Ok(())
    }
}

/// Row-major inputs with one target per row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl Dataset {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::contract(format!(
                "{} inputs but {} targets",
                inputs.len(),
                targets.len()
            )));
        }
        Ok(Self { inputs, targets })
    }

    /// One-feature dataset from a grid.
    pub fn univariate(x: &[f64], y: &[f64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| vec![v]).collect(), y.to_vec())
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub theta: Vec<f64>,
    pub loss_history: Vec<f64>,
    pub wall_time: f64,
}

pub fn mse(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.len() != targets.len() || predictions.is_empty() {
        return Err(Error::contract("mse needs equal, nonzero lengths"));
    }
    let n = predictions.len() as f64;
    Ok(predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / n)
}

pub fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

fn check_label(y: f64) -> Result<()> {
    if y == 0.0 || y == 1.0 {
        Ok(())
    } else {
        Err(Error::contract(format!("label {y} is not 0 or 1")))
    }
}

fn bce_term(z: f64, y: f64, gain: f64) -> f64 {
    let p = sigmoid(gain * z).clamp(PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP);
    -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
}

/// Mean binary cross entropy of ŷ = σ(gain·z).
pub fn bce(outputs: &[f64], labels: &[f64], gain: f64) -> Result<f64> {
    if outputs.len() != labels.len() || outputs.is_empty() {
        return Err(Error::contract("bce needs equal, nonzero lengths"));
    }
    labels.iter().try_for_each(|&y| check_label(y))?;
    Ok(outputs
        .iter()
        .zip(labels)
        .map(|(&z, &y)| bce_term(z, y, gain))
        .sum::<f64>()
        / outputs.len() as f64)
}

/// Pairwise (tree) reduction in a fixed order, independent of thread count.
fn pairwise_sum(rows: &[Vec<f64>], width: usize) -> Vec<f64> {
    match rows.len() {
        0 => vec![0.0; width],
        1 => rows[0].clone(),
        n => {
            let (a, b) = rows.split_at(n / 2);
            let mut left = pairwise_sum(a, width);
            let right = pairwise_sum(b, width);
            left.iter_mut().zip(right).for_each(|(l, r)| *l += r);
            left
        }
    }
}

/// Circuit outputs for each input row, evaluated in parallel.
pub fn predict(circuit: &Circuit, theta: &[f64], inputs: &[Vec<f64>]) -> Result<Vec<f64>> {
    inputs
        .par_iter()
        .map(|x| circuit.expectation(theta, x))
        .collect()
}

/// Mean loss over `indices` and its gradient with respect to θ.
pub fn loss_and_gradient(
    circuit: &Circuit,
    theta: &[f64],
    data: &Dataset,
    indices: &[usize],
    loss: LossKind,
    gain: f64,
) -> Result<(f64, Vec<f64>)> {
    if indices.is_empty() {
        return Err(Error::contract("empty batch"));
    }
    let n = indices.len() as f64;
    let per_sample = indices
        .par_iter()
        .map(|&i| {
            let (f, mut grad) = circuit.gradient(theta, &data.inputs[i])?;
            let y = data.targets[i];
            let (value, dloss) = match loss {
                LossKind::Mse => ((f - y) * (f - y), 2.0 * (f - y)),
                LossKind::Bce => {
                    check_label(y)?;
                    (bce_term(f, y, gain), gain * (sigmoid(gain * f) - y))
                }
            };
            grad.iter_mut().for_each(|g| *g *= dloss / n);
            grad.push(value / n);
            Ok(grad)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = pairwise_sum(&per_sample, theta.len() + 1);
    let value = total.pop().expect("loss slot");
    Ok((value, total))
}

/// Trains from parameters drawn uniformly on [0, 2π) with `config.seed`.
pub fn train(circuit: &Circuit, data: &Dataset, config: &TrainConfig) -> Result<TrainedModel> {
    let theta = init_params(circuit.parameter_slot_count(), config.seed);
    train_from(circuit, data, config, theta)
}

pub fn train_from(
    circuit: &Circuit,
    data: &Dataset,
    config: &TrainConfig,
    mut theta: Vec<f64>,
) -> Result<TrainedModel> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::contract("empty dataset"));
    }
    if let Some(row) = data.inputs.iter().find(|r| r.len() != circuit.data_slot_count()) {
        return Err(Error::contract(format!(
            "input rows have {} features, circuit expects {}",
            row.len(),
            circuit.data_slot_count()
        )));
    }
    if theta.len() != circuit.parameter_slot_count() {
        return Err(Error::contract("initial parameter length mismatch"));
    }

    let start = Instant::now();
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, &[0x5_u64]));
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let batch = match config.batch {
            Batch::Full => data.len(),
            Batch::Mini(size) => {
                order.shuffle(&mut shuffle_rng);
                size
            }
        };
        let mut batch_losses = 0.0;
        let mut batches = 0usize;
        for chunk in order.chunks(batch) {
            let (loss, grad) =
                loss_and_gradient(circuit, &theta, data, chunk, config.loss, config.sigmoid_gain)?;
            if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::Divergence {
                    epoch,
                    last_finite_loss: history.last().copied(),
                });
            }
            theta
                .iter_mut()
                .zip(&grad)
                .for_each(|(t, g)| *t -= config.learning_rate * g);
            batch_losses += loss;
            batches += 1;
        }
        history.push(batch_losses / batches as f64);
    }

    Ok(TrainedModel {
        theta,
        loss_history: history,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
