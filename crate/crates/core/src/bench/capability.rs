//! Learning-capability sweeps over populations of random Fourier targets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encodings::Family;
use crate::error::{Error, Result};
use crate::model::{build, ArchitectureSpec};
use crate::seeds::derive_seed;
use crate::spectrum::omega;
use crate::synthdata::{build_dataset, projection_residual, sample_target};
use crate::training::{mse, predict, train, Dataset, TrainConfig};

/// Seed streams; targets depend only on (K, index) so every architecture
/// sees the same population.
const TARGET_STREAM: u64 = 1;
const INIT_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapabilityConfig {
    pub family: Family,
    pub qubits: usize,
    pub layers: usize,
    pub k_max: usize,
    pub population: usize,
    pub points: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub master_seed: u64,
}

pub fn target_seed(master: u64, k_max: usize, index: usize) -> u64 {
    derive_seed(master, &[TARGET_STREAM, k_max as u64, index as u64])
}

pub fn init_seed(cfg: &CapabilityConfig, index: usize) -> u64 {
    let family = Family::ALL.iter().position(|&f| f == cfg.family).unwrap_or(0);
    derive_seed(
        cfg.master_seed,
        &[
            INIT_STREAM,
            family as u64,
            cfg.qubits as u64,
            cfg.layers as u64,
            cfg.k_max as u64,
            index as u64,
        ],
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionOutcome {
    pub index: usize,
    pub target_seed: u64,
    pub init_seed: u64,
    /// Training MSE at the final parameters (last finite epoch loss if diverged).
    pub final_loss: f64,
    /// Least-squares residual of the target on the model's spectrum.
    pub residual_floor: f64,
    pub diverged: bool,
    pub loss_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapabilityResult {
    pub mu: f64,
    pub q25: f64,
    pub q75: f64,
    pub per_function: Vec<FunctionOutcome>,
}

impl CapabilityResult {
    /// Mean loss per epoch across the population.
    pub fn mean_history(&self) -> Vec<f64> {
        let epochs = self
            .per_function
            .iter()
            .map(|f| f.loss_history.len())
            .max()
            .unwrap_or(0);
        (0..epochs)
            .map(|e| {
                let vals: Vec<f64> = self
                    .per_function
                    .iter()
                    .filter_map(|f| f.loss_history.get(e).copied())
                    .collect();
                vals.iter().sum::<f64>() / vals.len() as f64
            })
            .collect()
    }
}

/// Linear-interpolation quantile of an unsorted sample, `p` in [0, 1].
pub fn quantile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let pos = p * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

pub fn run_function(cfg: &CapabilityConfig, index: usize) -> Result<FunctionOutcome> {
    let spec = ArchitectureSpec::univariate(cfg.family, cfg.qubits, cfg.layers);
    let circuit = build(&spec)?;
    let spectrum = omega(cfg.family, cfg.qubits, cfg.layers)?;
    let t_seed = target_seed(cfg.master_seed, cfg.k_max, index);
    let target = sample_target(cfg.k_max, t_seed)?;
    let data = build_dataset(&target, cfg.points)?;
    let residual_floor = projection_residual(&data.x, &data.y, &spectrum)?;
    let dataset = Dataset::univariate(&data.x, &data.y)?;
    let i_seed = init_seed(cfg, index);
    let train_cfg = TrainConfig::regression(cfg.learning_rate, cfg.epochs, i_seed);
    let (final_loss, diverged, loss_history) = match train(&circuit, &dataset, &train_cfg) {
        Ok(model) => {
            let pred = predict(&circuit, &model.theta, &dataset.inputs)?;
            (mse(&pred, &dataset.targets)?, false, model.loss_history)
        }
        Err(Error::Divergence {
            last_finite_loss, ..
        }) => (last_finite_loss.unwrap_or(f64::INFINITY), true, Vec::new()),
        Err(e) => return Err(e),
    };
    Ok(FunctionOutcome {
        index,
        target_seed: t_seed,
        init_seed: i_seed,
        final_loss,
        residual_floor,
        diverged,
        loss_history,
    })
}

/// Trains one univariate model per population member and aggregates the
/// final losses. Functions run in parallel; results keep index order.
pub fn learning_capability(cfg: &CapabilityConfig) -> Result<CapabilityResult> {
    if cfg.population == 0 {
        return Err(Error::contract("population must be at least 1"));
    }
    ArchitectureSpec::univariate(cfg.family, cfg.qubits, cfg.layers).validate()?;
    let per_function = (0..cfg.population)
        .into_par_iter()
        .map(|i| run_function(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let losses: Vec<f64> = per_function.iter().map(|f| f.final_loss).collect();
    Ok(CapabilityResult {
        mu: losses.iter().sum::<f64>() / losses.len() as f64,
        q25: quantile(&losses, 0.25),
        q75: quantile(&losses, 0.75),
        per_function,
    })
}
