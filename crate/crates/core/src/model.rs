//! QNN assembly: strongly entangling trainable blocks interleaved with data
//! encoding layers, in univariate, sequential and parallel forms.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encodings::{data_layer, EncodingFamily, Family};
use crate::error::{Error, Result};
use crate::simulator::{Circuit, GateOp};

pub const DEFAULT_ENTANGLING_DEPTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnsatzMode {
    Univariate,
    Sequential,
    Parallel,
}

impl AnsatzMode {
    pub fn name(self) -> &'static str {
        match self {
            AnsatzMode::Univariate => "univariate",
            AnsatzMode::Sequential => "sequential",
            AnsatzMode::Parallel => "parallel",
        }
    }
}

impl fmt::Display for AnsatzMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnsatzMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "univariate" => Ok(AnsatzMode::Univariate),
            "sequential" => Ok(AnsatzMode::Sequential),
            "parallel" => Ok(AnsatzMode::Parallel),
            other => Err(Error::Config(format!("unknown ansatz {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchitectureSpec {
    pub family: Family,
    /// Qubits per feature (R).
    pub qubits: usize,
    /// Encoding layers per feature (L).
    pub layers: usize,
    /// Feature count (N).
    pub features: usize,
    pub ansatz: AnsatzMode,
    /// Strongly entangling blocks per trainable unitary.
    pub entangling_depth: usize,
}

impl ArchitectureSpec {
    pub fn univariate(family: Family, qubits: usize, layers: usize) -> Self {
        Self {
            family,
            qubits,
            layers,
            features: 1,
            ansatz: AnsatzMode::Univariate,
            entangling_depth: DEFAULT_ENTANGLING_DEPTH,
        }
    }

    pub fn multivariate(
        family: Family,
        qubits: usize,
        layers: usize,
        features: usize,
        ansatz: AnsatzMode,
    ) -> Self {
        Self {
            family,
            qubits,
            layers,
            features,
            ansatz,
            entangling_depth: DEFAULT_ENTANGLING_DEPTH,
        }
    }

    pub fn area(&self) -> usize {
        self.qubits * self.layers
    }

    /// Register width of the assembled circuit.
    pub fn total_qubits(&self) -> usize {
        match self.ansatz {
            AnsatzMode::Parallel => self.features * self.qubits,
            _ => self.qubits,
        }
    }

    pub fn encoding(&self) -> Result<EncodingFamily> {
        EncodingFamily::for_qubits(self.family, self.qubits)
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits == 0 || self.layers == 0 || self.features == 0 {
            return Err(Error::architecture("R, L and N must all be positive"));
        }
        if self.entangling_depth == 0 {
            return Err(Error::architecture("entangling depth must be positive"));
        }
        if self.ansatz == AnsatzMode::Univariate && self.features != 1 {
            return Err(Error::architecture(format!(
                "univariate ansatz with {} features",
                self.features
            )));
        }
        self.encoding()?;
        Ok(())
    }
}

/// `depth` strongly entangling blocks on `qubits` qubits starting at
/// `first_slot`. Returns the gates and the next free slot.
pub fn entangling_block(qubits: usize, depth: usize, first_slot: usize) -> (Vec<GateOp>, usize) {
    let mut ops = Vec::with_capacity(depth * 2 * qubits);
    let mut slot = first_slot;
    for b in 0..depth {
        for qubit in 0..qubits {
            ops.push(GateOp::GeneralRotation {
                qubit,
                slots: [slot, slot + 1, slot + 2],
            });
            slot += 3;
        }
        if qubits >= 2 {
            let range = b % (qubits - 1) + 1;
            for control in 0..qubits {
                ops.push(GateOp::ControlledNot {
                    control,
                    target: (control + range) % qubits,
                });
            }
        }
    }
    (ops, slot)
}

pub fn param_count(spec: &ArchitectureSpec) -> usize {
    let per_block = spec.entangling_depth * 3;
    match spec.ansatz {
        AnsatzMode::Univariate => spec.qubits * (spec.layers + 1) * per_block,
        AnsatzMode::Parallel => spec.features * spec.qubits * (spec.layers + 1) * per_block,
        AnsatzMode::Sequential => spec.qubits * (spec.layers * spec.features + 1) * per_block,
    }
}

pub fn build(spec: &ArchitectureSpec) -> Result<Circuit> {
    spec.validate()?;
    let enc = spec.encoding()?;
    let (r, l, depth) = (spec.qubits, spec.layers, spec.entangling_depth);
    let width = spec.total_qubits();
    let mut ops = Vec::new();
    let mut slot = 0;
    let push_block = |ops: &mut Vec<GateOp>, slot: &mut usize| {
        let (block, next) = entangling_block(width, depth, *slot);
        ops.extend(block);
        *slot = next;
    };

    match spec.ansatz {
        AnsatzMode::Univariate => {
            push_block(&mut ops, &mut slot);
            for layer in 1..=l {
                ops.extend(data_layer(&enc, r, l, layer, 0, 0)?);
                push_block(&mut ops, &mut slot);
            }
        }
        AnsatzMode::Sequential => {
            for feature in 0..spec.features {
                for layer in 1..=l {
                    push_block(&mut ops, &mut slot);
                    ops.extend(data_layer(&enc, r, l, layer, feature, 0)?);
                }
            }
            push_block(&mut ops, &mut slot);
        }
        AnsatzMode::Parallel => {
            push_block(&mut ops, &mut slot);
            for layer in 1..=l {
                for feature in 0..spec.features {
                    ops.extend(data_layer(&enc, r, l, layer, feature, feature * r)?);
                }
                push_block(&mut ops, &mut slot);
            }
        }
    }
    debug_assert_eq!(slot, param_count(spec));
    Circuit::new(width, ops, slot, spec.features)
}

/// Uniform draws on [0, 2π) from a ChaCha8 stream seeded with `seed`.
pub fn init_params(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random_range(0.0..2.0 * PI)).collect()
}

pub fn evaluate(circuit: &Circuit, params: &[f64], data: &[f64]) -> Result<f64> {
    circuit.expectation(params, data)
}

/// Fourier coefficients c_ω for ω ∈ [−ω_max, ω_max] of a univariate circuit,
/// by discrete projection over `grid` equidistant points on [0, 2π).
///
/// Exact when the circuit's spectrum lies in [−ω_max, ω_max] and
/// `grid ≥ 2·ω_max + 1`.
pub fn extract_fourier_coefficients(
    circuit: &Circuit,
    params: &[f64],
    omega_max: usize,
    grid: usize,
) -> Result<BTreeMap<i64, Complex64>> {
    if circuit.data_slot_count() != 1 {
        return Err(Error::contract("coefficient extraction needs a univariate circuit"));
    }
    if grid < 2 * omega_max + 1 {
        return Err(Error::Aliasing(format!(
            "{grid} grid points cannot resolve frequencies up to {omega_max}"
        )));
    }
    let xs: Vec<f64> = (0..grid).map(|j| 2.0 * PI * j as f64 / grid as f64).collect();
    let samples = xs
        .iter()
        .map(|&x| circuit.expectation(params, &[x]))
        .collect::<Result<Vec<_>>>()?;
    let w = omega_max as i64;
    Ok((-w..=w)
        .map(|omega| {
            let sum: Complex64 = xs
                .iter()
                .zip(&samples)
                .map(|(&x, &f)| Complex64::from_polar(f, -(omega as f64) * x))
                .sum();
            (omega, sum / grid as f64)
        })
        .collect())
}

/// Σ c_ω e^{iωx}, real part.
pub fn fourier_series(coeffs: &BTreeMap<i64, Complex64>, x: f64) -> f64 {
    coeffs
        .iter()
        .map(|(&w, c)| (c * Complex64::from_polar(1.0, w as f64 * x)).re)
        .sum()
}
