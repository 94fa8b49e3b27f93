//! Data-encoding families: coefficient schedules β_{r,l}, sub-generator
//! eigenvalues, and the diagonal gates that realize `exp(-i·x·H_l)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::GateOp;
use crate::spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hamming,
    Binary,
    Exponential,
    Ternary,
    Turnpike,
    Golomb,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Hamming,
        Family::Binary,
        Family::Exponential,
        Family::Ternary,
        Family::Turnpike,
        Family::Golomb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Hamming => "hamming",
            Family::Binary => "binary",
            Family::Exponential => "exponential",
            Family::Ternary => "ternary",
            Family::Turnpike => "turnpike",
            Family::Golomb => "golomb",
        }
    }

    /// Whether sub-generators act on multi-qubit blocks with a fixed Hamiltonian.
    pub fn uses_fixed_hamiltonian(self) -> bool {
        matches!(self, Family::Turnpike | Family::Golomb)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown encoding family {s:?}")))
    }
}

/// Turnpike Hamiltonian on three qubits (relaxed turnpike solution, K = 24).
pub const TURNPIKE_Q3: [i64; 8] = [0, 8, 15, 17, 20, 21, 31, 39];
/// Golomb ruler with eight marks.
pub const GOLOMB_Q3: [i64; 8] = [0, 1, 4, 9, 15, 22, 32, 34];
/// Perfect Golomb ruler on two qubits; also a relaxed turnpike solution.
pub const RULER_Q2: [i64; 4] = [0, 1, 4, 6];

/// Exact eigenvalues `values[j] / denominator`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalues {
    pub values: Vec<i64>,
    pub denominator: i64,
}

impl Eigenvalues {
    pub fn to_f64(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|&v| v as f64 / self.denominator as f64)
            .collect()
    }
}

/// A family paired with its block width q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingFamily {
    family: Family,
    block_width: usize,
}

impl EncodingFamily {
    /// Picks the block width used for an `R`-qubit register: 1 for single-qubit
    /// families; 3 when 3 | R, else 2 when 2 | R, for turnpike and Golomb.
    pub fn for_qubits(family: Family, qubits: usize) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::architecture("qubit count must be positive"));
        }
        let block_width = if family.uses_fixed_hamiltonian() {
            if qubits % 3 == 0 {
                3
            } else if qubits % 2 == 0 {
                2
            } else {
                return Err(Error::architecture(format!(
                    "{family} encoding needs R divisible by 2 or 3, got R = {qubits}"
                )));
            }
        } else {
            1
        };
        Ok(Self {
            family,
            block_width,
        })
    }

    pub fn with_block_width(family: Family, block_width: usize) -> Result<Self> {
        let ok = if family.uses_fixed_hamiltonian() {
            matches!(block_width, 2 | 3)
        } else {
            block_width == 1
        };
        if !ok {
            return Err(Error::architecture(format!(
                "{family} encoding has no Hamiltonian for block width {block_width}"
            )));
        }
        Ok(Self {
            family,
            block_width,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn block_width(&self) -> usize {
        self.block_width
    }

    /// Integer diagonal of the fixed Hamiltonian (turnpike / Golomb only).
    pub fn fixed_eigenvalues(&self) -> Option<&'static [i64]> {
        match (self.family, self.block_width) {
            (Family::Turnpike, 3) => Some(&TURNPIKE_Q3),
            (Family::Golomb, 3) => Some(&GOLOMB_Q3),
            (Family::Turnpike | Family::Golomb, 2) => Some(&RULER_Q2),
            _ => None,
        }
    }

    pub fn subgenerator_eigenvalues(&self) -> Eigenvalues {
        match self.fixed_eigenvalues() {
            Some(ev) => Eigenvalues {
                values: ev.to_vec(),
                denominator: 1,
            },
            None => Eigenvalues {
                values: vec![-1, 1],
                denominator: 2,
            },
        }
    }

    fn check_register(&self, qubits: usize, layers: usize) -> Result<()> {
        if qubits == 0 || layers == 0 {
            return Err(Error::architecture("R and L must be positive"));
        }
        if qubits % self.block_width != 0 {
            return Err(Error::architecture(format!(
                "block width {} does not divide R = {qubits}",
                self.block_width
            )));
        }
        Ok(())
    }
}

/// β_{r,l} for `blocks = R/q` rows and `layers` columns (stored 0-indexed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSchedule {
    blocks: usize,
    layers: usize,
    beta: Vec<i64>,
}

impl CoefficientSchedule {
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    /// Coefficient of block `r` in layer `l`, both 0-based.
    pub fn get(&self, r: usize, l: usize) -> i64 {
        self.beta[r * self.layers + l]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.beta.chunks(self.layers).map(<[i64]>::to_vec).collect()
    }

    pub fn values(&self) -> &[i64] {
        &self.beta
    }
}

fn checked_power(base: i64, exp: usize) -> Result<i64> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or_else(|| Error::architecture(format!("coefficient {base}^{exp} overflows i64")))
}

pub fn schedule(enc: &EncodingFamily, qubits: usize, layers: usize) -> Result<CoefficientSchedule> {
    enc.check_register(qubits, layers)?;
    let blocks = qubits / enc.block_width;
    let count = blocks * layers;
    let base: i64 = match enc.family {
        Family::Hamming => 1,
        Family::Binary | Family::Exponential => 2,
        Family::Ternary => 3,
        Family::Turnpike => {
            let k = spectrum::turnpike_k(enc.fixed_eigenvalues().expect("fixed hamiltonian"));
            2 * k as i64 + 1
        }
        Family::Golomb => {
            let ev = enc.fixed_eigenvalues().expect("fixed hamiltonian");
            2 * (ev[ev.len() - 1] - ev[0]) + 1
        }
    };
    // exponent (l-1) + L(r-1) is exactly the row-major index r*L + l
    let mut beta = (0..count)
        .map(|e| checked_power(base, e))
        .collect::<Result<Vec<_>>>()?;
    if enc.family == Family::Exponential && count > 1 {
        let last = beta.len() - 1;
        beta[last] = checked_power(2, count - 1)?
            .checked_add(1)
            .ok_or_else(|| Error::architecture("coefficient overflow"))?;
    }
    Ok(CoefficientSchedule {
        blocks,
        layers,
        beta,
    })
}

/// Gates of data layer `layer` (1-based) for a register starting at
/// `qubit_offset`: one diagonal gate per block with angles β_{r,l}·λ_j.
pub fn data_layer(
    enc: &EncodingFamily,
    qubits: usize,
    layers: usize,
    layer: usize,
    data_slot: usize,
    qubit_offset: usize,
) -> Result<Vec<GateOp>> {
    if layer == 0 || layer > layers {
        return Err(Error::contract(format!(
            "layer index {layer} outside 1..={layers}"
        )));
    }
    let sched = schedule(enc, qubits, layers)?;
    let eigen = enc.subgenerator_eigenvalues().to_f64();
    let q = enc.block_width;
    Ok((0..sched.blocks)
        .map(|r| {
            let beta = sched.get(r, layer - 1) as f64;
            GateOp::DiagonalPhase {
                qubits: (qubit_offset + r * q..qubit_offset + (r + 1) * q).collect(),
                angles: eigen.iter().map(|&lam| beta * lam).collect(),
                data_slot,
            }
        })
        .collect())
}
