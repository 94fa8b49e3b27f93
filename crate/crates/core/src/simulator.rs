//! Dense statevector simulation with a fixed `Z ⊗ I ⊗ … ⊗ I` observable.
//!
//! Qubit 0 is the most significant bit of the basis index, so the measured
//! qubit splits the amplitude vector into an upper (+1) and lower (−1) half.
//! Gradients come from a reverse sweep over the gate list (adjoint method):
//! one forward pass, then one backward pass that un-computes each gate on
//! both the state and the co-state.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    qubit_count: usize,
}

impl StateVector {
    /// |0…0⟩ on `qubit_count` qubits.
    pub fn zero(qubit_count: usize) -> Result<Self> {
        if qubit_count == 0 || qubit_count > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "qubit count {qubit_count} outside 1..={MAX_QUBITS}"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << qubit_count];
        amplitudes[0] = ONE;
        Ok(Self {
            amplitudes,
            qubit_count,
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::contract(format!(
                "amplitude vector length {len} is not a power of two ≥ 2"
            )));
        }
        let qubit_count = len.trailing_zeros() as usize;
        if qubit_count > MAX_QUBITS {
            return Err(Error::Capacity(format!("{qubit_count} qubits")));
        }
        Ok(Self {
            amplitudes,
            qubit_count,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨ψ| Z⊗I⊗…⊗I |ψ⟩ with qubit 0 measured.
    pub fn expectation_z0(&self) -> f64 {
        let half = self.amplitudes.len() / 2;
        let (upper, lower) = self.amplitudes.split_at(half);
        let plus: f64 = upper.iter().map(|a| a.norm_sqr()).sum();
        let minus: f64 = lower.iter().map(|a| a.norm_sqr()).sum();
        plus - minus
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.qubit_count - 1 - qubit)
    }

    fn apply_matrix(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) {
        let mask = self.mask(qubit);
        let len = self.amplitudes.len();
        let mut base = 0;
        while base < len {
            for i in base..base + mask {
                let j = i | mask;
                let a = self.amplitudes[i];
                let b = self.amplitudes[j];
                self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
                self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
            }
            base += mask << 1;
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = self.mask(control);
        let tmask = self.mask(target);
        for i in 0..self.amplitudes.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amplitudes.swap(i, i | tmask);
            }
        }
    }

    /// Multiplies basis state `i` by `phases[j(i)]`, where `j(i)` reads the
    /// bits of `qubits` (first listed qubit most significant).
    fn apply_diagonal(&mut self, qubits: &[usize], phases: &[Complex64]) {
        let masks: Vec<usize> = qubits.iter().map(|&q| self.mask(q)).collect();
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            let j = masks
                .iter()
                .fold(0usize, |acc, &m| (acc << 1) | usize::from(i & m != 0));
            *amp *= phases[j];
        }
    }

    /// ⟨self| P |other⟩ for a single-qubit Pauli generator given as a 2×2 matrix.
    fn inner_with(&self, qubit: usize, m: &[[Complex64; 2]; 2], other: &StateVector) -> Complex64 {
        let mask = self.mask(qubit);
        let mut acc = ZERO;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a, b) = (other.amplitudes[i], other.amplitudes[j]);
                acc += self.amplitudes[i].conj() * (m[0][0] * a + m[0][1] * b);
                acc += self.amplitudes[j].conj() * (m[1][0] * a + m[1][1] * b);
            }
        }
        acc
    }
}

/// One instruction of a circuit program. Parameter and data values are
/// referenced by slot index and bound at execution time.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    /// `RZ(α)·RY(β)·RZ(γ)` on one qubit, slots ordered (α, β, γ).
    GeneralRotation { qubit: usize, slots: [usize; 3] },
    ControlledNot { control: usize, target: usize },
    /// Basis state `j` of the listed qubits picks up `exp(-i·x·angles[j])`
    /// where `x` is the value bound to `data_slot`.
    DiagonalPhase {
        qubits: Vec<usize>,
        angles: Vec<f64>,
        data_slot: usize,
    },
}

impl GateOp {
    fn validate(&self, qubit_count: usize, n_params: usize, n_data: usize) -> Result<()> {
        let check_qubit = |q: usize| {
            if q >= qubit_count {
                Err(Error::contract(format!(
                    "qubit index {q} out of range for {qubit_count} qubits"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            GateOp::GeneralRotation { qubit, slots } => {
                check_qubit(*qubit)?;
                if let Some(s) = slots.iter().find(|&&s| s >= n_params) {
                    return Err(Error::contract(format!("unbound parameter slot {s}")));
                }
            }
            GateOp::ControlledNot { control, target } => {
                check_qubit(*control)?;
                check_qubit(*target)?;
                if control == target {
                    return Err(Error::contract("control equals target"));
                }
            }
            GateOp::DiagonalPhase {
                qubits,
                angles,
                data_slot,
            } => {
                if qubits.is_empty() {
                    return Err(Error::contract("diagonal phase acts on no qubits"));
                }
                for (k, &q) in qubits.iter().enumerate() {
                    check_qubit(q)?;
                    if qubits[..k].contains(&q) {
                        return Err(Error::contract(format!("qubit {q} repeated")));
                    }
                }
                if angles.len() != 1 << qubits.len() {
                    return Err(Error::contract(format!(
                        "{} phase angles for {} qubits",
                        angles.len(),
                        qubits.len()
                    )));
                }
                if *data_slot >= n_data {
                    return Err(Error::contract(format!("unbound data slot {data_slot}")));
                }
            }
        }
        Ok(())
    }
}

/// Values bound to a circuit's parameter and data slots.
#[derive(Debug, Clone, Copy)]
pub struct Bindings<'a> {
    pub params: &'a [f64],
    pub data: &'a [f64],
}

/// Applies one gate after checking its slots and indices against the state.
pub fn apply_gate(state: &mut StateVector, gate: &GateOp, values: Bindings<'_>) -> Result<()> {
    gate.validate(state.qubit_count, values.params.len(), values.data.len())?;
    apply_unchecked(state, gate, values);
    Ok(())
}

fn rotation_matrix(alpha: f64, beta: f64, gamma: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (beta / 2.0).sin_cos();
    let sum = Complex64::from_polar(1.0, -(alpha + gamma) / 2.0);
    let diff = Complex64::from_polar(1.0, -(alpha - gamma) / 2.0);
    [[sum * c, -diff * s], [diff.conj() * s, sum.conj() * c]]
}

fn rz(t: f64) -> [[Complex64; 2]; 2] {
    let p = Complex64::from_polar(1.0, -t / 2.0);
    [[p, ZERO], [ZERO, p.conj()]]
}

fn ry(t: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (t / 2.0).sin_cos();
    let (s, c) = (Complex64::new(s, 0.0), Complex64::new(c, 0.0));
    [[c, -s], [s, c]]
}

const HALF_Z: [[Complex64; 2]; 2] = [
    [Complex64::new(0.5, 0.0), ZERO],
    [ZERO, Complex64::new(-0.5, 0.0)],
];
const HALF_Y: [[Complex64; 2]; 2] = [
    [ZERO, Complex64::new(0.0, -0.5)],
    [Complex64::new(0.0, 0.5), ZERO],
];

fn diagonal_phases(angles: &[f64], x: f64, sign: f64) -> Vec<Complex64> {
    angles
        .iter()
        .map(|&a| Complex64::from_polar(1.0, -sign * a * x))
        .collect()
}

fn apply_unchecked(state: &mut StateVector, gate: &GateOp, values: Bindings<'_>) {
    match gate {
        GateOp::GeneralRotation { qubit, slots } => {
            let p = values.params;
            let m = rotation_matrix(p[slots[0]], p[slots[1]], p[slots[2]]);
            state.apply_matrix(*qubit, &m);
        }
        GateOp::ControlledNot { control, target } => state.apply_cnot(*control, *target),
        GateOp::DiagonalPhase {
            qubits,
            angles,
            data_slot,
        } => {
            let phases = diagonal_phases(angles, values.data[*data_slot], 1.0);
            state.apply_diagonal(qubits, &phases);
        }
    }
}

fn apply_inverse(state: &mut StateVector, gate: &GateOp, values: Bindings<'_>) {
    match gate {
        GateOp::GeneralRotation { qubit, slots } => {
            let p = values.params;
            let m = rotation_matrix(-p[slots[2]], -p[slots[1]], -p[slots[0]]);
            state.apply_matrix(*qubit, &m);
        }
        GateOp::ControlledNot { control, target } => state.apply_cnot(*control, *target),
        GateOp::DiagonalPhase {
            qubits,
            angles,
            data_slot,
        } => {
            let phases = diagonal_phases(angles, values.data[*data_slot], -1.0);
            state.apply_diagonal(qubits, &phases);
        }
    }
}

/// An immutable, validated gate program.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    qubit_count: usize,
    ops: Vec<GateOp>,
    parameter_slot_count: usize,
    data_slot_count: usize,
}

impl Circuit {
    pub fn new(
        qubit_count: usize,
        ops: Vec<GateOp>,
        parameter_slot_count: usize,
        data_slot_count: usize,
    ) -> Result<Self> {
        if qubit_count == 0 || qubit_count > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "qubit count {qubit_count} outside 1..={MAX_QUBITS}"
            )));
        }
        for op in &ops {
            op.validate(qubit_count, parameter_slot_count, data_slot_count)?;
        }
        Ok(Self {
            qubit_count,
            ops,
            parameter_slot_count,
            data_slot_count,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn parameter_slot_count(&self) -> usize {
        self.parameter_slot_count
    }

    pub fn data_slot_count(&self) -> usize {
        self.data_slot_count
    }

    fn check_lengths(&self, params: &[f64], data: &[f64]) -> Result<()> {
        if params.len() != self.parameter_slot_count {
            return Err(Error::contract(format!(
                "expected {} parameters, got {}",
                self.parameter_slot_count,
                params.len()
            )));
        }
        if data.len() != self.data_slot_count {
            return Err(Error::contract(format!(
                "expected {} data values, got {}",
                self.data_slot_count,
                data.len()
            )));
        }
        Ok(())
    }

    /// Final state U(x, θ)|0⟩.
    pub fn run(&self, params: &[f64], data: &[f64]) -> Result<StateVector> {
        self.check_lengths(params, data)?;
        let values = Bindings { params, data };
        let mut state = StateVector::zero(self.qubit_count)?;
        for op in &self.ops {
            apply_unchecked(&mut state, op, values);
        }
        Ok(state)
    }

    pub fn expectation(&self, params: &[f64], data: &[f64]) -> Result<f64> {
        Ok(self.run(params, data)?.expectation_z0())
    }

    /// Expectation value and its exact gradient with respect to every
    /// parameter slot, computed with a single reverse sweep.
    pub fn gradient(&self, params: &[f64], data: &[f64]) -> Result<(f64, Vec<f64>)> {
        let mut psi = self.run(params, data)?;
        let value = psi.expectation_z0();
        let values = Bindings { params, data };

        // co-state M|ψ⟩
        let mut lambda = psi.clone();
        let half = lambda.amplitudes.len() / 2;
        for a in &mut lambda.amplitudes[half..] {
            *a = -*a;
        }

        let mut grad = vec![0.0; self.parameter_slot_count];
        for op in self.ops.iter().rev() {
            match op {
                GateOp::GeneralRotation { qubit, slots } => {
                    let q = *qubit;
                    let [a, b, g] = [params[slots[0]], params[slots[1]], params[slots[2]]];
                    // applied order: RZ(γ), RY(β), RZ(α); undo in reverse
                    grad[slots[0]] += 2.0 * lambda.inner_with(q, &HALF_Z, &psi).im;
                    psi.apply_matrix(q, &rz(-a));
                    lambda.apply_matrix(q, &rz(-a));
                    grad[slots[1]] += 2.0 * lambda.inner_with(q, &HALF_Y, &psi).im;
                    psi.apply_matrix(q, &ry(-b));
                    lambda.apply_matrix(q, &ry(-b));
                    grad[slots[2]] += 2.0 * lambda.inner_with(q, &HALF_Z, &psi).im;
                    psi.apply_matrix(q, &rz(-g));
                    lambda.apply_matrix(q, &rz(-g));
                }
                _ => {
                    apply_inverse(&mut psi, op, values);
                    apply_inverse(&mut lambda, op, values);
                }
            }
        }
        Ok((value, grad))
    }
}
