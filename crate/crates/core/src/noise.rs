//! Depolarizing gate noise and classical readout error.
//!
//! The model is deliberately small: a uniform Pauli channel after every gate
//! on exactly the gate's targets, plus an independent bit flip on each
//! reported measurement bit. A zero model reproduces the exact simulation.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::circuit::{GateKind, QuantumCircuit};
use crate::counts::{sample_table, seeded_rng, CountsTable};
use crate::density::{DensityMatrix, MAX_DENSITY_QUBITS};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::state::Statevector;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Depolarizing probability after each one-qubit gate.
    pub p1: f64,
    /// Depolarizing probability after each two-qubit gate.
    pub p2: f64,
    /// Independent flip probability per reported measurement bit.
    pub p_readout: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_readout: f64) -> Result<Self> {
        for p in [p1, p2, p_readout] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange(p));
            }
        }
        Ok(NoiseModel { p1, p2, p_readout })
    }

    pub fn zero() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            p_readout: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_readout == 0.0
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::zero()
    }
}

/// Canonical CLI form: `depol:<p1>,<p2>;readout:<p>`.
impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depol:{},{};readout:{}",
            self.p1, self.p2, self.p_readout
        )
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadNoiseSpec(s.to_string());
        let (depol, readout) = s.split_once(';').ok_or_else(bad)?;
        let depol = depol.strip_prefix("depol:").ok_or_else(bad)?;
        let readout = readout.strip_prefix("readout:").ok_or_else(bad)?;
        let (p1, p2) = depol.split_once(',').ok_or_else(bad)?;
        let p1: f64 = p1.trim().parse().map_err(|_| bad())?;
        let p2: f64 = p2.trim().parse().map_err(|_| bad())?;
        let pr: f64 = readout.trim().parse().map_err(|_| bad())?;
        NoiseModel::new(p1, p2, pr)
    }
}

/// Uniform depolarizing channel over `qubits`:
/// `ρ -> (1-p)ρ + p/(4^m - 1) Σ_{P≠I} P ρ P†`.
pub fn apply_depolarizing(rho: &DensityMatrix, qubits: &[usize], p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if p == 0.0 {
        return Ok(rho.clone());
    }
    let m = qubits.len();
    let n = rho.n_qubits();
    let n_paulis = 4usize.pow(m as u32) - 1;
    let weight = p / n_paulis as f64;
    let mut out = rho.clone().scaled(1.0 - p);
    // enumerate non-identity letter combinations on the targeted qubits
    for combo in 1..=n_paulis {
        let mut letters = vec![Pauli::I; n];
        let mut rem = combo;
        for &q in qubits {
            letters[q - 1] = match rem % 4 {
                0 => Pauli::I,
                1 => Pauli::X,
                2 => Pauli::Y,
                _ => Pauli::Z,
            };
            rem /= 4;
        }
        let conj = rho.pauli_conjugate(&PauliString::new(letters))?;
        out.add_scaled(&conj, weight)?;
    }
    Ok(out)
}

/// Evolve `|0…0><0…0|` through the circuit, depolarizing after every
/// unitary gate per the model. Measurements and barriers are skipped.
pub fn noisy_density(circuit: &QuantumCircuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    if circuit.n_qubits > MAX_DENSITY_QUBITS {
        return Err(Error::TooManyQubits(circuit.n_qubits, MAX_DENSITY_QUBITS));
    }
    let mut rho = DensityMatrix::from_state(&Statevector::zero(circuit.n_qubits));
    for gate in &circuit.gates {
        match gate.kind {
            GateKind::Measure | GateKind::Barrier => {}
            _ => {
                rho.apply_unitary_in_place(gate)?;
                let p = if gate.kind.arity() == 2 {
                    noise.p2
                } else {
                    noise.p1
                };
                if p > 0.0 {
                    rho = apply_depolarizing(&rho, &gate.targets, p)?;
                }
            }
        }
    }
    Ok(rho)
}

/// Noisy shot sampling: evolve the density matrix, sample `qubits` from the
/// diagonal, then flip each reported bit with `p_readout`.
pub fn noisy_counts(
    circuit: &QuantumCircuit,
    noise: &NoiseModel,
    qubits: &[usize],
    shots: u64,
    seed: u64,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let rho = noisy_density(circuit, noise)?;
    let probs = rho.marginal_probabilities(qubits)?;
    let mut rng = seeded_rng(seed);
    Ok(sample_table(
        &probs,
        qubits.len(),
        shots,
        &mut rng,
        noise.p_readout,
    ))
}
