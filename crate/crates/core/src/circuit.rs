//! Gate-list circuit representation.
//!
//! Qubits are numbered from 1, with qubit 1 the topmost wire; classical bits
//! are numbered from 1 as well. The gate set is the minimal one needed for
//! cluster-state preparation, syndrome readout, and tomography basis changes.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Supported gate kinds.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Z,
    S,
    Sdg,
    Cnot,
    Cz,
    Measure,
    Barrier,
}

impl GateKind {
    /// Number of qubit targets the kind takes.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz => 2,
            _ => 1,
        }
    }

    /// True for kinds applied on the unitary evolution path.
    pub fn is_unitary(self) -> bool {
        !matches!(self, GateKind::Measure | GateKind::Barrier)
    }

    /// Lower-case mnemonic, identical to the QASM statement name.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Cnot => "cx",
            GateKind::Cz => "cz",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate application: a kind plus its 1-based qubit targets.
///
/// `Measure` additionally carries the 1-based classical bit the outcome is
/// written to. For `Cnot` the first target is the control.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateInstance {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classical_target: Option<usize>,
}

impl GateInstance {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::BadArity {
                kind: kind.to_string(),
                expected: kind.arity(),
                got: targets.len(),
            });
        }
        if kind.arity() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTargets(targets[0]));
        }
        Ok(GateInstance {
            kind,
            targets,
            classical_target: None,
        })
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        GateInstance {
            kind: GateKind::Measure,
            targets: vec![qubit],
            classical_target: Some(clbit),
        }
    }
}

/// An ordered gate list over `n_qubits` qubits and `n_clbits` classical bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumCircuit {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub gates: Vec<GateInstance>,
}

impl QuantumCircuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        QuantumCircuit {
            n_qubits,
            n_clbits,
            gates: Vec::new(),
        }
    }

    /// Append a gate, validating its targets against the register sizes.
    pub fn push(&mut self, gate: GateInstance) -> Result<()> {
        for &t in &gate.targets {
            if t < 1 || t > self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: t,
                    n_qubits: self.n_qubits,
                });
            }
        }
        if gate.kind == GateKind::Measure {
            let c = gate.classical_target.unwrap_or(0);
            if c < 1 || c > self.n_clbits {
                return Err(Error::ClbitOutOfRange {
                    index: c,
                    n_clbits: self.n_clbits,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.push(GateInstance::new(GateKind::H, vec![q])?)
    }

    pub fn x(&mut self, q: usize) -> Result<()> {
        self.push(GateInstance::new(GateKind::X, vec![q])?)
    }

    pub fn z(&mut self, q: usize) -> Result<()> {
        self.push(GateInstance::new(GateKind::Z, vec![q])?)
    }

    pub fn s(&mut self, q: usize) -> Result<()> {
        self.push(GateInstance::new(GateKind::S, vec![q])?)
    }

    pub fn sdg(&mut self, q: usize) -> Result<()> {
        self.push(GateInstance::new(GateKind::Sdg, vec![q])?)
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(GateInstance::new(GateKind::Cnot, vec![control, target])?)
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.push(GateInstance::new(GateKind::Cz, vec![a, b])?)
    }

    pub fn barrier(&mut self, q: usize) -> Result<()> {
        self.push(GateInstance::new(GateKind::Barrier, vec![q])?)
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> Result<()> {
        self.push(GateInstance::measure(qubit, clbit))
    }

    /// Append all gates of `other`, which must fit in this circuit's registers.
    pub fn extend(&mut self, other: &QuantumCircuit) -> Result<()> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    /// Copy of the circuit with every `Measure` removed.
    pub fn without_measurements(&self) -> QuantumCircuit {
        QuantumCircuit {
            n_qubits: self.n_qubits,
            n_clbits: self.n_clbits,
            gates: self
                .gates
                .iter()
                .filter(|g| g.kind != GateKind::Measure)
                .cloned()
                .collect(),
        }
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_enforced() {
        assert!(GateInstance::new(GateKind::H, vec![1, 2]).is_err());
        assert!(GateInstance::new(GateKind::Cnot, vec![1]).is_err());
        assert!(GateInstance::new(GateKind::Cnot, vec![2, 2]).is_err());
        assert!(GateInstance::new(GateKind::Cnot, vec![1, 2]).is_ok());
    }

    #[test]
    fn push_checks_ranges() {
        let mut c = QuantumCircuit::new(2, 1);
        assert!(c.h(1).is_ok());
        assert!(c.h(0).is_err());
        assert!(c.h(3).is_err());
        assert!(c.measure(2, 1).is_ok());
        assert!(c.measure(2, 2).is_err());
    }

    #[test]
    fn without_measurements_strips_only_measures() {
        let mut c = QuantumCircuit::new(2, 2);
        c.h(1).unwrap();
        c.measure(1, 1).unwrap();
        c.cz(1, 2).unwrap();
        let u = c.without_measurements();
        assert_eq!(u.gate_count(), 2);
        assert_eq!(u.count_kind(GateKind::Measure), 0);
    }
}
