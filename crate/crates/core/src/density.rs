//! Dense density-matrix representation and evolution.
//!
//! Matrices follow the same basis convention as [`Statevector`]: row/column
//! index bits are `b_1 … b_N` with qubit 1 most significant. A matrix is
//! either *physical* (Hermitian, trace 1, PSD up to tolerance) or *raw* — a
//! tomographic estimate that may violate positivity and is flagged as such.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{GateInstance, GateKind, QuantumCircuit};
use crate::counts::{sample_table, seeded_rng, CountsTable};
use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::state::{apply_kernel, Statevector};

/// Entrywise tolerance for matrix-level checks (Hermiticity, trace).
pub const MATRIX_TOL: f64 = 1e-10;

/// Hard cap on dense density-matrix evolution.
pub const MAX_DENSITY_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: Vec<Complex64>,
    raw: bool,
}

/// Serialized form: row-major real and imaginary parts.
#[derive(Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub n_qubits: usize,
    pub real: Vec<f64>,
    pub imag: Vec<f64>,
    #[serde(default)]
    pub raw: bool,
}

impl DensityMatrix {
    /// Pure-state projector `|psi><psi|`.
    pub fn from_state(psi: &Statevector) -> Self {
        let dim = psi.amplitudes().len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, a) in psi.amplitudes().iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in psi.amplitudes().iter().enumerate() {
                entries[i * dim + j] = a * b.conj();
            }
        }
        DensityMatrix {
            n_qubits: psi.n_qubits(),
            entries,
            raw: false,
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        DensityMatrix {
            n_qubits,
            entries,
            raw: false,
        }
    }

    /// Wrap explicit entries. `raw` marks tomographic estimates that may be
    /// nonphysical.
    pub fn from_entries(n_qubits: usize, entries: Vec<Complex64>, raw: bool) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: dim * dim,
            });
        }
        Ok(DensityMatrix {
            n_qubits,
            entries,
            raw,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn is_raw(&self) -> bool {
        self.raw
    }

    pub fn set_raw(&mut self, raw: bool) {
        self.raw = raw;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                let dev = (self.entry(r, c) - self.entry(c, r).conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(self.dim(), &self.entries).0
    }

    /// Check the physical-state invariants at [`MATRIX_TOL`].
    pub fn validate_physical(&self) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > MATRIX_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > MATRIX_TOL || tr.im.abs() > MATRIX_TOL {
            return Err(Error::NotNormalized((tr.re - 1.0).abs()));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -MATRIX_TOL {
                return Err(Error::NotPositiveSemidefinite(min));
            }
        }
        Ok(())
    }

    /// Conjugate by the unitary of a measurement-free circuit.
    pub fn evolve(&self, circuit: &QuantumCircuit) -> Result<DensityMatrix> {
        if circuit.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: 1 << circuit.n_qubits,
                right: self.dim(),
            });
        }
        let mut out = self.clone();
        for gate in &circuit.gates {
            match gate.kind {
                GateKind::Measure => return Err(Error::MeasureInUnitaryPath),
                GateKind::Barrier => {}
                _ => out.apply_unitary_in_place(gate)?,
            }
        }
        Ok(out)
    }

    /// Apply `U . U†` for a single gate, in place.
    ///
    /// The matrix is treated as a `2n`-qubit vector: the gate acts on the row
    /// index half and its entrywise conjugate on the column index half.
    pub fn apply_unitary_in_place(&mut self, gate: &GateInstance) -> Result<()> {
        if !gate.kind.is_unitary() {
            return Err(Error::NonUnitaryGate(gate.kind.to_string()));
        }
        for &t in &gate.targets {
            if t < 1 || t > self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: t,
                    n_qubits: self.n_qubits,
                });
            }
        }
        let n2 = 2 * self.n_qubits;
        apply_kernel(&mut self.entries, n2, gate.kind, &gate.targets);
        let conj_kind = match gate.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            other => other,
        };
        let shifted: Vec<usize> = gate.targets.iter().map(|&t| t + self.n_qubits).collect();
        apply_kernel(&mut self.entries, n2, conj_kind, &shifted);
        Ok(())
    }

    /// `P ρ P†` for a Pauli string on the full register.
    pub fn pauli_conjugate(&self, pauli: &PauliString) -> Result<DensityMatrix> {
        if pauli.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: pauli.n_qubits(),
                right: self.n_qubits,
            });
        }
        let dim = self.dim();
        let x = pauli.x_mask(self.n_qubits);
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            let pi = pauli.basis_phase(i ^ x, self.n_qubits);
            for j in 0..dim {
                let pj = pauli.basis_phase(j ^ x, self.n_qubits);
                entries[i * dim + j] = pi * pj.conj() * self.entry(i ^ x, j ^ x);
            }
        }
        Ok(DensityMatrix {
            n_qubits: self.n_qubits,
            entries,
            raw: self.raw,
        })
    }

    /// Multiply every entry by a real factor.
    pub fn scaled(mut self, factor: f64) -> DensityMatrix {
        for z in &mut self.entries {
            *z *= factor;
        }
        self
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &DensityMatrix, factor: f64) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: other.dim(),
                right: self.dim(),
            });
        }
        for (z, w) in self.entries.iter_mut().zip(&other.entries) {
            *z += w * factor;
        }
        Ok(())
    }

    /// Real diagonal, the Born-rule weights of computational outcomes.
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entry(i, i).re).collect()
    }

    /// Marginal outcome distribution over `qubits` (first entry of `qubits`
    /// is the most significant outcome bit).
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            if q < 1 || q > self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        let m = qubits.len();
        let mut probs = vec![0.0f64; 1 << m];
        for (i, p) in self.diagonal_probabilities().iter().enumerate() {
            let mut outcome = 0usize;
            for (j, &q) in qubits.iter().enumerate() {
                outcome |= ((i >> (self.n_qubits - q)) & 1) << (m - 1 - j);
            }
            probs[outcome] += p;
        }
        Ok(probs)
    }

    /// Sample measurement outcomes of `qubits` from the diagonal.
    pub fn sample_counts(&self, qubits: &[usize], shots: u64, seed: u64) -> Result<CountsTable> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let probs = self.marginal_probabilities(qubits)?;
        let mut rng = seeded_rng(seed);
        Ok(sample_table(&probs, qubits.len(), shots, &mut rng, 0.0))
    }

    /// Reduced state over `keep` (in the given order), tracing out the rest.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        for &q in keep {
            if q < 1 || q > self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        let m = keep.len();
        let dim = self.dim();
        let small = 1usize << m;
        let mut entries = vec![Complex64::new(0.0, 0.0); small * small];
        let kept_bit = |full: usize, j: usize| (full >> (self.n_qubits - keep[j])) & 1;
        let rest_bits = |full: usize| {
            let mut rest = 0usize;
            for q in 1..=self.n_qubits {
                if !keep.contains(&q) {
                    rest = (rest << 1) | ((full >> (self.n_qubits - q)) & 1);
                }
            }
            rest
        };
        for i in 0..dim {
            let ri = rest_bits(i);
            let mut a = 0usize;
            for j in 0..m {
                a |= kept_bit(i, j) << (m - 1 - j);
            }
            for j in 0..dim {
                if rest_bits(j) != ri {
                    continue;
                }
                let mut b = 0usize;
                for k in 0..m {
                    b |= kept_bit(j, k) << (m - 1 - k);
                }
                entries[a * small + b] += self.entry(i, j);
            }
        }
        Ok(DensityMatrix {
            n_qubits: m,
            entries,
            raw: self.raw,
        })
    }

    /// Quadratic form `<psi| ρ |psi>`.
    pub fn expectation_with_state(&self, psi: &Statevector) -> Result<Complex64> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: psi.amplitudes().len(),
                right: self.dim(),
            });
        }
        let dim = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                acc += psi.amp(i).conj() * self.entry(i, j) * psi.amp(j);
            }
        }
        Ok(acc)
    }

    /// Expectation value `Tr(ρ P)`.
    pub fn pauli_expectation(&self, pauli: &PauliString) -> Result<f64> {
        if pauli.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: pauli.n_qubits(),
                right: self.n_qubits,
            });
        }
        let x = pauli.x_mask(self.n_qubits);
        let mut acc = Complex64::new(0.0, 0.0);
        // Tr(ρP) = Σ_j ρ[j, j^x] P[j^x, j] and P[j^x, j] = phase(j)
        for j in 0..self.dim() {
            acc += self.entry(j, j ^ x) * pauli.basis_phase(j, self.n_qubits);
        }
        Ok(acc.re)
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        DensityMatrixJson {
            n_qubits: self.n_qubits,
            real: self.entries.iter().map(|z| z.re).collect(),
            imag: self.entries.iter().map(|z| z.im).collect(),
            raw: self.raw,
        }
    }

    pub fn from_json(json: &DensityMatrixJson) -> Result<Self> {
        if json.real.len() != json.imag.len() {
            return Err(Error::DimensionMismatch {
                left: json.real.len(),
                right: json.imag.len(),
            });
        }
        let entries = json
            .real
            .iter()
            .zip(&json.imag)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        DensityMatrix::from_entries(json.n_qubits, entries, json.raw)
    }

    /// CSV rows (`row,col,real,imag`) with bitstring basis labels, the layout
    /// used for bar-plot comparisons of reconstructed matrices.
    pub fn to_csv(&self) -> String {
        use crate::counts::index_to_bitstring;
        let mut out = String::from("row,col,real,imag\n");
        let dim = self.dim();
        for r in 0..dim {
            for c in 0..dim {
                let z = self.entry(r, c);
                out.push_str(&format!(
                    "{},{},{:.6},{:.6}\n",
                    index_to_bitstring(r, self.n_qubits),
                    index_to_bitstring(c, self.n_qubits),
                    z.re,
                    z.im
                ));
            }
        }
        out
    }
}
