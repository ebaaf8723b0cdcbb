//! Dense statevector simulation.
//!
//! Basis-index convention: index `i` encodes bits `b_1 b_2 … b_N` with `b_1`
//! (qubit 1, the topmost wire) as the most significant bit. Column vectors
//! written in that order load verbatim as amplitude arrays.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::circuit::{GateInstance, GateKind, QuantumCircuit};
use crate::counts::{sample_table, seeded_rng, CountsTable};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Tolerance for the unit-norm invariant of a statevector.
pub const NORM_TOL: f64 = 1e-12;

/// Probability above which a measurement outcome is taken as certain and the
/// sampler is bypassed entirely.
pub const CERTAINTY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros computational basis state `|0…0>`.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Statevector { n_qubits, amps }
    }

    /// A computational basis state `|b_1 … b_N>` given by its index.
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Statevector { n_qubits, amps }
    }

    /// Wrap an amplitude array, validating length and normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadStateLength(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        let sv = Statevector { n_qubits, amps };
        let dev = (sv.norm_sq() - 1.0).abs();
        if dev > 1e-9 {
            return Err(Error::NotNormalized(dev));
        }
        Ok(sv)
    }

    /// Real sign/amplitude pattern scaled by `2^(-n/2)`, as printed column vectors.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let norm = 1.0 / (signs.len() as f64).sqrt();
        Statevector::from_amplitudes(
            signs
                .iter()
                .map(|&s| Complex64::new(s as f64 * norm, 0.0))
                .collect(),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.amps.len(),
                right: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Squared overlap `|<self|other>|^2`, insensitive to global phase.
    pub fn overlap_sq(&self, other: &Statevector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Bit of basis `index` belonging to 1-based `qubit`.
    #[inline]
    pub fn bit_of(&self, index: usize, qubit: usize) -> usize {
        (index >> (self.n_qubits - qubit)) & 1
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < 1 || q > self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Apply a unitary gate, returning the transformed state.
    pub fn apply_gate(&self, gate: &GateInstance) -> Result<Statevector> {
        let mut out = self.clone();
        out.apply_gate_in_place(gate)?;
        Ok(out)
    }

    /// In-place variant of [`apply_gate`](Self::apply_gate).
    pub fn apply_gate_in_place(&mut self, gate: &GateInstance) -> Result<()> {
        if !gate.kind.is_unitary() {
            return Err(Error::NonUnitaryGate(gate.kind.to_string()));
        }
        for &t in &gate.targets {
            self.check_qubit(t)?;
        }
        apply_kernel(&mut self.amps, self.n_qubits, gate.kind, &gate.targets);
        Ok(())
    }

    /// Apply every gate of a measurement-free circuit in order.
    ///
    /// Barriers are no-ops; a `Measure` is rejected.
    pub fn run_circuit(&self, circuit: &QuantumCircuit) -> Result<Statevector> {
        if circuit.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: 1 << circuit.n_qubits,
                right: self.amps.len(),
            });
        }
        let mut out = self.clone();
        for gate in &circuit.gates {
            match gate.kind {
                GateKind::Measure => return Err(Error::MeasureInUnitaryPath),
                GateKind::Barrier => {}
                _ => out.apply_gate_in_place(gate)?,
            }
        }
        Ok(out)
    }

    /// Born-rule marginal over `qubits`; outcome index has `qubits[0]` as its
    /// most significant bit.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let m = qubits.len();
        let mut probs = vec![0.0f64; 1 << m];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut outcome = 0usize;
            for (j, &q) in qubits.iter().enumerate() {
                outcome |= self.bit_of(i, q) << (m - 1 - j);
            }
            probs[outcome] += p;
        }
        Ok(probs)
    }

    /// Measure `qubits` projectively.
    ///
    /// Returns the outcome bits (in the order of `qubits`) and the collapsed,
    /// renormalized post-measurement state. An outcome whose probability is
    /// within [`CERTAINTY_TOL`] of 1 is returned without consulting the seed.
    pub fn measure_and_collapse(
        &self,
        qubits: &[usize],
        seed: u64,
    ) -> Result<(Vec<u8>, Statevector)> {
        let mut rng = seeded_rng(seed);
        self.measure_with_rng(qubits, &mut rng)
    }

    /// Measurement step driven by a live RNG, for sequential mid-circuit use.
    pub fn measure_with_rng<R: Rng>(
        &self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<(Vec<u8>, Statevector)> {
        let mut seen = std::collections::HashSet::new();
        for &q in qubits {
            if !seen.insert(q) {
                return Err(Error::DuplicateTargets(q));
            }
        }
        let probs = self.marginal_probabilities(qubits)?;
        let m = qubits.len();
        let (argmax, &pmax) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .expect("non-empty marginal");
        let outcome = if pmax >= 1.0 - CERTAINTY_TOL {
            argmax
        } else {
            crate::counts::ProbabilityTable::new(&probs).sample(rng)
        };
        let p_outcome = probs[outcome];
        if p_outcome <= 0.0 {
            return Err(Error::ZeroProbabilityProjection);
        }
        let scale = 1.0 / p_outcome.sqrt();
        let mut post = self.clone();
        for (i, a) in post.amps.iter_mut().enumerate() {
            let mut keep = true;
            for (j, &q) in qubits.iter().enumerate() {
                if self.bit_of(i, q) != (outcome >> (m - 1 - j)) & 1 {
                    keep = false;
                    break;
                }
            }
            *a = if keep {
                *a * scale
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        let bits = (0..m).map(|j| ((outcome >> (m - 1 - j)) & 1) as u8).collect();
        Ok((bits, post))
    }

    /// Draw `shots` i.i.d. Born-rule samples of `qubits` without collapsing.
    ///
    /// The key character at position `j` is the outcome of `qubits[j]`.
    pub fn sample_counts(&self, qubits: &[usize], shots: u64, seed: u64) -> Result<CountsTable> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let probs = self.marginal_probabilities(qubits)?;
        let mut rng = seeded_rng(seed);
        let counts = sample_table(&probs, qubits.len(), shots, &mut rng, 0.0);
        Ok(counts)
    }

    /// Expectation value `<psi|P|psi>` of a Pauli string.
    pub fn pauli_expectation(&self, pauli: &PauliString) -> Result<f64> {
        if pauli.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: pauli.n_qubits(),
                right: self.n_qubits,
            });
        }
        let n = self.n_qubits;
        let x_mask = pauli.x_mask(n);
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let phase = pauli.basis_phase(b, n);
            acc += self.amps[b ^ x_mask].conj() * phase * a;
        }
        debug_assert!(acc.im.abs() < 1e-9, "expectation not real: {acc}");
        Ok(acc.re)
    }

    /// Extend the register with `extra` fresh qubits in `|0>` appended below
    /// the existing wires (they become the least significant index bits).
    pub fn tensor_zero_ancillas(&self, extra: usize) -> Statevector {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len() << extra];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i << extra] = *a;
        }
        Statevector {
            n_qubits: self.n_qubits + extra,
            amps,
        }
    }

    /// The same state with its qubit order reversed (qubit 1 swapped with
    /// qubit N, and so on) — the register orientation used by hardware that
    /// prints its lowest wire first.
    pub fn reverse_qubits(&self) -> Statevector {
        let n = self.n_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            let mut j = 0usize;
            for bit in 0..n {
                j |= ((i >> bit) & 1) << (n - 1 - bit);
            }
            amps[j] = *amp;
        }
        Statevector { n_qubits: n, amps }
    }

    /// Squared Schmidt coefficients (descending) across the bipartition
    /// qubits `1..=cut` vs `cut+1..=n`.
    pub fn schmidt_squares(&self, cut: usize) -> Result<Vec<f64>> {
        if cut == 0 || cut >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: cut,
                n_qubits: self.n_qubits,
            });
        }
        let rows = 1usize << cut;
        let cols = 1usize << (self.n_qubits - cut);
        // Gram matrix M M† of the reshaped amplitude matrix
        let mut gram = vec![Complex64::new(0.0, 0.0); rows * rows];
        for r in 0..rows {
            for s in 0..rows {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..cols {
                    acc += self.amps[r * cols + c] * self.amps[s * cols + c].conj();
                }
                gram[r * rows + s] = acc;
            }
        }
        let (mut evals, _) = crate::eigen::hermitian_eigen(rows, &gram);
        evals.reverse();
        Ok(evals.into_iter().map(|v| v.max(0.0)).collect())
    }

    /// Run a circuit that may contain `Measure` gates, collapsing at each
    /// measurement and recording outcomes into classical bits.
    ///
    /// Returns the classical register (index 0 holds bit `c[0]`, i.e.
    /// classical bit 1) and the final state.
    pub fn execute_with_measurements(
        &self,
        circuit: &QuantumCircuit,
        seed: u64,
    ) -> Result<(Vec<u8>, Statevector)> {
        if circuit.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: 1 << circuit.n_qubits,
                right: self.amps.len(),
            });
        }
        let mut rng = seeded_rng(seed);
        let mut clbits = vec![0u8; circuit.n_clbits];
        let mut state = self.clone();
        for gate in &circuit.gates {
            match gate.kind {
                GateKind::Barrier => {}
                GateKind::Measure => {
                    let (bits, post) = state.measure_with_rng(&gate.targets, &mut rng)?;
                    state = post;
                    let c = gate.classical_target.expect("validated on push");
                    clbits[c - 1] = bits[0];
                }
                _ => state.apply_gate_in_place(gate)?,
            }
        }
        Ok((clbits, state))
    }
}

/// Gate kernel over a raw amplitude array of `2^n` entries.
///
/// Targets must be validated by the caller; qubit `q` addresses bit `n - q`.
/// Density-matrix evolution reuses this on the row and column index halves of
/// a vectorized matrix.
#[allow(clippy::needless_range_loop)] // the index is the basis label the masks act on
pub(crate) fn apply_kernel(amps: &mut [Complex64], n: usize, kind: GateKind, targets: &[usize]) {
    match kind {
        GateKind::H => {
            let mask = 1usize << (n - targets[0]);
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let a = amps[i];
                    let b = amps[i | mask];
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[i | mask] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        GateKind::X => {
            let mask = 1usize << (n - targets[0]);
            for i in 0..amps.len() {
                if i & mask == 0 {
                    amps.swap(i, i | mask);
                }
            }
        }
        GateKind::Z => {
            let mask = 1usize << (n - targets[0]);
            for i in 0..amps.len() {
                if i & mask != 0 {
                    amps[i] = -amps[i];
                }
            }
        }
        GateKind::S | GateKind::Sdg => {
            let mask = 1usize << (n - targets[0]);
            let phase = if kind == GateKind::S {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, -1.0)
            };
            for i in 0..amps.len() {
                if i & mask != 0 {
                    amps[i] *= phase;
                }
            }
        }
        GateKind::Cnot => {
            let cmask = 1usize << (n - targets[0]);
            let tmask = 1usize << (n - targets[1]);
            for i in 0..amps.len() {
                if i & cmask != 0 && i & tmask == 0 {
                    amps.swap(i, i | tmask);
                }
            }
        }
        GateKind::Cz => {
            let amask = 1usize << (n - targets[0]);
            let bmask = 1usize << (n - targets[1]);
            for i in 0..amps.len() {
                if i & amask != 0 && i & bmask != 0 {
                    amps[i] = -amps[i];
                }
            }
        }
        GateKind::Measure | GateKind::Barrier => unreachable!("non-unitary kind in kernel"),
    }
}
