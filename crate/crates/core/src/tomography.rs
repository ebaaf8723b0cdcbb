//! Pauli-basis state tomography: measurement planning, expectation
//! estimation with shot-weighted pooling, linear inversion, projection to
//! the nearest physical state, and fidelity against pure targets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::circuit::QuantumCircuit;
use crate::counts::{bitstring_to_index, stream_seed, CountsTable};
use crate::density::DensityMatrix;
use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::noise::{noisy_counts, NoiseModel};
use crate::pauli::{Pauli, PauliString};
use crate::state::Statevector;

/// One measurement basis per qubit. `X` rotates by H, `Y` by Sdg then H,
/// `Z` measures directly.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisLetter {
    X,
    Y,
    Z,
}

impl BasisLetter {
    fn as_char(self) -> char {
        match self {
            BasisLetter::X => 'X',
            BasisLetter::Y => 'Y',
            BasisLetter::Z => 'Z',
        }
    }

    fn matches(self, p: Pauli) -> bool {
        matches!(
            (self, p),
            (BasisLetter::X, Pauli::X) | (BasisLetter::Y, Pauli::Y) | (BasisLetter::Z, Pauli::Z)
        )
    }
}

/// A full measurement setting: one basis letter per measured qubit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeasurementSetting(Vec<BasisLetter>);

impl MeasurementSetting {
    pub fn letters(&self) -> &[BasisLetter] {
        &self.0
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    /// True when this setting's outcomes estimate `P`: every non-identity
    /// letter of `P` is measured in its own basis.
    pub fn covers(&self, p: &PauliString) -> bool {
        p.letters().iter().zip(&self.0).all(|(&pl, &sl)| {
            pl == Pauli::I || sl.matches(pl)
        })
    }

    /// Pre-measurement rotation on `qubits[j]` for letter `j`.
    pub fn rotation_circuit(&self, n_qubits: usize, qubits: &[usize]) -> Result<QuantumCircuit> {
        let mut c = QuantumCircuit::new(n_qubits, 0);
        for (&letter, &q) in self.0.iter().zip(qubits) {
            match letter {
                BasisLetter::X => c.h(q)?,
                BasisLetter::Y => {
                    c.sdg(q)?;
                    c.h(q)?;
                }
                BasisLetter::Z => {}
            }
        }
        Ok(c)
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'X' | 'x' => Ok(BasisLetter::X),
                'Y' | 'y' => Ok(BasisLetter::Y),
                'Z' | 'z' => Ok(BasisLetter::Z),
                other => Err(Error::MalformedPauli(other.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::MalformedPauli("empty setting".into()));
        }
        Ok(MeasurementSetting(letters))
    }
}

/// The complete measurement schedule: all `3^n` settings at a uniform shot
/// count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TomographyPlan {
    pub n_qubits: usize,
    pub settings: Vec<MeasurementSetting>,
    pub shots_per_setting: u64,
}

impl TomographyPlan {
    pub fn complete(n_qubits: usize, shots_per_setting: u64) -> Result<Self> {
        if shots_per_setting == 0 {
            return Err(Error::ZeroShots);
        }
        let mut settings = Vec::with_capacity(3usize.pow(n_qubits as u32));
        let mut current = vec![BasisLetter::X; n_qubits];
        fn rec(
            pos: usize,
            n: usize,
            current: &mut Vec<BasisLetter>,
            out: &mut Vec<MeasurementSetting>,
        ) {
            if pos == n {
                out.push(MeasurementSetting(current.clone()));
                return;
            }
            for l in [BasisLetter::X, BasisLetter::Y, BasisLetter::Z] {
                current[pos] = l;
                rec(pos + 1, n, current, out);
            }
        }
        rec(0, n_qubits, &mut current, &mut settings);
        Ok(TomographyPlan {
            n_qubits,
            settings,
            shots_per_setting,
        })
    }
}

/// Parity of the outcome bits at `P`'s non-identity positions.
fn outcome_parity(outcome: usize, p: &PauliString, n: usize) -> f64 {
    let mut ones = 0u32;
    for (j, &letter) in p.letters().iter().enumerate() {
        if letter != Pauli::I {
            ones += ((outcome >> (n - 1 - j)) & 1) as u32;
        }
    }
    if ones & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Estimate every Pauli expectation from per-setting counts.
///
/// A Pauli is estimated from every setting that covers it; estimates are
/// pooled with shot weights. The identity always maps to exactly 1.
pub fn estimate_expectations(
    data: &[(MeasurementSetting, CountsTable)],
) -> Result<BTreeMap<PauliString, f64>> {
    let n = data
        .first()
        .map(|(s, _)| s.n_qubits())
        .ok_or_else(|| Error::MissingSetting("any".into()))?;
    let mut seen = std::collections::BTreeSet::new();
    for (setting, counts) in data {
        if setting.n_qubits() != n || counts.n_measured != n {
            return Err(Error::DimensionMismatch {
                left: setting.n_qubits(),
                right: counts.n_measured,
            });
        }
        if counts.shots == 0 {
            return Err(Error::ZeroShots);
        }
        seen.insert(setting.to_string());
    }
    for reference in &TomographyPlan::complete(n, 1)?.settings {
        if !seen.contains(&reference.to_string()) {
            return Err(Error::MissingSetting(reference.to_string()));
        }
    }

    let mut out = BTreeMap::new();
    for p in PauliString::enumerate(n) {
        if p.is_identity() {
            out.insert(p, 1.0);
            continue;
        }
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for (setting, counts) in data {
            if !setting.covers(&p) {
                continue;
            }
            for (key, &count) in &counts.counts {
                let outcome = bitstring_to_index(key)?;
                num += count as f64 * outcome_parity(outcome, &p, n);
            }
            den += counts.shots as f64;
        }
        debug_assert!(den > 0.0, "completeness guarantees coverage");
        out.insert(p, num / den);
    }
    Ok(out)
}

/// Exact expectations of a pure state, the infinite-shot limit.
pub fn exact_expectations(psi: &Statevector) -> Result<BTreeMap<PauliString, f64>> {
    let mut out = BTreeMap::new();
    for p in PauliString::enumerate(psi.n_qubits()) {
        let value = psi.pauli_expectation(&p)?;
        out.insert(p, value);
    }
    Ok(out)
}

/// Linear-inversion estimate `ρ = 2^-n Σ_P <P> P`, flagged raw.
pub fn linear_inversion(
    expectations: &BTreeMap<PauliString, f64>,
    n_qubits: usize,
) -> Result<DensityMatrix> {
    let dim = 1usize << n_qubits;
    let scale = 1.0 / dim as f64;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for p in PauliString::enumerate(n_qubits) {
        let &value = expectations
            .get(&p)
            .ok_or_else(|| Error::MissingExpectation(p.to_string()))?;
        if value == 0.0 {
            continue;
        }
        let x = p.x_mask(n_qubits);
        for col in 0..dim {
            // column `col` of P has its single entry at row `col ^ x`
            entries[(col ^ x) * dim + col] += p.basis_phase(col, n_qubits) * (value * scale);
        }
    }
    let mut rho = DensityMatrix::from_entries(n_qubits, entries, true)?;
    rho.set_raw(true);
    Ok(rho)
}

/// Nearest (Frobenius) positive-semidefinite trace-one matrix.
///
/// Eigenvalues are shifted by a common offset and clipped at zero, the
/// offset chosen so the kept weights sum to one; eigenvectors are unchanged.
pub fn project_to_physical(raw: &DensityMatrix) -> Result<DensityMatrix> {
    let herm = raw.hermiticity_deviation();
    if herm > 1e-6 {
        return Err(Error::NotHermitian(herm));
    }
    let dim = raw.dim();
    let (evals, evecs) = hermitian_eigen(dim, raw.entries());

    // descending order; drop the smallest eigenvalue while the uniform
    // shift needed to reach trace one would push it negative
    let mut desc: Vec<f64> = evals.iter().rev().copied().collect();
    let mut kept = desc.len();
    loop {
        let sum: f64 = desc[..kept].iter().sum();
        let shift = (1.0 - sum) / kept as f64;
        if desc[kept - 1] + shift <= 0.0 && kept > 1 {
            kept -= 1;
            continue;
        }
        for v in desc.iter_mut().take(kept) {
            *v += shift;
        }
        for v in desc.iter_mut().skip(kept) {
            *v = 0.0;
        }
        break;
    }

    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (slot, &lambda) in desc.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let vec = &evecs[evals.len() - 1 - slot];
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] += vec[r] * vec[c].conj() * lambda;
            }
        }
    }
    DensityMatrix::from_entries(raw.n_qubits(), entries, false)
}

/// Fidelity convention for pure targets: `sqrt` reports `√<ψ|ρ|ψ>`,
/// `squared` reports `<ψ|ρ|ψ>`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FidelityConvention {
    Sqrt,
    Squared,
}

impl FromStr for FidelityConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(FidelityConvention::Sqrt),
            "squared" => Ok(FidelityConvention::Squared),
            other => Err(Error::MalformedPauli(format!(
                "unknown fidelity convention {other:?}"
            ))),
        }
    }
}

/// Fidelity of `rho` against the pure target.
///
/// Physical matrices are clamped into `[0, 1]`; raw estimates are reported
/// as computed (they may exceed the bounds slightly).
pub fn fidelity_pure(
    target: &Statevector,
    rho: &DensityMatrix,
    convention: FidelityConvention,
) -> Result<f64> {
    let herm = rho.hermiticity_deviation();
    if herm > 1e-6 {
        return Err(Error::NotHermitian(herm));
    }
    let q = rho.expectation_with_state(target)?.re;
    let q = if rho.is_raw() { q } else { q.clamp(0.0, 1.0) };
    Ok(match convention {
        FidelityConvention::Sqrt => q.max(0.0).sqrt(),
        FidelityConvention::Squared => q,
    })
}

/// Everything a tomography run produces.
#[derive(Clone, Debug)]
pub struct TomographyReport {
    pub raw: DensityMatrix,
    pub projected: DensityMatrix,
    pub fidelity_sqrt: f64,
    pub fidelity_squared: f64,
}

/// Run the preparation circuit under every setting of the plan, reconstruct
/// the state of `measured` (first listed qubit = most significant basis
/// bit), project, and report fidelity against `target` in both conventions.
///
/// With a noise model attached, evolution runs on the density matrix and
/// readout flips apply; otherwise the exact statevector path is used.
/// Setting `s` consumes the independent seed stream `stream_seed(seed, s)`,
/// so results do not depend on execution order.
pub fn tomography_end_to_end(
    preparation: &QuantumCircuit,
    measured: &[usize],
    plan: &TomographyPlan,
    noise: Option<&NoiseModel>,
    target: &Statevector,
    seed: u64,
) -> Result<TomographyReport> {
    if plan.n_qubits != measured.len() {
        return Err(Error::DimensionMismatch {
            left: plan.n_qubits,
            right: measured.len(),
        });
    }
    let unitary = preparation.without_measurements();
    let pure_state = match noise {
        Some(model) if !model.is_zero() => None,
        _ => Some(Statevector::zero(unitary.n_qubits).run_circuit(&unitary)?),
    };

    let mut data = Vec::with_capacity(plan.settings.len());
    for (idx, setting) in plan.settings.iter().enumerate() {
        let rotation = setting.rotation_circuit(unitary.n_qubits, measured)?;
        let shot_seed = stream_seed(seed, idx as u64);
        let counts = match &pure_state {
            Some(state) => state
                .run_circuit(&rotation)?
                .sample_counts(measured, plan.shots_per_setting, shot_seed)?,
            None => {
                let mut circuit = unitary.clone();
                circuit.extend(&rotation)?;
                noisy_counts(
                    &circuit,
                    noise.expect("density path implies a model"),
                    measured,
                    plan.shots_per_setting,
                    shot_seed,
                )?
            }
        };
        data.push((setting.clone(), counts));
    }

    let expectations = estimate_expectations(&data)?;
    let raw = linear_inversion(&expectations, plan.n_qubits)?;
    let projected = project_to_physical(&raw)?;
    let fidelity_sqrt = fidelity_pure(target, &projected, FidelityConvention::Sqrt)?;
    let fidelity_squared = fidelity_pure(target, &projected, FidelityConvention::Squared)?;
    Ok(TomographyReport {
        raw,
        projected,
        fidelity_sqrt,
        fidelity_squared,
    })
}
