//! Cluster states and the Z-state orthonormal basis.
//!
//! The N-qubit linear cluster state is prepared by a Hadamard on every wire
//! followed by CZ on each neighboring pair; its basis amplitudes are
//! `(-1)^(Σ b_i b_{i+1}) / 2^(N/2)`. Applying Z to a subset of qubits yields
//! one of `2^N` mutually orthogonal "Z-states".
//!
//! The published 2- and 3-qubit enumerations do not follow a common
//! index-to-pattern rule, so those two are stored as verified lookup tables.
//! For N >= 4 the index is read as a binary mask, qubit 1 first:
//! `k = Σ b_j 2^(N-j)` with `b_j = 1` exactly when qubit `j` receives a Z.

use crate::circuit::QuantumCircuit;
use crate::error::{Error, Result};
use crate::state::Statevector;

/// Index of a Z-state: `n` qubits, `k` in `[0, 2^n)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZStateIndex {
    n: usize,
    k: usize,
}

impl ZStateIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewQubits { min: 2, got: n });
        }
        if k >= (1usize << n) {
            return Err(Error::ZIndexOutOfRange { n, k });
        }
        Ok(ZStateIndex { n, k })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// The set of qubits that receive a Z gate on top of the cluster state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPattern {
    qubits: Vec<usize>,
}

impl ZPattern {
    pub fn from_qubits(mut qubits: Vec<usize>) -> Self {
        qubits.sort_unstable();
        qubits.dedup();
        ZPattern { qubits }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn contains(&self, qubit: usize) -> bool {
        self.qubits.binary_search(&qubit).is_ok()
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }
}

/// Published pattern tables, index k -> qubits carrying a Z.
///
/// Verified entry by entry against the printed 2- and 3-qubit column vectors;
/// the two enumerations order their bits differently, which is why they are
/// tables and not a formula.
const PATTERNS_N2: [&[usize]; 4] = [&[], &[1], &[2], &[1, 2]];
const PATTERNS_N3: [&[usize]; 8] = [
    &[],
    &[3],
    &[1],
    &[1, 3],
    &[2],
    &[2, 3],
    &[1, 2],
    &[1, 2, 3],
];

/// Z-pattern for `|Z_n^k>`.
pub fn z_pattern(n: usize, k: usize) -> Result<ZPattern> {
    let idx = ZStateIndex::new(n, k)?;
    let qubits = match idx.n {
        2 => PATTERNS_N2[idx.k].to_vec(),
        3 => PATTERNS_N3[idx.k].to_vec(),
        _ => (1..=idx.n)
            .filter(|&j| (idx.k >> (idx.n - j)) & 1 == 1)
            .collect(),
    };
    Ok(ZPattern::from_qubits(qubits))
}

/// Inverse of [`z_pattern`]: which index has this Z-pattern.
pub fn pattern_to_index(n: usize, pattern: &ZPattern) -> Result<ZStateIndex> {
    match n {
        2 | 3 => {
            for k in 0..(1usize << n) {
                if z_pattern(n, k)? == *pattern {
                    return ZStateIndex::new(n, k);
                }
            }
            unreachable!("pattern map is a bijection")
        }
        _ => {
            let mut k = 0usize;
            for &q in pattern.qubits() {
                if q < 1 || q > n {
                    return Err(Error::QubitOutOfRange {
                        index: q,
                        n_qubits: n,
                    });
                }
                k |= 1 << (n - q);
            }
            ZStateIndex::new(n, k)
        }
    }
}

/// The N-qubit linear cluster state as an explicit vector.
pub fn cluster_state(n: usize) -> Result<Statevector> {
    if n < 2 {
        return Err(Error::TooFewQubits { min: 2, got: n });
    }
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    let mut amps = Vec::with_capacity(dim);
    for basis in 0..dim {
        let mut neighbor_ones = 0u32;
        for q in 1..n {
            let b = (basis >> (n - q)) & 1;
            let b_next = (basis >> (n - q - 1)) & 1;
            neighbor_ones += (b & b_next) as u32;
        }
        let sign = if neighbor_ones & 1 == 0 { 1.0 } else { -1.0 };
        amps.push(num_complex::Complex64::new(sign * norm, 0.0));
    }
    Statevector::from_amplitudes(amps)
}

/// Circuit preparing the cluster state from `|0…0>`: H on every qubit, then
/// CZ along the chain.
pub fn cluster_circuit(n: usize) -> Result<QuantumCircuit> {
    if n < 2 {
        return Err(Error::TooFewQubits { min: 2, got: n });
    }
    let mut c = QuantumCircuit::new(n, 0);
    for q in 1..=n {
        c.h(q)?;
    }
    for q in 1..n {
        c.cz(q, q + 1)?;
    }
    Ok(c)
}

/// `|Z_n^k>` as an explicit vector: cluster state with the pattern's signs
/// flipped.
///
/// ```
/// let z21 = zsim_core::zstate_vector(2, 1)?;
/// let half: Vec<f64> = z21.amplitudes().iter().map(|a| a.re * 2.0).collect();
/// assert_eq!(half, [1.0, 1.0, -1.0, 1.0]);
/// # Ok::<(), zsim_core::Error>(())
/// ```
pub fn zstate_vector(n: usize, k: usize) -> Result<Statevector> {
    let pattern = z_pattern(n, k)?;
    let cluster = cluster_state(n)?;
    let mut amps = cluster.amplitudes().to_vec();
    for (basis, amp) in amps.iter_mut().enumerate() {
        let mut flips = 0u32;
        for &q in pattern.qubits() {
            flips += ((basis >> (n - q)) & 1) as u32;
        }
        if flips & 1 == 1 {
            *amp = -*amp;
        }
    }
    Statevector::from_amplitudes(amps)
}

/// Circuit preparing `|Z_n^k>`: the cluster circuit followed by Z gates on
/// the pattern qubits.
pub fn zstate_circuit(n: usize, k: usize) -> Result<QuantumCircuit> {
    let pattern = z_pattern(n, k)?;
    let mut c = cluster_circuit(n)?;
    for &q in pattern.qubits() {
        c.z(q)?;
    }
    Ok(c)
}

/// Orthonormality report over the full basis.
#[derive(Clone, Debug)]
pub struct BasisReport {
    pub n_qubits: usize,
    pub max_off_diagonal: f64,
    pub max_norm_deviation: f64,
}

impl BasisReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_off_diagonal < tol && self.max_norm_deviation < tol
    }
}

/// Compute all pairwise inner products of the `2^n` Z-states.
///
/// Cost grows as `4^n` inner products; capped at `n <= 8`.
pub fn verify_basis(n: usize) -> Result<BasisReport> {
    if n > 8 {
        return Err(Error::TooManyQubits(n, 8));
    }
    let states: Vec<Statevector> = (0..(1usize << n))
        .map(|k| zstate_vector(n, k))
        .collect::<Result<_>>()?;
    let mut max_off = 0.0f64;
    let mut max_norm_dev = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let ip = a.inner(b)?;
            if i == j {
                max_norm_dev = max_norm_dev.max((ip.re - 1.0).abs().max(ip.im.abs()));
            } else {
                max_off = max_off.max(ip.norm());
            }
        }
    }
    Ok(BasisReport {
        n_qubits: n,
        max_off_diagonal: max_off,
        max_norm_deviation: max_norm_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn assert_vec_eq(got: &Statevector, want_signs: &[i8], tol: f64) {
        let want = Statevector::from_signs(want_signs).unwrap();
        assert_eq!(got.amplitudes().len(), want.amplitudes().len());
        for (g, w) in got.amplitudes().iter().zip(want.amplitudes()) {
            assert!((g - w).norm() < tol, "{g} vs {w}");
        }
    }

    #[test]
    fn cluster_two_and_three_match_printed_vectors() {
        assert_vec_eq(&cluster_state(2).unwrap(), &[1, 1, 1, -1], 1e-15);
        assert_vec_eq(&cluster_state(3).unwrap(), &[1, 1, 1, -1, 1, 1, -1, 1], 1e-15);
    }

    #[test]
    fn cluster_four_matches_expanded_four_branch_form() {
        // independent oracle: expand (|+0+0> + |+0-1> + |-1-0> + |-1+1>)/2
        let plus = [1.0, 1.0];
        let minus = [1.0, -1.0];
        let zero = [1.0, 0.0];
        let one = [0.0, 1.0];
        let mut want = [0.0f64; 16];
        let branches: [[&[f64; 2]; 4]; 4] = [
            [&plus, &zero, &plus, &zero],
            [&plus, &zero, &minus, &one],
            [&minus, &one, &minus, &zero],
            [&minus, &one, &plus, &one],
        ];
        for branch in branches {
            for (idx, slot) in want.iter_mut().enumerate() {
                let bits = [(idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
                // each |±> factor carries 1/sqrt(2); the branch prefactor is 1/2
                let mut amp = 0.5;
                for (factor, bit) in branch.iter().zip(bits) {
                    amp *= factor[bit];
                    if factor[0] != 0.0 && factor[1] != 0.0 {
                        amp *= std::f64::consts::FRAC_1_SQRT_2;
                    }
                }
                *slot += amp;
            }
        }
        let got = cluster_state(4).unwrap();
        for (g, w) in got.amplitudes().iter().zip(want) {
            assert!((g - Complex64::new(w, 0.0)).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn circuit_reproduces_vector_exactly() {
        for n in 2..=5usize {
            let via_circuit = Statevector::zero(n)
                .run_circuit(&cluster_circuit(n).unwrap())
                .unwrap();
            let direct = cluster_state(n).unwrap();
            for (a, b) in via_circuit.amplitudes().iter().zip(direct.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
            // global phase pinned: amplitude of |0…0> is real positive
            assert!(via_circuit.amp(0).re > 0.0);
            assert!(via_circuit.amp(0).im.abs() < 1e-15);
        }
    }

    #[test]
    fn cluster_circuit_gate_count_is_linear() {
        use crate::circuit::GateKind;
        for n in 2..=6 {
            let c = cluster_circuit(n).unwrap();
            assert_eq!(c.gate_count(), n + (n - 1));
            assert_eq!(c.count_kind(GateKind::H), n);
            assert_eq!(c.count_kind(GateKind::Cz), n - 1);
        }
    }

    #[test]
    fn two_qubit_pattern_table() {
        let cases = [(0, vec![]), (1, vec![1]), (2, vec![2]), (3, vec![1, 2])];
        for (k, qs) in cases {
            assert_eq!(z_pattern(2, k).unwrap().qubits(), qs.as_slice());
        }
    }

    #[test]
    fn printed_vector_z2_1() {
        assert_vec_eq(&zstate_vector(2, 1).unwrap(), &[1, 1, -1, 1], 1e-15);
    }

    #[test]
    fn printed_vector_z2_3_via_circuit() {
        let out = Statevector::zero(2)
            .run_circuit(&zstate_circuit(2, 3).unwrap())
            .unwrap();
        assert_vec_eq(&out, &[1, -1, -1, -1], 1e-12);
    }

    #[test]
    fn printed_vector_z3_5_and_sign_flip_composition() {
        assert_vec_eq(
            &zstate_vector(3, 5).unwrap(),
            &[1, -1, -1, -1, 1, -1, 1, 1],
            1e-15,
        );
        // oracle: pattern {2,3} flips Z2 on {2,3,6,7} and Z3 on {1,3,5,7};
        // the composition flips exactly {1,2,5,6} of the cluster vector
        let mut signs = [1, 1, 1, -1, 1, 1, -1, 1];
        for idx in [1usize, 2, 5, 6] {
            signs[idx] = -signs[idx];
        }
        assert_vec_eq(&zstate_vector(3, 5).unwrap(), &signs, 1e-15);
        assert_eq!(z_pattern(3, 5).unwrap().qubits(), &[2, 3]);
    }

    #[test]
    fn zstate_circuit_structure() {
        // k=0 adds no Z gates
        assert_eq!(
            zstate_circuit(3, 0).unwrap(),
            cluster_circuit(3).unwrap()
        );
        // k=3 adds Z on {1,3}
        let c = zstate_circuit(3, 3).unwrap();
        assert_eq!(c.gate_count(), cluster_circuit(3).unwrap().gate_count() + 2);
        let out = Statevector::zero(3).run_circuit(&c).unwrap();
        assert_vec_eq(&out, &[1, -1, 1, 1, -1, 1, 1, 1], 1e-12);
    }

    #[test]
    fn index_out_of_range_rejected() {
        assert!(z_pattern(2, 4).is_err());
        assert!(zstate_vector(3, 8).is_err());
        assert!(cluster_state(1).is_err());
        assert!(verify_basis(9).is_err());
    }

    #[test]
    fn basis_orthonormal_for_small_n() {
        for n in 2..=4 {
            let report = verify_basis(n).unwrap();
            assert!(report.passes(1e-12), "n={n}: {report:?}");
        }
    }

    #[test]
    fn every_amplitude_has_equal_magnitude() {
        for n in 2..=5usize {
            let want = 2.0f64.powi(-(n as i32)).sqrt();
            for k in 0..(1usize << n) {
                for amp in zstate_vector(n, k).unwrap().amplitudes() {
                    assert!((amp.norm() - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pattern_map_is_injective() {
        for n in 2..=5usize {
            let mut seen = std::collections::HashSet::new();
            for k in 0..(1usize << n) {
                let p = z_pattern(n, k).unwrap();
                assert!(seen.insert(p.qubits().to_vec()), "duplicate pattern at k={k}");
                assert_eq!(pattern_to_index(n, &p).unwrap().k(), k);
            }
        }
    }

    #[test]
    fn circuit_and_vector_agree_for_all_indices() {
        for n in 2..=5usize {
            for k in 0..(1usize << n) {
                let via_circuit = Statevector::zero(n)
                    .run_circuit(&zstate_circuit(n, k).unwrap())
                    .unwrap();
                let direct = zstate_vector(n, k).unwrap();
                for (a, b) in via_circuit.amplitudes().iter().zip(direct.amplitudes()) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn z_states_share_the_cluster_entanglement_structure() {
        for n in 2..=4usize {
            let cluster = cluster_state(n).unwrap();
            for k in 0..(1usize << n) {
                let z = zstate_vector(n, k).unwrap();
                // single-qubit marginals maximally mixed exactly as the cluster's
                let rho = crate::density::DensityMatrix::from_state(&z);
                let rho_c = crate::density::DensityMatrix::from_state(&cluster);
                for q in 1..=n {
                    let red = rho.partial_trace(&[q]).unwrap();
                    let red_c = rho_c.partial_trace(&[q]).unwrap();
                    for i in 0..2 {
                        for j in 0..2 {
                            assert!((red.entry(i, j) - red_c.entry(i, j)).norm() < 1e-10);
                        }
                    }
                }
                // identical Schmidt spectra across every contiguous cut
                for cut in 1..n {
                    let sz = z.schmidt_squares(cut).unwrap();
                    let sc = cluster.schmidt_squares(cut).unwrap();
                    for (a, b) in sz.iter().zip(&sc) {
                        assert!((a - b).abs() < 1e-10);
                    }
                }
            }
        }
    }
}
