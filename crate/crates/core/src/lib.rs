//! Simulation toolkit for linear cluster states and their Z-state basis:
//! exact statevector and noisy density-matrix evolution, syndrome-based
//! non-destructive state discrimination, Pauli-basis tomography, and
//! OpenQASM 2.0 I/O.
//!
//! ```
//! use zsim_core::{discriminate, zstate_vector};
//!
//! // prepare |Z_3^5>, identify it through the ancilla syndrome, and keep it
//! let psi = zstate_vector(3, 5)?;
//! let run = discriminate(&psi, 7)?;
//! assert_eq!(run.index.k(), 5);
//! assert_eq!(run.syndrome, "110");
//! assert!(run.post_state.overlap_sq(&psi)? >= 1.0 - 1e-10);
//! # Ok::<(), zsim_core::Error>(())
//! ```
//!
//! Conventions, fixed once and used everywhere:
//!
//! - Qubits are 1-based; qubit 1 is the topmost wire and the most
//!   significant bit of a basis index, so printed column vectors load
//!   verbatim as amplitude arrays.
//! - Counts keys read classical bit 1 first (leftmost character).
//! - The discrimination circuit measures ancilla `a_i` into classical bit
//!   `N - i + 1`; syndrome strings therefore read `a_N … a_1`, matching the
//!   reference tables the decoder reproduces.
//! - Constructed states pin the global phase by making the amplitude of
//!   `|0…0>` real positive.

pub mod circuit;
pub mod counts;
pub mod density;
pub mod discriminator;
pub mod eigen;
pub mod error;
pub mod fixtures;
pub mod noise;
pub mod pauli;
pub mod qasm;
pub mod state;
pub mod tomography;
pub mod zstates;

pub use circuit::{GateInstance, GateKind, QuantumCircuit};
pub use counts::CountsTable;
pub use density::{DensityMatrix, DensityMatrixJson};
pub use discriminator::{
    build_discrimination_circuit, decode_ancilla, discriminate, stabilizer_generators,
    DiscriminationCircuit,
};
pub use error::{Error, Result};
pub use noise::{apply_depolarizing, noisy_counts, noisy_density, NoiseModel};
pub use pauli::{Pauli, PauliString};
pub use qasm::{emit_qasm, parse_qasm};
pub use state::Statevector;
pub use tomography::{
    estimate_expectations, fidelity_pure, linear_inversion, project_to_physical,
    tomography_end_to_end, FidelityConvention, MeasurementSetting, TomographyPlan,
    TomographyReport,
};
pub use zstates::{
    cluster_circuit, cluster_state, verify_basis, z_pattern, zstate_circuit, zstate_vector,
    ZPattern, ZStateIndex,
};
