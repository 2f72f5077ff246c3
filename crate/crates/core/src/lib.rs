//! Exact-diagonalization toolkit for asking whether an eigenstate of a
//! k-local Hamiltonian is determined by its reduced density matrices.
//!
//! - [`pauli`]: Pauli strings and real-weighted Pauli sums on up to 64 qubits.
//! - [`hilbert`]: state vectors, density matrices and k-RDM sets.
//! - [`spectra`]: dense diagonalization and eigenstate certificates.
//! - [`constructions`]: the named Hamiltonians and coupling scans.
//! - [`fermion`]: the qubit-to-fermion encoding and fermionic 2-matrices.
//! - [`determinacy`]: counterexample, squared-parent and tightness reports.

pub mod constructions;
pub mod determinacy;
pub mod error;
pub mod fermion;
pub mod hilbert;
pub mod pauli;
pub mod spectra;

pub use error::{Error, Result};
pub use hilbert::{DensityMatrix, RdmSet, StateVector};
pub use pauli::{Pauli, PauliString, PauliSum, Phase};
pub use spectra::{CertMode, EigCertificate, Spectrum, Verdict};
