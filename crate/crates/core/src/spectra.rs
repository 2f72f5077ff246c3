//! Dense Hermitian diagonalization and eigenstate certificates.
//!
//! Two eigenvalues belong to the same level when they differ by at most
//! `max(1e-9, 1e-9·‖h‖₁)`. That clustering threshold is independent of the
//! pass/fail tolerance handed to the certifiers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::pauli::PauliSum;

/// Default pass/fail tolerance for certificates.
pub const DEFAULT_TOL: f64 = 1e-10;

const RESIDUAL_FACTOR: f64 = 1e-10;
const CLUSTER_FACTOR: f64 = 1e-9;

pub fn cluster_threshold(h: &PauliSum) -> f64 {
    CLUSTER_FACTOR * h.one_norm().max(1.0)
}

/// Full spectrum with ascending eigenvalues and orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
    pub residual_bound: f64,
    pub cluster_threshold: f64,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i).iter().copied().collect()
    }

    /// Indices of eigenvalues within `tol` of `lambda`.
    pub fn cluster(&self, lambda: f64, tol: f64) -> std::ops::Range<usize> {
        let lo = self.eigenvalues.partition_point(|&e| e < lambda - tol);
        let hi = self.eigenvalues.partition_point(|&e| e <= lambda + tol);
        lo..hi.max(lo)
    }

    /// Index of the eigenvalue closest to `lambda`.
    fn nearest(&self, lambda: f64) -> usize {
        let mut best = 0;
        for (i, &e) in self.eigenvalues.iter().enumerate() {
            if (e - lambda).abs() < (self.eigenvalues[best] - lambda).abs() {
                best = i;
            }
        }
        best
    }

    /// Sizes of the ground level and its distance to the next level.
    pub fn ground_level(&self) -> (usize, Option<f64>) {
        let r = self.cluster(self.eigenvalues[0], self.cluster_threshold);
        let gap = self.eigenvalues.get(r.end).map(|e| e - self.eigenvalues[0]);
        (r.len(), gap)
    }

    /// `‖V·diag(λ)·V† - M‖` in max-entry norm.
    pub fn reconstruction_error(&self, m: &DMatrix<Complex64>) -> f64 {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&e| Complex64::new(e, 0.0)),
        ));
        let r = &self.eigenvectors * d * self.eigenvectors.adjoint();
        (r - m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// Diagonalizes `h` densely. Real-matrix Hamiltonians take a real symmetric path.
pub fn eig(h: &PauliSum) -> Result<Spectrum> {
    let (values, vectors) = if let Some(m) = h.to_real_matrix()? {
        let e = m.symmetric_eigen();
        (e.eigenvalues.iter().copied().collect::<Vec<f64>>(), e.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let e = h.to_matrix()?.symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("eigensolver returned non-finite values".into()));
    }
    let order = sorted_order(&values);
    let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = DMatrix::from_fn(vectors.nrows(), order.len(), |r, c| vectors[(r, order[c])]);

    // residuals through the sparse Pauli action, not a dense product
    let mut residual_bound = 0.0f64;
    for (c, &lambda) in eigenvalues.iter().enumerate() {
        let v: Vec<Complex64> = eigenvectors.column(c).iter().copied().collect();
        let hv = h.apply(&v)?;
        let r = hv.iter().zip(&v).map(|(a, x)| (a - x * lambda).norm_sqr()).sum::<f64>().sqrt();
        residual_bound = residual_bound.max(r);
    }
    let norm = h.one_norm().max(1.0);
    if residual_bound > RESIDUAL_FACTOR * norm {
        return Err(Error::Numerical(format!(
            "eigendecomposition residual {residual_bound:.3e} exceeds {:.3e}",
            RESIDUAL_FACTOR * norm
        )));
    }
    Ok(Spectrum { eigenvalues, eigenvectors, residual_bound, cluster_threshold: cluster_threshold(h) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertMode {
    /// Non-degenerate eigenstate anywhere in the spectrum.
    Eigenstate,
    /// Unique ground state.
    Ground,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Pass,
    DegenerateLevel { multiplicity: usize },
    GroundSpaceDegenerate { multiplicity: usize },
    NotGroundState { index_below: usize },
    LowFidelity { fidelity: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigCertificate {
    pub mode: CertMode,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// Distance to the nearest distinct level; `None` if the spectrum has a single level.
    pub gap: Option<f64>,
    /// Norm of the projection of the candidate onto its matched level.
    pub fidelity: f64,
    pub residual: f64,
    pub index_below: usize,
    pub tol: f64,
    pub verdict: Verdict,
}

impl EigCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Re-derives the verdict from the recorded numbers.
    pub fn recompute_verdict(&self) -> Verdict {
        judge(self.mode, self.multiplicity, self.index_below, self.fidelity, self.tol)
    }
}

fn judge(mode: CertMode, multiplicity: usize, index_below: usize, fidelity: f64, tol: f64) -> Verdict {
    if mode == CertMode::Ground && index_below > 0 {
        return Verdict::NotGroundState { index_below };
    }
    if multiplicity != 1 {
        return match mode {
            CertMode::Ground => Verdict::GroundSpaceDegenerate { multiplicity },
            CertMode::Eigenstate => Verdict::DegenerateLevel { multiplicity },
        };
    }
    if fidelity < 1.0 - tol {
        return Verdict::LowFidelity { fidelity };
    }
    Verdict::Pass
}

fn check_dims(h: &PauliSum, psi: &StateVector) -> Result<()> {
    if h.num_qubits() != psi.num_qubits() {
        return Err(Error::DimensionMismatch { expected: h.num_qubits(), found: psi.num_qubits() });
    }
    Ok(())
}

/// `(⟨ψ|H|ψ⟩, ‖Hψ - λψ‖)`.
pub fn rayleigh_residual(h: &PauliSum, psi: &StateVector) -> Result<(f64, f64)> {
    check_dims(h, psi)?;
    let hv = h.apply(psi.amps())?;
    let lambda: f64 = psi.amps().iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum();
    let residual = hv
        .iter()
        .zip(psi.amps())
        .map(|(a, v)| (a - v * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((lambda, residual))
}

/// Certifies `psi` against a precomputed spectrum of `h`.
pub fn certify_with_spectrum(
    h: &PauliSum,
    spectrum: &Spectrum,
    psi: &StateVector,
    tol: f64,
    mode: CertMode,
) -> Result<EigCertificate> {
    let (lambda, residual) = rayleigh_residual(h, psi)?;
    if residual > tol {
        return Err(Error::NotEigenstate { residual });
    }
    let center = spectrum.eigenvalues[spectrum.nearest(lambda)];
    let level = spectrum.cluster(center, spectrum.cluster_threshold);
    let multiplicity = level.len();
    let index_below = level.start;
    let below = level.start.checked_sub(1).map(|i| center - spectrum.eigenvalues[i]);
    let above = spectrum.eigenvalues.get(level.end).map(|e| e - center);
    let gap = match (below, above) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let fidelity = level
        .clone()
        .map(|c| {
            spectrum
                .eigenvectors
                .column(c)
                .iter()
                .zip(psi.amps())
                .map(|(v, a)| v.conj() * a)
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
        .min(1.0);
    Ok(EigCertificate {
        mode,
        eigenvalue: lambda,
        multiplicity,
        gap,
        fidelity,
        residual,
        index_below,
        tol,
        verdict: judge(mode, multiplicity, index_below, fidelity, tol),
    })
}

pub fn certify(h: &PauliSum, psi: &StateVector, tol: f64, mode: CertMode) -> Result<EigCertificate> {
    check_dims(h, psi)?;
    // Reject non-eigenstates before paying for the diagonalization.
    let (_, residual) = rayleigh_residual(h, psi)?;
    if residual > tol {
        return Err(Error::NotEigenstate { residual });
    }
    certify_with_spectrum(h, &eig(h)?, psi, tol, mode)
}

pub fn certify_nondegenerate_eigenstate(h: &PauliSum, psi: &StateVector, tol: f64) -> Result<EigCertificate> {
    certify(h, psi, tol, CertMode::Eigenstate)
}

pub fn certify_unique_ground_state(h: &PauliSum, psi: &StateVector, tol: f64) -> Result<EigCertificate> {
    certify(h, psi, tol, CertMode::Ground)
}

/// Number of eigenvalues within `cluster_tol` of `lambda`.
pub fn eigenspace_dimension(h: &PauliSum, lambda: f64, cluster_tol: f64) -> Result<usize> {
    Ok(eig(h)?.cluster(lambda, cluster_tol).len())
}
