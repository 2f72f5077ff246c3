//! Builders for the named Hamiltonians and the split-and-scan recipe that turns
//! a logical operator into a 2-local term lifting a code-space degeneracy.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{s_z, swap_sum, StateVector};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::spectra::{self, certify, CertMode, EigCertificate, Verdict};

/// Tolerance for "this operator annihilates / fixes the state".
pub const KERNEL_TOL: f64 = 1e-10;

/// Coupling values tried by [`choose_coupling`], in scan order.
pub const COUPLING_GRID: [f64; 14] =
    [-8.0, -4.0, -2.0, -1.0, -0.5, -0.25, -0.125, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

/// Positive half of [`COUPLING_GRID`].
pub const POSITIVE_COUPLING_GRID: [f64; 7] = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// A logical operator `m = a·b` factored over disjoint supports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitPair {
    pub source: PauliString,
    pub a: PauliString,
    pub b: PauliString,
    pub sign: i8,
    /// `a - sign·b`, which annihilates the target state.
    pub splitting_term: PauliSum,
}

/// Splits `m` into two halves so that `a - sign·b` annihilates `target`,
/// given `m·target = sign·target`.
pub fn split_logical(m: &PauliString, target: &StateVector, sign: i8) -> Result<SplitPair> {
    if m.is_identity() {
        return Err(Error::InvalidArgument("cannot split the identity".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be ±1, got {sign}")));
    }
    if m.num_qubits() != target.num_qubits() {
        return Err(Error::DimensionMismatch { expected: m.num_qubits(), found: target.num_qubits() });
    }
    let mv = PauliSum::single(*m, 1.0).apply(target.amps())?;
    let dev: Vec<Complex64> =
        mv.iter().zip(target.amps()).map(|(x, t)| x - t * f64::from(sign)).collect();
    let residual = vec_norm(&dev);
    if residual > KERNEL_TOL {
        return Err(Error::Precondition(format!(
            "target is not a {sign:+} eigenvector of {m} (residual {residual:.3e})"
        )));
    }

    let support = m.support();
    let cut = support.len().div_ceil(2);
    let n = m.num_qubits();
    let part = |qs: &[usize]| {
        let ops: Vec<_> = qs.iter().map(|&q| (m.get(q), q)).collect();
        PauliString::from_ops(n, &ops)
    };
    let a = part(&support[..cut])?;
    let b = part(&support[cut..])?;

    let mut splitting_term = PauliSum::single(a, 1.0);
    splitting_term.add_term(b, -f64::from(sign));

    let check = vec_norm(&splitting_term.apply(target.amps())?);
    if check > KERNEL_TOL {
        return Err(Error::Numerical(format!("splitting term leaves residual {check:.3e}")));
    }
    Ok(SplitPair { source: *m, a, b, sign, splitting_term })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub c: f64,
    pub passed: bool,
    pub gap: Option<f64>,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingChoice {
    pub c: f64,
    pub certificate: EigCertificate,
    pub scanned: Vec<ScanPoint>,
}

fn describe(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::DegenerateLevel { multiplicity } => format!("degenerate level (multiplicity {multiplicity})"),
        Verdict::GroundSpaceDegenerate { multiplicity } => {
            format!("degenerate ground space (multiplicity {multiplicity})")
        }
        Verdict::NotGroundState { index_below } => format!("not ground state ({index_below} levels below)"),
        Verdict::LowFidelity { fidelity } => format!("low fidelity {fidelity:.3e}"),
    }
}

/// Scans `c` over [`COUPLING_GRID`] and certifies `psi` for `h0 + c·h1`.
pub fn choose_coupling(h0: &PauliSum, h1: &PauliSum, psi: &StateVector, mode: CertMode) -> Result<CouplingChoice> {
    choose_coupling_on(h0, h1, psi, mode, &COUPLING_GRID, spectra::DEFAULT_TOL)
}

/// [`choose_coupling`] over an explicit grid. Among passing points the
/// largest gap wins, then the smaller `|c|`, then grid order.
pub fn choose_coupling_on(
    h0: &PauliSum,
    h1: &PauliSum,
    psi: &StateVector,
    mode: CertMode,
    grid: &[f64],
    tol: f64,
) -> Result<CouplingChoice> {
    if h0.num_qubits() != h1.num_qubits() || h0.num_qubits() != psi.num_qubits() {
        return Err(Error::DimensionMismatch { expected: h0.num_qubits(), found: psi.num_qubits() });
    }
    let kernel = vec_norm(&h1.apply(psi.amps())?);
    if kernel > KERNEL_TOL {
        return Err(Error::Precondition(format!(
            "state is not annihilated by the splitting term (residual {kernel:.3e})"
        )));
    }
    let results: Vec<(f64, Result<EigCertificate>)> = grid
        .par_iter()
        .map(|&c| (c, certify(&(h0 + &h1.scaled(c)), psi, tol, mode)))
        .collect();

    let mut scanned = Vec::with_capacity(results.len());
    let mut best: Option<(f64, EigCertificate)> = None;
    for (c, res) in results {
        match res {
            Ok(cert) => {
                scanned.push(ScanPoint { c, passed: cert.passed(), gap: cert.gap, outcome: describe(&cert.verdict) });
                if !cert.passed() {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((bc, bcert)) => {
                        let (g, bg) = (cert.gap.unwrap_or(0.0), bcert.gap.unwrap_or(0.0));
                        let tie = (g - bg).abs() <= 1e-9 * g.abs().max(bg.abs()).max(1.0);
                        if tie {
                            c.abs() < bc.abs()
                        } else {
                            g > bg
                        }
                    }
                };
                if better {
                    best = Some((c, cert));
                }
            }
            Err(Error::NotEigenstate { residual }) => scanned.push(ScanPoint {
                c,
                passed: false,
                gap: None,
                outcome: format!("not an eigenstate (residual {residual:.3e})"),
            }),
            Err(e) => return Err(e),
        }
    }
    match best {
        Some((c, certificate)) => Ok(CouplingChoice { c, certificate, scanned }),
        None => Err(Error::NoValidCoupling),
    }
}

fn zz_chain(n: usize) -> PauliSum {
    let mut h = PauliSum::zero(n);
    for q in 0..n.saturating_sub(1) {
        h.add_term(PauliString::uniform(n, Pauli::Z, &[q, q + 1]).unwrap(), -1.0);
    }
    h
}

/// `-Z₀Z₁ - Z₁Z₂` on three qubits.
pub fn ghz3_unsplit() -> PauliSum {
    zz_chain(3)
}

/// `X₀X₁ - X₂`, which annihilates the GHZ state.
pub fn ghz3_splitting_term() -> PauliSum {
    let mut h = PauliSum::single(PauliString::uniform(3, Pauli::X, &[0, 1]).unwrap(), 1.0);
    h.add_term(PauliString::single(3, Pauli::X, 2).unwrap(), -1.0);
    h
}

/// `-Z₀Z₁ - Z₁Z₂ + c(X₀X₁ - X₂)`.
pub fn ghz3_hamiltonian(c: f64) -> PauliSum {
    ghz3_unsplit() + ghz3_splitting_term().scaled(c)
}

/// Which diagonal to place on qubit 0 of the weighted-GHZ operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagonalConvention {
    /// `diag(α/β, β/α)`, the one satisfying `D₀X₀X₁X₂|ψ> = |ψ>`.
    Corrected,
    /// `diag(β/α, α/β)`, with the entries swapped.
    Swapped,
}

/// Real 8×8 operator `a Z₀Z₁ + b Z₁Z₂ + c(D₀X₀X₁ - X₂)`; not Hermitian unless `α = β`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGhzOperator {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub convention: DiagonalConvention,
    pub matrix: DMatrix<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedGhzAnalysis {
    pub convention: DiagonalConvention,
    pub diagonal: (f64, f64),
    /// `‖D₀X₀X₁X₂|ψ> - |ψ>‖`.
    pub fixing_residual: f64,
    /// `<ψ|M|ψ>`.
    pub eigenvalue: f64,
    /// `‖M|ψ> - λ|ψ>‖`.
    pub eigen_residual: f64,
    /// Algebraic multiplicity of `λ` in the spectrum of `M`.
    pub multiplicity: usize,
    pub hermitian: bool,
    pub nondegenerate_eigenvector: bool,
}

impl WeightedGhzOperator {
    pub fn new(alpha: f64, beta: f64, a: f64, b: f64, c: f64, convention: DiagonalConvention) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0) || (alpha * alpha + beta * beta - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "weights must be positive with α²+β²=1, got ({alpha}, {beta})"
            )));
        }
        let mut op = WeightedGhzOperator { alpha, beta, a, b, c, convention, matrix: DMatrix::zeros(8, 8) };
        let diag = op.diagonal();
        let mut m = PauliSum::zero(3);
        m.add_term(PauliString::uniform(3, Pauli::Z, &[0, 1])?, a);
        m.add_term(PauliString::uniform(3, Pauli::Z, &[1, 2])?, b);
        m.add_term(PauliString::single(3, Pauli::X, 2)?, -c);
        let mut matrix = m.to_real_matrix()?.expect("Z and X terms are real");
        for col in 0..8usize {
            let row = col ^ 0b011;
            let d = if row & 1 == 0 { diag.0 } else { diag.1 };
            matrix[(row, col)] += c * d;
        }
        op.matrix = matrix;
        Ok(op)
    }

    pub fn diagonal(&self) -> (f64, f64) {
        let r = self.alpha / self.beta;
        match self.convention {
            DiagonalConvention::Corrected => (r, 1.0 / r),
            DiagonalConvention::Swapped => (1.0 / r, r),
        }
    }

    /// `α|000> + β|111>`.
    pub fn target(&self) -> [f64; 8] {
        let mut v = [0.0; 8];
        v[0] = self.alpha;
        v[7] = self.beta;
        v
    }

    pub fn fixing_residual(&self) -> f64 {
        let (d0, d1) = self.diagonal();
        let psi = self.target();
        let mut out = [0.0; 8];
        for (col, &amp) in psi.iter().enumerate() {
            let row = col ^ 0b111;
            out[row] += amp * if row & 1 == 0 { d0 } else { d1 };
        }
        out.iter().zip(psi).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    pub fn analyze(&self) -> WeightedGhzAnalysis {
        let psi = nalgebra::DVector::from_column_slice(&self.target());
        let mpsi = &self.matrix * &psi;
        let eigenvalue = psi.dot(&mpsi);
        let eigen_residual = (&mpsi - &psi * eigenvalue).norm();
        let eigs = self.matrix.complex_eigenvalues();
        let multiplicity = eigs.iter().filter(|z| (*z - Complex64::new(eigenvalue, 0.0)).norm() <= 1e-8).count();
        let hermitian = (&self.matrix - self.matrix.transpose()).amax() <= 1e-12;
        WeightedGhzAnalysis {
            convention: self.convention,
            diagonal: self.diagonal(),
            fixing_residual: self.fixing_residual(),
            eigenvalue,
            eigen_residual,
            multiplicity,
            hermitian,
            nondegenerate_eigenvector: eigen_residual <= 1e-12 && multiplicity == 1,
        }
    }
}

pub fn weighted_ghz3_operator(alpha: f64, beta: f64, a: f64, b: f64, c: f64) -> Result<WeightedGhzOperator> {
    WeightedGhzOperator::new(alpha, beta, a, b, c, DiagonalConvention::Corrected)
}

/// All Pauli strings of weight `1..=k` on `n` qubits, preceded by the identity.
pub fn local_pauli_basis(n: usize, k: usize) -> Vec<PauliString> {
    let mut out = vec![PauliString::identity(n)];
    for w in 1..=k.min(n) {
        for support in crate::hilbert::subsets(n, w) {
            for letters in 0..3usize.pow(w as u32) {
                let ops: Vec<_> = support
                    .iter()
                    .enumerate()
                    .map(|(i, &q)| ([Pauli::X, Pauli::Y, Pauli::Z][letters / 3usize.pow(i as u32) % 3], q))
                    .collect();
                out.push(PauliString::from_ops(n, &ops).unwrap());
            }
        }
    }
    out
}

const MAX_SEARCH_BASIS: usize = 1500;

/// Real coefficient vectors `h` over the k-local basis for which `psi` is an
/// eigenvector of `Σ h_j P_j`.
#[derive(Clone, Debug)]
pub struct ParentSpace {
    pub basis: Vec<PauliString>,
    /// Columns span the solution space.
    pub null_vectors: DMatrix<f64>,
}

impl ParentSpace {
    pub fn dimension(&self) -> usize {
        self.null_vectors.ncols()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PauliSum {
        let n = self.basis[0].num_qubits();
        let weights: Vec<f64> = (0..self.dimension()).map(|_| rng.sample(StandardNormal)).collect();
        let mut h = PauliSum::zero(n);
        for (j, p) in self.basis.iter().enumerate() {
            let c: f64 = weights.iter().enumerate().map(|(i, w)| w * self.null_vectors[(j, i)]).sum();
            h.add_term(*p, c);
        }
        h
    }
}

/// Solves `(I - |ψ><ψ|) H |ψ> = 0` over real combinations of weight-≤k strings.
pub fn parent_space(psi: &StateVector, k: usize) -> Result<ParentSpace> {
    let n = psi.num_qubits();
    if k >= n {
        return Err(Error::InvalidArgument(format!("locality {k} must be below qubit count {n}")));
    }
    let basis = local_pauli_basis(n, k);
    if basis.len() > MAX_SEARCH_BASIS {
        return Err(Error::TooLarge { n, limit: MAX_SEARCH_BASIS });
    }
    let dim = psi.dim();
    let mut a = DMatrix::<f64>::zeros(2 * dim, basis.len());
    for (j, p) in basis.iter().enumerate() {
        let pv = PauliSum::single(*p, 1.0).apply(psi.amps())?;
        let mean: Complex64 = psi.amps().iter().zip(&pv).map(|(x, y)| x.conj() * y).sum();
        for (r, (y, x)) in pv.iter().zip(psi.amps()).enumerate() {
            let v = y - x * mean;
            a[(r, j)] = v.re;
            a[(dim + r, j)] = v.im;
        }
    }
    let gram = a.transpose() * &a;
    let e = gram.symmetric_eigen();
    let scale = e.eigenvalues.amax().max(1.0);
    let keep: Vec<usize> = (0..basis.len()).filter(|&i| e.eigenvalues[i] <= 1e-10 * scale).collect();
    let null_vectors = DMatrix::from_fn(basis.len(), keep.len(), |r, c| e.eigenvectors[(r, keep[c])]);
    Ok(ParentSpace { basis, null_vectors })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParentSearch {
    pub basis_size: usize,
    pub solution_dimension: usize,
    pub trials_used: usize,
    pub hamiltonian: Option<PauliSum>,
    pub certificate: Option<EigCertificate>,
}

/// Samples random k-local Hermitian operators having `psi` as an eigenvector
/// until one certifies it as non-degenerate. `hamiltonian` is `None` when
/// every trial fails.
pub fn hermitian_parent_search<R: Rng + ?Sized>(
    psi: &StateVector,
    k: usize,
    trials: usize,
    rng: &mut R,
) -> Result<ParentSearch> {
    let space = parent_space(psi, k)?;
    let mut out = ParentSearch {
        basis_size: space.basis.len(),
        solution_dimension: space.dimension(),
        trials_used: 0,
        hamiltonian: None,
        certificate: None,
    };
    if space.dimension() == 0 {
        return Ok(out);
    }
    for t in 0..trials {
        out.trials_used = t + 1;
        let h = space.sample(rng);
        match certify(&h, psi, 1e-9, CertMode::Eigenstate) {
            Ok(cert) if cert.passed() => {
                out.hamiltonian = Some(h);
                out.certificate = Some(cert);
                break;
            }
            Ok(_) | Err(Error::NotEigenstate { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Periodic `rows × cols` compass-model lattice; qubit `(j, k)` is `cols·j + k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaconShorLattice {
    pub rows: usize,
    pub cols: usize,
}

impl BaconShorLattice {
    pub fn square3() -> Self {
        BaconShorLattice { rows: 3, cols: 3 }
    }

    pub fn num_qubits(&self) -> usize {
        self.rows * self.cols
    }

    pub fn qubit(&self, row: usize, col: usize) -> usize {
        self.cols * (row % self.rows) + col % self.cols
    }

    /// `Z` on every qubit of column 0.
    pub fn logical_z(&self) -> PauliString {
        let qs: Vec<usize> = (0..self.rows).map(|j| self.qubit(j, 0)).collect();
        PauliString::uniform(self.num_qubits(), Pauli::Z, &qs).unwrap()
    }
}

/// `-jx Σ X_{j,k}X_{j+1,k} - jz Σ Z_{j,k}Z_{j,k+1}` with periodic wrap.
pub fn bacon_shor_h0(jx: f64, jz: f64, lattice: BaconShorLattice) -> Result<PauliSum> {
    if !(jx > 0.0 && jz > 0.0) {
        return Err(Error::InvalidArgument(format!("couplings must be positive, got jx={jx}, jz={jz}")));
    }
    if lattice.rows < 3 || lattice.cols < 3 {
        return Err(Error::InvalidArgument("lattice needs at least 3 rows and 3 columns".into()));
    }
    let n = lattice.num_qubits();
    let mut h = PauliSum::zero(n);
    for j in 0..lattice.rows {
        for k in 0..lattice.cols {
            let here = lattice.qubit(j, k);
            h.add_term(PauliString::uniform(n, Pauli::X, &[here, lattice.qubit(j + 1, k)])?, -jx);
            h.add_term(PauliString::uniform(n, Pauli::Z, &[here, lattice.qubit(j, k + 1)])?, -jz);
        }
    }
    Ok(h)
}

/// Ground space of the compass model, with a basis diagonal in the logical Z.
#[derive(Clone, Debug)]
pub struct BaconShorCode {
    pub h0: PauliSum,
    pub ground_energy: f64,
    pub ground_dimension: usize,
    /// Gap between the top of the ground level and the next level.
    pub gap_above: f64,
    /// `Z̄|C₀> = |C₀>`.
    pub c0: StateVector,
    /// `Z̄|C₁> = -|C₁>`.
    pub c1: StateVector,
}

pub fn bacon_shor_code(jx: f64, jz: f64) -> Result<BaconShorCode> {
    let lattice = BaconShorLattice::square3();
    let h0 = bacon_shor_h0(jx, jz, lattice)?;
    let spec = spectra::eig(&h0)?;
    let (ground_dimension, gap) = spec.ground_level();
    if ground_dimension != 2 {
        return Err(Error::Numerical(format!("expected a 2-dimensional ground space, found {ground_dimension}")));
    }
    let zbar = PauliSum::single(lattice.logical_z(), 1.0);
    let g: Vec<Vec<Complex64>> = (0..2).map(|i| spec.eigenvector(i)).collect();
    let zg: Vec<Vec<Complex64>> = g.iter().map(|v| zbar.apply(v)).collect::<Result<_>>()?;
    let restricted = DMatrix::from_fn(2, 2, |r, c| g[r].iter().zip(&zg[c]).map(|(a, b)| a.conj() * b).sum::<Complex64>());
    let e = restricted.symmetric_eigen();
    let order = if e.eigenvalues[0] > e.eigenvalues[1] { [0, 1] } else { [1, 0] };
    if (e.eigenvalues[order[0]] - 1.0).abs() > 1e-8 || (e.eigenvalues[order[1]] + 1.0).abs() > 1e-8 {
        return Err(Error::Numerical("logical Z does not act as ±1 on the ground space".into()));
    }
    let combine = |col: usize| {
        let amps: Vec<Complex64> = (0..g[0].len())
            .map(|r| g[0][r] * e.eigenvectors[(0, col)] + g[1][r] * e.eigenvectors[(1, col)])
            .collect();
        StateVector::new(h0.num_qubits(), amps)
    };
    Ok(BaconShorCode {
        ground_energy: spec.eigenvalues[0],
        ground_dimension,
        gap_above: gap.unwrap_or(0.0),
        c0: combine(order[0])?,
        c1: combine(order[1])?,
        h0,
    })
}

/// `-Σ Z_qZ_{q+1} + c(X₀…X_{n/2-1} - X_{n/2}…X_{n-1})`, for even `n ≥ 4`.
pub fn ghz_n_hamiltonian(n: usize, c: f64) -> Result<PauliSum> {
    Ok(zz_chain(n) + ghz_n_splitting_term(n)?.scaled(c))
}

/// `-Σ Z_qZ_{q+1}` on `n` qubits.
pub fn zz_chain_hamiltonian(n: usize) -> Result<PauliSum> {
    if n < 2 {
        return Err(Error::InvalidArgument("chain needs at least two qubits".into()));
    }
    Ok(zz_chain(n))
}

pub fn ghz_n_splitting_term(n: usize) -> Result<PauliSum> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "GHZ Hamiltonian supports even n >= 4 only, got {n}"
        )));
    }
    let half = n / 2;
    let left: Vec<usize> = (0..half).collect();
    let right: Vec<usize> = (half..n).collect();
    let mut h = PauliSum::single(PauliString::uniform(n, Pauli::X, &left)?, 1.0);
    h.add_term(PauliString::uniform(n, Pauli::X, &right)?, -1.0);
    Ok(h)
}

/// `S_z + (2i - n)·I`, which annihilates the weight-`i` Dicke state.
pub fn dicke_h0(n: usize, i: usize) -> Result<PauliSum> {
    if i > n {
        return Err(Error::InvalidArgument(format!("Dicke weight {i} exceeds {n}")));
    }
    Ok(s_z(n)?.shifted(n as f64 - 2.0 * i as f64))
}

/// `C(n,2)·I - Σ SWAP`: the permutation-symmetric splitting term, shifted so
/// that it annihilates every symmetric state.
pub fn dicke_splitting_term(n: usize) -> Result<PauliSum> {
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(swap_sum(n)?.scaled(-1.0).shifted(-pairs))
}

/// `(S_z + (2i - n)I)² - c Σ_{j<k} SWAP_jk`.
pub fn dicke_parent(n: usize, i: usize, c: f64) -> Result<PauliSum> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::InvalidArgument(format!("coupling must be positive, got {c}")));
    }
    Ok(dicke_h0(n, i)?.square_sum() - swap_sum(n)?.scaled(c))
}
