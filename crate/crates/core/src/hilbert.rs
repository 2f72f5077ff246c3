//! Pure states, density matrices and reduced density matrices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Tolerance for the unit-norm / unit-trace checks.
pub const NORM_TOL: f64 = 1e-10;
/// Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted in a density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Default tolerance when comparing two RDM sets.
pub const RDM_TOL: f64 = 1e-10;

const MAX_STATE_QUBITS: usize = 24;
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Normalized pure state on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

/// On-disk form: `{"n": 3, "amps": [[re, im], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amps: Vec<[f64; 2]>,
}

impl StateVector {
    /// Normalizes `amps` and rotates the global phase so the first nonzero
    /// amplitude is real and positive.
    pub fn new(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        if n > MAX_STATE_QUBITS {
            return Err(Error::TooLarge { n, limit: MAX_STATE_QUBITS });
        }
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: amps.len() });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::InvalidArgument("state has zero norm".into()));
        }
        let cutoff = 1e-12 * norm;
        let phase = amps
            .iter()
            .find(|a| a.norm() > cutoff)
            .map(|a| a.conj() / a.norm())
            .unwrap_or(Complex64::new(1.0, 0.0));
        for a in amps.iter_mut() {
            *a = *a * phase / norm;
        }
        Ok(StateVector { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut amps = vec![ZERO; 1 << n];
        *amps.get_mut(index).ok_or_else(|| {
            Error::InvalidArgument(format!("basis index {index} out of range for {n} qubits"))
        })? = Complex64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    /// Haar-random state (normalized complex Gaussian vector).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::new(n, amps).expect("gaussian vector is nonzero")
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|`, insensitive to global phase.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    pub fn density(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        DensityMatrix { m: &v * v.adjoint() }
    }

    pub fn to_file(&self) -> StateFile {
        StateFile { n: self.n, amps: self.amps.iter().map(|a| [a.re, a.im]).collect() }
    }

    pub fn from_file(f: &StateFile) -> Result<Self> {
        Self::new(f.n, f.amps.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("state serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: StateFile = serde_json::from_str(s)
            .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        Self::from_file(&f)
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        let rho = DensityMatrix { m };
        rho.validate()?;
        Ok(rho)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1usize << n;
        DensityMatrix { m: DMatrix::identity(d, d) / Complex64::new(d as f64, 0.0) }
    }

    /// Convex combination `w·a + (1-w)·b`.
    pub fn mix(a: &DensityMatrix, b: &DensityMatrix, w: f64) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidArgument(format!("mixing weight {w} outside [0,1]")));
        }
        Ok(DensityMatrix { m: &a.m * Complex64::new(w, 0.0) + &b.m * Complex64::new(1.0 - w, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.m - self.m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.m + self.m.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.m.is_square() {
            return Err(Error::InvalidArgument("density matrix is not square".into()));
        }
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!("not Hermitian (error {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("trace is {tr}, not 1")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidArgument(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok((&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

/// Scatters the bits of a compact index into the given qubit positions.
#[inline]
fn scatter(compact: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (bit, &q)| acc | ((compact >> bit & 1) << q))
}

fn split_subset(n: usize, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::InvalidArgument("repeated qubit in subset".into()));
    }
    if let Some(&q) = kept.iter().find(|&&q| q >= n) {
        return Err(Error::InvalidArgument(format!("qubit {q} out of range for {n} qubits")));
    }
    let traced = (0..n).filter(|q| !kept.contains(q)).collect();
    Ok((kept, traced))
}

/// Traces out every qubit not in `keep`. Bit `i` of the reduced index is the
/// `i`-th smallest kept qubit.
pub fn partial_trace(rho: &DensityMatrix, n: usize, keep: &[usize]) -> Result<DensityMatrix> {
    if rho.dim() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: rho.dim() });
    }
    let (kept, traced) = split_subset(n, keep)?;
    let dk = 1usize << kept.len();
    let kept_offsets: Vec<usize> = (0..dk).map(|a| scatter(a, &kept)).collect();
    let traced_offsets: Vec<usize> = (0..1usize << traced.len()).map(|t| scatter(t, &traced)).collect();
    let m = DMatrix::from_fn(dk, dk, |a, b| {
        let (ra, rb) = (kept_offsets[a], kept_offsets[b]);
        traced_offsets.iter().map(|&t| rho.m[(ra | t, rb | t)]).sum()
    });
    Ok(DensityMatrix { m })
}

/// Marginal of a pure state on `keep`, computed from amplitudes directly.
pub fn pure_marginal(psi: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let (kept, traced) = split_subset(psi.n, keep)?;
    let dk = 1usize << kept.len();
    let kept_offsets: Vec<usize> = (0..dk).map(|a| scatter(a, &kept)).collect();
    let traced_offsets: Vec<usize> = (0..1usize << traced.len()).map(|t| scatter(t, &traced)).collect();
    let amps = psi.amps();
    let m = DMatrix::from_fn(dk, dk, |a, b| {
        let (ra, rb) = (kept_offsets[a], kept_offsets[b]);
        traced_offsets.iter().map(|&t| amps[ra | t] * amps[rb | t].conj()).sum()
    });
    Ok(DensityMatrix { m })
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in start..n {
            if n - q < k - cur.len() {
                break;
            }
            cur.push(q);
            rec(q + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Every k-qubit marginal of a state, keyed by sorted qubit tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct RdmSet {
    n: usize,
    k: usize,
    rdms: BTreeMap<Vec<usize>, DensityMatrix>,
}

impl RdmSet {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.rdms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rdms.is_empty()
    }

    pub fn get(&self, subset: &[usize]) -> Option<&DensityMatrix> {
        self.rdms.get(subset)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &DensityMatrix)> {
        self.rdms.iter()
    }

    /// Largest disagreement between (k-1)-marginals obtained by tracing
    /// different members of the set down to the same subset.
    pub fn marginal_inconsistency(&self) -> f64 {
        if self.k < 2 {
            return 0.0;
        }
        let mut reduced: BTreeMap<Vec<usize>, Vec<DensityMatrix>> = BTreeMap::new();
        for (subset, rho) in &self.rdms {
            for drop in 0..self.k {
                // local positions within the k-qubit marginal
                let keep: Vec<usize> = (0..self.k).filter(|&i| i != drop).collect();
                let sub: Vec<usize> = keep.iter().map(|&i| subset[i]).collect();
                let r = partial_trace(rho, self.k, &keep).expect("valid local subset");
                reduced.entry(sub).or_default().push(r);
            }
        }
        reduced
            .values()
            .flat_map(|group| group.iter().map(move |r| r.max_abs_diff(&group[0]).unwrap_or(f64::INFINITY)))
            .fold(0.0, f64::max)
    }
}

pub fn k_rdms(psi: &StateVector, k: usize) -> Result<RdmSet> {
    let n = psi.n;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("RDM order {k} outside 1..={n}")));
    }
    let rdms = subsets(n, k)
        .into_par_iter()
        .map(|s| {
            let rho = pure_marginal(psi, &s).expect("subset is valid");
            (s, rho)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(RdmSet { n, k, rdms })
}

/// Max over subsets of the max-entry difference between two RDM sets.
pub fn rdm_max_deviation(a: &RdmSet, b: &RdmSet) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { expected: a.n, found: b.n });
    }
    if a.k != b.k {
        return Err(Error::InvalidArgument(format!("RDM orders differ: {} vs {}", a.k, b.k)));
    }
    a.rdms
        .iter()
        .map(|(s, ra)| ra.max_abs_diff(&b.rdms[s]))
        .try_fold(0.0, |acc, d| d.map(|d| f64::max(acc, d)))
}

/// `alpha|0…0> + beta·e^{iθ}|1…1>`.
pub fn ghz(n: usize, alpha: f64, beta: f64, theta: f64) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("GHZ state needs at least one qubit".into()));
    }
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidArgument("GHZ weights must be positive".into()));
    }
    if (alpha * alpha + beta * beta - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidArgument(format!(
            "GHZ weights not normalized: {alpha}^2 + {beta}^2 != 1"
        )));
    }
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = Complex64::new(alpha, 0.0);
    *amps.last_mut().unwrap() += Complex64::from_polar(beta, theta);
    StateVector::new(n, amps)
}

/// Balanced GHZ state with relative phase `theta`.
pub fn ghz_balanced(n: usize, theta: f64) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ghz(n, h, h, theta).expect("balanced weights are valid")
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Symmetric Dicke state: uniform superposition of all weight-`i` bit strings.
pub fn dicke(n: usize, i: usize) -> Result<StateVector> {
    if i > n {
        return Err(Error::InvalidArgument(format!("Dicke weight {i} exceeds {n}")));
    }
    let amp = Complex64::new(1.0 / (binomial(n, i) as f64).sqrt(), 0.0);
    let amps = (0..1usize << n)
        .map(|b| if b.count_ones() as usize == i { amp } else { ZERO })
        .collect();
    StateVector::new(n, amps)
}

/// `SWAP_jk = (I + XX + YY + ZZ) / 2`.
pub fn swap(n: usize, j: usize, k: usize) -> Result<PauliSum> {
    if j == k {
        return Err(Error::InvalidArgument("SWAP needs two distinct qubits".into()));
    }
    let mut s = PauliSum::identity(n, 0.5);
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        s.add_term(PauliString::uniform(n, p, &[j, k])?, 0.5);
    }
    Ok(s)
}

/// `Σ_{j<k} SWAP_jk`.
pub fn swap_sum(n: usize) -> Result<PauliSum> {
    if n < 2 {
        return Err(Error::InvalidArgument("swap sum needs at least two qubits".into()));
    }
    let mut out = PauliSum::zero(n);
    for j in 0..n {
        for k in j + 1..n {
            out = out + swap(n, j, k)?;
        }
    }
    Ok(out)
}

/// Total `Z` magnetization `Σ_j Z_j`.
pub fn s_z(n: usize) -> Result<PauliSum> {
    if n == 0 {
        return Err(Error::InvalidArgument("S_z needs at least one qubit".into()));
    }
    PauliSum::from_terms(n, (0..n).map(|q| (PauliString::single(n, Pauli::Z, q).unwrap(), 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn vec_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn state_constructor_normalizes_and_fixes_phase() {
        let s = StateVector::new(1, vec![Complex64::new(0.0, 2.0), c(0.0)]).unwrap();
        assert!((s.amps()[0] - c(1.0)).norm() < 1e-15);
        assert!(StateVector::new(1, vec![c(0.0), c(0.0)]).is_err());
        assert!(StateVector::new(2, vec![c(1.0)]).is_err());
    }

    #[test]
    fn product_state_partial_trace() {
        // qubit 0 in |0>, qubit 1 in |1>: basis index 0b10
        let rho = StateVector::basis(2, 0b10).unwrap().density();
        let r0 = partial_trace(&rho, 2, &[0]).unwrap();
        assert_eq!(r0.matrix()[(0, 0)], c(1.0));
        assert_eq!(r0.matrix()[(1, 1)], c(0.0));
        let r1 = partial_trace(&rho, 2, &[1]).unwrap();
        assert_eq!(r1.matrix()[(1, 1)], c(1.0));
    }

    #[test]
    fn ghz3_two_qubit_marginal() {
        let rho = ghz_balanced(3, 0.0).density();
        let r = partial_trace(&rho, 3, &[0, 1]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j && (i == 0 || i == 3) { 0.5 } else { 0.0 };
                assert!((r.matrix()[(i, j)] - c(expect)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn maximally_mixed_marginal() {
        let rho = DensityMatrix::maximally_mixed(3);
        for s in subsets(3, 2) {
            let r = partial_trace(&rho, 3, &s).unwrap();
            assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(2)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn bad_subsets_are_rejected() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(partial_trace(&rho, 2, &[0, 0]).is_err());
        assert!(partial_trace(&rho, 2, &[2]).is_err());
        assert!(partial_trace(&rho, 3, &[0]).is_err());
    }

    #[test]
    fn product_state_rdms() {
        let set = k_rdms(&StateVector::basis(3, 0).unwrap(), 2).unwrap();
        assert_eq!(set.len(), 3);
        for (_, r) in set.iter() {
            assert_eq!(r.matrix()[(0, 0)], c(1.0));
            assert!((r.trace() - c(1.0)).norm() < 1e-15);
        }
        assert!(k_rdms(&StateVector::basis(3, 0).unwrap(), 0).is_err());
        assert!(k_rdms(&StateVector::basis(3, 0).unwrap(), 4).is_err());
    }

    #[test]
    fn ghz_n_minus_one_marginals_are_classical_mixtures() {
        for n in 2..=6 {
            let set = k_rdms(&ghz_balanced(n, 0.0), n - 1).unwrap();
            let d = 1 << (n - 1);
            for (_, r) in set.iter() {
                for i in 0..d {
                    for j in 0..d {
                        let expect = if i == j && (i == 0 || i == d - 1) { 0.5 } else { 0.0 };
                        assert!((r.matrix()[(i, j)] - c(expect)).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn w_state_single_qubit_marginals() {
        for n in 2..=6 {
            let set = k_rdms(&dicke(n, 1).unwrap(), 1).unwrap();
            for (_, r) in set.iter() {
                assert!((r.matrix()[(0, 0)].re - (1.0 - 1.0 / n as f64)).abs() < 1e-14);
                assert!((r.matrix()[(1, 1)].re - 1.0 / n as f64).abs() < 1e-14);
                assert!(r.matrix()[(0, 1)].norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rdm_deviation_examples() {
        let g = k_rdms(&ghz_balanced(3, 0.0), 2).unwrap();
        assert_eq!(rdm_max_deviation(&g, &g).unwrap(), 0.0);
        let gt = k_rdms(&ghz_balanced(3, PI / 3.0), 2).unwrap();
        assert!(rdm_max_deviation(&g, &gt).unwrap() <= 1e-14);

        let a = k_rdms(&StateVector::basis(3, 0).unwrap(), 1).unwrap();
        let b = k_rdms(&StateVector::basis(3, 7).unwrap(), 1).unwrap();
        assert_eq!(rdm_max_deviation(&a, &b).unwrap(), 1.0);
        assert!(rdm_max_deviation(&a, &g).is_err());
    }

    #[test]
    fn ghz_constructor() {
        let g = ghz(3, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0).unwrap();
        assert!((g.amps()[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((g.amps()[7] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(ghz(3, 0.5, 0.5, 0.0).is_err());
        assert!(ghz(3, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0).is_err());

        // <ghz(θ=0)|ghz(θ)> = α² + β² e^{iθ}
        let (al, be) = (0.2f64.sqrt(), 0.8f64.sqrt());
        for &theta in &[0.3, 1.0, PI, 5.0] {
            let a = ghz(4, al, be, 0.0).unwrap();
            let b = ghz(4, al, be, theta).unwrap();
            let expect = c(al * al) + Complex64::from_polar(be * be, theta);
            assert!((a.inner(&b).unwrap() - expect).norm() < 1e-14);
            assert!(a.overlap(&b).unwrap() < 1.0);
        }
    }

    #[test]
    fn dicke_examples() {
        assert_eq!(dicke(4, 0).unwrap(), StateVector::basis(4, 0).unwrap());
        let w = dicke(5, 1).unwrap();
        for b in 0..32usize {
            let expect = if b.count_ones() == 1 { 1.0 / 5f64.sqrt() } else { 0.0 };
            assert!((w.amps()[b] - c(expect)).norm() < 1e-15);
        }
        let d21 = dicke(2, 1).unwrap();
        let swapped = swap(2, 0, 1).unwrap().apply(d21.amps()).unwrap();
        assert!(vec_close(&swapped, d21.amps(), 1e-15));
        assert!(dicke(3, 4).is_err());
    }

    #[test]
    fn swap_sum_two_qubits_swaps_basis_states() {
        let m = swap_sum(2).unwrap().to_matrix().unwrap();
        let expect = [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        for i in 0..4 {
            for j in 0..4 {
                assert!((m[(i, j)] - c(expect[i][j])).norm() < 1e-15);
            }
        }
        assert_eq!(swap_sum(5).unwrap().locality(), 2);
        assert!(swap_sum(1).is_err());
    }

    #[test]
    fn swap_terms_square_to_identity() {
        for (j, k) in [(0, 1), (1, 3), (0, 2)] {
            let s = swap(4, j, k).unwrap();
            assert_eq!(s.square_sum(), PauliSum::identity(4, 1.0));
        }
    }

    #[test]
    fn dicke_eigen_relations() {
        for n in 2..=6 {
            let sw = swap_sum(n).unwrap();
            let sz = s_z(n).unwrap();
            let pairs = (n * (n - 1) / 2) as f64;
            for i in 0..=n {
                let d = dicke(n, i).unwrap();
                let a = sw.apply(d.amps()).unwrap();
                let expect: Vec<_> = d.amps().iter().map(|x| x * pairs).collect();
                assert!(vec_close(&a, &expect, 1e-12));
                let b = sz.apply(d.amps()).unwrap();
                let expect: Vec<_> = d.amps().iter().map(|x| x * (n as f64 - 2.0 * i as f64)).collect();
                assert!(vec_close(&b, &expect, 1e-12));
            }
        }
        let zero = StateVector::basis(4, 0).unwrap();
        let b = s_z(4).unwrap().apply(zero.amps()).unwrap();
        assert!((b[0] - c(4.0)).norm() < 1e-15);
        assert_eq!(s_z(1).unwrap(), PauliSum::single(PauliString::single(1, Pauli::Z, 0).unwrap(), 1.0));
    }

    #[test]
    fn state_json_round_trip() {
        let g = ghz_balanced(3, 0.7);
        let back = StateVector::from_json(&g.to_json()).unwrap();
        assert!(vec_close(back.amps(), g.amps(), 1e-15));
        assert!(StateVector::from_json("{\"n\": 2, \"amps\": [[1,0]]}").is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let bad = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(DensityMatrix::new(bad).is_err());
        let ok = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.25), c(0.75)]));
        assert!(DensityMatrix::new(ok).is_ok());
    }
}
