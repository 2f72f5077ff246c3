//! Qubit-to-fermion encoding: qubit `i` becomes one fermion shared between
//! modes `a_i` and `b_i` (`z_i = 0` ↔ `a_i` occupied).
//!
//! Modes are realized by a Jordan-Wigner representation on `2n` auxiliary
//! qubits in the interleaved order `a₀, b₀, a₁, b₁, …`; mode `m` is auxiliary
//! qubit `m` and `|1>` means occupied:
//!
//! `c_m = Z_0 ⋯ Z_{m-1} · (X_m + iY_m)/2`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::pauli::{Pauli, PauliString, PauliSum, PRUNE_THRESHOLD};
use crate::spectra;

/// Largest source qubit count for fermionic paths (8 auxiliary qubits).
pub const MAX_SITES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModeKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub site: usize,
    pub kind: ModeKind,
}

impl ModeIndex {
    pub fn a(site: usize) -> Self {
        ModeIndex { site, kind: ModeKind::A }
    }

    pub fn b(site: usize) -> Self {
        ModeIndex { site, kind: ModeKind::B }
    }

    pub fn linear(&self) -> usize {
        2 * self.site + usize::from(self.kind == ModeKind::B)
    }

    pub fn from_linear(m: usize) -> Self {
        ModeIndex { site: m / 2, kind: if m % 2 == 0 { ModeKind::A } else { ModeKind::B } }
    }
}

/// Complex-weighted Pauli sum; only used for non-Hermitian intermediates.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderSum {
    n: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl LadderSum {
    fn zero(n: usize) -> Self {
        LadderSum { n, terms: BTreeMap::new() }
    }

    fn identity(n: usize, c: Complex64) -> Self {
        let mut s = Self::zero(n);
        s.add_term(PauliString::identity(n), c);
        s
    }

    fn add_term(&mut self, p: PauliString, c: Complex64) {
        let e = self.terms.entry(p).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if e.norm() < PRUNE_THRESHOLD {
            self.terms.remove(&p);
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, &c) in &self.terms {
            for b in 0..dim {
                let (amp, row) = p.act_on_basis(b);
                m[(row, b)] += amp * c;
            }
        }
        Ok(m)
    }

    /// Real-coefficient form; fails if any coefficient keeps an imaginary part.
    fn into_hermitian(self) -> Result<PauliSum> {
        let mut out = PauliSum::zero(self.n);
        for (p, c) in self.terms {
            if c.im.abs() > 1e-12 {
                return Err(Error::Numerical(format!("operator is not Hermitian: {p} has coefficient {c}")));
            }
            out.add_term(p, c.re);
        }
        Ok(out)
    }
}

impl Add for &LadderSum {
    type Output = LadderSum;
    fn add(self, rhs: &LadderSum) -> LadderSum {
        let mut out = self.clone();
        for (p, &c) in &rhs.terms {
            out.add_term(*p, c);
        }
        out
    }
}

impl Mul for &LadderSum {
    type Output = LadderSum;
    fn mul(self, rhs: &LadderSum) -> LadderSum {
        let mut out = LadderSum::zero(self.n);
        for (p, &a) in &self.terms {
            for (q, &b) in &rhs.terms {
                let (ph, r) = p.multiply_unchecked(q);
                out.add_term(r, ph.to_complex() * a * b);
            }
        }
        out
    }
}

/// Jordan-Wigner image of `c_m` (or `c_m†` when `dagger`).
pub fn jw_mode_op(mode: usize, dagger: bool, total_modes: usize) -> Result<LadderSum> {
    if mode >= total_modes {
        return Err(Error::InvalidArgument(format!("mode {mode} out of range for {total_modes} modes")));
    }
    let string: Vec<(Pauli, usize)> = (0..mode).map(|q| (Pauli::Z, q)).collect();
    let with = |p: Pauli| {
        let mut ops = string.clone();
        ops.push((p, mode));
        PauliString::from_ops(total_modes, &ops)
    };
    let mut s = LadderSum::zero(total_modes);
    s.add_term(with(Pauli::X)?, Complex64::new(0.5, 0.0));
    s.add_term(with(Pauli::Y)?, Complex64::new(0.0, if dagger { -0.5 } else { 0.5 }));
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

/// Polynomial in creation/annihilation operators, kept as written (no normal ordering).
#[derive(Clone, Debug, PartialEq)]
pub struct FermionPoly {
    modes: usize,
    monomials: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionPoly {
    pub fn identity(modes: usize, c: f64) -> Self {
        FermionPoly { modes, monomials: vec![(Complex64::new(c, 0.0), Vec::new())] }
    }

    pub fn monomial(modes: usize, c: Complex64, ops: &[(usize, bool)]) -> Self {
        let ops = ops.iter().map(|&(mode, dagger)| Ladder { mode, dagger }).collect();
        FermionPoly { modes, monomials: vec![(c, ops)] }
    }

    /// `c_m† c_m`.
    pub fn number(modes: usize, m: usize) -> Self {
        Self::monomial(modes, Complex64::new(1.0, 0.0), &[(m, true), (m, false)])
    }

    /// Largest number of ladder operators in any monomial.
    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|(_, ops)| ops.len()).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        FermionPoly { modes: self.modes, monomials: self.monomials.iter().map(|(k, ops)| (k * c, ops.clone())).collect() }
    }

    pub fn to_ladder_sum(&self) -> Result<LadderSum> {
        let mut total = LadderSum::zero(self.modes);
        for (c, ops) in &self.monomials {
            let mut term = LadderSum::identity(self.modes, *c);
            for op in ops {
                term = &term * &jw_mode_op(op.mode, op.dagger, self.modes)?;
            }
            total = &total + &term;
        }
        Ok(total)
    }
}

impl Add for FermionPoly {
    type Output = FermionPoly;
    fn add(mut self, rhs: FermionPoly) -> FermionPoly {
        self.monomials.extend(rhs.monomials);
        self
    }
}

impl Mul for &FermionPoly {
    type Output = FermionPoly;
    fn mul(self, rhs: &FermionPoly) -> FermionPoly {
        let mut monomials = Vec::with_capacity(self.monomials.len() * rhs.monomials.len());
        for (a, l) in &self.monomials {
            for (b, r) in &rhs.monomials {
                let mut ops = l.clone();
                ops.extend_from_slice(r);
                monomials.push((a * b, ops));
            }
        }
        FermionPoly { modes: self.modes, monomials }
    }
}

/// Hermitian fermionic operator: its ladder-operator degree and its
/// Jordan-Wigner form on the auxiliary qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionOp {
    pub modes: usize,
    pub degree: usize,
    pub qubit_form: PauliSum,
}

impl FermionOp {
    pub fn from_poly(poly: &FermionPoly) -> Result<Self> {
        Ok(FermionOp { modes: poly.modes, degree: poly.degree(), qubit_form: poly.to_ladder_sum()?.into_hermitian()? })
    }

    pub fn apply(&self, v: &StateVector) -> Result<Vec<Complex64>> {
        self.qubit_form.apply(v.amps())
    }
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SITES {
        return Err(Error::TooLarge { n, limit: MAX_SITES });
    }
    Ok(())
}

/// Fermionic image of a single-qubit Pauli acting on `site` of an `n`-qubit system.
pub fn map_pauli_poly(p: Pauli, site: usize, n: usize) -> FermionPoly {
    let modes = 2 * n;
    let (a, b) = (ModeIndex::a(site).linear(), ModeIndex::b(site).linear());
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        Pauli::I => FermionPoly::identity(modes, 1.0),
        // a†b + b†a
        Pauli::X => FermionPoly::monomial(modes, one, &[(a, true), (b, false)])
            + FermionPoly::monomial(modes, one, &[(b, true), (a, false)]),
        // i(b†a - a†b)
        Pauli::Y => FermionPoly::monomial(modes, i, &[(b, true), (a, false)])
            + FermionPoly::monomial(modes, -i, &[(a, true), (b, false)]),
        // I - 2b†b
        Pauli::Z => FermionPoly::identity(modes, 1.0) + FermionPoly::number(modes, b).scaled(Complex64::new(-2.0, 0.0)),
    }
}

pub fn map_pauli(p: Pauli, site: usize, n: usize) -> Result<FermionOp> {
    check_sites(n)?;
    if site >= n {
        return Err(Error::InvalidArgument(format!("site {site} out of range for {n} sites")));
    }
    FermionOp::from_poly(&map_pauli_poly(p, site, n))
}

fn map_string_poly(p: &PauliString) -> FermionPoly {
    let n = p.num_qubits();
    p.support()
        .into_iter()
        .fold(FermionPoly::identity(2 * n, 1.0), |acc, q| &acc * &map_pauli_poly(p.get(q), q, n))
}

/// Image of a qubit Hamiltonian: single-site images multiplied along each
/// string and summed linearly.
pub fn map_hamiltonian(h: &PauliSum) -> Result<FermionOp> {
    let n = h.num_qubits();
    check_sites(n)?;
    let mut poly = FermionPoly { modes: 2 * n, monomials: Vec::new() };
    for (p, c) in h.iter() {
        poly = poly + map_string_poly(p).scaled(Complex64::new(c, 0.0));
    }
    FermionOp::from_poly(&poly)
}

fn penalty_poly(site: usize, n: usize) -> FermionPoly {
    let modes = 2 * n;
    let factor = |m: usize| FermionPoly::number(modes, m).scaled(Complex64::new(2.0, 0.0)) + FermionPoly::identity(modes, -1.0);
    &factor(ModeIndex::a(site).linear()) * &factor(ModeIndex::b(site).linear())
}

/// `P_i = (2n_{a_i} - I)(2n_{b_i} - I)`: `-1` on a singly occupied site, `+1` on
/// an empty or doubly occupied one.
pub fn penalty(site: usize, n: usize) -> Result<FermionOp> {
    check_sites(n)?;
    if site >= n {
        return Err(Error::InvalidArgument(format!("site {site} out of range for {n} sites")));
    }
    FermionOp::from_poly(&penalty_poly(site, n))
}

/// `20·‖h‖₁`, floored at 1.
pub fn default_penalty_weight(h: &PauliSum) -> f64 {
    20.0 * h.one_norm().max(0.05)
}

/// `map(h) + Λ Σ_i (I + P_i)/2`. Each penalty term vanishes on the
/// one-fermion-per-site sector and equals `Λ` on every site that violates it.
pub fn full_map(h: &PauliSum, penalty_weight: f64) -> Result<FermionOp> {
    if penalty_weight.is_nan() || penalty_weight <= 0.0 {
        return Err(Error::InvalidArgument(format!("penalty weight must be positive, got {penalty_weight}")));
    }
    let n = h.num_qubits();
    check_sites(n)?;
    let mut poly = FermionPoly { modes: 2 * n, monomials: Vec::new() };
    for (p, c) in h.iter() {
        poly = poly + map_string_poly(p).scaled(Complex64::new(c, 0.0));
    }
    let half = Complex64::new(0.5 * penalty_weight, 0.0);
    for site in 0..n {
        poly = poly + FermionPoly::identity(2 * n, 1.0).scaled(half) + penalty_poly(site, n).scaled(half);
    }
    FermionOp::from_poly(&poly)
}

/// Auxiliary-qubit basis index of the encoded qubit basis state `bits`.
pub fn encoded_index(bits: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, i| acc | 1 << (2 * i + (bits >> i & 1)))
}

pub fn encode_basis_state(bits: usize, n: usize) -> Result<StateVector> {
    check_sites(n)?;
    if bits >= 1 << n {
        return Err(Error::InvalidArgument(format!("basis index {bits} out of range for {n} qubits")));
    }
    StateVector::basis(2 * n, encoded_index(bits, n))
}

/// Linear extension of [`encode_basis_state`].
pub fn encode(psi: &StateVector) -> Result<StateVector> {
    let n = psi.num_qubits();
    check_sites(n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (2 * n)];
    for (bits, &a) in psi.amps().iter().enumerate() {
        amps[encoded_index(bits, n)] = a;
    }
    StateVector::new(2 * n, amps)
}

/// Applies `c_m` or `c_m†` to a raw amplitude vector over Fock basis states.
pub fn apply_ladder(v: &[Complex64], mode: usize, dagger: bool) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    let bit = 1usize << mode;
    for (b, &amp) in v.iter().enumerate() {
        let occupied = b & bit != 0;
        if occupied == dagger {
            continue;
        }
        let sign = if (b & (bit - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        out[b ^ bit] += amp * sign;
    }
    out
}

fn block(h: &FermionOp, states: &[usize]) -> Result<DMatrix<Complex64>> {
    let dim = 1usize << h.qubit_form.num_qubits();
    let cols: Vec<Vec<Complex64>> = states
        .iter()
        .map(|&s| {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[s] = Complex64::new(1.0, 0.0);
            h.qubit_form.apply(&e)
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(states.len(), states.len(), |r, c| cols[c][states[r]]))
}

fn sorted_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Spectra of a mapped Hamiltonian inside and outside the one-fermion-per-site sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpectra {
    pub sector: Vec<f64>,
    pub complement: Vec<f64>,
    /// Largest entry of the sector/complement coupling block.
    pub leakage: f64,
}

pub fn sector_spectra(h: &FermionOp, n: usize) -> Result<SectorSpectra> {
    check_sites(n)?;
    if h.qubit_form.num_qubits() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: h.qubit_form.num_qubits() });
    }
    let inside: Vec<usize> = (0..1usize << n).map(|b| encoded_index(b, n)).collect();
    let outside: Vec<usize> = (0..1usize << (2 * n)).filter(|s| !inside.contains(s)).collect();
    let mut leakage = 0.0f64;
    for &s in &inside {
        let mut e = vec![Complex64::new(0.0, 0.0); 1 << (2 * n)];
        e[s] = Complex64::new(1.0, 0.0);
        let hv = h.qubit_form.apply(&e)?;
        for &o in &outside {
            leakage = leakage.max(hv[o].norm());
        }
    }
    Ok(SectorSpectra {
        sector: sorted_eigenvalues(block(h, &inside)?),
        complement: sorted_eigenvalues(block(h, &outside)?),
        leakage,
    })
}

/// Largest absolute difference between two ascending spectra of equal length.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sector spectrum of `full_map(h, Λ)` compared with the spectrum of `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorMatch {
    pub penalty_weight: f64,
    pub spin_spectrum: Vec<f64>,
    pub sector: SectorSpectra,
    pub max_deviation: f64,
    /// `min(complement) - max(sector)`; positive when the penalty dominates.
    pub penalty_margin: f64,
    pub fermion_degree: usize,
}

pub fn sector_spectrum_match(h: &PauliSum, penalty_weight: f64) -> Result<SectorMatch> {
    let n = h.num_qubits();
    let hf = full_map(h, penalty_weight)?;
    let spin_spectrum = spectra::eig(h)?.eigenvalues;
    let sector = sector_spectra(&hf, n)?;
    let max_deviation = spectrum_distance(&sector.sector, &spin_spectrum);
    let top = sector.sector.last().copied().unwrap_or(f64::NEG_INFINITY);
    let bottom = sector.complement.first().copied().unwrap_or(f64::INFINITY);
    Ok(SectorMatch { penalty_weight, spin_spectrum, max_deviation, penalty_margin: bottom - top, sector, fermion_degree: hf.degree })
}

/// One- and two-particle reduced density matrices of a Fock-space state.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoMatrix {
    pub modes: usize,
    /// `⟨c_p† c_q⟩` at `(p, q)`.
    pub one_matrix: DMatrix<Complex64>,
    /// `⟨c_p† c_q† c_s c_r⟩` keyed by `(p, q, r, s)` with `p < q`, `r < s`.
    pub two_matrix: BTreeMap<(usize, usize, usize, usize), Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TwoMatrixJson {
    modes: usize,
    one_matrix: Vec<Vec<[f64; 2]>>,
    two_matrix: BTreeMap<String, [f64; 2]>,
}

impl TwoMatrix {
    pub fn pairs(modes: usize) -> Vec<(usize, usize)> {
        (0..modes).flat_map(|p| (p + 1..modes).map(move |q| (p, q))).collect()
    }

    /// `Σ_{p≠q} ⟨c_p† c_q† c_q c_p⟩ = N(N-1)` for an N-fermion state.
    pub fn trace(&self) -> f64 {
        2.0 * Self::pairs(self.modes).iter().map(|&(p, q)| self.two_matrix[&(p, q, p, q)].re).sum::<f64>()
    }

    pub fn particle_number(&self) -> f64 {
        self.one_matrix.trace().re
    }

    /// Hermiticity defect of the pair-indexed matrix and of the 1-matrix.
    pub fn hermiticity_error(&self) -> f64 {
        let one = (&self.one_matrix - self.one_matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        self.two_matrix
            .iter()
            .map(|(&(p, q, r, s), &v)| (v - self.two_matrix[&(r, s, p, q)].conj()).norm())
            .fold(one, f64::max)
    }

    pub fn max_deviation(&self, other: &TwoMatrix) -> Result<f64> {
        if self.modes != other.modes {
            return Err(Error::DimensionMismatch { expected: self.modes, found: other.modes });
        }
        let one = (&self.one_matrix - &other.one_matrix).iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(self
            .two_matrix
            .iter()
            .map(|(k, v)| (v - other.two_matrix[k]).norm())
            .fold(one, f64::max))
    }

    pub fn to_json(&self) -> String {
        let j = TwoMatrixJson {
            modes: self.modes,
            one_matrix: (0..self.modes)
                .map(|p| (0..self.modes).map(|q| [self.one_matrix[(p, q)].re, self.one_matrix[(p, q)].im]).collect())
                .collect(),
            two_matrix: self
                .two_matrix
                .iter()
                .map(|(&(p, q, r, s), v)| (format!("({p},{q}|{r},{s})"), [v.re, v.im]))
                .collect(),
        };
        serde_json::to_string(&j).expect("two-matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: TwoMatrixJson =
            serde_json::from_str(s).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        let bad = |k: &str| Error::Parse { line: 0, msg: format!("bad two-matrix key `{k}`") };
        let mut two_matrix = BTreeMap::new();
        for (k, [re, im]) in j.two_matrix {
            let inner = k.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| bad(&k))?;
            let nums: Vec<usize> = inner
                .split(['|', ','])
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(&k))?;
            if nums.len() != 4 {
                return Err(bad(&k));
            }
            two_matrix.insert((nums[0], nums[1], nums[2], nums[3]), Complex64::new(re, im));
        }
        let one_matrix = DMatrix::from_fn(j.modes, j.modes, |p, q| {
            let [re, im] = j.one_matrix[p][q];
            Complex64::new(re, im)
        });
        Ok(TwoMatrix { modes: j.modes, one_matrix, two_matrix })
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// All `⟨c_p† c_q⟩` and `⟨c_p† c_q† c_s c_r⟩` of a state on `modes` Jordan-Wigner qubits.
pub fn two_matrix(psi: &StateVector, modes: usize) -> Result<TwoMatrix> {
    if psi.num_qubits() != modes {
        return Err(Error::DimensionMismatch { expected: modes, found: psi.num_qubits() });
    }
    let v = psi.amps();
    let singles: Vec<Vec<Complex64>> = (0..modes).map(|m| apply_ladder(v, m, false)).collect();
    let one_matrix = DMatrix::from_fn(modes, modes, |p, q| inner(&singles[p], &singles[q]));
    // ⟨c_p† c_q† c_s c_r⟩ = ⟨c_q c_p ψ | c_s c_r ψ⟩
    let pairs = TwoMatrix::pairs(modes);
    let doubles: BTreeMap<(usize, usize), Vec<Complex64>> =
        pairs.iter().map(|&(p, q)| ((p, q), apply_ladder(&singles[p], q, false))).collect();
    let mut two = BTreeMap::new();
    for &(p, q) in &pairs {
        for &(r, s) in &pairs {
            two.insert((p, q, r, s), inner(&doubles[&(p, q)], &doubles[&(r, s)]));
        }
    }
    Ok(TwoMatrix { modes, one_matrix, two_matrix: two })
}
