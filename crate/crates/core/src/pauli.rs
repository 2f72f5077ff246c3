//! Pauli strings stored as X/Z bit masks and real-weighted sums of them.
//!
//! Conventions used everywhere in the crate:
//!
//! - qubit `q` is bit `q` of a computational basis index (qubit 0 is least
//!   significant), and `Z|0> = |0>`;
//! - a qubit carrying both an X bit and a Z bit is `Y = iXZ`;
//! - a [`PauliString`] carries no phase. Phases only appear as the return
//!   value of [`PauliString::multiply`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest qubit count that may be materialized as a dense matrix.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Coefficients with magnitude below this are dropped after combination.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// One of the four phases that can arise in a product of Pauli strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    /// `i^k`.
    pub fn from_power(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power(self) -> i64 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        i_pow(self.power())
    }

    pub fn is_real(self) -> bool {
        matches!(self, Phase::PlusOne | Phase::MinusOne)
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_power(self.power() + rhs.power())
    }
}

#[inline]
pub(crate) fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[inline]
fn popcount(v: u64) -> i64 {
    v.count_ones() as i64
}

/// Tensor product of single-qubit Pauli operators on `n` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    n: usize,
    x_mask: u64,
    z_mask: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliString { n, x_mask: 0, z_mask: 0 }
    }

    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge { n, limit: MAX_QUBITS });
        }
        let valid = if n == MAX_QUBITS { u64::MAX } else { (1u64 << n) - 1 };
        if (x_mask | z_mask) & !valid != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask bits set beyond qubit count {n}"
            )));
        }
        Ok(PauliString { n, x_mask, z_mask })
    }

    /// Build from `(operator, qubit)` factors. Repeated qubits are rejected.
    pub fn from_ops(n: usize, ops: &[(Pauli, usize)]) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut seen = 0u64;
        for &(p, q) in ops {
            if q >= n {
                return Err(Error::InvalidArgument(format!(
                    "qubit {q} out of range for {n} qubits"
                )));
            }
            if seen & (1 << q) != 0 {
                return Err(Error::InvalidArgument(format!("qubit {q} repeated")));
            }
            seen |= 1 << q;
            let (xb, zb) = p.bits();
            if xb {
                x |= 1 << q;
            }
            if zb {
                z |= 1 << q;
            }
        }
        Self::from_masks(n, x, z)
    }

    pub fn single(n: usize, p: Pauli, q: usize) -> Result<Self> {
        Self::from_ops(n, &[(p, q)])
    }

    /// The same operator on every listed qubit, e.g. `X⊗X⊗X`.
    pub fn uniform(n: usize, p: Pauli, qubits: &[usize]) -> Result<Self> {
        let ops: Vec<_> = qubits.iter().map(|&q| (p, q)).collect();
        Self::from_ops(n, &ops)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn support_mask(&self) -> u64 {
        self.x_mask | self.z_mask
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.support_mask() >> q & 1 == 1).collect()
    }

    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_mask >> q & 1 == 1, self.z_mask >> q & 1 == 1)
    }

    /// Number of Y factors. The matrix is real iff this is even.
    pub fn y_count(&self) -> usize {
        (self.x_mask & self.z_mask).count_ones() as usize
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let s = popcount(self.x_mask & other.z_mask) + popcount(self.z_mask & other.x_mask);
        s % 2 == 0
    }

    /// `self · other = phase · r`.
    pub fn multiply(&self, other: &PauliString) -> Result<(Phase, PauliString)> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(self.multiply_unchecked(other))
    }

    pub(crate) fn multiply_unchecked(&self, other: &PauliString) -> (Phase, PauliString) {
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        // Each factor is i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
        let k = popcount(self.x_mask & self.z_mask) + popcount(other.x_mask & other.z_mask)
            + 2 * popcount(self.z_mask & other.x_mask)
            - popcount(x & z);
        (Phase::from_power(k), PauliString { n: self.n, x_mask: x, z_mask: z })
    }

    /// `P|b> = amp · |b'>` for a basis index `b`.
    #[inline]
    pub fn act_on_basis(&self, b: usize) -> (Complex64, usize) {
        let sign = popcount(self.z_mask & b as u64) * 2;
        let amp = i_pow(popcount(self.x_mask & self.z_mask) + sign);
        (amp, b ^ self.x_mask as usize)
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        let mut s = PauliSum::zero(self.n);
        s.add_term(*self, 1.0);
        s.to_matrix()
    }

    fn sort_key(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        (0..self.n).filter_map(move |q| match self.get(q) {
            Pauli::I => None,
            p => Some((q, p.letter() as u8)),
        })
    }
}

// Identity first, then by weight, then by the sorted support, then by letter.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.weight().cmp(&other.weight()))
            .then_with(|| self.sort_key().cmp(other.sort_key()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for q in self.support() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}@{}", self.get(q).letter(), q)?;
        }
        Ok(())
    }
}

/// Real-weighted sum of Pauli strings, hence a Hermitian operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize, coeff: f64) -> Self {
        let mut s = Self::zero(n);
        s.add_term(PauliString::identity(n), coeff);
        s
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        let mut s = Self::zero(n);
        for (p, c) in terms {
            if p.n != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.n });
            }
            s.add_term(p, c);
        }
        Ok(s)
    }

    pub fn single(p: PauliString, coeff: f64) -> Self {
        let mut s = Self::zero(p.n);
        s.add_term(p, coeff);
        s
    }

    /// Adds `coeff · p`, combining with an existing term and pruning.
    ///
    /// Panics if `p` acts on a different number of qubits.
    pub fn add_term(&mut self, p: PauliString, coeff: f64) {
        assert_eq!(p.n, self.n, "Pauli string qubit count mismatch");
        let entry = self.terms.entry(p).or_insert(0.0);
        *entry += coeff;
        if entry.abs() < PRUNE_THRESHOLD {
            self.terms.remove(&p);
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn coeff(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    /// Largest weight among the stored terms; 0 for the zero or identity sum.
    pub fn locality(&self) -> usize {
        self.terms.keys().map(PauliString::weight).max().unwrap_or(0)
    }

    /// Sum of absolute coefficients, an upper bound on the operator norm.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn scaled(&self, factor: f64) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (p, c) in self.iter() {
            out.add_term(*p, c * factor);
        }
        out
    }

    /// `self - shift · I`.
    pub fn shifted(&self, shift: f64) -> PauliSum {
        let mut out = self.clone();
        out.add_term(PauliString::identity(self.n), -shift);
        out
    }

    /// True when every term has an even number of Y factors, so the matrix is real.
    pub fn is_real(&self) -> bool {
        self.terms.keys().all(|p| p.y_count() % 2 == 0)
    }

    /// Symbolic `h · h`. Anticommuting cross terms cancel pairwise, commuting
    /// ones pair up with a real phase, so the result stays real.
    pub fn square_sum(&self) -> PauliSum {
        let terms: Vec<(PauliString, f64)> = self.iter().map(|(p, c)| (*p, c)).collect();
        let mut acc: BTreeMap<PauliString, f64> = BTreeMap::new();
        let diag: f64 = terms.iter().map(|(_, c)| c * c).sum();
        *acc.entry(PauliString::identity(self.n)).or_insert(0.0) += diag;
        for (i, (p, cp)) in terms.iter().enumerate() {
            for (q, cq) in &terms[i + 1..] {
                if !p.commutes_with(q) {
                    continue;
                }
                let (phase, r) = p.multiply_unchecked(q);
                let sign = match phase {
                    Phase::PlusOne => 1.0,
                    Phase::MinusOne => -1.0,
                    _ => unreachable!("commuting Hermitian Paulis have a real product phase"),
                };
                *acc.entry(r).or_insert(0.0) += 2.0 * sign * cp * cq;
            }
        }
        let mut out = PauliSum::zero(self.n);
        for (p, c) in acc {
            if c.abs() >= PRUNE_THRESHOLD {
                out.terms.insert(p, c);
            }
        }
        out
    }

    fn check_dense(&self) -> Result<usize> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge { n: self.n, limit: MAX_DENSE_QUBITS });
        }
        Ok(1usize << self.n)
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.check_dense()?;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (p, c) in self.iter() {
            for b in 0..dim {
                let (amp, row) = p.act_on_basis(b);
                m[(row, b)] += amp * c;
            }
        }
        Ok(m)
    }

    /// Real matrix, available when [`PauliSum::is_real`] holds.
    pub fn to_real_matrix(&self) -> Result<Option<DMatrix<f64>>> {
        let dim = self.check_dense()?;
        if !self.is_real() {
            return Ok(None);
        }
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for (p, c) in self.iter() {
            for b in 0..dim {
                let (amp, row) = p.act_on_basis(b);
                m[(row, b)] += amp.re * c;
            }
        }
        Ok(Some(m))
    }

    /// Matrix-free `h · v` on a raw amplitude vector of length `2^n`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = 1usize
            .checked_shl(self.n as u32)
            .ok_or(Error::TooLarge { n: self.n, limit: 63 })?;
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (p, c) in self.iter() {
            for (b, &amp) in v.iter().enumerate() {
                if amp.re == 0.0 && amp.im == 0.0 {
                    continue;
                }
                let (phase, row) = p.act_on_basis(b);
                out[row] += phase * amp * c;
            }
        }
        Ok(out)
    }

    /// `<v| h |v>` for a normalized amplitude vector; the imaginary part is discarded.
    pub fn expectation(&self, v: &[Complex64]) -> Result<f64> {
        let hv = self.apply(v)?;
        Ok(v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum())
    }

    /// Parses the line-oriented text format, e.g. `-1.0 Z@0 Z@1`.
    pub fn parse(text: &str, n: usize) -> Result<PauliSum> {
        let mut out = PauliSum::zero(n);
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let coeff_tok = tokens.next().unwrap_or_default();
            let coeff: f64 = coeff_tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad coefficient `{coeff_tok}`"),
            })?;
            let mut ops = Vec::new();
            for tok in tokens {
                let (letter, qubit) = tok.split_once('@').ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("expected <P>@<qubit>, got `{tok}`"),
                })?;
                let p = match letter {
                    "X" => Pauli::X,
                    "Y" => Pauli::Y,
                    "Z" => Pauli::Z,
                    _ => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("unknown Pauli `{letter}`"),
                        })
                    }
                };
                let q: usize = qubit.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad qubit index `{qubit}`"),
                })?;
                ops.push((p, q));
            }
            let ps = PauliString::from_ops(n, &ops)
                .map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
            out.add_term(ps, coeff);
        }
        Ok(out)
    }

    /// Qubit count implied by a text document: one more than the largest index seen.
    pub fn infer_qubits(text: &str) -> usize {
        text.lines()
            .filter_map(|l| l.split('#').next())
            .flat_map(|l| l.split_whitespace().skip(1))
            .filter_map(|tok| tok.split_once('@').and_then(|(_, q)| q.parse::<usize>().ok()))
            .map(|q| q + 1)
            .max()
            .unwrap_or(1)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# qubits: {}\n", self.n);
        for (p, c) in self.iter() {
            if p.is_identity() {
                s.push_str(&format!("{c}\n"));
            } else {
                s.push_str(&format!("{c} {p}\n"));
            }
        }
        s
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.iter() {
            if first {
                write!(f, "{c}·{p}")?;
            } else if c < 0.0 {
                write!(f, " - {}·{p}", -c)?;
            } else {
                write!(f, " + {c}·{p}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PauliSum::parse(s, PauliSum::infer_qubits(s))
    }
}

impl Add<&PauliSum> for &PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: &PauliSum) -> PauliSum {
        assert_eq!(self.n, rhs.n, "qubit count mismatch");
        let mut out = self.clone();
        for (p, c) in rhs.iter() {
            out.add_term(*p, c);
        }
        out
    }
}

impl Add for PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: PauliSum) -> PauliSum {
        &self + &rhs
    }
}

impl Sub<&PauliSum> for &PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: &PauliSum) -> PauliSum {
        self + &rhs.scaled(-1.0)
    }
}

impl Sub for PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: PauliSum) -> PauliSum {
        &self - &rhs
    }
}

impl Mul<f64> for &PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: f64) -> PauliSum {
        self.scaled(rhs)
    }
}

impl Mul<f64> for PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: f64) -> PauliSum {
        self.scaled(rhs)
    }
}

impl Neg for PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        self.scaled(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_2x2(p: Pauli) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match p {
            Pauli::I => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
            Pauli::X => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Pauli::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Pauli::Z => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }

    // Kronecker product with qubit 0 as the rightmost (least significant) factor.
    fn kron_oracle(p: &PauliString) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for q in (0..p.num_qubits()).rev() {
            m = m.kronecker(&pauli_2x2(p.get(q)));
        }
        m
    }

    fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn x_times_x_is_identity() {
        let x = PauliString::single(1, Pauli::X, 0).unwrap();
        let (ph, r) = x.multiply(&x).unwrap();
        assert_eq!(ph, Phase::PlusOne);
        assert!(r.is_identity());
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliString::single(1, Pauli::X, 0).unwrap();
        let z = PauliString::single(1, Pauli::Z, 0).unwrap();
        let (ph, r) = x.multiply(&z).unwrap();
        assert_eq!(ph, Phase::MinusI);
        assert_eq!(r, PauliString::single(1, Pauli::Y, 0).unwrap());
        let lhs = pauli_2x2(Pauli::X) * pauli_2x2(Pauli::Z);
        let rhs = pauli_2x2(Pauli::Y) * ph.to_complex();
        assert!(max_diff(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn zz_times_xxx_matches_dense_product() {
        let zz = PauliString::uniform(3, Pauli::Z, &[0, 1]).unwrap();
        let xxx = PauliString::uniform(3, Pauli::X, &[0, 1, 2]).unwrap();
        let (ph, r) = zz.multiply(&xxx).unwrap();
        assert_eq!(r, PauliString::from_ops(3, &[(Pauli::Y, 0), (Pauli::Y, 1), (Pauli::X, 2)]).unwrap());
        // Z·X = iY on each of two qubits: i^2 = -1.
        assert_eq!(ph, Phase::MinusOne);
        let lhs = kron_oracle(&zz) * kron_oracle(&xxx);
        let rhs = kron_oracle(&r) * ph.to_complex();
        assert!(max_diff(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn multiply_rejects_mismatched_sizes() {
        let a = PauliString::identity(2);
        let b = PauliString::identity(3);
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn weights() {
        assert_eq!(PauliString::identity(4).weight(), 0);
        assert_eq!(PauliString::uniform(3, Pauli::X, &[0, 1, 2]).unwrap().weight(), 3);
        // column-0 logical Z on a 3x3 lattice: qubits (0,0), (1,0), (2,0)
        assert_eq!(PauliString::uniform(9, Pauli::Z, &[0, 3, 6]).unwrap().weight(), 3);
    }

    #[test]
    fn masks_are_validated() {
        assert!(PauliString::from_masks(2, 0b100, 0).is_err());
        assert!(PauliString::from_ops(2, &[(Pauli::X, 0), (Pauli::Z, 0)]).is_err());
    }

    #[test]
    fn to_matrix_basics() {
        let id = PauliSum::identity(1, 1.0).to_matrix().unwrap();
        assert_eq!(id, DMatrix::identity(2, 2));
        let z = PauliSum::single(PauliString::single(1, Pauli::Z, 0).unwrap(), 1.0);
        let m = z.to_matrix().unwrap();
        assert_eq!(m[(0, 0)].re, 1.0);
        assert_eq!(m[(1, 1)].re, -1.0);

        let zz = PauliSum::from_terms(
            3,
            [
                (PauliString::uniform(3, Pauli::Z, &[0, 1]).unwrap(), -1.0),
                (PauliString::uniform(3, Pauli::Z, &[1, 2]).unwrap(), -1.0),
            ],
        )
        .unwrap();
        let m = zz.to_matrix().unwrap();
        // |000>,|111>: -2; |010>,|101>: +2; the rest 0
        let expect = [-2.0, 0.0, 2.0, 0.0, 0.0, 2.0, 0.0, -2.0];
        for (b, e) in expect.iter().enumerate() {
            assert_eq!(m[(b, b)].re, *e);
        }
    }

    #[test]
    fn to_matrix_matches_kron_oracle_for_every_two_qubit_string() {
        for x in 0..4u64 {
            for z in 0..4u64 {
                let p = PauliString::from_masks(2, x, z).unwrap();
                assert!(max_diff(&p.to_matrix().unwrap(), &kron_oracle(&p)) < 1e-15, "{p}");
            }
        }
    }

    #[test]
    fn square_of_single_pauli_is_identity() {
        let x = PauliSum::single(PauliString::single(2, Pauli::X, 0).unwrap(), 1.0);
        assert_eq!(x.square_sum(), PauliSum::identity(2, 1.0));
    }

    #[test]
    fn square_of_zz_plus_x_is_two_identity() {
        // Z0Z1 and X0 anticommute, so every cross term cancels.
        let h = PauliSum::from_terms(
            2,
            [
                (PauliString::uniform(2, Pauli::Z, &[0, 1]).unwrap(), 1.0),
                (PauliString::single(2, Pauli::X, 0).unwrap(), 1.0),
            ],
        )
        .unwrap();
        let sq = h.square_sum();
        assert_eq!(sq, PauliSum::identity(2, 2.0));
        let m = h.to_matrix().unwrap();
        assert!(max_diff(&sq.to_matrix().unwrap(), &(&m * &m)) < 1e-14);
    }

    #[test]
    fn square_with_commuting_cross_terms() {
        // (Z0 + Z1)^2 = 2I + 2 Z0Z1
        let h = PauliSum::from_terms(
            2,
            [
                (PauliString::single(2, Pauli::Z, 0).unwrap(), 1.0),
                (PauliString::single(2, Pauli::Z, 1).unwrap(), 1.0),
            ],
        )
        .unwrap();
        let sq = h.square_sum();
        assert_eq!(sq.len(), 2);
        assert_eq!(sq.coeff(&PauliString::identity(2)), 2.0);
        assert_eq!(sq.coeff(&PauliString::uniform(2, Pauli::Z, &[0, 1]).unwrap()), 2.0);
    }

    #[test]
    fn locality_of_zero_sum() {
        assert_eq!(PauliSum::zero(3).locality(), 0);
        assert_eq!(PauliSum::identity(3, 2.0).locality(), 0);
    }

    #[test]
    fn apply_identity_and_dense_limit() {
        let v: Vec<Complex64> = (0..8).map(|k| Complex64::new(k as f64, -1.0)).collect();
        assert_eq!(PauliSum::identity(3, 1.0).apply(&v).unwrap(), v);
        assert!(PauliSum::identity(3, 1.0).apply(&v[..4]).is_err());
        assert!(matches!(
            PauliSum::identity(13, 1.0).to_matrix(),
            Err(Error::TooLarge { n: 13, .. })
        ));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let text = "# a comment\n-1.0 Z@0 Z@1\n0.5 X@2   # trailing\n2\n0.25 Y@1 X@0\n";
        let h = PauliSum::parse(text, 3).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(h.coeff(&PauliString::identity(3)), 2.0);
        let back = PauliSum::parse(&h.to_text(), 3).unwrap();
        assert_eq!(back, h);
        assert_eq!(text.parse::<PauliSum>().unwrap(), h);

        assert!(matches!(PauliSum::parse("1.0 X@0 Z@0", 2), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(PauliSum::parse("\nfoo X@0", 2), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(PauliSum::parse("1 W@0", 2), Err(Error::Parse { .. })));
        assert!(matches!(PauliSum::parse("1 X@5", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn pruning_drops_cancelled_terms() {
        let p = PauliString::single(1, Pauli::X, 0).unwrap();
        let mut h = PauliSum::single(p, 1.0);
        h.add_term(p, -1.0 + 1e-13);
        assert!(h.is_empty());
    }
}
