#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rdmlab_core::{Pauli, PauliString, PauliSum};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-qubit matrix in the `Z|0> = |0>` basis.
pub fn pauli_matrix(p: Pauli) -> DMatrix<Complex64> {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Kronecker-product oracle: highest qubit is the leftmost factor.
pub fn kron_matrix(p: &PauliString) -> DMatrix<Complex64> {
    let n = p.num_qubits();
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in (0..n).rev() {
        m = m.kronecker(&pauli_matrix(p.get(q)));
    }
    m
}

pub fn random_string<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    let mask = (1u64 << n) - 1;
    PauliString::from_masks(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask).unwrap()
}

/// Random string supported on at most `k` qubits.
pub fn random_local_string<R: Rng>(rng: &mut R, n: usize, k: usize) -> PauliString {
    let mut qubits: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        qubits.swap(i, rng.random_range(0..=i));
    }
    let w = rng.random_range(1..=k.min(n));
    let ops: Vec<(Pauli, usize)> = qubits[..w]
        .iter()
        .map(|&q| ([Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)], q))
        .collect();
    PauliString::from_ops(n, &ops).unwrap()
}

pub fn random_sum<R: Rng>(rng: &mut R, n: usize, terms: usize) -> PauliSum {
    let mut h = PauliSum::zero(n);
    for _ in 0..terms {
        h.add_term(random_string(rng, n), rng.random_range(-1.0..1.0));
    }
    h
}

pub fn random_local_sum<R: Rng>(rng: &mut R, n: usize, k: usize, terms: usize) -> PauliSum {
    let mut h = PauliSum::zero(n);
    for _ in 0..terms {
        h.add_term(random_local_string(rng, n, k), rng.random_range(-1.0..1.0));
    }
    h
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}
