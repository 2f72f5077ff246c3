mod common;

use common::{random_local_sum, rng, vec_dist};
use num_complex::Complex64;
use rdmlab_core::constructions::ghz3_hamiltonian;
use rdmlab_core::fermion::{
    default_penalty_weight, encode, encode_basis_state, encoded_index, full_map, map_hamiltonian, penalty, sector_spectrum_match,
    two_matrix,
};
use rdmlab_core::hilbert::ghz_balanced;
use rdmlab_core::{Pauli, PauliString, PauliSum, StateVector};

#[test]
fn encoding_is_an_isometry() {
    let mut r = rng(31);
    for n in 1..=4 {
        let a = StateVector::random(n, &mut r);
        let b = StateVector::random(n, &mut r);
        let (ea, eb) = (encode(&a).unwrap(), encode(&b).unwrap());
        assert!((ea.inner(&eb).unwrap() - a.inner(&b).unwrap()).norm() < 1e-14);
    }
}

#[test]
fn every_single_site_image_intertwines() {
    let n = 3;
    for q in 0..n {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let spin = PauliSum::single(PauliString::single(n, p, q).unwrap(), 1.0);
            let image = map_hamiltonian(&spin).unwrap();
            for bits in 0..1usize << n {
                let e = StateVector::basis(n, bits).unwrap();
                let lhs = image.apply(&encode(&e).unwrap()).unwrap();
                let raw = spin.apply(e.amps()).unwrap();
                let mut rhs = vec![Complex64::new(0.0, 0.0); 1 << (2 * n)];
                for (b, a) in raw.iter().enumerate() {
                    rhs[encoded_index(b, n)] = *a;
                }
                assert!(vec_dist(&lhs, &rhs) < 1e-14, "{p:?}@{q} on {bits:03b}");
            }
        }
    }
}

#[test]
fn random_hamiltonians_intertwine_and_commute_with_penalties() {
    let mut r = rng(32);
    for _ in 0..5 {
        let h = random_local_sum(&mut r, 3, 2, 6);
        let hf = map_hamiltonian(&h).unwrap();
        let psi = StateVector::random(3, &mut r);
        let lhs = hf.apply(&encode(&psi).unwrap()).unwrap();
        let hpsi = h.apply(psi.amps()).unwrap();
        let mut rhs = vec![Complex64::new(0.0, 0.0); 64];
        for (b, a) in hpsi.iter().enumerate() {
            rhs[encoded_index(b, 3)] = *a;
        }
        assert!(vec_dist(&lhs, &rhs) < 1e-12);
        let m = hf.qubit_form.to_matrix().unwrap();
        for site in 0..3 {
            let p = penalty(site, 3).unwrap().qubit_form.to_matrix().unwrap();
            assert!(common::max_abs(&(&m * &p - &p * &m)) < 1e-12);
        }
    }
}

#[test]
fn sector_spectrum_matches_and_penalty_dominates() {
    let mut r = rng(33);
    for n in 2..=3 {
        for _ in 0..3 {
            let h = random_local_sum(&mut r, n, 2, 2 * n);
            let m = sector_spectrum_match(&h, default_penalty_weight(&h)).unwrap();
            assert!(m.max_deviation < 1e-10);
            assert!(m.sector.leakage < 1e-12);
            assert!(m.penalty_margin > 0.0);
            assert!(m.fermion_degree <= 2 * h.locality().max(2));
        }
    }
}

#[test]
fn mapped_ghz3_hamiltonian_keeps_its_spectrum() {
    let h = ghz3_hamiltonian(-1.0);
    let m = sector_spectrum_match(&h, default_penalty_weight(&h)).unwrap();
    assert!(m.max_deviation < 1e-10);
    assert_eq!(m.fermion_degree, 4);
    let hf = full_map(&h, default_penalty_weight(&h)).unwrap();
    let e = encode(&ghz_balanced(3, 0.0)).unwrap();
    let (lambda, residual) = rdmlab_core::spectra::rayleigh_residual(&hf.qubit_form, &e).unwrap();
    assert!((lambda + 2.0).abs() < 1e-10);
    assert!(residual < 1e-10);
}

#[test]
fn encoded_ghz_partners_share_two_matrices() {
    let a = encode(&ghz_balanced(3, 0.0)).unwrap();
    let b = encode(&ghz_balanced(3, std::f64::consts::PI)).unwrap();
    let ta = two_matrix(&a, 6).unwrap();
    let tb = two_matrix(&b, 6).unwrap();
    assert!(ta.max_deviation(&tb).unwrap() < 1e-10);
    assert!(a.overlap(&b).unwrap() < 1e-10);
    assert!((ta.trace() - 6.0).abs() < 1e-12);
}

#[test]
fn encoded_basis_states_are_slater_determinants() {
    for bits in 0..16 {
        let e = encode_basis_state(bits, 4).unwrap();
        let t = two_matrix(&e, 8).unwrap();
        let g = &t.one_matrix;
        assert!((g * g - g).iter().all(|z| z.norm() < 1e-14));
        assert!((t.particle_number() - 4.0).abs() < 1e-14);
    }
}
