mod common;

use common::{dense_circuit_value, rng};
use matchgate_core::dense::{gaussian_unitary, pauli_matrix, StateVector};
use matchgate_core::gaussian::{expectation_pauli_with_rotation, expectation_z_with_rotation};
use matchgate_core::linalg::max_abs_diff;
use matchgate_core::random;
use matchgate_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn z_expectation_matches_statevector(seed in any::<u64>(), n in 2usize..=7, gates in 0usize..40) {
        let mut r = rng(seed);
        let c = random::nn_circuit(&mut r, n, gates);
        let s = random::product_state(&mut r, n);
        let rot = circuit_to_rotation(&c).unwrap();
        prop_assert!(rot.orthogonality_error() <= 1e-9);
        prop_assert!(rot.determinant() > 0.0);
        let v = StateVector::from_product(&s).unwrap().apply_circuit(&c).unwrap();
        for k in 0..n {
            let fast = expectation_z_with_rotation(&rot, &s, k).unwrap();
            let dense = v.expectation_complex(&PauliString::single(n, k, Pauli::Z)).unwrap().re;
            prop_assert!((fast.value - dense).abs() <= 1e-9, "k={} fast={} dense={}", k, fast.value, dense);
            prop_assert!((fast.p0 + fast.p1 - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn higher_degree_observables_match(seed in any::<u64>(), n in 2usize..=3, gates in 0usize..20) {
        let mut r = rng(seed);
        let c = random::nn_circuit(&mut r, n, gates);
        let s = random::product_state(&mut r, n);
        let p = random::pauli_string(&mut r, n, true);
        let jw = jordan_wigner(n).unwrap();
        let fast = expectation_pauli(&c, &jw, &p, &s, 2 * n).unwrap();
        let dense = dense_circuit_value(&c, &s, &p);
        prop_assert!((fast - dense).abs() <= 1e-9, "{} fast={} dense={}", p, fast, dense);
    }

    #[test]
    fn rotation_of_sequence_is_product(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let c1 = random::nn_circuit(&mut r, n, 6);
        let c2 = random::nn_circuit(&mut r, n, 6);
        let r1 = circuit_to_rotation(&c1).unwrap();
        let r2 = circuit_to_rotation(&c2).unwrap();
        let both = circuit_to_rotation(&c1.then(&c2).unwrap()).unwrap();
        prop_assert!(both.distance(&r2.compose(&r1).unwrap()) < 1e-12);
    }
}

#[test]
fn hamiltonian_rotation_describes_heisenberg_conjugation() {
    // U† c_μ U = Σ_ν R_{μν} c_ν for U = e^{iH}, checked with dense matrices.
    let mut r = rng(11);
    for n in 1..=4 {
        let q = random::quadratic_hamiltonian(&mut r, n, 0.6);
        let jw = jordan_wigner(n).unwrap();
        let u = gaussian_unitary(&q, &jw).unwrap();
        let rot = hamiltonian_to_rotation(&q);
        for mu in 0..2 * n {
            let lhs = u.adjoint() * pauli_matrix(jw.generator(mu)) * &u;
            let mut rhs = lhs.map(|_| Complex64::new(0.0, 0.0));
            for nu in 0..2 * n {
                rhs += pauli_matrix(jw.generator(nu)) * Complex64::new(rot.matrix()[(mu, nu)], 0.0);
            }
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12, "n={n} mu={mu}");
        }
    }
}

#[test]
fn gate_rotation_matches_hamiltonian_rotation() {
    // a gate built as e^{iH} for a two-line H has the same rotation either way
    let mut r = rng(12);
    for _ in 0..20 {
        let q = random::quadratic_hamiltonian(&mut r, 2, 0.8);
        let u = gaussian_unitary(&q, &jordan_wigner(2).unwrap()).unwrap();
        let g = MatchGate::from_matrix(&u, (0, 1)).unwrap();
        let rg = gate_to_rotation(&g, 2).unwrap();
        assert!(rg.distance(&hamiltonian_to_rotation(&q)) < 1e-12);
    }
}

#[test]
fn zero_state_fast_path_values() {
    let mut r = rng(13);
    let c = random::nn_circuit(&mut r, 8, 60);
    let s = ProductState::zeros(8);
    let rot = circuit_to_rotation(&c).unwrap();
    let jw = jordan_wigner(8).unwrap();
    for k in 0..8 {
        let z = expectation_z_with_rotation(&rot, &s, k).unwrap().value;
        let via_pauli =
            expectation_pauli_with_rotation(&rot, &jw, &PauliString::single(8, k, Pauli::Z), &s, 2).unwrap();
        assert!((z - via_pauli).abs() < 1e-12);
        assert!((z - dense_circuit_value(&c, &s, &PauliString::single(8, k, Pauli::Z))).abs() < 1e-9);
    }
}

#[test]
fn non_hermitian_target_is_a_domain_error() {
    let jw = jordan_wigner(2).unwrap();
    let p: PauliString = "+i XZ".parse().unwrap();
    let err = expectation_pauli(&Circuit::new(2), &jw, &p, &ProductState::zeros(2), 4).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
}
