mod common;

use common::{dense_value, rng};
use matchgate_core::decompose::*;
use matchgate_core::dense::{circuit_unitary, gaussian_unitary, phase_fidelity};
use matchgate_core::gaussian::expectation_z_with_rotation;
use matchgate_core::linalg::max_abs_diff;
use matchgate_core::random;
use matchgate_core::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

#[test]
fn random_hamiltonians_decompose_exactly() {
    let mut r = rng(31);
    for case in 0..20 {
        let n = 2 + case % 4;
        let q = random::quadratic_hamiltonian(&mut r, n, 0.7);
        let c = decompose(&q).unwrap();
        assert!(validate_circuit(&c, LinePolicy::NearestNeighbour).passed());
        assert!(c.len() <= gate_count_cap(n));
        let rep = check_decomposition(&q, &c).unwrap();
        assert!(rep.rotation_error <= 1e-8, "case {case}: {rep:?}");
        assert!(rep.fidelity >= 1.0 - 1e-8, "case {case}: {rep:?}");
    }
}

#[test]
fn givens_reconstruction_for_four_lines() {
    let mut r = rng(32);
    for _ in 0..10 {
        let rot = hamiltonian_to_rotation(&random::quadratic_hamiltonian(&mut r, 4, 1.0));
        let f = givens_factorize(&rot).unwrap();
        assert!(f.len() <= 28);
        assert!(f.iter().all(|p| p.a < p.b && p.b < 8));
        let rebuilt = compose_planes(&f, 4);
        assert!(max_abs_diff(&rebuilt, rot.matrix()) <= 1e-10);
    }
}

#[test]
fn non_orthogonal_input_is_rejected() {
    let mut m = DMatrix::identity(4, 4);
    m[(0, 1)] = 0.1;
    assert!(Rotation::new(m).is_err());
    let mut reflection = DMatrix::identity(4, 4);
    reflection[(0, 0)] = -1.0;
    assert!(Rotation::new(reflection).is_err());
}

#[test]
fn gate_round_trips_up_to_phase() {
    let mut r = rng(33);
    for _ in 0..20 {
        let n = 4;
        let j = 1;
        let g = random::allowed_gate(&mut r, (j, j + 1));
        let rot = gate_to_rotation(&g, n).unwrap();
        let c = rotation_to_circuit(&rot).unwrap();
        let single = Circuit::from_gates(n, vec![g]).unwrap();
        let (fid, _) = phase_fidelity(&circuit_unitary(&c).unwrap(), &circuit_unitary(&single).unwrap());
        assert!(fid >= 1.0 - 1e-10, "fidelity {fid}");
    }
}

#[test]
fn modified_swap_exchanges_generator_pairs() {
    for n in 2..=5 {
        for k in 0..n - 1 {
            let r = gate_to_rotation(&MatchGate::modified_swap((k, k + 1)).unwrap(), n).unwrap();
            let mut expected = DMatrix::<f64>::identity(2 * n, 2 * n);
            for (a, b) in [(2 * k, 2 * k + 2), (2 * k + 1, 2 * k + 3)] {
                expected[(a, a)] = 0.0;
                expected[(b, b)] = 0.0;
                expected[(a, b)] = 1.0;
                expected[(b, a)] = 1.0;
            }
            assert_eq!(r.matrix(), &expected);
            assert!((r.determinant() - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn global_phase_does_not_reach_observables() {
    let mut r = rng(34);
    for n in 2..=5 {
        let q = random::quadratic_hamiltonian(&mut r, n, 0.9);
        let c = decompose(&q).unwrap();
        let v = gaussian_unitary(&q, &jordan_wigner(n).unwrap()).unwrap();
        let rot = circuit_to_rotation(&c).unwrap();
        for _ in 0..3 {
            let s = random::product_state(&mut r, n);
            for k in 0..n {
                let fast = expectation_z_with_rotation(&rot, &s, k).unwrap().value;
                let oracle = dense_value(&v, &s, &PauliString::single(n, k, Pauli::Z));
                assert!((fast - oracle).abs() <= 1e-8);
            }
        }
    }
}

#[test]
fn same_line_and_neighbour_planes() {
    // −i c_0 c_1 = Z_0: the gate is a phase rotation on line 0 only
    let g = plane_rotation_to_gates(&PlaneRotation::new(0, 1, 0.8).unwrap(), 2).unwrap();
    assert_eq!(g.len(), 1);
    let u = g[0].matrix();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                assert!(u[(i, j)].norm() < 1e-15);
            }
        }
    }
    assert!((u[(0, 0)] - u[(1, 1)]).norm() < 1e-15);
    // −i c_1 c_2 = X_0 X_1: acts inside the even and odd blocks with equal structure
    let g = plane_rotation_to_gates(&PlaneRotation::new(1, 2, 0.8).unwrap(), 2).unwrap();
    assert_eq!(g.len(), 1);
    assert!(g[0].a().max_abs_diff(&g[0].b().x_conjugated()) < 1e-15);
    assert!(g[0].a().0[0][1].norm() > 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn plane_rotations_realised_exactly(n in 2usize..=6, a in 0usize..12, b in 0usize..12, phi in -3.2f64..3.2) {
        let (a, b) = (a % (2 * n), b % (2 * n));
        prop_assume!(a != b);
        let pr = PlaneRotation::new(a, b, phi).unwrap();
        let gates = plane_rotation_to_gates(&pr, n).unwrap();
        prop_assert!(gates.len() < 2 * n);
        prop_assert!(gates.iter().all(|g| g.is_allowed() && g.distance() == 1));
        let c = Circuit::from_gates(n, gates).unwrap();
        let r = circuit_to_rotation(&c).unwrap();
        prop_assert!(max_abs_diff(r.matrix(), &pr.matrix(n)) <= 1e-9);
    }

    #[test]
    fn gate_count_stays_within_ladder_bound(seed in any::<u64>(), n in 2usize..=6) {
        let rot = hamiltonian_to_rotation(&random::quadratic_hamiltonian(&mut rng(seed), n, 1.0));
        let m = givens_factorize(&rot).unwrap().len();
        prop_assert!(m <= n * (2 * n - 1));
        let c = rotation_to_circuit(&rot).unwrap();
        prop_assert!(c.len() <= m * (2 * (n - 1) + 1));
        prop_assert!(circuit_to_rotation(&c).unwrap().distance(&rot) <= 1e-8);
    }
}
