mod common;

use std::fmt::Write as _;

use common::{dense_value, rng};
use matchgate_core::dense::{circuit_unitary, pauli_matrix, CMatrix};
use matchgate_core::intertwine::*;
use matchgate_core::random;
use matchgate_core::*;

/// Pauli string from 1-indexed `(line, letter)` factors; lines beyond `n` are dropped.
fn string(n: usize, sign: Phase, factors: &[(usize, Pauli)]) -> PauliString {
    let terms: Vec<(usize, Pauli)> = factors.iter().filter(|(l, _)| *l <= n).map(|&(l, p)| (l - 1, p)).collect();
    PauliString::from_sparse(n, &terms, sign)
}

fn zs(from: usize, to: usize) -> Vec<(usize, Pauli)> {
    (from..=to).map(|j| (j, Pauli::Z)).collect()
}

/// `c'_{2k-1} = X_{k-1} ∏_{j≥k} Z_j`, `c'_{2k} = −Y_k ∏_{j>k} Z_j` (1-indexed).
fn example2_formulas(n: usize) -> Vec<PauliString> {
    let mut out = Vec::new();
    for k in 1..=n {
        let mut odd = zs(k, n);
        if k > 1 {
            odd.push((k - 1, Pauli::X));
        }
        out.push(string(n, Phase::ONE, &odd));
        let mut even = zs(k + 1, n);
        even.push((k, Pauli::Y));
        out.push(string(n, Phase::MINUS_ONE, &even));
    }
    out
}

/// Example 3 generators (1-indexed). `sign_4l1` is the sign of `c'_{4l+1}`.
fn example3_formulas(n: usize, sign_4l1: Phase) -> Vec<PauliString> {
    use Pauli::*;
    let mut out = vec![
        string(n, Phase::ONE, &[(1, X), (2, X)]),
        string(n, Phase::ONE, &[(1, Y), (2, X)]),
        string(n, Phase::ONE, &[(1, Z), (2, X)]),
    ];
    let mut l = 1;
    while out.len() < 2 * n {
        let tail = zs(2, 2 * l - 1);
        let with = |extra: &[(usize, Pauli)]| [tail.clone(), extra.to_vec()].concat();
        let family = [
            string(n, Phase::ONE, &with(&[(2 * l, Y), (2 * l + 1, Z)])),
            string(n, sign_4l1, &with(&[(2 * l, Y), (2 * l + 1, Y), (2 * l + 2, X)])),
            string(n, Phase::ONE, &with(&[(2 * l, Y), (2 * l + 1, X), (2 * l + 2, X)])),
            string(n, Phase::ONE, &[zs(2, 2 * l), vec![(2 * l + 2, X)]].concat()),
        ];
        out.extend(family.into_iter().take(2 * n - out.len()));
        l += 1;
    }
    out
}

#[test]
fn example2_matches_displayed_generators() {
    for n in 2..=10 {
        let rep = conjugate_rep(&example2_t(n).unwrap(), &jordan_wigner(n).unwrap()).unwrap();
        assert_eq!(rep.generators(), example2_formulas(n).as_slice(), "n={n}");
        assert!(verify_rep(&rep).passed());
    }
}

#[test]
fn example3_matches_displayed_generators_up_to_one_sign() {
    // Every displayed string matches; c'_{4l+1} comes out with a minus sign.
    for n in [3, 5, 7, 9, 11] {
        let rep = conjugate_rep(&example3_t(n).unwrap(), &jordan_wigner(n).unwrap()).unwrap();
        assert_eq!(rep.generators(), example3_formulas(n, Phase::MINUS_ONE).as_slice(), "n={n}");
        assert!(verify_rep(&rep).passed());
    }
}

#[test]
fn minus_sign_of_c4l1_is_forced() {
    // Z_{2l+1} commutes with every CNOT of T (it is a control or untouched), so
    // T† Z_{2l+1} T = Z_{2l+1} = −i c'_{4l+1} c'_{4l+2}. With the displayed
    // plus sign the product is −Z_{2l+1} instead.
    let n = 9;
    for sign in [Phase::ONE, Phase::MINUS_ONE] {
        let c = example3_formulas(n, sign);
        for l in 1..=3 {
            let prod = c[4 * l].mul(&c[4 * l + 1]).unwrap();
            let prod = prod.clone().with_phase(prod.phase().mul(Phase::MINUS_I));
            let z = PauliString::single(n, 2 * l, Pauli::Z);
            assert_eq!(prod == z, sign == Phase::MINUS_ONE, "l={l}");
        }
    }
}

#[test]
fn example1_relabels_lines() {
    let n = 4;
    let rep = conjugate_rep(&example1_t(n, &[(1, 2)]).unwrap(), &jordan_wigner(n).unwrap()).unwrap();
    for (c, c0) in rep.generators().iter().zip(jordan_wigner(n).unwrap().generators()) {
        let mut swapped = c0.clone();
        swapped.set(1, c0.get(2));
        swapped.set(2, c0.get(1));
        assert_eq!(c, &swapped);
    }
}

#[test]
fn identity_circuit_keeps_generators() {
    let jw = jordan_wigner(6).unwrap();
    assert_eq!(conjugate_rep(&CliffordCircuit::new(6), &jw).unwrap(), jw);
}

#[test]
fn z_degrees() {
    for n in 2..=8 {
        let rep = conjugate_rep(&example2_t(n).unwrap(), &jordan_wigner(n).unwrap()).unwrap();
        for k in 0..n - 1 {
            let d = decompose_pauli(&rep, &PauliString::single(n, k, Pauli::Z)).unwrap();
            assert_eq!(d.indices, [2 * k + 1, 2 * k + 2]);
            assert_eq!(d.phase, Phase::MINUS_I);
        }
        // the last line has no partner generator c'_{2n+1}
        let last = decompose_pauli(&rep, &PauliString::single(n, n - 1, Pauli::Z)).unwrap();
        assert_eq!(last.degree(), 2 * n - 1);
    }
    for n in [5, 7, 9] {
        let rep = conjugate_rep(&example3_t(n).unwrap(), &jordan_wigner(n).unwrap()).unwrap();
        for k in 0..n {
            let d = decompose_pauli(&rep, &PauliString::single(n, k, Pauli::Z)).unwrap();
            // 0-indexed even lines are the odd lines of the 1-indexed count
            assert_eq!(d.degree(), if k % 2 == 0 { 2 } else { 6 }, "n={n} k={k}");
        }
    }
}

#[test]
fn example2_hamiltonian_dictionary() {
    use Pauli::*;
    let n = 5;
    let t = example2_t(n).unwrap();
    let jw = jordan_wigner(n).unwrap();
    // generators 1-indexed as displayed; term = sign · i c_a c_b
    let term = |a: usize, b: usize, sign: Phase| {
        let p = jw.generator(a - 1).mul(jw.generator(b - 1)).unwrap();
        p.clone().with_phase(p.phase().mul(Phase::I).mul(sign))
    };
    for k in 2..n {
        let cases = [
            (term(2 * k - 1, 2 * k + 2, Phase::ONE), string(n, Phase::ONE, &[(k, Y), (k + 1, Y)]),
                string(n, Phase::MINUS_ONE, &[(k - 1, X), (k, Z), (k + 1, X)])),
            (term(2 * k, 2 * k + 1, Phase::MINUS_ONE), string(n, Phase::ONE, &[(k, X), (k + 1, X)]),
                string(n, Phase::ONE, &[(k, Z)])),
            (term(2 * k - 1, 2 * k + 1, Phase::ONE), string(n, Phase::ONE, &[(k, Y), (k + 1, X)]),
                string(n, Phase::MINUS_ONE, &[(k - 1, X), (k, Y)])),
            (term(2 * k, 2 * k + 2, Phase::MINUS_ONE), string(n, Phase::ONE, &[(k, X), (k + 1, Y)]),
                string(n, Phase::MINUS_ONE, &[(k, Y), (k + 1, X)])),
            (term(2 * k - 1, 2 * k, Phase::MINUS_ONE), string(n, Phase::ONE, &[(k, Z)]),
                string(n, Phase::ONE, &[(k - 1, X), (k, X)])),
            (term(2 * k + 1, 2 * k + 2, Phase::MINUS_ONE), string(n, Phase::ONE, &[(k + 1, Z)]),
                string(n, Phase::ONE, &[(k, X), (k + 1, X)])),
        ];
        for (h, jw_form, image) in cases {
            assert_eq!(h, jw_form);
            assert_eq!(conjugate_pauli(&t, &h).unwrap(), image, "k={k} term {jw_form}");
        }
    }
}

#[test]
fn conjugated_gates_are_local() {
    let mut r = rng(41);
    let n = 7;
    let t2 = example2_t(n).unwrap();
    let t3 = example3_t(n).unwrap();
    for _ in 0..3 {
        for k in 1..n - 1 {
            let g = random::allowed_gate(&mut r, (k, k + 1));
            let s2 = conjugated_gate(&t2, &g).unwrap().support;
            assert!(s2.iter().all(|l| (k - 1..=k + 1).contains(l)), "{s2:?}");
            let s3 = conjugated_gate(&t3, &g).unwrap().support;
            assert!(s3.iter().all(|l| (k - 1..=k + 2).contains(l)), "{s3:?}");
        }
    }
}

#[test]
fn conjugated_gate_restriction_rebuilds_full_operator() {
    let mut r = rng(42);
    let n = 5;
    let t = example3_t(n).unwrap();
    let g = random::allowed_gate(&mut r, (2, 3));
    let cg = conjugated_gate(&t, &g).unwrap();
    let full = matchgate_core::dense::embed(&cg.matrix, &cg.support, n).unwrap();
    let tu = clifford_unitary(&t).unwrap();
    let direct = tu.adjoint() * matchgate_core::dense::embed(&g.matrix(), &[2, 3], n).unwrap() * &tu;
    assert!(matchgate_core::linalg::max_abs_diff(&full, &direct) < 1e-12);
}

fn intertwined_dense(t: &CliffordCircuit, base: &Circuit, s: &ProductState, p: &PauliString) -> f64 {
    let tu = clifford_unitary(t).unwrap();
    let w: CMatrix = tu.adjoint() * circuit_unitary(base).unwrap() * &tu;
    dense_value(&w, s, p)
}

#[test]
fn intertwined_simulation_matches_dense() {
    let mut r = rng(43);
    let n = 5;
    for (t, tol) in [(example2_t(n).unwrap(), 1e-9), (example3_t(n).unwrap(), 1e-7)] {
        for _ in 0..6 {
            let base = random::nn_circuit(&mut r, n, 15);
            let s = random::product_state(&mut r, n);
            for k in 0..n - 1 {
                let z = PauliString::single(n, k, Pauli::Z);
                let fast = simulate_intertwined(&t, &base, &s, &z, 6).unwrap();
                let dense = intertwined_dense(&t, &base, &s, &z);
                assert!((fast - dense).abs() <= tol, "k={k}: {fast} vs {dense}");
            }
        }
    }
    let t = example3_t(n).unwrap();
    let err = simulate_intertwined(&t, &Circuit::new(n), &ProductState::zeros(n), &PauliString::single(n, 1, Pauli::Z), 2);
    assert_eq!(err.unwrap_err(), Error::DegreeTooHigh { degree: 6, cap: 2 });
}

#[test]
fn identity_intertwiner_is_the_plain_pipeline() {
    let mut r = rng(44);
    let n = 6;
    let base = random::nn_circuit(&mut r, n, 25);
    let s = random::product_state(&mut r, n);
    for k in 0..n {
        let z = PauliString::single(n, k, Pauli::Z);
        let a = simulate_intertwined(&CliffordCircuit::new(n), &base, &s, &z, 2).unwrap();
        let b = expectation_z(&base, &s, k).unwrap().value;
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn rotation_is_the_same_in_the_conjugated_set() {
    let mut r = rng(45);
    let n = 5;
    for t in [example2_t(n).unwrap(), example3_t(n).unwrap(), random::clifford_circuit(&mut r, n, 20)] {
        let base = random::nn_circuit(&mut r, n, 12);
        let rot = circuit_to_rotation(&base).unwrap();
        let rep = conjugate_rep(&t, &jordan_wigner(n).unwrap()).unwrap();
        let tu = clifford_unitary(&t).unwrap();
        let w = tu.adjoint() * circuit_unitary(&base).unwrap() * &tu;
        let gens: Vec<CMatrix> = rep.generators().iter().map(pauli_matrix).collect();
        for (mu, g_mu) in gens.iter().enumerate() {
            let conj = w.adjoint() * g_mu * &w;
            for (nu, g_nu) in gens.iter().enumerate() {
                let r_mn = (&conj * g_nu).trace().re / f64::from(1u32 << n);
                assert!((r_mn - rot.matrix()[(mu, nu)]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn random_clifford_conjugation_matches_dense() {
    let mut r = rng(46);
    for _ in 0..30 {
        let n = 5;
        let t = random::clifford_circuit(&mut r, n, 25);
        let p = random::pauli_string(&mut r, n, false);
        let tu = clifford_unitary(&t).unwrap();
        let dense = tu.adjoint() * pauli_matrix(&p) * &tu;
        let expected = matchgate_core::dense::identify_pauli(&dense, 1e-10).unwrap();
        assert_eq!(conjugate_pauli(&t, &p).unwrap(), expected);
        assert!(verify_rep(&conjugate_rep(&t, &jordan_wigner(n).unwrap()).unwrap()).passed());
    }
}

fn golden_example3() -> String {
    let mut out = String::from("# Example 3 quadratic terms i c_mu c_nu whose image stays on lines k..k+3\n");
    out.push_str("# n k mu nu image   (0-indexed generators and lines)\n");
    for n in [5, 7, 9] {
        let t = example3_t(n).unwrap();
        for k in 0..=n - 4 {
            let terms = local_quadratic_images(&t, k, 4).unwrap();
            writeln!(out, "n={n} k={k} count={}", terms.len()).unwrap();
            for q in terms {
                writeln!(out, "{n} {k} {} {} {}", q.mu, q.nu, q.image).unwrap();
            }
        }
    }
    out
}

#[test]
fn example3_local_terms_golden() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/example3_local_terms.txt");
    let fresh = golden_example3();
    if std::env::var_os("MATCHGATE_BLESS").is_some() {
        std::fs::write(path, &fresh).unwrap();
    }
    let stored = std::fs::read_to_string(path).expect("golden file; regenerate with MATCHGATE_BLESS=1");
    assert_eq!(stored, fresh);
}

#[test]
fn example3_bulk_windows_have_thirteen_terms() {
    use Pauli::*;
    let n = 11;
    let t = example3_t(n).unwrap();
    // 1-indexed window start k; the displayed Hamiltonians for each parity
    let listed = |k: usize| -> Vec<PauliString> {
        let s = |f: &[(usize, Pauli)]| string(n, Phase::ONE, f);
        if k % 2 == 1 {
            vec![
                s(&[(k, Z), (k + 1, Z), (k + 2, X), (k + 3, X)]),
                s(&[(k, Z), (k + 1, Z), (k + 2, Z)]),
                s(&[(k + 1, X), (k + 2, Z), (k + 3, X)]),
                s(&[(k, X), (k + 1, X)]),
                s(&[(k + 1, X), (k + 2, X)]),
                s(&[(k + 2, X), (k + 3, X)]),
                s(&[(k, Z)]),
                s(&[(k + 2, Z)]),
            ]
        } else {
            vec![
                s(&[(k, X), (k + 1, X), (k + 2, Z), (k + 3, Z)]),
                s(&[(k + 1, Z), (k + 2, Z), (k + 3, Z)]),
                s(&[(k, X), (k + 1, Z), (k + 2, X)]),
                s(&[(k, X), (k + 1, X)]),
                s(&[(k + 1, X), (k + 2, X)]),
                s(&[(k + 2, X), (k + 3, X)]),
                s(&[(k + 1, Z)]),
                s(&[(k + 3, Z)]),
            ]
        }
    };
    for k in 2..=n - 4 {
        let terms = local_quadratic_images(&t, k - 1, 4).unwrap();
        assert_eq!(terms.len(), 13, "k={k}");
        for h in listed(k) {
            assert!(terms.iter().any(|q| q.image.same_letters(&h)), "k={k}: {h} missing");
        }
    }
}

#[test]
fn non_hermitian_intertwined_target_rejected() {
    let n = 3;
    let p = PauliString::single(n, 0, Pauli::Z).with_phase(Phase::I);
    let err = simulate_intertwined(&example3_t(n).unwrap(), &Circuit::new(n), &ProductState::zeros(n), &p, 6);
    assert!(matches!(err, Err(Error::Domain(_))));
}
