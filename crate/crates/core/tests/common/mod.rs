#![allow(dead_code)]

use matchgate_core::dense::{circuit_unitary, CMatrix, StateVector};
use matchgate_core::{Circuit, PauliString, ProductState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense `⟨s| W† P W |s⟩` for the unitary `w` on all lines.
pub fn dense_value(w: &CMatrix, s: &ProductState, p: &PauliString) -> f64 {
    let n = s.num_qubits();
    let lines: Vec<usize> = (0..n).collect();
    let v = StateVector::from_product(s).unwrap().apply(w, &lines).unwrap();
    let e = v.expectation_complex(p).unwrap();
    assert!(e.im.abs() < 1e-12);
    e.re
}

pub fn dense_circuit_value(c: &Circuit, s: &ProductState, p: &PauliString) -> f64 {
    dense_value(&circuit_unitary(c).unwrap(), s, p)
}
