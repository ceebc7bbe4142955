//! Random instances for tests and benchmark suites. Every function takes the
//! generator explicitly; nothing here draws ambient entropy.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::compiler::{LogicalCircuit, LogicalOp};
use crate::gate::{Circuit, Mat2, MatchGate};
use crate::gaussian::QuadraticHamiltonian;
use crate::intertwine::{CliffordCircuit, CliffordOp};
use crate::pauli::{Pauli, PauliString, Phase, ProductState};

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Haar-random `U(2)` matrix.
pub fn haar_u2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let (mut a, mut b) = (complex_normal(rng), complex_normal(rng));
    let norm = libm::sqrt(a.norm_sqr() + b.norm_sqr());
    a /= norm;
    b /= norm;
    let phase = Complex64::from_polar(1.0, rng.random::<f64>() * core::f64::consts::TAU);
    Mat2::new(a, -b.conj(), b, a.conj()).scale(phase)
}

/// Allowed gate with Haar-random blocks, `B` rescaled so `det B = det A`.
pub fn allowed_gate<R: Rng + ?Sized>(rng: &mut R, lines: (usize, usize)) -> MatchGate {
    let a = haar_u2(rng);
    let b = haar_u2(rng);
    let lambda = (a.det() / b.det()).sqrt();
    MatchGate::new(a, b.scale(lambda), lines).expect("Haar blocks are unitary")
}

/// `gates` allowed gates on uniformly chosen neighbouring line pairs.
pub fn nn_circuit<R: Rng + ?Sized>(rng: &mut R, n: usize, gates: usize) -> Circuit {
    assert!(n >= 2, "need two lines for a gate");
    let mut c = Circuit::new(n);
    for _ in 0..gates {
        let j = rng.random_range(0..n - 1);
        c.push(allowed_gate(rng, (j, j + 1))).expect("lines in range");
    }
    c
}

/// Product of independent uniformly random single-qubit states.
pub fn product_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProductState {
    let factors = (0..n).map(|_| [complex_normal(rng), complex_normal(rng)]).collect();
    ProductState::normalized(factors).expect("Gaussian vectors are nonzero")
}

pub fn bits<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<bool> {
    (0..m).map(|_| rng.random::<bool>()).collect()
}

/// `h` with independent standard normal entries above the diagonal, times `scale`.
pub fn quadratic_hamiltonian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> QuadraticHamiltonian {
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for a in 0..2 * n {
        for b in a + 1..2 * n {
            let v = scale * normal(rng);
            h[(a, b)] = v;
            h[(b, a)] = -v;
        }
    }
    QuadraticHamiltonian::new(n, h).expect("antisymmetric by construction")
}

/// Uniform letters with a uniform phase, or a uniform real sign if `hermitian`.
pub fn pauli_string<R: Rng + ?Sized>(rng: &mut R, n: usize, hermitian: bool) -> PauliString {
    let letters: Vec<Pauli> =
        (0..n).map(|_| Pauli::from_bits(rng.random::<bool>(), rng.random::<bool>())).collect();
    let k: u32 = if hermitian { 2 * rng.random_range(0..2) } else { rng.random_range(0..4) };
    PauliString::from_letters(&letters, Phase::from_exponent(k))
}

pub fn clifford_circuit<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> CliffordCircuit {
    let mut t = CliffordCircuit::new(n);
    for _ in 0..len {
        let q = rng.random_range(0..n);
        let op = match rng.random_range(0..6) {
            0 if n >= 2 => {
                let mut target = rng.random_range(0..n - 1);
                if target >= q {
                    target += 1;
                }
                CliffordOp::Cnot { control: q, target }
            }
            0 | 1 => CliffordOp::H(q),
            2 => CliffordOp::P(q),
            3 => CliffordOp::X(q),
            4 => CliffordOp::Y(q),
            _ => CliffordOp::Z(q),
        };
        t.push(op).expect("lines in range");
    }
    t
}

/// Haar one-qubit gates and, with probability one half when `m ≥ 2`, CZ gates.
pub fn logical_circuit<R: Rng + ?Sized>(rng: &mut R, m: usize, len: usize) -> LogicalCircuit {
    let mut lc = LogicalCircuit::new(m);
    for _ in 0..len {
        let op = if m >= 2 && rng.random::<bool>() {
            LogicalOp::Cz { qubit: rng.random_range(0..m - 1) }
        } else {
            LogicalOp::OneQubit { matrix: haar_u2(rng), qubit: rng.random_range(0..m) }
        };
        lc.push(op).expect("valid op");
    }
    lc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(haar_u2(&mut rng).is_unitary(1e-12));
            assert!(allowed_gate(&mut rng, (0, 1)).is_allowed());
            assert!(pauli_string(&mut rng, 5, true).is_hermitian());
        }
        let c = nn_circuit(&mut rng, 4, 30);
        assert!(c.gates().iter().all(|g| g.distance() == 1));
    }
}
