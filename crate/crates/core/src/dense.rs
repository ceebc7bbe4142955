//! Brute-force statevector reference used to check every fast path.
//!
//! Line 0 is the most significant bit of an amplitude index, matching the
//! 4×4 gate convention in [`crate::gate`].

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::GeneratorRep;
use crate::error::{check_dim, Error, Result};
use crate::gate::{Circuit, GATE_TOL};
use crate::gaussian::QuadraticHamiltonian;
use crate::linalg::expm;
use crate::pauli::{Pauli, PauliString, Phase, ProductState};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest `n` accepted by each class of dense operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub vector: usize,
    pub unitary: usize,
    pub conjugation: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { vector: 12, unitary: 10, conjugation: 8 }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::Resource { n, cap })
    } else {
        Ok(())
    }
}

#[inline]
fn line_bit(n: usize, line: usize) -> usize {
    1 << (n - 1 - line)
}

/// Applies a `2^m × 2^m` matrix to `lines` of every length-`2^n` chunk of `amps`.
fn apply_in_place(amps: &mut [Complex64], n: usize, u: &CMatrix, lines: &[usize]) {
    let m = lines.len();
    let dim = 1usize << m;
    let offsets: Vec<usize> = (0..dim)
        .map(|l| {
            lines
                .iter()
                .enumerate()
                .filter(|(i, _)| (l >> (m - 1 - i)) & 1 == 1)
                .map(|(_, &line)| line_bit(n, line))
                .sum()
        })
        .collect();
    let mask: usize = lines.iter().map(|&l| line_bit(n, l)).sum();
    let mut gathered = vec![ZERO; dim];
    for chunk in amps.chunks_mut(1 << n) {
        for base in 0..chunk.len() {
            if base & mask != 0 {
                continue;
            }
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = chunk[base + off];
            }
            for (row, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (col, g) in gathered.iter().enumerate() {
                    acc += u[(row, col)] * g;
                }
                chunk[base + off] = acc;
            }
        }
    }
}

fn check_lines(n: usize, u: &CMatrix, lines: &[usize]) -> Result<()> {
    if lines.is_empty() || u.shape() != (1 << lines.len(), 1 << lines.len()) {
        return Err(Error::Dimension { expected: 1 << lines.len(), found: u.nrows() });
    }
    for (i, &l) in lines.iter().enumerate() {
        if l >= n || lines[..i].contains(&l) {
            return Err(Error::Validation(alloc::format!("bad line list {lines:?} for {n} qubits")));
        }
    }
    Ok(())
}

/// Dense `2^n` amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<StateVector> {
        check_dim(1 << n, amps.len())?;
        Ok(StateVector { n, amps })
    }

    /// Kronecker product of the factors, first factor most significant.
    pub fn from_product(s: &ProductState) -> Result<StateVector> {
        from_product_with(s, OracleLimits::default())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(Complex64::norm_sqr).sum())
    }

    /// Applies `u` to `lines` (first listed line is the most significant
    /// local bit) and returns the new state.
    pub fn apply(&self, u: &CMatrix, lines: &[usize]) -> Result<StateVector> {
        check_lines(self.n, u, lines)?;
        let err = crate::linalg::max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(u.nrows(), u.ncols()));
        if err > GATE_TOL {
            return Err(Error::Validation(alloc::format!("matrix is not unitary (error {err:.3e})")));
        }
        let mut out = self.clone();
        apply_in_place(&mut out.amps, self.n, u, lines);
        Ok(out)
    }

    pub fn apply_circuit(&self, c: &Circuit) -> Result<StateVector> {
        check_dim(self.n, c.num_qubits())?;
        let mut out = self.clone();
        for g in c.gates() {
            let (j, k) = g.lines();
            apply_in_place(&mut out.amps, self.n, &g.matrix(), &[j, k]);
        }
        Ok(out)
    }

    /// `P|v⟩`.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<StateVector> {
        check_dim(self.n, p.num_qubits())?;
        let mut out = vec![ZERO; self.amps.len()];
        let (xm, zm, base) = pauli_masks(p);
        for (b, a) in self.amps.iter().enumerate() {
            let sign = if (zm & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ xm] = *a * base * sign;
        }
        Ok(StateVector { n: self.n, amps: out })
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `⟨v|P|v⟩` without the Hermiticity check.
    pub fn expectation_complex(&self, p: &PauliString) -> Result<Complex64> {
        Ok(self.inner(&self.apply_pauli(p)?))
    }
}

/// `from_product` with explicit caps.
pub fn from_product_with(s: &ProductState, limits: OracleLimits) -> Result<StateVector> {
    let n = s.num_qubits();
    check_cap(n, limits.vector)?;
    let mut amps = vec![ONE];
    for xi in s.factors() {
        let mut next = Vec::with_capacity(amps.len() * 2);
        for a in &amps {
            next.push(*a * xi[0]);
            next.push(*a * xi[1]);
        }
        amps = next;
    }
    Ok(StateVector { n, amps })
}

/// Line masks of a Pauli string plus the constant phase `i^{k + |x∧z|}`.
fn pauli_masks(p: &PauliString) -> (usize, usize, Complex64) {
    let n = p.num_qubits();
    let (mut xm, mut zm, mut ys) = (0usize, 0usize, 0u32);
    for (line, l) in p.letters().enumerate() {
        let (x, z) = l.bits();
        if x {
            xm |= line_bit(n, line);
        }
        if z {
            zm |= line_bit(n, line);
        }
        if x && z {
            ys += 1;
        }
    }
    let base = p.phase().mul(Phase::from_exponent(ys)).to_complex();
    (xm, zm, base)
}

/// `⟨v|P|v⟩` for Hermitian `P`.
pub fn expectation_pauli_dense(v: &StateVector, p: &PauliString) -> Result<f64> {
    if !p.is_hermitian() {
        return Err(Error::Domain("expectation of a non-Hermitian Pauli string".into()));
    }
    let e = v.expectation_complex(p)?;
    Ok(e.re)
}

/// Dense `2^n × 2^n` matrix of a Pauli string.
pub fn pauli_matrix(p: &PauliString) -> CMatrix {
    let dim = 1usize << p.num_qubits();
    let (xm, zm, base) = pauli_masks(p);
    let mut m = CMatrix::from_element(dim, dim, ZERO);
    for b in 0..dim {
        let sign = if (zm & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        m[(b ^ xm, b)] = base * sign;
    }
    m
}

/// Recognizes a dense matrix as a phase-tagged Pauli string, if it is one.
pub fn identify_pauli(m: &CMatrix, tol: f64) -> Option<PauliString> {
    let dim = m.nrows();
    if dim == 0 || !dim.is_power_of_two() || m.ncols() != dim {
        return None;
    }
    let n = dim.trailing_zeros() as usize;
    let xm = (0..dim).find(|&r| m[(r, 0)].norm() > 0.5)?;
    let v0 = m[(xm, 0)];
    let mut letters = vec![Pauli::I; n];
    for (line, letter) in letters.iter_mut().enumerate() {
        let b = line_bit(n, line);
        let x = xm & b != 0;
        // column b: entry at row b^xm is v0 · (−1)^{z_line}
        let z = (m[(b ^ xm, b)] + v0).norm() < 0.5;
        *letter = Pauli::from_bits(x, z);
    }
    let unphased = PauliString::from_letters(&letters, Phase::ONE);
    let (_, _, base) = pauli_masks(&unphased);
    let ratio = v0 / base;
    let phase = [Phase::ONE, Phase::I, Phase::MINUS_ONE, Phase::MINUS_I]
        .into_iter()
        .find(|ph| (ph.to_complex() - ratio).norm() < tol)?;
    let p = unphased.with_phase(phase);
    let diff = crate::linalg::max_abs_diff(&pauli_matrix(&p), m);
    (diff <= tol).then_some(p)
}

/// Dense unitary of a circuit (product of embedded gates, application order).
pub fn circuit_unitary(c: &Circuit) -> Result<CMatrix> {
    circuit_unitary_with(c, OracleLimits::default())
}

pub fn circuit_unitary_with(c: &Circuit, limits: OracleLimits) -> Result<CMatrix> {
    let n = c.num_qubits();
    check_cap(n, limits.unitary)?;
    let mut u = CMatrix::identity(1 << n, 1 << n);
    for g in c.gates() {
        let (j, k) = g.lines();
        apply_in_place(u.as_mut_slice(), n, &g.matrix(), &[j, k]);
    }
    Ok(u)
}

/// Embeds a `2^m`-dimensional unitary acting on `lines` into `n` qubits.
pub fn embed(u: &CMatrix, lines: &[usize], n: usize) -> Result<CMatrix> {
    check_cap(n, OracleLimits::default().unitary)?;
    check_lines(n, u, lines)?;
    let mut out = CMatrix::identity(1 << n, 1 << n);
    apply_in_place(out.as_mut_slice(), n, u, lines);
    Ok(out)
}

/// `U† P U`.
pub fn conjugate_dense(u: &CMatrix, p: &PauliString) -> Result<CMatrix> {
    conjugate_dense_with(u, p, OracleLimits::default())
}

pub fn conjugate_dense_with(u: &CMatrix, p: &PauliString, limits: OracleLimits) -> Result<CMatrix> {
    let n = p.num_qubits();
    check_cap(n, limits.conjugation)?;
    check_dim(1 << n, u.nrows())?;
    Ok(u.adjoint() * pauli_matrix(p) * u)
}

/// Dense `H = i Σ_{μ≠ν} h_{μν} c_μ c_ν` in a given generator representation.
pub fn quadratic_hamiltonian_matrix(q: &QuadraticHamiltonian, rep: &GeneratorRep) -> Result<CMatrix> {
    let n = q.num_qubits();
    check_dim(n, rep.num_qubits())?;
    check_cap(n, OracleLimits::default().unitary)?;
    let dim = 1usize << n;
    let i = Complex64::new(0.0, 1.0);
    let mut h = CMatrix::from_element(dim, dim, ZERO);
    for mu in 0..2 * n {
        for nu in 0..2 * n {
            let coeff = q.coefficients()[(mu, nu)];
            if mu == nu || coeff == 0.0 {
                continue;
            }
            let prod = rep.generator(mu).mul(rep.generator(nu))?;
            h += pauli_matrix(&prod) * (i * coeff);
        }
    }
    Ok(h)
}

/// `e^{iH}` for a quadratic Hamiltonian, by dense exponentiation.
pub fn gaussian_unitary(q: &QuadraticHamiltonian, rep: &GeneratorRep) -> Result<CMatrix> {
    let h = quadratic_hamiltonian_matrix(q, rep)?;
    let i = Complex64::new(0.0, 1.0);
    Ok(expm(&h.map(|z| z * i)))
}

/// `|Tr(U†V)| / 2^n` together with the phase `δ` in `U = e^{iδ} V` (best fit).
pub fn phase_fidelity(u: &CMatrix, v: &CMatrix) -> (f64, f64) {
    let tr: Complex64 = (v.adjoint() * u).trace();
    let dim = u.nrows() as f64;
    (tr.norm() / dim, tr.arg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{Mat2, MatchGate};
    use crate::linalg::max_abs_diff;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn product_state_conventions() {
        let v = StateVector::from_product(&ProductState::zeros(3)).unwrap();
        assert_eq!(v.amplitudes()[0], ONE);
        assert!((v.norm() - 1.0).abs() < 1e-15);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let plus = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
        let zero = [ONE, ZERO];
        let s = ProductState::new(vec![plus, zero]).unwrap();
        let v = StateVector::from_product(&s).unwrap();
        let expected = [h, 0.0, h, 0.0];
        for (a, e) in v.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn gate_application_examples() {
        let zero = StateVector::from_product(&ProductState::zeros(2)).unwrap();
        let xx = MatchGate::new(Mat2::X, Mat2::X, (0, 1)).unwrap();
        let out = zero.apply(&xx.matrix(), &[0, 1]).unwrap();
        assert_eq!(out.amplitudes()[3], ONE);
        let id = zero.apply(&CMatrix::identity(4, 4), &[0, 1]).unwrap();
        assert_eq!(id, zero);

        let s = ProductState::normalized(vec![
            [Complex64::new(0.3, 0.2), Complex64::new(-0.7, 0.1)],
            [Complex64::new(0.9, -0.4), Complex64::new(0.2, 0.5)],
            [Complex64::new(0.1, 0.0), Complex64::new(0.0, 1.0)],
        ])
        .unwrap();
        let v = StateVector::from_product(&s).unwrap();
        let swap = MatchGate::swap((0, 2)).unwrap().matrix();
        let twice = v.apply(&swap, &[0, 2]).unwrap().apply(&swap, &[0, 2]).unwrap();
        assert!(v.amplitudes().iter().zip(twice.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-12));
        let bad = CMatrix::from_element(4, 4, ONE);
        assert!(v.apply(&bad, &[0, 1]).is_err());
        assert!(v.apply(&swap, &[0, 0]).is_err());
        assert!(v.apply(&swap, &[0, 3]).is_err());
    }

    #[test]
    fn dense_pauli_expectations() {
        let one = StateVector::from_product(&ProductState::basis(&[true])).unwrap();
        assert_eq!(expectation_pauli_dense(&one, &ps("Z")).unwrap(), -1.0);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let plus = ProductState::new(vec![[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]]).unwrap();
        let v = StateVector::from_product(&plus).unwrap();
        assert!((expectation_pauli_dense(&v, &ps("X")).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation_pauli_dense(&v, &ps("+i X")).is_err());
    }

    #[test]
    fn pauli_matrix_single_letters() {
        assert_eq!(pauli_matrix(&ps("X")), Mat2::X.to_dmatrix());
        assert_eq!(pauli_matrix(&ps("Y")), Mat2::Y.to_dmatrix());
        assert_eq!(pauli_matrix(&ps("Z")), Mat2::Z.to_dmatrix());
        let xz = pauli_matrix(&ps("XZ"));
        let kron = Mat2::X.to_dmatrix().kronecker(&Mat2::Z.to_dmatrix());
        assert_eq!(xz, kron);
    }

    #[test]
    fn identify_round_trips_and_rejects() {
        for s in ["+ XYZ", "-i ZZI", "+i IYX", "- YYY"] {
            assert_eq!(identify_pauli(&pauli_matrix(&ps(s)), 1e-12), Some(ps(s)));
        }
        let h = MatchGate::new(Mat2::H, Mat2::H, (0, 1)).unwrap().matrix();
        assert_eq!(identify_pauli(&h, 1e-9), None);
    }

    #[test]
    fn circuit_unitary_basics() {
        let empty = Circuit::new(3);
        assert_eq!(circuit_unitary(&empty).unwrap(), CMatrix::identity(8, 8));
        let g = MatchGate::new(Mat2::H, Mat2::Y * Mat2::Z * Mat2::H, (1, 2)).unwrap();
        let c = Circuit::from_gates(3, vec![g]).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let expected = CMatrix::identity(2, 2).kronecker(&g.matrix());
        assert!(max_abs_diff(&u, &expected) < 1e-15);
        assert!(matches!(circuit_unitary(&Circuit::new(11)), Err(Error::Resource { n: 11, cap: 10 })));
    }

    #[test]
    fn conjugation_by_modified_swap_moves_generators() {
        let g = MatchGate::modified_swap((0, 1)).unwrap().matrix();
        let c1 = conjugate_dense(&g, &ps("XI")).unwrap();
        assert_eq!(identify_pauli(&c1, 1e-12), Some(ps("ZX")));
        let same = conjugate_dense(&CMatrix::identity(4, 4), &ps("YZ")).unwrap();
        assert_eq!(same, pauli_matrix(&ps("YZ")));
    }
}
