//! Exact decomposition of Gaussian unitaries `e^{iH}` into nearest-neighbour
//! allowed gates.
//!
//! The rotation of `e^{iH}` is factored into plane (Givens) rotations by a
//! column sweep. Each plane rotation in generators `(a, b)` is realised by
//! one gate `exp(φ/2 · c_a c_b)` once both generators sit on the same or
//! adjacent lines; generators further apart are first brought together by a
//! ladder of modified swaps `G(Z,X)`, which permute generator pairs of
//! neighbouring lines, and the ladder is undone afterwards.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::jordan_wigner;
use crate::dense::{circuit_unitary, gaussian_unitary, pauli_matrix, phase_fidelity, CMatrix};
use crate::error::{Error, Result};
use crate::gate::{Circuit, MatchGate};
use crate::gaussian::{circuit_to_rotation, hamiltonian_to_rotation, local_rotation, QuadraticHamiltonian, Rotation};

/// Angle conventions, fixed by round-trip calibration.
pub mod conventions {
    /// `exp(α c_a c_b)` has the rotation `PlaneRotation(a, b, α / PLANE_TO_GATE)`.
    pub const PLANE_TO_GATE: f64 = 0.5;
    /// `h_{ab} = PLANE_TO_H · φ` (and `h_{ba} = −h_{ab}`) has rotation `PlaneRotation(a, b, φ)`.
    pub const PLANE_TO_H: f64 = -0.25;
    /// The same gate written as `exp(iH)` with `H = iθ c_a c_b` has `θ = PLANE_TO_THETA · φ`.
    pub const PLANE_TO_THETA: f64 = -0.5;
}

/// Entries at or below this size are treated as already zero by the sweep.
pub const GIVENS_ZERO_TOL: f64 = 1e-15;

/// Rotation by `angle` in the plane of generators `a < b`:
/// `[a][a] = [b][b] = cos`, `[a][b] = sin`, `[b][a] = −sin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneRotation {
    pub a: usize,
    pub b: usize,
    pub angle: f64,
}

impl PlaneRotation {
    pub fn new(a: usize, b: usize, angle: f64) -> Result<PlaneRotation> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Ok(PlaneRotation { a, b, angle }),
            core::cmp::Ordering::Greater => Ok(PlaneRotation { a: b, b: a, angle: -angle }),
            core::cmp::Ordering::Equal => Err(Error::Domain(alloc::format!("degenerate plane ({a}, {a})"))),
        }
    }

    pub fn matrix(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::identity(2 * n, 2 * n);
        let (c, s) = (libm::cos(self.angle), libm::sin(self.angle));
        m[(self.a, self.a)] = c;
        m[(self.b, self.b)] = c;
        m[(self.a, self.b)] = s;
        m[(self.b, self.a)] = -s;
        m
    }

    pub fn inverse(&self) -> PlaneRotation {
        PlaneRotation { angle: -self.angle, ..*self }
    }
}

/// Factors `r = r_1 r_2 ⋯ r_M` into plane rotations, `M ≤ n(2n−1)`.
pub fn givens_factorize(r: &Rotation) -> Result<Vec<PlaneRotation>> {
    // Re-validate; callers may have built the matrix by hand.
    let r = Rotation::new(r.matrix().clone())?;
    let dim = r.matrix().nrows();
    let mut work = r.into_matrix();
    let mut applied = Vec::new();
    for j in 0..dim.saturating_sub(1) {
        // The plane (j, j+1) comes last so it can also fix the sign of the pivot.
        for i in (j + 1..dim).rev() {
            let (x, y) = (work[(j, j)], work[(i, j)]);
            if y.abs() <= GIVENS_ZERO_TOL && (i != j + 1 || x >= 0.0) {
                continue;
            }
            let phi = libm::atan2(y, x);
            let (c, s) = (libm::cos(phi), libm::sin(phi));
            for col in 0..dim {
                let (rj, ri) = (work[(j, col)], work[(i, col)]);
                work[(j, col)] = c * rj + s * ri;
                work[(i, col)] = -s * rj + c * ri;
            }
            applied.push(PlaneRotation { a: j, b: i, angle: phi });
        }
    }
    // G_M ⋯ G_1 r = I, so r = G_1ᵀ ⋯ G_Mᵀ.
    Ok(applied.iter().map(PlaneRotation::inverse).collect())
}

/// Product `r_1 r_2 ⋯ r_M` of plane rotations.
pub fn compose_planes(factors: &[PlaneRotation], n: usize) -> DMatrix<f64> {
    factors.iter().fold(DMatrix::identity(2 * n, 2 * n), |acc, f| acc * f.matrix(n))
}

/// Two-line gate `exp(α c_a c_b)` for local generators `a, b < 4` on `lines`.
fn core_gate(a: usize, b: usize, alpha: f64, lines: (usize, usize)) -> Result<MatchGate> {
    let jw = jordan_wigner(2)?;
    let k = jw.generator(a).mul(jw.generator(b))?;
    let u: CMatrix = CMatrix::identity(4, 4) * Complex64::new(libm::cos(alpha), 0.0)
        + pauli_matrix(&k) * Complex64::new(libm::sin(alpha), 0.0);
    MatchGate::from_matrix(&u, lines)
}

/// Nearest-neighbour allowed gates whose circuit rotation is `pr`.
pub fn plane_rotation_to_gates(pr: &PlaneRotation, n: usize) -> Result<Vec<MatchGate>> {
    let pr = PlaneRotation::new(pr.a, pr.b, pr.angle)?;
    if pr.b >= 2 * n {
        return Err(Error::Domain(alloc::format!("plane ({}, {}) out of range for {n} lines", pr.a, pr.b)));
    }
    if n < 2 {
        return Err(Error::Domain("gate synthesis needs at least two lines".into()));
    }
    let (la, lb) = (pr.a / 2, pr.b / 2);
    let ladder: Vec<MatchGate> =
        (la + 1..lb).rev().map(|k| MatchGate::modified_swap((k, k + 1))).collect::<Result<_>>()?;

    // Where the ladder sends each generator: R_L[π(j)][j] = 1.
    let mut perm: Vec<usize> = (0..2 * n).collect();
    for g in &ladder {
        let block = local_rotation(&g.matrix())?;
        let base = 2 * g.lines().0;
        for p in perm.iter_mut() {
            if (base..base + 4).contains(p) {
                let local = *p - base;
                let row = (0..4).find(|&i| block[(i, local)] > 0.5).ok_or_else(|| {
                    Error::Validation("modified swap is not a signed permutation of generators".into())
                })?;
                *p = base + row;
            }
        }
    }
    let moved = PlaneRotation::new(perm[pr.a], perm[pr.b], pr.angle)?;
    let (ma, mb) = (moved.a / 2, moved.b / 2);
    let first = match mb - ma {
        0 if ma + 1 < n => ma,
        0 => ma - 1,
        1 => ma,
        _ => return Err(Error::Validation("ladder failed to bring generators together".into())),
    };
    let core = core_gate(
        moved.a - 2 * first,
        moved.b - 2 * first,
        conventions::PLANE_TO_GATE * moved.angle,
        (first, first + 1),
    )?;

    let mut gates = ladder.clone();
    gates.push(core);
    gates.extend(ladder.into_iter().rev());
    Ok(gates)
}

/// `n(2n−1) · 4n`, the asserted gate-count cap.
pub fn gate_count_cap(n: usize) -> usize {
    n * (2 * n).saturating_sub(1) * 4 * n
}

/// Circuit of a rotation, reconstructing `r` within round-off.
pub fn rotation_to_circuit(r: &Rotation) -> Result<Circuit> {
    let n = r.num_qubits();
    let factors = givens_factorize(r)?;
    let mut c = Circuit::new(n);
    // The first gate applied contributes the rightmost factor.
    for f in factors.iter().rev() {
        for g in plane_rotation_to_gates(f, n)? {
            c.push(g)?;
        }
    }
    if c.len() > gate_count_cap(n) {
        return Err(Error::Validation(alloc::format!(
            "{} gates exceed the cap {}",
            c.len(),
            gate_count_cap(n)
        )));
    }
    Ok(c)
}

/// Nearest-neighbour circuit equal to `e^{iH}` up to a global phase.
pub fn decompose(q: &QuadraticHamiltonian) -> Result<Circuit> {
    rotation_to_circuit(&hamiltonian_to_rotation(q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    /// Frobenius distance between the circuit's rotation and `e^{-4h}`.
    pub rotation_error: f64,
    /// `|Tr(U†V)| / 2^n` against the dense `e^{iH}`.
    pub fidelity: f64,
    /// Global phase `δ` with `U ≈ e^{iδ} e^{iH}`.
    pub phase: f64,
}

/// Checks a decomposition against the dense matrix exponential (oracle sizes only).
pub fn check_decomposition(q: &QuadraticHamiltonian, c: &Circuit) -> Result<DecompositionReport> {
    let rotation_error = circuit_to_rotation(c)?.distance(&hamiltonian_to_rotation(q));
    let jw = jordan_wigner(q.num_qubits())?;
    let v = gaussian_unitary(q, &jw)?;
    let u = circuit_unitary(c)?;
    let (fidelity, phase) = phase_fidelity(&u, &v);
    Ok(DecompositionReport { rotation_error, fidelity, phase })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gate_to_rotation;
    use crate::linalg::max_abs_diff;

    #[test]
    fn identity_has_no_factors() {
        assert!(givens_factorize(&Rotation::identity(3)).unwrap().is_empty());
        assert!(decompose(&QuadraticHamiltonian::zero(4)).unwrap().is_empty());
    }

    #[test]
    fn single_plane_is_a_fixed_point() {
        let pr = PlaneRotation::new(2, 6, 0.4).unwrap();
        let r = Rotation::new(pr.matrix(4)).unwrap();
        let f = givens_factorize(&r).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].a, f[0].b), (2, 6));
        assert!((f[0].angle - 0.4).abs() < 1e-15);
    }

    #[test]
    fn negative_diagonal_is_handled() {
        let mut m = DMatrix::identity(4, 4);
        m[(0, 0)] = -1.0;
        m[(3, 3)] = -1.0;
        let r = Rotation::new(m.clone()).unwrap();
        let f = givens_factorize(&r).unwrap();
        assert!(max_abs_diff(&compose_planes(&f, 2), &m) < 1e-15);
    }

    #[test]
    fn calibration_constants() {
        // exp(α c_a c_b) on local generators of two lines
        for (a, b) in [(0, 1), (1, 2), (0, 3), (2, 3)] {
            let alpha = 0.3;
            let g = core_gate(a, b, alpha, (0, 1)).unwrap();
            let r = gate_to_rotation(&g, 2).unwrap();
            let expected = PlaneRotation::new(a, b, alpha / conventions::PLANE_TO_GATE).unwrap();
            assert!(max_abs_diff(r.matrix(), &expected.matrix(2)) < 1e-14);

            let phi = 0.7;
            let q = QuadraticHamiltonian::plane(2, a, b, conventions::PLANE_TO_H * phi).unwrap();
            let r = hamiltonian_to_rotation(&q);
            let expected = PlaneRotation::new(a, b, phi).unwrap();
            assert!(max_abs_diff(r.matrix(), &expected.matrix(2)) < 1e-14);
        }
        // H = iθ c_a c_b  ⇔  h_ab = θ/2
        assert_eq!(conventions::PLANE_TO_THETA, 2.0 * conventions::PLANE_TO_H);
    }

    #[test]
    fn distant_plane_uses_ladder() {
        // generators 0 and 5 live on lines 0 and 2
        let pr = PlaneRotation::new(0, 5, 1.1).unwrap();
        let gates = plane_rotation_to_gates(&pr, 3).unwrap();
        let lines: Vec<_> = gates.iter().map(MatchGate::lines).collect();
        assert_eq!(lines, [(1, 2), (0, 1), (1, 2)]);
        let c = Circuit::from_gates(3, gates).unwrap();
        let r = circuit_to_rotation(&c).unwrap();
        assert!(max_abs_diff(r.matrix(), &pr.matrix(3)) < 1e-14);
    }

    #[test]
    fn same_line_plane_on_last_line() {
        let pr = PlaneRotation::new(4, 5, -0.2).unwrap();
        let gates = plane_rotation_to_gates(&pr, 3).unwrap();
        assert_eq!(gates.len(), 1);
        assert_eq!(gates[0].lines(), (1, 2));
        assert!(plane_rotation_to_gates(&PlaneRotation::new(0, 1, 0.2).unwrap(), 1).is_err());
    }

    #[test]
    fn small_decomposition_matches_exponential() {
        let mut h = DMatrix::zeros(6, 6);
        let vals = [0.3, -0.7, 0.2, 0.5, -0.1, 0.9, 0.4, -0.6, 0.8, 0.05, -0.3, 0.25, 0.6, -0.45, 0.15];
        let mut it = vals.iter();
        for a in 0..6 {
            for b in a + 1..6 {
                let v = *it.next().unwrap();
                h[(a, b)] = v;
                h[(b, a)] = -v;
            }
        }
        let q = QuadraticHamiltonian::new(3, h).unwrap();
        let c = decompose(&q).unwrap();
        let rep = check_decomposition(&q, &c).unwrap();
        assert!(rep.rotation_error < 1e-10, "{rep:?}");
        assert!(rep.fidelity > 1.0 - 1e-10, "{rep:?}");
    }
}
