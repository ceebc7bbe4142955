//! `G(A,B)` gate records and circuits.
//!
//! The 4×4 matrix of a gate on lines `(j, k)`, `j < k`, is written in the basis
//! `|00⟩, |01⟩, |10⟩, |11⟩` with line `j` as the more significant bit. `A` acts
//! on the even-parity pair `(|00⟩, |11⟩)`, `B` on the odd-parity pair
//! `(|01⟩, |10⟩)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for unitarity and determinant equality.
pub const GATE_TOL: f64 = 1e-10;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A 2×2 complex matrix `[[p, q], [r, s]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
    pub const X: Mat2 = Mat2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
    pub const Y: Mat2 = Mat2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]);
    pub const Z: Mat2 = Mat2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]);
    pub const H: Mat2 = Mat2([
        [c(core::f64::consts::FRAC_1_SQRT_2, 0.0), c(core::f64::consts::FRAC_1_SQRT_2, 0.0)],
        [c(core::f64::consts::FRAC_1_SQRT_2, 0.0), c(-core::f64::consts::FRAC_1_SQRT_2, 0.0)],
    ]);

    pub fn new(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> Mat2 {
        Mat2([[p, q], [r, s]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    #[must_use]
    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    #[must_use]
    pub fn scale(&self, k: Complex64) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    /// Largest entrywise deviation of `M†M` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut err = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((p.0[i][j] - c(target, 0.0)).norm());
            }
        }
        err
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    /// `X·M·X`, the odd-block image under exchange of the two lines.
    #[must_use]
    pub fn x_conjugated(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[1][1], m[1][0]], [m[0][1], m[0][0]]])
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(2, 2, |i, j| self.0[i][j])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

/// A two-line gate `G(A,B)` (or `G̃(A,B)` when `det A ≠ det B`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchGate {
    a: Mat2,
    b: Mat2,
    lines: (usize, usize),
    allowed: bool,
}

impl MatchGate {
    /// Builds a gate with the default tolerance [`GATE_TOL`].
    pub fn new(a: Mat2, b: Mat2, lines: (usize, usize)) -> Result<MatchGate> {
        MatchGate::with_tolerance(a, b, lines, GATE_TOL)
    }

    pub fn with_tolerance(a: Mat2, b: Mat2, lines: (usize, usize), tol: f64) -> Result<MatchGate> {
        if lines.0 >= lines.1 {
            return Err(Error::Validation(alloc::format!(
                "gate lines must be ordered j < k, got ({}, {})",
                lines.0,
                lines.1
            )));
        }
        for (name, m) in [("A", &a), ("B", &b)] {
            let err = m.unitarity_error();
            if err > tol {
                return Err(Error::Validation(alloc::format!(
                    "block {name} is not unitary (error {err:.3e})"
                )));
            }
        }
        let allowed = (a.det() - b.det()).norm() <= tol;
        Ok(MatchGate { a, b, lines, allowed })
    }

    /// Same blocks acting on the line pair given in reverse order.
    ///
    /// Exchanging the two lines fixes the even block and conjugates the odd
    /// block by `X`, so `G(A,B)` on `(k, j)` is `G(A, XBX)` on `(j, k)`.
    pub fn on_lines(a: Mat2, b: Mat2, first: usize, second: usize) -> Result<MatchGate> {
        if first < second {
            MatchGate::new(a, b, (first, second))
        } else {
            MatchGate::new(a, b.x_conjugated(), (second, first))
        }
    }

    pub fn swap(lines: (usize, usize)) -> Result<MatchGate> {
        MatchGate::new(Mat2::IDENTITY, Mat2::X, lines)
    }

    pub fn cz(lines: (usize, usize)) -> Result<MatchGate> {
        MatchGate::new(Mat2::Z, Mat2::IDENTITY, lines)
    }

    pub fn identity(lines: (usize, usize)) -> Result<MatchGate> {
        MatchGate::new(Mat2::IDENTITY, Mat2::IDENTITY, lines)
    }

    /// The modified swap `G(Z,X) = (CZ)(SWAP)`.
    pub fn modified_swap(lines: (usize, usize)) -> Result<MatchGate> {
        MatchGate::new(Mat2::Z, Mat2::X, lines)
    }

    pub fn a(&self) -> &Mat2 {
        &self.a
    }

    pub fn b(&self) -> &Mat2 {
        &self.b
    }

    pub fn lines(&self) -> (usize, usize) {
        self.lines
    }

    pub fn distance(&self) -> usize {
        self.lines.1 - self.lines.0
    }

    /// True when `det A = det B` within tolerance.
    pub fn is_allowed(&self) -> bool {
        self.allowed
    }

    /// Same blocks on another (ordered) line pair.
    pub fn relocated(&self, lines: (usize, usize)) -> Result<MatchGate> {
        MatchGate::new(self.a, self.b, lines)
    }

    #[must_use]
    pub fn adjoint(&self) -> MatchGate {
        MatchGate { a: self.a.adjoint(), b: self.b.adjoint(), ..*self }
    }

    /// The 4×4 block embedding.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let (a, b) = (&self.a.0, &self.b.0);
        let mut m = DMatrix::from_element(4, 4, c(0.0, 0.0));
        m[(0, 0)] = a[0][0];
        m[(0, 3)] = a[0][1];
        m[(3, 0)] = a[1][0];
        m[(3, 3)] = a[1][1];
        m[(1, 1)] = b[0][0];
        m[(1, 2)] = b[0][1];
        m[(2, 1)] = b[1][0];
        m[(2, 2)] = b[1][1];
        m
    }

    /// Reads `A` and `B` back out of a 4×4 matrix that preserves parity.
    pub fn from_matrix(m: &DMatrix<Complex64>, lines: (usize, usize)) -> Result<MatchGate> {
        if m.shape() != (4, 4) {
            return Err(Error::Dimension { expected: 4, found: m.nrows() });
        }
        let leak = [(0, 1), (0, 2), (3, 1), (3, 2), (1, 0), (2, 0), (1, 3), (2, 3)]
            .iter()
            .map(|&(i, j)| m[(i, j)].norm())
            .fold(0.0f64, f64::max);
        if leak > GATE_TOL {
            return Err(Error::Validation(alloc::format!(
                "matrix mixes parity sectors (leak {leak:.3e})"
            )));
        }
        let a = Mat2::new(m[(0, 0)], m[(0, 3)], m[(3, 0)], m[(3, 3)]);
        let b = Mat2::new(m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]);
        MatchGate::new(a, b, lines)
    }
}

/// `gate_matrix`: 4×4 embedding of a gate record.
pub fn gate_matrix(g: &MatchGate) -> DMatrix<Complex64> {
    g.matrix()
}

/// Ordered gate list on `n` lines; gates apply in sequence order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n: usize,
    gates: Vec<MatchGate>,
    pub name: Option<String>,
    pub description: Option<String>,
}

impl Circuit {
    pub fn new(n: usize) -> Circuit {
        Circuit { n, gates: Vec::new(), name: None, description: None }
    }

    pub fn from_gates(n: usize, gates: Vec<MatchGate>) -> Result<Circuit> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Appends a gate; its lines must lie in `[0, n)`.
    pub fn push(&mut self, g: MatchGate) -> Result<()> {
        if g.lines().1 >= self.n {
            return Err(Error::Validation(alloc::format!(
                "gate on lines ({}, {}) outside a {}-line circuit",
                g.lines().0,
                g.lines().1,
                self.n
            )));
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[MatchGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        crate::error::check_dim(self.n, other.n)?;
        let mut out = self.clone();
        out.gates.extend_from_slice(&other.gates);
        Ok(out)
    }

    /// The inverse circuit: adjoint gates in reverse order.
    #[must_use]
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().map(MatchGate::adjoint).collect(),
            name: None,
            description: None,
        }
    }
}

/// Which line distances a circuit may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinePolicy {
    /// Distance 1 only; the classically simulatable class.
    NearestNeighbour,
    /// Distance 1 or 2; the universal class.
    NextNearestNeighbour,
    Any,
}

impl LinePolicy {
    pub fn max_distance(self) -> usize {
        match self {
            LinePolicy::NearestNeighbour => 1,
            LinePolicy::NextNearestNeighbour => 2,
            LinePolicy::Any => usize::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `det A ≠ det B`.
    DetMismatch,
    /// Line distance above what the policy permits.
    Distance(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateViolation {
    pub gate: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CircuitReport {
    pub violations: Vec<GateViolation>,
}

impl CircuitReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::Validation(alloc::format!(
                "gate {} violates policy: {}",
                v.gate,
                match v.kind {
                    ViolationKind::DetMismatch => String::from("det mismatch"),
                    ViolationKind::Distance(d) => alloc::format!("line distance {d}"),
                }
            ))),
        }
    }
}

/// Every gate must be allowed and respect the distance policy.
pub fn validate_circuit(c: &Circuit, policy: LinePolicy) -> CircuitReport {
    let mut violations = Vec::new();
    for (i, g) in c.gates().iter().enumerate() {
        if !g.is_allowed() {
            violations.push(GateViolation { gate: i, kind: ViolationKind::DetMismatch });
        }
        if g.distance() > policy.max_distance() {
            violations.push(GateViolation { gate: i, kind: ViolationKind::Distance(g.distance()) });
        }
    }
    CircuitReport { violations }
}
