//! Clifford intertwiners: conjugating a generator set by a Clifford circuit
//! `T` gives another set `c'_μ = T† c_μ T` obeying the same algebra, and
//! circuits `T† U T` of Gaussian `U` are simulated with the rotation of `U`
//! in the conjugated set.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{jordan_wigner, GeneratorRep};
use crate::dense::{embed, CMatrix, OracleLimits};
use crate::error::{check_dim, Error, Result};
use crate::gate::{Circuit, MatchGate};
use crate::gaussian::expectation_pauli;
use crate::pauli::{Pauli, PauliString, Phase, ProductState};

/// Tolerance used to decide whether a conjugated gate acts on a line.
pub const SUPPORT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordOp {
    Cnot { control: usize, target: usize },
    H(usize),
    /// `diag(1, i)`.
    P(usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl CliffordOp {
    fn lines(&self) -> (usize, Option<usize>) {
        match *self {
            CliffordOp::Cnot { control, target } => (control, Some(target)),
            CliffordOp::H(q) | CliffordOp::P(q) | CliffordOp::X(q) | CliffordOp::Y(q) | CliffordOp::Z(q) => (q, None),
        }
    }

    /// `g† p g`, in place.
    fn conjugate(&self, p: &mut PauliString) {
        match *self {
            CliffordOp::H(q) => {
                let l = p.get(q);
                let img = match l {
                    Pauli::X => Pauli::Z,
                    Pauli::Z => Pauli::X,
                    other => other,
                };
                p.set(q, img);
                if l == Pauli::Y {
                    *p = p.negated();
                }
            }
            CliffordOp::P(q) => match p.get(q) {
                Pauli::X => {
                    p.set(q, Pauli::Y);
                    *p = p.negated();
                }
                Pauli::Y => p.set(q, Pauli::X),
                _ => {}
            },
            CliffordOp::X(q) => {
                if matches!(p.get(q), Pauli::Y | Pauli::Z) {
                    *p = p.negated();
                }
            }
            CliffordOp::Y(q) => {
                if matches!(p.get(q), Pauli::X | Pauli::Z) {
                    *p = p.negated();
                }
            }
            CliffordOp::Z(q) => {
                if matches!(p.get(q), Pauli::X | Pauli::Y) {
                    *p = p.negated();
                }
            }
            CliffordOp::Cnot { control, target } => {
                let (xc, zc) = p.get(control).bits();
                let (xt, zt) = p.get(target).bits();
                if xc && zt && !(xt ^ zc) {
                    *p = p.negated();
                }
                p.set(target, Pauli::from_bits(xt ^ xc, zt));
                p.set(control, Pauli::from_bits(xc, zc ^ zt));
            }
        }
    }

    /// Dense matrix on its own line(s), control first for CNOT.
    fn matrix(&self) -> CMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            CliffordOp::Cnot { .. } => CMatrix::from_row_slice(4, 4, &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o]),
            CliffordOp::H(_) => CMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
            CliffordOp::P(_) => CMatrix::from_row_slice(2, 2, &[l, o, o, i]),
            CliffordOp::X(_) => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            CliffordOp::Y(_) => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            CliffordOp::Z(_) => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }
}

/// Clifford circuit; `ops` are in application order, so `T = g_m ⋯ g_1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliffordCircuit {
    n: usize,
    ops: Vec<CliffordOp>,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> CliffordCircuit {
        CliffordCircuit { n, ops: Vec::new() }
    }

    pub fn from_ops(n: usize, ops: Vec<CliffordOp>) -> Result<CliffordCircuit> {
        let mut t = CliffordCircuit::new(n);
        for op in ops {
            t.push(op)?;
        }
        Ok(t)
    }

    pub fn push(&mut self, op: CliffordOp) -> Result<()> {
        let (a, b) = op.lines();
        if a >= self.n || b.is_some_and(|b| b >= self.n) {
            return Err(Error::Validation(alloc::format!("{op:?} out of range for {} lines", self.n)));
        }
        if b == Some(a) {
            return Err(Error::Validation("CNOT control and target coincide".into()));
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[CliffordOp] {
        &self.ops
    }
}

/// `T† p T`, with the exact phase.
pub fn conjugate_pauli(t: &CliffordCircuit, p: &PauliString) -> Result<PauliString> {
    check_dim(t.num_qubits(), p.num_qubits())?;
    let mut out = p.clone();
    // T† p T = g_1† ⋯ (g_m† p g_m) ⋯ g_1: the last gate acts first.
    for op in t.ops().iter().rev() {
        op.conjugate(&mut out);
    }
    Ok(out)
}

/// `c'_μ = T† c_μ T` for every generator.
pub fn conjugate_rep(t: &CliffordCircuit, rep: &GeneratorRep) -> Result<GeneratorRep> {
    check_dim(t.num_qubits(), rep.num_qubits())?;
    let gens = rep.generators().iter().map(|c| conjugate_pauli(t, c)).collect::<Result<Vec<_>>>()?;
    GeneratorRep::new(rep.num_qubits(), gens)
}

/// SWAPs on the given line pairs, each as three CNOTs, applied in order.
pub fn example1_t(n: usize, swaps: &[(usize, usize)]) -> Result<CliffordCircuit> {
    let mut t = CliffordCircuit::new(n);
    for &(a, b) in swaps {
        t.push(CliffordOp::Cnot { control: a, target: b })?;
        t.push(CliffordOp::Cnot { control: b, target: a })?;
        t.push(CliffordOp::Cnot { control: a, target: b })?;
    }
    Ok(t)
}

/// `T = CNOT_{0,1} CNOT_{1,2} ⋯ CNOT_{n-2,n-1} H_0 ⋯ H_{n-1}`, the
/// rightmost factor applied first.
pub fn example2_t(n: usize) -> Result<CliffordCircuit> {
    if n == 0 {
        return Err(Error::Domain("need at least one line".into()));
    }
    let mut t = CliffordCircuit::new(n);
    for q in 0..n {
        t.push(CliffordOp::H(q))?;
    }
    for q in (0..n - 1).rev() {
        t.push(CliffordOp::Cnot { control: q, target: q + 1 })?;
    }
    Ok(t)
}

/// For odd `n`, `T = (CNOT_{0,1} CNOT_{2,3} ⋯)(CNOT_{2,1} CNOT_{4,3} ⋯)`,
/// the right-hand group applied first.
pub fn example3_t(n: usize) -> Result<CliffordCircuit> {
    if n.is_multiple_of(2) {
        return Err(Error::Domain(alloc::format!("example 3 needs an odd line count, got {n}")));
    }
    let mut t = CliffordCircuit::new(n);
    for i in 0..n / 2 {
        t.push(CliffordOp::Cnot { control: 2 * i + 2, target: 2 * i + 1 })?;
    }
    for i in 0..n / 2 {
        t.push(CliffordOp::Cnot { control: 2 * i, target: 2 * i + 1 })?;
    }
    Ok(t)
}

/// Dense `T` (oracle sizes only).
pub fn clifford_unitary(t: &CliffordCircuit) -> Result<CMatrix> {
    let n = t.num_qubits();
    let cap = OracleLimits::default().unitary;
    if n > cap {
        return Err(Error::Resource { n, cap });
    }
    let mut u = CMatrix::identity(1 << n, 1 << n);
    for op in t.ops() {
        let lines: Vec<usize> = match op.lines() {
            (a, Some(b)) => alloc::vec![a, b],
            (a, None) => alloc::vec![a],
        };
        u = embed(&op.matrix(), &lines, n)? * u;
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatedGate {
    /// Lines on which `T† U T` acts non-trivially, ascending.
    pub support: Vec<usize>,
    /// Its restriction to `support`, first support line most significant.
    pub matrix: CMatrix,
}

/// Lines on which a dense `n`-line unitary acts non-trivially.
pub fn dense_support(w: &CMatrix, n: usize, tol: f64) -> Vec<usize> {
    let dim = 1usize << n;
    (0..n)
        .filter(|&l| {
            let bit = 1usize << (n - 1 - l);
            // W = I_l ⊗ W' iff W commutes with X_l and Z_l.
            let mut max = 0.0f64;
            for r in 0..dim {
                for c in 0..dim {
                    let x_comm = w[(r ^ bit, c)] - w[(r, c ^ bit)];
                    let z_sign = if (r & bit == 0) == (c & bit == 0) { 0.0 } else { 2.0 };
                    max = max.max(x_comm.norm()).max(w[(r, c)].norm() * z_sign);
                }
            }
            max > tol
        })
        .collect()
}

/// Restriction of `w = I ⊗ W_S` to the lines `support`.
fn restrict(w: &CMatrix, n: usize, support: &[usize]) -> CMatrix {
    let m = support.len();
    let index = |local: usize| -> usize {
        support
            .iter()
            .enumerate()
            .filter(|(j, _)| local >> (m - 1 - j) & 1 == 1)
            .map(|(_, &l)| 1usize << (n - 1 - l))
            .sum()
    };
    CMatrix::from_fn(1 << m, 1 << m, |r, c| w[(index(r), index(c))])
}

/// `T† U T` for a gate `U`, with its detected support.
pub fn conjugated_gate(t: &CliffordCircuit, g: &MatchGate) -> Result<ConjugatedGate> {
    let n = t.num_qubits();
    let (j, k) = g.lines();
    if k >= n {
        return Err(Error::Domain(alloc::format!("gate lines ({j}, {k}) out of range")));
    }
    let tu = clifford_unitary(t)?;
    let u = embed(&g.matrix(), &[j, k], n)?;
    let w = tu.adjoint() * u * tu;
    let support = dense_support(&w, n, SUPPORT_TOL);
    let matrix = restrict(&w, n, &support);
    Ok(ConjugatedGate { support, matrix })
}

/// `⟨target⟩` after `T† U T` acting on `s`, where `U` is the nearest-neighbour
/// circuit `base`. Uses the rotation of `base` and the generators `T† c T`.
pub fn simulate_intertwined(
    t: &CliffordCircuit,
    base: &Circuit,
    s: &ProductState,
    target: &PauliString,
    degree_cap: usize,
) -> Result<f64> {
    check_dim(t.num_qubits(), base.num_qubits())?;
    let rep = conjugate_rep(t, &jordan_wigner(t.num_qubits())?)?;
    expectation_pauli(base, &rep, target, s, degree_cap)
}

/// Generator pair `(μ, ν)` and the image of `i c_μ c_ν` under conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticImage {
    pub mu: usize,
    pub nu: usize,
    pub image: PauliString,
}

/// Quadratic terms `i c_μ c_ν`, over all Jordan-Wigner generator pairs,
/// whose images under `T` act only on lines `first .. first + width`.
pub fn local_quadratic_images(t: &CliffordCircuit, first: usize, width: usize) -> Result<Vec<QuadraticImage>> {
    let n = t.num_qubits();
    if first + width > n {
        return Err(Error::Domain(alloc::format!("window {first}+{width} exceeds {n} lines")));
    }
    let rep = conjugate_rep(t, &jordan_wigner(n)?)?;
    let window = first..first + width;
    let mut out = Vec::new();
    for mu in 0..rep.len() {
        for nu in mu + 1..rep.len() {
            let image = rep.generator(mu).mul(rep.generator(nu))?;
            let image = image.clone().with_phase(image.phase().mul(Phase::I));
            if image.support().iter().all(|l| window.contains(l)) {
                out.push(QuadraticImage { mu, nu, image });
            }
        }
    }
    Ok(out)
}
