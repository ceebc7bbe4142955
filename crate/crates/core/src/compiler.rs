//! Compiler from nearest-neighbour qubit circuits (one-qubit gates and CZ)
//! to allowed `G(A,B)` gates on four physical lines per logical qubit.
//!
//! Logical qubit `q` owns lines `4q .. 4q+3`, with `|0_L⟩ = |0000⟩` and
//! `|1_L⟩ = |1001⟩`. A one-qubit gate `A` becomes
//! `G(Z,X)_{01} G(Z,X)_{23} G(A,A)_{12} G(Z,X)_{01} G(Z,X)_{23}` on the
//! block (rightmost factor applied first). `CZ(q, q+1)` becomes
//! `G(H,H) G(X,X) SWAP G(H,H)` on the crossover pair `(4q+3, 4q+4)`; the
//! SWAP is not emitted but folded into a running line permutation `σ`, and
//! every later gate is re-addressed through `σ`. When re-addressing reverses
//! a pair, `G(A,B)` is emitted as `G(A, XBX)` on the sorted pair.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dense::{CMatrix, StateVector};
use crate::error::{Error, Result};
use crate::gate::{validate_circuit, Circuit, LinePolicy, Mat2, MatchGate, GATE_TOL};
use crate::pauli::{Pauli, PauliString, ProductState};

/// Physical lines per logical qubit.
pub const BLOCK: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum LogicalOp {
    OneQubit { matrix: Mat2, qubit: usize },
    /// Controlled-Z between `qubit` and `qubit + 1`.
    Cz { qubit: usize },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LogicalCircuit {
    m: usize,
    ops: Vec<LogicalOp>,
}

impl LogicalCircuit {
    pub fn new(m: usize) -> LogicalCircuit {
        LogicalCircuit { m, ops: Vec::new() }
    }

    pub fn from_ops(m: usize, ops: Vec<LogicalOp>) -> Result<LogicalCircuit> {
        let mut lc = LogicalCircuit::new(m);
        for op in ops {
            lc.push(op)?;
        }
        Ok(lc)
    }

    pub fn push(&mut self, op: LogicalOp) -> Result<()> {
        match &op {
            LogicalOp::OneQubit { matrix, qubit } => {
                if *qubit >= self.m {
                    return Err(Error::Validation(alloc::format!("qubit {qubit} out of range")));
                }
                let err = matrix.unitarity_error();
                if err > GATE_TOL {
                    return Err(Error::Validation(alloc::format!(
                        "one-qubit matrix is not unitary (error {err:.3e})"
                    )));
                }
            }
            LogicalOp::Cz { qubit } => {
                if qubit + 1 >= self.m {
                    return Err(Error::Validation(alloc::format!(
                        "CZ({qubit}, {}) is not between adjacent qubits in range",
                        qubit + 1
                    )));
                }
            }
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn one_qubit(&mut self, matrix: Mat2, qubit: usize) -> Result<()> {
        self.push(LogicalOp::OneQubit { matrix, qubit })
    }

    pub fn cz(&mut self, qubit: usize) -> Result<()> {
        self.push(LogicalOp::Cz { qubit })
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn ops(&self) -> &[LogicalOp] {
        &self.ops
    }

    /// `(one-qubit ops, CZ ops)`.
    pub fn counts(&self) -> (usize, usize) {
        let g1 = self.ops.iter().filter(|op| matches!(op, LogicalOp::OneQubit { .. })).count();
        (g1, self.ops.len() - g1)
    }

    /// First `len` operations.
    pub fn prefix(&self, len: usize) -> LogicalCircuit {
        LogicalCircuit { m: self.m, ops: self.ops[..len].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledCircuit {
    pub physical: Circuit,
    /// `σ`: the content of virtual line `l` ends on physical line `σ(l)`.
    pub permutation: Vec<usize>,
    /// Logical qubit `j` is read out on physical line `σ(4j)`.
    pub measure_map: Vec<usize>,
}

impl CompiledCircuit {
    pub fn logical_qubits(&self) -> usize {
        self.measure_map.len()
    }

    /// Largest `|σ(l) − l|`.
    pub fn max_displacement(&self) -> usize {
        self.permutation.iter().enumerate().map(|(l, &s)| l.abs_diff(s)).max().unwrap_or(0)
    }
}

/// Bit 0 becomes `|0000⟩` and bit 1 becomes `|1001⟩`.
pub fn encode_input(bits: &[bool]) -> ProductState {
    let lines: Vec<bool> = bits.iter().flat_map(|&b| [b, false, false, b]).collect();
    ProductState::basis(&lines)
}

struct Emitter {
    sigma: Vec<usize>,
    circuit: Circuit,
}

impl Emitter {
    fn emit(&mut self, a: Mat2, b: Mat2, lines: (usize, usize)) -> Result<()> {
        let g = MatchGate::on_lines(a, b, self.sigma[lines.0], self.sigma[lines.1])?;
        self.circuit.push(g)
    }

    fn absorb_swap(&mut self, a: usize, b: usize) {
        self.sigma.swap(a, b);
    }
}

/// Compiles a logical circuit; the result is validated before it is returned.
pub fn compile(lc: &LogicalCircuit) -> Result<CompiledCircuit> {
    let n = BLOCK * lc.num_qubits();
    let mut em = Emitter { sigma: (0..n).collect(), circuit: Circuit::new(n) };
    for op in lc.ops() {
        match op {
            LogicalOp::OneQubit { matrix, qubit } => {
                let l = BLOCK * qubit;
                em.emit(Mat2::Z, Mat2::X, (l + 2, l + 3))?;
                em.emit(Mat2::Z, Mat2::X, (l, l + 1))?;
                em.emit(*matrix, *matrix, (l + 1, l + 2))?;
                em.emit(Mat2::Z, Mat2::X, (l + 2, l + 3))?;
                em.emit(Mat2::Z, Mat2::X, (l, l + 1))?;
            }
            LogicalOp::Cz { qubit } => {
                let pair = (BLOCK * qubit + 3, BLOCK * qubit + 4);
                em.emit(Mat2::H, Mat2::H, pair)?;
                em.absorb_swap(pair.0, pair.1);
                em.emit(Mat2::X, Mat2::X, pair)?;
                em.emit(Mat2::H, Mat2::H, pair)?;
            }
        }
    }
    let measure_map = (0..lc.num_qubits()).map(|j| em.sigma[BLOCK * j]).collect();
    let cc = CompiledCircuit { physical: em.circuit, permutation: em.sigma, measure_map };
    check_compiled(lc, &cc)?;
    Ok(cc)
}

/// Structural checks: allowed gates at distance 1 or 2, gate-count bound,
/// displacement at most one, `σ` an involution.
pub fn check_compiled(lc: &LogicalCircuit, cc: &CompiledCircuit) -> Result<()> {
    validate_circuit(&cc.physical, LinePolicy::NextNearestNeighbour).into_result()?;
    let (g1, g2) = lc.counts();
    if cc.physical.len() > 5 * g1 + 4 * g2 {
        return Err(Error::Validation(alloc::format!(
            "{} gates exceed the bound 5*{g1} + 4*{g2}",
            cc.physical.len()
        )));
    }
    if cc.max_displacement() > 1 {
        return Err(Error::Validation("a line moved by more than one position".into()));
    }
    let s = &cc.permutation;
    if s.iter().enumerate().any(|(l, &t)| s[t] != l) {
        return Err(Error::Validation("line permutation is not an involution".into()));
    }
    Ok(())
}

fn one_qubit_unitary(m: &Mat2) -> CMatrix {
    m.to_dmatrix()
}

fn cz_unitary() -> CMatrix {
    let mut u = CMatrix::identity(4, 4);
    u[(3, 3)] = Complex64::new(-1.0, 0.0);
    u
}

/// Dense state of the logical circuit on the basis input `bits`.
pub fn logical_state(lc: &LogicalCircuit, bits: &[bool]) -> Result<StateVector> {
    if bits.len() != lc.num_qubits() {
        return Err(Error::Dimension { expected: lc.num_qubits(), found: bits.len() });
    }
    let mut v = StateVector::from_product(&ProductState::basis(bits))?;
    for op in lc.ops() {
        v = match op {
            LogicalOp::OneQubit { matrix, qubit } => v.apply(&one_qubit_unitary(matrix), &[*qubit])?,
            LogicalOp::Cz { qubit } => v.apply(&cz_unitary(), &[*qubit, qubit + 1])?,
        };
    }
    Ok(v)
}

/// Dense `⟨Z_j⟩` for every logical qubit.
pub fn logical_z_expectations(lc: &LogicalCircuit, bits: &[bool]) -> Result<Vec<f64>> {
    let v = logical_state(lc, bits)?;
    (0..lc.num_qubits())
        .map(|j| Ok(v.expectation_complex(&PauliString::single(lc.num_qubits(), j, Pauli::Z))?.re))
        .collect()
}

/// Dense `⟨Z⟩` on each measured physical line of a compiled circuit.
pub fn compiled_z_expectations(cc: &CompiledCircuit, bits: &[bool]) -> Result<Vec<f64>> {
    if bits.len() != cc.logical_qubits() {
        return Err(Error::Dimension { expected: cc.logical_qubits(), found: bits.len() });
    }
    let n = cc.physical.num_qubits();
    let v = StateVector::from_product(&encode_input(bits))?.apply_circuit(&cc.physical)?;
    cc.measure_map
        .iter()
        .map(|&line| Ok(v.expectation_complex(&PauliString::single(n, line, Pauli::Z))?.re))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompilationReport {
    pub logical: Vec<f64>,
    pub compiled: Vec<f64>,
    pub max_error: f64,
}

impl CompilationReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_error <= tol
    }
}

/// Compares per-qubit `⟨Z⟩` of the logical and compiled circuits with the
/// dense oracle. Limited by the oracle to three logical qubits.
pub fn verify_compilation(lc: &LogicalCircuit, cc: &CompiledCircuit, bits: &[bool]) -> Result<CompilationReport> {
    let logical = logical_z_expectations(lc, bits)?;
    let compiled = compiled_z_expectations(cc, bits)?;
    let max_error = logical.iter().zip(&compiled).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(CompilationReport { logical, compiled, max_error })
}

/// Relabels the lines of a physical state so virtual line `l` is read from
/// physical line `σ(l)`.
pub fn undo_permutation(v: &StateVector, sigma: &[usize]) -> Result<StateVector> {
    let n = v.num_qubits();
    if sigma.len() != n {
        return Err(Error::Dimension { expected: n, found: sigma.len() });
    }
    let amps = v.amplitudes();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); amps.len()];
    for (phys, a) in amps.iter().enumerate() {
        let mut virt = 0usize;
        for (l, &s) in sigma.iter().enumerate() {
            if phys >> (n - 1 - s) & 1 == 1 {
                virt |= 1 << (n - 1 - l);
            }
        }
        out[virt] = *a;
    }
    StateVector::from_amplitudes(n, out)
}

/// Weight of a virtual-line state outside `span{|0000⟩, |1001⟩}^{⊗m}`.
pub fn code_space_leakage(v: &StateVector) -> f64 {
    let n = v.num_qubits();
    let m = n / BLOCK;
    v.amplitudes()
        .iter()
        .enumerate()
        .filter(|(b, _)| {
            (0..m).any(|q| {
                let nib = (b >> (n - BLOCK * (q + 1))) & 0xF;
                nib != 0b0000 && nib != 0b1001
            })
        })
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Largest code-space leakage over every gate prefix of every op prefix.
pub fn max_prefix_leakage(lc: &LogicalCircuit, bits: &[bool]) -> Result<f64> {
    let mut worst = 0.0f64;
    let input = StateVector::from_product(&encode_input(bits))?;
    for len in 0..=lc.ops().len() {
        let cc = compile(&lc.prefix(len))?;
        let v = undo_permutation(&input.apply_circuit(&cc.physical)?, &cc.permutation)?;
        worst = worst.max(code_space_leakage(&v));
    }
    Ok(worst)
}
