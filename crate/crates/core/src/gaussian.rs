//! Gaussian gates as `SO(2n)` rotations and polynomial-time expectation values.
//!
//! For a unitary `U`, the rotation `R` is defined by
//! `U† c_μ U = Σ_ν R_{μν} c_ν`. A circuit applying `U_1` then `U_2` has
//! rotation `R_2 · R_1`.
//!
//! Chirality: for `U = e^{iH}` with `H = i Σ h_{μν} c_μ c_ν` this definition
//! gives `R = e^{-4h} = (e^{4h})ᵀ`; `e^{4h}` itself describes `U c_μ U†`.
//! [`hamiltonian_to_rotation`] returns the former so that it agrees with
//! [`gate_to_rotation`] and [`circuit_to_rotation`] on the same unitary.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{decompose_pauli, jordan_wigner, weighted_monomial_sum, GeneratorRep};
use crate::dense::{pauli_matrix, CMatrix};
use crate::error::{check_dim, Error, Result};
use crate::gate::{validate_circuit, Circuit, LinePolicy, MatchGate};
use crate::linalg::{expm, frobenius, orthogonality_error};
use crate::pauli::{PauliString, ProductState};

/// Orthogonality and determinant tolerance for [`Rotation`].
pub const ROTATION_TOL: f64 = 1e-9;
/// Largest Frobenius residual accepted when projecting `U†γU` onto the generators.
pub const GAUSSIAN_RESIDUAL_TOL: f64 = 1e-9;
/// Largest imaginary part tolerated in `⟨Z_k⟩` before it is reported real.
pub const Z_IMAG_TOL: f64 = 1e-9;
/// Imaginary-part tolerance for higher-degree observables, whose sums are longer.
pub const PAULI_IMAG_TOL: f64 = 1e-7;

/// A real `2n × 2n` orthogonal matrix with determinant +1.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    n: usize,
    r: DMatrix<f64>,
}

impl Rotation {
    pub fn identity(n: usize) -> Rotation {
        Rotation { n, r: DMatrix::identity(2 * n, 2 * n) }
    }

    /// Checks `‖RᵀR − I‖_F ≤ 1e-9` and `|det R − 1| ≤ 1e-9`.
    pub fn new(r: DMatrix<f64>) -> Result<Rotation> {
        if !r.is_square() || !r.nrows().is_multiple_of(2) {
            return Err(Error::Validation("rotation must be square of even size".into()));
        }
        let ortho = orthogonality_error(&r);
        if ortho > ROTATION_TOL {
            return Err(Error::Validation(alloc::format!(
                "matrix is not orthogonal (error {ortho:.3e})"
            )));
        }
        let det = r.clone().determinant();
        if (det - 1.0).abs() > ROTATION_TOL {
            return Err(Error::Validation(alloc::format!("determinant is {det}, not +1")));
        }
        Ok(Rotation { n: r.nrows() / 2, r })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.r
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.r
    }

    pub fn orthogonality_error(&self) -> f64 {
        orthogonality_error(&self.r)
    }

    pub fn determinant(&self) -> f64 {
        self.r.clone().determinant()
    }

    /// `self · other`.
    pub fn compose(&self, other: &Rotation) -> Result<Rotation> {
        check_dim(self.n, other.n)?;
        Ok(Rotation { n: self.n, r: &self.r * &other.r })
    }

    /// Frobenius distance to another rotation.
    pub fn distance(&self, other: &Rotation) -> f64 {
        frobenius(&(&self.r - &other.r))
    }

    /// `self ← E · self` where `E` is `block` embedded at rows/cols `offset..`.
    fn left_multiply_block(&mut self, block: &DMatrix<f64>, offset: usize) {
        let size = block.nrows();
        let rows = self.r.rows(offset, size).clone_owned();
        let updated = block * rows;
        self.r.rows_mut(offset, size).copy_from(&updated);
    }
}

/// `H = i Σ_{μ≠ν} h_{μν} c_μ c_ν` with `h` real antisymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    n: usize,
    h: DMatrix<f64>,
}

impl QuadraticHamiltonian {
    /// Accepts `h` if `‖h + hᵀ‖_max ≤ 1e-12`, then stores `(h − hᵀ)/2`.
    pub fn new(n: usize, h: DMatrix<f64>) -> Result<QuadraticHamiltonian> {
        if h.shape() != (2 * n, 2 * n) {
            return Err(Error::Dimension { expected: 2 * n, found: h.nrows() });
        }
        let asym = (&h + h.transpose()).amax();
        if asym > 1e-12 {
            return Err(Error::Validation(alloc::format!(
                "coefficient matrix is not antisymmetric (deviation {asym:.3e})"
            )));
        }
        Ok(QuadraticHamiltonian::antisymmetrized(n, h))
    }

    /// Keeps only the antisymmetric part of `h`.
    pub fn antisymmetrized(n: usize, h: DMatrix<f64>) -> QuadraticHamiltonian {
        assert_eq!(h.shape(), (2 * n, 2 * n));
        let h = (&h - h.transpose()) * 0.5;
        QuadraticHamiltonian { n, h }
    }

    pub fn zero(n: usize) -> QuadraticHamiltonian {
        QuadraticHamiltonian { n, h: DMatrix::zeros(2 * n, 2 * n) }
    }

    /// Single term: `h_{ab} = value`, `h_{ba} = −value`.
    pub fn plane(n: usize, a: usize, b: usize, value: f64) -> Result<QuadraticHamiltonian> {
        if a == b || a >= 2 * n || b >= 2 * n {
            return Err(Error::Domain(alloc::format!("bad plane ({a}, {b}) for {n} qubits")));
        }
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        h[(a, b)] = value;
        h[(b, a)] = -value;
        Ok(QuadraticHamiltonian { n, h })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.h
    }
}

/// Rotation of `U = e^{iH}`, i.e. `e^{-4h}` (see the module notes on chirality).
pub fn hamiltonian_to_rotation(q: &QuadraticHamiltonian) -> Rotation {
    let r = expm(&(q.coefficients() * -4.0));
    Rotation { n: q.n, r }
}

/// Rotation block of an `m`-line unitary in the local Jordan-Wigner generators.
///
/// `R_{μν} = 2^{-m} Re Tr(U† γ_μ U γ_ν)`; the gate is rejected if reconstructing
/// `U†γ_μU` from the row leaves a Frobenius residual above
/// [`GAUSSIAN_RESIDUAL_TOL`], or if the block has negative determinant.
pub fn local_rotation(u: &CMatrix) -> Result<DMatrix<f64>> {
    let dim = u.nrows();
    if !dim.is_power_of_two() || dim < 2 || u.ncols() != dim {
        return Err(Error::Dimension { expected: dim.next_power_of_two().max(2), found: dim });
    }
    let m = dim.trailing_zeros() as usize;
    let jw = jordan_wigner(m)?;
    let gammas: Vec<CMatrix> = jw.generators().iter().map(pauli_matrix).collect();
    let ud = u.adjoint();
    let scale = 1.0 / dim as f64;
    let mut r = DMatrix::<f64>::zeros(2 * m, 2 * m);
    let mut residual = 0.0f64;
    for (mu, g_mu) in gammas.iter().enumerate() {
        let conj = &ud * g_mu * u;
        let mut recon = CMatrix::zeros(dim, dim);
        for (nu, g_nu) in gammas.iter().enumerate() {
            let tr: Complex64 = (&conj * g_nu).trace();
            r[(mu, nu)] = tr.re * scale;
            recon += g_nu * Complex64::new(r[(mu, nu)], 0.0);
        }
        let res = libm::sqrt((conj - recon).iter().map(Complex64::norm_sqr).sum::<f64>());
        residual = residual.max(res);
    }
    if residual > GAUSSIAN_RESIDUAL_TOL {
        return Err(Error::NonGaussianGate { residual });
    }
    let det = r.clone().determinant();
    if det < 0.0 {
        return Err(Error::NonGaussianGate { residual: (det - 1.0).abs() });
    }
    Ok(r)
}

/// Rotation of a dense unitary acting on the contiguous lines
/// `first_line .. first_line + m` of an `n`-qubit register.
pub fn dense_gate_to_rotation(u: &CMatrix, first_line: usize, n: usize) -> Result<Rotation> {
    let block = local_rotation(u)?;
    let m = block.nrows() / 2;
    if first_line + m > n {
        return Err(Error::Domain(alloc::format!(
            "{m}-line block at line {first_line} does not fit in {n} lines"
        )));
    }
    let mut rot = Rotation::identity(n);
    rot.left_multiply_block(&block, 2 * first_line);
    Ok(rot)
}

fn check_nn_gate(g: &MatchGate) -> Result<()> {
    if !g.is_allowed() {
        return Err(Error::Validation("gate has det A != det B and is not Gaussian".into()));
    }
    if g.distance() != 1 {
        return Err(Error::Validation(alloc::format!(
            "gate on lines {:?} is not nearest-neighbour",
            g.lines()
        )));
    }
    Ok(())
}

/// Rotation of an allowed nearest-neighbour gate embedded in `n` lines.
pub fn gate_to_rotation(g: &MatchGate, n: usize) -> Result<Rotation> {
    check_nn_gate(g)?;
    dense_gate_to_rotation(&g.matrix(), g.lines().0, n)
}

/// `R̃ = R_last ⋯ R_first` for a nearest-neighbour circuit.
pub fn circuit_to_rotation(c: &Circuit) -> Result<Rotation> {
    validate_circuit(c, LinePolicy::NearestNeighbour).into_result()?;
    let mut rot = Rotation::identity(c.num_qubits());
    for g in c.gates() {
        let block = local_rotation(&g.matrix())?;
        rot.left_multiply_block(&block, 2 * g.lines().0);
    }
    Ok(rot)
}

/// `M_{μν} = ⟨s| c_μ c_ν |s⟩`.
pub fn input_moments(rep: &GeneratorRep, s: &ProductState) -> Result<DMatrix<Complex64>> {
    check_dim(rep.num_qubits(), s.num_qubits())?;
    let m = rep.len();
    let mut out = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    for mu in 0..m {
        for nu in 0..m {
            out[(mu, nu)] = rep.generator(mu).mul(rep.generator(nu))?.expectation(s)?;
        }
    }
    Ok(out)
}

/// Output `⟨Z_k⟩` with the outcome probabilities of measuring line `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZExpectation {
    pub value: f64,
    /// Imaginary part of the raw sum; zero up to rounding.
    pub imag: f64,
    pub p0: f64,
    pub p1: f64,
}

impl ZExpectation {
    fn from_raw(raw: Complex64) -> Result<ZExpectation> {
        if raw.im.abs() > Z_IMAG_TOL {
            return Err(Error::Tolerance { what: "imaginary part of <Z>", value: raw.im.abs(), tol: Z_IMAG_TOL });
        }
        if raw.re.abs() > 1.0 + Z_IMAG_TOL {
            return Err(Error::Tolerance { what: "|<Z>| above one", value: raw.re.abs() - 1.0, tol: Z_IMAG_TOL });
        }
        let p0 = ((1.0 + raw.re) / 2.0).clamp(0.0, 1.0);
        Ok(ZExpectation { value: raw.re, imag: raw.im, p0, p1: 1.0 - p0 })
    }
}

/// `⟨Z_k⟩ = −i Σ R̃_{2k,ν₁} R̃_{2k+1,ν₂} M_{ν₁ν₂}` from a precomputed rotation.
pub fn expectation_z_with_rotation(r: &Rotation, s: &ProductState, k: usize) -> Result<ZExpectation> {
    check_dim(r.num_qubits(), s.num_qubits())?;
    if k >= s.num_qubits() {
        return Err(Error::Domain(alloc::format!("line {k} out of range")));
    }
    let jw = jordan_wigner(s.num_qubits())?;
    let moments = input_moments(&jw, s)?;
    let (row_a, row_b) = (r.matrix().row(2 * k), r.matrix().row(2 * k + 1));
    let mut acc = Complex64::new(0.0, 0.0);
    for nu1 in 0..moments.nrows() {
        for nu2 in 0..moments.ncols() {
            acc += moments[(nu1, nu2)] * (row_a[nu1] * row_b[nu2]);
        }
    }
    ZExpectation::from_raw(acc * Complex64::new(0.0, -1.0))
}

/// `⟨Z_k⟩` after a nearest-neighbour circuit acting on a product state.
pub fn expectation_z(c: &Circuit, s: &ProductState, k: usize) -> Result<ZExpectation> {
    check_dim(c.num_qubits(), s.num_qubits())?;
    let r = circuit_to_rotation(c)?;
    expectation_z_with_rotation(&r, s, k)
}

/// Expectation of a Hermitian Pauli observable from a precomputed rotation.
///
/// The observable is written as `phase · c_{μ_1}⋯c_{μ_d}` in `rep`; its
/// evolved value is `phase · Σ ∏_j R̃_{μ_j ν_j} ⟨s|c_{ν_1}⋯c_{ν_d}|s⟩` over
/// all `(2n)^d` tuples, repeats included.
pub fn expectation_pauli_with_rotation(
    r: &Rotation,
    rep: &GeneratorRep,
    target: &PauliString,
    s: &ProductState,
    degree_cap: usize,
) -> Result<f64> {
    check_dim(rep.num_qubits(), r.num_qubits())?;
    check_dim(rep.num_qubits(), s.num_qubits())?;
    if !target.is_hermitian() {
        return Err(Error::Domain("observable must be Hermitian".into()));
    }
    let dec = decompose_pauli(rep, target)?;
    if dec.degree() > degree_cap {
        return Err(Error::DegreeTooHigh { degree: dec.degree(), cap: degree_cap });
    }
    let rows: Vec<Vec<f64>> =
        dec.indices.iter().map(|&mu| r.matrix().row(mu).iter().copied().collect()).collect();
    let weights: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    let raw = dec.phase.to_complex() * weighted_monomial_sum(rep, &weights, s);
    if raw.im.abs() > PAULI_IMAG_TOL {
        return Err(Error::Tolerance { what: "imaginary part of <P>", value: raw.im.abs(), tol: PAULI_IMAG_TOL });
    }
    Ok(raw.re)
}

/// Expectation of `target` after circuit `c`, using generator set `rep`.
///
/// The rotation comes from the Jordan-Wigner analysis of `c`; when `rep`
/// is a conjugated set `T†cT`, this is the value for the conjugated circuit
/// `T†UT`, whose rotation in `rep` is the same matrix.
pub fn expectation_pauli(
    c: &Circuit,
    rep: &GeneratorRep,
    target: &PauliString,
    s: &ProductState,
    degree_cap: usize,
) -> Result<f64> {
    check_dim(c.num_qubits(), rep.num_qubits())?;
    let r = circuit_to_rotation(c)?;
    expectation_pauli_with_rotation(&r, rep, target, s, degree_cap)
}
