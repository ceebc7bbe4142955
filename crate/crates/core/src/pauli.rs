//! Phase-exact Pauli strings in binary symplectic form, and product states.
//!
//! A string is stored as `i^k · σ(x_0,z_0) ⊗ … ⊗ σ(x_{n-1},z_{n-1})` where
//! `σ(0,0)=I`, `σ(1,0)=X`, `σ(0,1)=Z`, `σ(1,1)=Y`. With this encoding every
//! letter is Hermitian, so a string is Hermitian exactly when `k` is even.
//! Line 0 is the leftmost letter of the textual form.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

/// A power of `i`, stored as the exponent modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub const fn from_exponent(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub const fn exponent(self) -> u8 {
        self.0
    }

    #[must_use]
    pub const fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    #[must_use]
    pub const fn neg(self) -> Phase {
        Phase((self.0 + 2) % 4)
    }

    #[must_use]
    pub const fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub const fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    fn prefix(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }
}

/// Single-line Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub const fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub const fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// `⟨ξ|σ|ξ⟩` by the closed-form 2×2 sandwich.
    pub fn expectation(self, xi: &[Complex64; 2]) -> Complex64 {
        let [a, b] = *xi;
        match self {
            Pauli::I => Complex64::new(a.norm_sqr() + b.norm_sqr(), 0.0),
            Pauli::X => Complex64::new(2.0 * (a.conj() * b).re, 0.0),
            Pauli::Y => Complex64::new(2.0 * (a.conj() * b).im, 0.0),
            Pauli::Z => Complex64::new(a.norm_sqr() - b.norm_sqr(), 0.0),
        }
    }
}

pub(crate) const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Phase-tracked n-qubit Pauli operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString { n, x: vec![0; w], z: vec![0; w], phase: Phase::ONE }
    }

    pub fn from_letters(letters: &[Pauli], phase: Phase) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (line, &l) in letters.iter().enumerate() {
            p.set(line, l);
        }
        p.phase = phase;
        p
    }

    /// Single letter `l` on `line`, identity elsewhere.
    pub fn single(n: usize, line: usize, l: Pauli) -> Self {
        let mut p = PauliString::identity(n);
        p.set(line, l);
        p
    }

    /// Builds a string from `(line, letter)` pairs; unspecified lines are `I`.
    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)], phase: Phase) -> Self {
        let mut p = PauliString::identity(n);
        for &(line, l) in terms {
            p.set(line, l);
        }
        p.phase = phase;
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    #[must_use]
    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn get(&self, line: usize) -> Pauli {
        assert!(line < self.n, "line {line} out of range for {} qubits", self.n);
        let (w, b) = (line / 64, line % 64);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, line: usize, l: Pauli) {
        assert!(line < self.n, "line {line} out of range for {} qubits", self.n);
        let (w, b) = (line / 64, line % 64);
        let (xb, zb) = l.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | (u64::from(xb) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | (u64::from(zb) << b);
    }

    pub fn letters(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(|l| self.get(l))
    }

    /// Lines carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&l| self.get(l) != Pauli::I).collect()
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Same letters, ignoring the phase.
    pub fn same_letters(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    #[must_use]
    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.phase = p.phase.neg();
        p
    }

    #[must_use]
    pub fn adjoint(&self) -> Self {
        let mut p = self.clone();
        p.phase = p.phase.conj();
        p
    }

    /// Exact operator product `self · other`.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        check_dim(self.n, other.n)?;
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// `self ← self · other`; sizes must already agree.
    pub(crate) fn mul_assign_right(&mut self, other: &PauliString) {
        let k = mul_words_into(&mut self.x, &mut self.z, &other.x, &other.z);
        self.phase = self.phase.mul(other.phase).mul(Phase::from_exponent(k));
    }

    /// True iff the operators commute.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        check_dim(self.n, other.n)?;
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        Ok(parity == 0)
    }

    /// `⟨ψ|P|ψ⟩` for a product state.
    pub fn expectation(&self, s: &ProductState) -> Result<Complex64> {
        check_dim(self.n, s.num_qubits())?;
        let mut acc = self.phase.to_complex();
        for (line, xi) in s.factors().iter().enumerate() {
            let l = self.get(line);
            if l != Pauli::I {
                acc *= l.expectation(xi);
            }
        }
        Ok(acc)
    }
}

/// Multiplies the letter part `(x1,z1) ← (x1,z1)·(x2,z2)` in place and
/// returns the extra power of `i` produced.
///
/// With `σ(x,z) = i^{xz} X^x Z^z` the product on one line picks up
/// `x1 z1 + x2 z2 + 2 z1 x2 − x3 z3`.
pub(crate) fn mul_words_into(x1: &mut [u64], z1: &mut [u64], x2: &[u64], z2: &[u64]) -> u32 {
    let mut k: i64 = 0;
    for w in 0..x1.len() {
        let (a, b, c, d) = (x1[w], z1[w], x2[w], z2[w]);
        let (x3, z3) = (a ^ c, b ^ d);
        k += i64::from((a & b).count_ones()) + i64::from((c & d).count_ones())
            + 2 * i64::from((b & c).count_ones())
            - i64::from((x3 & z3).count_ones());
        x1[w] = x3;
        z1[w] = z3;
    }
    k.rem_euclid(4) as u32
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.phase.prefix())?;
        for l in self.letters() {
            write!(f, "{}", l.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts `"+i XZY"`, `"-ZZ"`, `"XIY"` (implicit `+`), with optional space.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else {
            (Phase::ONE, s)
        };
        let letters = rest
            .trim_start()
            .chars()
            .map(|c| {
                Pauli::from_letter(c).ok_or_else(|| {
                    let mut msg = String::from("invalid Pauli letter '");
                    msg.push(c);
                    msg.push('\'');
                    Error::Domain(msg)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Domain("empty Pauli string".into()));
        }
        Ok(PauliString::from_letters(&letters, phase))
    }
}

/// Tolerance on the norm of each product-state factor.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// Unentangled input state `|ξ_0⟩ ⊗ … ⊗ |ξ_{n-1}⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<[Complex64; 2]>,
}

impl ProductState {
    /// Validates that every factor is unit-norm within [`STATE_NORM_TOL`].
    pub fn new(factors: Vec<[Complex64; 2]>) -> Result<Self> {
        for (line, xi) in factors.iter().enumerate() {
            let norm = libm::sqrt(xi[0].norm_sqr() + xi[1].norm_sqr());
            if (norm - 1.0).abs() > STATE_NORM_TOL {
                return Err(Error::Validation(alloc::format!(
                    "factor on line {line} has norm {norm}"
                )));
            }
        }
        Ok(ProductState { factors })
    }

    /// Normalizes each factor; rejects zero vectors.
    pub fn normalized(factors: Vec<[Complex64; 2]>) -> Result<Self> {
        let mut out = Vec::with_capacity(factors.len());
        for (line, xi) in factors.into_iter().enumerate() {
            let norm = libm::sqrt(xi[0].norm_sqr() + xi[1].norm_sqr());
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::Validation(alloc::format!("factor on line {line} is zero")));
            }
            out.push([xi[0] / norm, xi[1] / norm]);
        }
        Ok(ProductState { factors: out })
    }

    /// `|0…0⟩`.
    pub fn zeros(n: usize) -> Self {
        let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        ProductState { factors: vec![zero; n] }
    }

    /// Computational basis state; `bits[l]` is the value on line `l`.
    pub fn basis(bits: &[bool]) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let factors = bits.iter().map(|&b| if b { [zero, one] } else { [one, zero] }).collect();
        ProductState { factors }
    }

    pub fn num_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[[Complex64; 2]] {
        &self.factors
    }

    /// Per-line table `[⟨I⟩, ⟨X⟩, ⟨Y⟩, ⟨Z⟩]`, indexed by `x + 2z` bits.
    pub(crate) fn letter_table(&self) -> Vec<[Complex64; 4]> {
        self.factors
            .iter()
            .map(|xi| {
                [
                    Pauli::I.expectation(xi),
                    Pauli::X.expectation(xi),
                    Pauli::Z.expectation(xi),
                    Pauli::Y.expectation(xi),
                ]
            })
            .collect()
    }
}
