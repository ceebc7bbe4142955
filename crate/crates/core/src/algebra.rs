//! Generator sets of the Clifford algebra on `2n` generators, realized as
//! Pauli strings.
//!
//! Generators are stored 0-indexed: `c_0 … c_{2n-1}`. In the Jordan-Wigner
//! set, `c_{2k}` and `c_{2k+1}` belong to line `k`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::pauli::{mul_words_into, words_for, Pauli, PauliString, Phase, ProductState};

/// An ordered set of `2n` Pauli strings meant to satisfy `{c_μ, c_ν} = 2δ_{μν}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRep {
    n: usize,
    generators: Vec<PauliString>,
}

/// Why a candidate generator set is not a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepViolation {
    /// Wrong number of generators, or a generator on the wrong number of qubits.
    Shape,
    /// Generator `μ` is not Hermitian.
    NotHermitian(usize),
    /// Generators `μ < ν` (or `μ = ν` if equal strings) fail to anticommute.
    Commuting(usize, usize),
    /// The symplectic vectors are linearly dependent over GF(2).
    Dependent,
}

/// Outcome of [`verify_rep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepReport {
    pub violation: Option<RepViolation>,
}

impl RepReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl GeneratorRep {
    /// Wraps `generators` without checking the algebra relations; see [`verify_rep`].
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        check_dim(2 * n, generators.len())?;
        for g in &generators {
            check_dim(n, g.num_qubits())?;
        }
        Ok(GeneratorRep { n, generators })
    }

    /// Like [`GeneratorRep::new`] but rejects sets that fail [`verify_rep`].
    pub fn checked(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        let rep = GeneratorRep::new(n, generators)?;
        match verify_rep(&rep).violation {
            None => Ok(rep),
            Some(v) => Err(Error::Validation(alloc::format!("invalid generator set: {v:?}"))),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn generator(&self, mu: usize) -> &PauliString {
        &self.generators[mu]
    }

    /// Ordered product `c_{ν_1} ⋯ c_{ν_d}`; the empty product is the identity.
    pub fn monomial(&self, indices: &[usize]) -> Result<PauliString> {
        let mut acc = PauliString::identity(self.n);
        for &mu in indices {
            let g = self.generators.get(mu).ok_or_else(|| {
                Error::Domain(alloc::format!(
                    "generator index {mu} out of range 0..{}",
                    self.generators.len()
                ))
            })?;
            acc.mul_assign_right(g);
        }
        Ok(acc)
    }
}

/// Jordan-Wigner generators: `c_{2k} = Z…Z X I…`, `c_{2k+1} = Z…Z Y I…`
/// with the `X`/`Y` on line `k`.
pub fn jordan_wigner(n: usize) -> Result<GeneratorRep> {
    if n == 0 {
        return Err(Error::Domain("Jordan-Wigner representation needs n >= 1".into()));
    }
    let mut generators = Vec::with_capacity(2 * n);
    for k in 0..n {
        for last in [Pauli::X, Pauli::Y] {
            let mut p = PauliString::identity(n);
            for j in 0..k {
                p.set(j, Pauli::Z);
            }
            p.set(k, last);
            generators.push(p);
        }
    }
    Ok(GeneratorRep { n, generators })
}

/// Checks Hermiticity, pairwise anticommutation and GF(2) independence.
pub fn verify_rep(rep: &GeneratorRep) -> RepReport {
    let fail = |v| RepReport { violation: Some(v) };
    if rep.generators.len() != 2 * rep.n || rep.generators.iter().any(|g| g.num_qubits() != rep.n)
    {
        return fail(RepViolation::Shape);
    }
    for (mu, g) in rep.generators.iter().enumerate() {
        if !g.is_hermitian() {
            return fail(RepViolation::NotHermitian(mu));
        }
    }
    for mu in 0..rep.generators.len() {
        for nu in mu + 1..rep.generators.len() {
            // sizes agree, checked above
            if rep.generators[mu].commutes(&rep.generators[nu]).unwrap_or(true) {
                return fail(RepViolation::Commuting(mu, nu));
            }
        }
    }
    if Gf2Basis::new(rep).is_none() {
        return fail(RepViolation::Dependent);
    }
    RepReport { violation: None }
}

/// Expectation of `c_{ν_1} ⋯ c_{ν_d}` in a product state.
pub fn monomial_expectation(
    rep: &GeneratorRep,
    indices: &[usize],
    s: &ProductState,
) -> Result<Complex64> {
    check_dim(rep.n, s.num_qubits())?;
    rep.monomial(indices)?.expectation(s)
}

/// `phase · ∏_{μ ∈ indices} c_μ` (ascending order) equals a target string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialDecomposition {
    pub indices: Vec<usize>,
    pub phase: Phase,
}

impl MonomialDecomposition {
    pub fn degree(&self) -> usize {
        self.indices.len()
    }
}

/// Writes `target` as a phased generator monomial.
///
/// The index set is the unique GF(2) solution of `Σ_{μ∈S} v(c_μ) = v(target)`;
/// the phase follows from one exact multiplication.
pub fn decompose_pauli(rep: &GeneratorRep, target: &PauliString) -> Result<MonomialDecomposition> {
    check_dim(rep.n, target.num_qubits())?;
    let basis = Gf2Basis::new(rep)
        .ok_or_else(|| Error::Validation("generator set is linearly dependent".into()))?;
    let indices = basis.solve(target);
    let product = rep.monomial(&indices)?;
    debug_assert!(product.same_letters(target));
    if !product.same_letters(target) {
        return Err(Error::Validation("GF(2) solve did not reproduce the target".into()));
    }
    let phase = target.phase().mul(product.phase().conj());
    Ok(MonomialDecomposition { indices, phase })
}

/// Row-reduced symplectic vectors of a generator set, each tagged with the
/// combination of generators that produced it.
struct Gf2Basis {
    // (pivot bit, vector, combination) in pivot order
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    vec_words: usize,
}

impl Gf2Basis {
    fn symplectic(p: &PauliString) -> Vec<u64> {
        let mut v = Vec::with_capacity(2 * p.x_words().len());
        v.extend_from_slice(p.x_words());
        v.extend_from_slice(p.z_words());
        v
    }

    fn new(rep: &GeneratorRep) -> Option<Gf2Basis> {
        let m = rep.generators.len();
        let combo_words = words_for(m);
        let vec_words = 2 * words_for(rep.n);
        let mut rows: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::with_capacity(m);
        for (mu, g) in rep.generators.iter().enumerate() {
            let mut v = Self::symplectic(g);
            let mut combo = vec![0u64; combo_words];
            combo[mu / 64] |= 1 << (mu % 64);
            for (pivot, rv, rc) in &rows {
                if bit(&v, *pivot) {
                    xor_into(&mut v, rv);
                    xor_into(&mut combo, rc);
                }
            }
            let pivot = first_bit(&v)?;
            // keep the basis fully reduced so `solve` is a single pass
            for (_, rv, rc) in rows.iter_mut() {
                if bit(rv, pivot) {
                    xor_into(rv, &v);
                    xor_into(rc, &combo);
                }
            }
            rows.push((pivot, v, combo));
        }
        Some(Gf2Basis { rows, vec_words })
    }

    fn solve(&self, target: &PauliString) -> Vec<usize> {
        let v = Self::symplectic(target);
        debug_assert_eq!(v.len(), self.vec_words);
        let mut combo = vec![0u64; self.rows.first().map_or(0, |r| r.2.len())];
        for (pivot, _, rc) in &self.rows {
            if bit(&v, *pivot) {
                xor_into(&mut combo, rc);
            }
        }
        (0..combo.len() * 64).filter(|&i| bit(&combo, i)).collect()
    }
}

fn bit(v: &[u64], i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

fn xor_into(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn first_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Sum over all index tuples `(ν_1..ν_d)` of `∏_j w_j[ν_j] · ⟨s| c_{ν_1}⋯c_{ν_d} |s⟩`.
///
/// `weights[j]` holds one coefficient per generator. Tuples are visited in
/// lexicographic order and accumulated sequentially, so the result is
/// bitwise reproducible. Branches whose partial weight is exactly zero are
/// skipped; they contribute nothing.
pub(crate) fn weighted_monomial_sum(
    rep: &GeneratorRep,
    weights: &[&[f64]],
    s: &ProductState,
) -> Complex64 {
    let table = s.letter_table();
    let words = words_for(rep.n);
    let depth = weights.len();
    // one scratch slot per depth, slot 0 is the identity
    let mut xs = vec![vec![0u64; words]; depth + 1];
    let mut zs = vec![vec![0u64; words]; depth + 1];
    let mut phases = vec![0u32; depth + 1];
    let mut coeffs = vec![1.0f64; depth + 1];
    let mut acc = Complex64::new(0.0, 0.0);
    let gens = &rep.generators;

    fn leaf(x: &[u64], z: &[u64], phase: u32, table: &[[Complex64; 4]]) -> Complex64 {
        let mut v = Phase::from_exponent(phase).to_complex();
        for (line, t) in table.iter().enumerate() {
            let (w, b) = (line / 64, line % 64);
            let idx = ((x[w] >> b) & 1) | (((z[w] >> b) & 1) << 1);
            if idx != 0 {
                v *= t[idx as usize];
            }
        }
        v
    }

    if depth == 0 {
        return leaf(&xs[0], &zs[0], 0, &table);
    }

    // iterative DFS over the tuple tree
    let m = gens.len();
    let mut choice = vec![0usize; depth];
    let mut level = 0usize;
    loop {
        if choice[level] == m {
            if level == 0 {
                break;
            }
            choice[level] = 0;
            level -= 1;
            choice[level] += 1;
            continue;
        }
        let nu = choice[level];
        let w = coeffs[level] * weights[level][nu];
        if w == 0.0 {
            choice[level] += 1;
            continue;
        }
        let (lower_x, upper_x) = xs.split_at_mut(level + 1);
        let (lower_z, upper_z) = zs.split_at_mut(level + 1);
        upper_x[0].copy_from_slice(&lower_x[level]);
        upper_z[0].copy_from_slice(&lower_z[level]);
        let g = &gens[nu];
        let k = mul_words_into(&mut upper_x[0], &mut upper_z[0], g.x_words(), g.z_words());
        phases[level + 1] = phases[level] + k + u32::from(g.phase().exponent());
        coeffs[level + 1] = w;
        if level + 1 == depth {
            acc += leaf(&xs[depth], &zs[depth], phases[depth], &table) * w;
            choice[level] += 1;
        } else {
            level += 1;
            choice[level] = 0;
        }
    }
    acc
}
