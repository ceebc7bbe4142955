//! Matchgate circuits: Pauli and Clifford-algebra primitives, the
//! polynomial-time Gaussian simulator, a compiler from nearest-neighbour
//! qubit circuits to matchgates, a decomposer from `SO(2n)` rotations to
//! gate lists, and Clifford intertwiners that transport simulation to
//! other generator sets.
//!
//! Qubit lines are 0-indexed. The Jordan-Wigner generators are
//! `c_{2k} = Z⋯Z X_k` and `c_{2k+1} = Z⋯Z Y_k`. In dense matrices line 0 is
//! the most significant bit of the amplitude index.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod compiler;
pub mod decompose;
pub mod dense;
pub mod error;
pub mod gate;
pub mod gaussian;
pub mod intertwine;
pub mod linalg;
pub mod pauli;
#[cfg(feature = "random")]
pub mod random;

pub use algebra::{decompose_pauli, jordan_wigner, verify_rep, GeneratorRep, MonomialDecomposition};
pub use error::{Error, Result};
pub use gate::{validate_circuit, Circuit, LinePolicy, Mat2, MatchGate};
pub use gaussian::{
    circuit_to_rotation, expectation_pauli, expectation_z, gate_to_rotation, hamiltonian_to_rotation,
    QuadraticHamiltonian, Rotation,
};
pub use pauli::{Pauli, PauliString, Phase, ProductState};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
