use alloc::string::String;
use core::fmt;

/// Errors raised by the algebra, simulation and compilation layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands disagree on qubit count (or a matrix has the wrong shape).
    Dimension { expected: usize, found: usize },
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// A gate, circuit or state failed structural validation.
    Validation(String),
    /// A gate does not conjugate the generators into their linear span.
    NonGaussianGate { residual: f64 },
    /// The observable needs a generator monomial of higher degree than allowed.
    DegreeTooHigh { degree: usize, cap: usize },
    /// A dense computation was refused because `n` exceeds the configured cap.
    Resource { n: usize, cap: usize },
    /// A numerical result violated a tolerance that should hold by construction.
    Tolerance { what: &'static str, value: f64, tol: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::NonGaussianGate { residual } => {
                write!(f, "gate is not Gaussian (residual {residual:.3e})")
            }
            Error::DegreeTooHigh { degree, cap } => {
                write!(f, "observable has degree {degree}, above the cap {cap}")
            }
            Error::Resource { n, cap } => {
                write!(f, "{n} qubits exceeds the dense-oracle cap of {cap}")
            }
            Error::Tolerance { what, value, tol } => {
                write!(f, "{what}: {value:.3e} exceeds tolerance {tol:.1e}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
