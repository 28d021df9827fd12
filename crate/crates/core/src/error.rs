use thiserror::Error;

use crate::state::QubitLabel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("{op}: entry count {len} does not match {rows}x{cols}")]
    BadLength {
        op: &'static str,
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: matrix must be square, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },
    #[error("{op}: dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { op: &'static str, dim: usize, max: usize },
    #[error("matrix is not Hermitian: |a[{row},{col}] - conj(a[{col},{row}])| = {asymmetry:e} exceeds {tol:e}")]
    NotHermitian {
        asymmetry: f64,
        row: usize,
        col: usize,
        tol: f64,
    },
    #[error("density matrix is not positive semidefinite: eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("weight {weight} outside (0, 1]")]
    InvalidWeight { weight: f64 },
    #[error("trace {trace} does not match declared weight {weight}")]
    TraceMismatch { trace: f64, weight: f64 },
    #[error("alpha^2 + beta^2 + gamma^2 = {norm_sq}, normalize the W parameters so the sum is 1")]
    NotNormalized { norm_sq: f64 },
    #[error("W parameter {name} = {value} is not a finite real number")]
    NonFiniteParameter { name: &'static str, value: f64 },
    #[error("cloning machine requires x^2 + y^2 > 1e-18, got x = {x}, y = {y}")]
    InvalidMachine { x: f64, y: f64 },
    #[error("{expected} amplitudes required for {qubits} qubits, got {found}")]
    AmplitudeCount {
        qubits: usize,
        expected: usize,
        found: usize,
    },
    #[error("label {0} appears more than once")]
    DuplicateLabel(QubitLabel),
    #[error("label {0} is not present")]
    UnknownLabel(QubitLabel),
    #[error("label {0} is already present")]
    LabelCollision(QubitLabel),
    #[error("label order is not a permutation of the existing labels")]
    NotAPermutation,
    #[error("label sets differ")]
    LabelMismatch,
    #[error("cannot keep an empty set of qubits")]
    EmptySelection,
    #[error("expected {expected} qubits, found {found}")]
    WrongQubitCount { expected: usize, found: usize },
    #[error("state lacks machine register {0}")]
    MissingMachine(QubitLabel),
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(&'static str),
    #[error("branch {0} has negligible probability and carries no state")]
    NegligibleBranch(String),
    #[error("cannot parse outcome {0:?}, expected three letters from {{U, D}}")]
    BadOutcome(String),
}

pub type Result<T> = std::result::Result<T, Error>;
