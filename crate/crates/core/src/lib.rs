//! Simulation of secretly broadcasting a W-type three-qubit state.
//!
//! Each of three parties clones their qubit with a two-parameter local
//! cloner, measures the cloner's machine register, and the surviving
//! six-qubit branches are reduced and tested for separability.
//!
//! Everything numeric is generic over [`Real`]; the `*F64` aliases below
//! are what the command line and the tests use.

pub mod error;
pub mod linalg;
pub mod protocol;
pub mod scalar;
pub mod separability;
pub mod state;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use num_complex::Complex;
pub use protocol::{
    branch_reduced, clone_qubit, enumerate_outcomes, run_protocol, CloningMachine, MachineFlag, Outcome,
    PostSelectedBranch, CANONICAL_ORDER, PARTIES,
};
pub use scalar::Real;
pub use separability::{
    bipartite_cuts, partial_transpose, peres_horodecki, ppt, w_structure, Bipartition, PeresHorodeckiResult, PptResult,
    PptScope, WStructure,
};
pub use state::{density_of, fidelity_pure, w_state, LabeledDensityMatrix, LabeledPureState, QubitLabel, WParams};

pub type ComplexF64 = Complex<f64>;
pub type CMatrixF64 = CMatrix<f64>;
pub type PureStateF64 = LabeledPureState<f64>;
pub type DensityMatrixF64 = LabeledDensityMatrix<f64>;
pub type WParamsF64 = WParams<f64>;
pub type CloningMachineF64 = CloningMachine<f64>;
pub type BranchF64 = PostSelectedBranch<f64>;

pub type CMatrixF32 = CMatrix<f32>;
pub type PureStateF32 = LabeledPureState<f32>;
pub type DensityMatrixF32 = LabeledDensityMatrix<f32>;
