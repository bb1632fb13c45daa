// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Compile linear PDEs with Robin boundary conditions into explicit
//! block-encoding and QSVT circuits, simulate them on a state vector, and
//! compare the recovered solution with classical finite-difference references.
//!
//! Conventions used everywhere:
//! - qubit 0 is the least significant bit of a basis index;
//! - in `A ⊗ B`, `A` acts on the more significant register;
//! - time evolution is `dψ/dt = iHψ`, i.e. the propagator is `e^{iHt}`.

pub mod circuit;
pub mod classical;
pub mod discretize;
pub mod encoder;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracles;
pub mod pipeline;
pub mod qsvt;
pub mod schrodinger;
pub mod sim;
pub mod sparse;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Dense complex matrix used by oracles and reference paths.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

pub use circuit::{Circuit, Control, GateOp, RegisterRole, ResourceCount};
pub use discretize::{BandedProfile, DiscretizedSystem, HomogenizationMode, StencilKind, StencilSpec};
pub use model::{
    BoundaryCondition, Coeff, InitialCondition, PdeProblem1D, PdeProblemMultiD, PdeTerm1D,
    PiecewisePolynomial, RobinBoundary, SeparableFunctionSpec,
};
pub use oracles::BlockEncodingHandle;
pub use qsvt::{PhaseSequence, SimulationPlan};
pub use schrodinger::{HamiltonianSpec, RecoveryStrategy, XiGrid};
pub use sim::StateVector;
pub use sparse::SparseMatrix;
