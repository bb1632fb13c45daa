// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite-difference discretization: stencils from moment conditions, ghost
//! point elimination at the boundaries, and homogenization of `u' = Au + v`.

mod assemble;
mod stencil;

pub use assemble::{
    assemble_system, assemble_term, dirichlet_assembly_check, homogenize, BandedProfile, DiscretizedSystem,
    HomogenizationMode, TermAssembly,
};
pub use stencil::{build_stencil, StencilChoice, StencilKind, StencilSpec};
