// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Polynomial transformations of block-encodings and Hamiltonian simulation.

pub mod bessel;
pub mod chebyshev;
mod circuit;
pub mod phases;
mod simulate;

pub use circuit::{complex_poly, pet_transform, qsvt_multiplexed, qsvt_real, reflection_phases};
pub use phases::{solve_phases, solve_scaled, Parity, PhaseCache, PhaseSequence, Target};
pub use simulate::{
    amplification_scale, hamiltonian_simulation, hamiltonian_simulation_with, plan, SimulationOptions, SimulationPlan,
};

/// Truncation bound `1.07/√g · (e·αt/(2g))^g`.
pub fn truncation_bound(alpha_t: f64, g: usize) -> f64 {
    let g = g as f64;
    1.07 / g.sqrt() * (std::f64::consts::E * alpha_t / (2.0 * g)).powf(g)
}

/// Smallest `g ≥ 1` with `truncation_bound(αt, g) ≤ ε`.
pub fn truncation_degree(alpha_t: f64, epsilon: f64) -> usize {
    assert!(alpha_t >= 0.0 && epsilon > 0.0 && epsilon < 1.0, "truncation_degree: αt={alpha_t}, ε={epsilon}");
    let mut g = 1;
    while truncation_bound(alpha_t, g) > epsilon {
        g += 1;
    }
    g
}
