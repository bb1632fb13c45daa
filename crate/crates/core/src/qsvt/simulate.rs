// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! `e^{±iHt}` from a block-encoding of `H`: cos and sin QSVT sequences
//! share their calls, combine as `cos + i·sin` at scale `2 sin(π/18)`, and
//! one round of oblivious amplitude amplification lifts the block to
//! `e^{iHt}/2`.

use std::f64::consts::PI;

use super::phases::{simulation_target, solve_scaled, PhaseCache, PhaseSequence, Target};
use super::{chebyshev, qsvt_multiplexed, truncation_degree};
use crate::circuit::{Control, GateOp, U2};
use crate::oracles::{BlockEncodingHandle, HandleBuilder};
use crate::{Result, C64};

/// Polynomial scale chosen so one amplification round reaches exactly 1/2.
pub fn amplification_scale() -> f64 {
    2.0 * (PI / 18.0).sin()
}

#[derive(Clone, Debug)]
pub struct SimulationOptions {
    /// `+1` builds `e^{iHt}`, `-1` builds `e^{-iHt}`.
    pub sign: f64,
    pub phase_tol: f64,
    pub cache: Option<PhaseCache>,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self { sign: 1.0, phase_tol: 1e-12, cache: None }
    }
}

#[derive(Clone, Debug)]
pub struct SimulationPlan {
    pub alpha_t: f64,
    pub epsilon: f64,
    /// Truncation degree from the closed-form bound.
    pub bound_degree: usize,
    /// Degree actually used, raised until the measured truncation error fits.
    pub degree: usize,
    pub truncation_error: f64,
    pub cos: PhaseSequence,
    pub sin: PhaseSequence,
    /// Flag qubits added on top of the input handle's.
    pub extra_ancillas: usize,
}

impl SimulationPlan {
    /// Calls to the input handle or its adjoint in one QSVT pass.
    pub fn calls_per_pass(&self) -> usize {
        self.degree
    }

    /// Calls in the amplified circuit (three passes).
    pub fn total_calls(&self) -> usize {
        3 * self.degree
    }
}

/// Max of `|C(x) − cos τx| + |S(x) − sin τx|` on a dense grid.
fn measured_truncation(tau: f64, g: usize) -> f64 {
    let c = simulation_target(Target::Cos, tau, g & !1, 1.0);
    let s = simulation_target(Target::Sin, tau, if g % 2 == 1 { g } else { g.saturating_sub(1).max(1) }, 1.0);
    let pts = 4096.max(8 * g);
    (0..=pts)
        .map(|k| {
            let x = (PI * k as f64 / pts as f64).cos();
            (chebyshev::eval(&c, x) - (tau * x).cos()).abs() + (chebyshev::eval(&s, x) - (tau * x).sin()).abs()
        })
        .fold(0.0, f64::max)
}

/// Degree selection and phase solving for `αt` and `ε`.
pub fn plan(alpha_t: f64, epsilon: f64, options: &SimulationOptions) -> Result<SimulationPlan> {
    let bound_degree = truncation_degree(alpha_t, epsilon);
    let mut g = bound_degree.max(1);
    let mut err = measured_truncation(alpha_t, g);
    while err > epsilon / 4.0 {
        g += 1;
        err = measured_truncation(alpha_t, g);
    }
    let scale = amplification_scale();
    let cos_deg = g & !1;
    let sin_deg = if g % 2 == 1 { g } else { g - 1 };
    let cache = options.cache.as_ref();
    let cos = solve_scaled(Target::Cos, alpha_t, cos_deg, options.phase_tol, scale, cache)?;
    let sin = solve_scaled(Target::Sin, alpha_t, sin_deg, options.phase_tol, scale, cache)?;
    log::info!("simulation plan: αt={alpha_t:.6}, ε={epsilon:.1e}, bound g={bound_degree}, used g={g}");
    Ok(SimulationPlan { alpha_t, epsilon, bound_degree, degree: g, truncation_error: err, cos, sin, extra_ancillas: 2 })
}

pub fn hamiltonian_simulation(h: &BlockEncodingHandle, t: f64, epsilon: f64) -> Result<BlockEncodingHandle> {
    Ok(hamiltonian_simulation_with(h, t, epsilon, &SimulationOptions::default())?.0)
}

/// Encoding of `e^{±iHt}` with `α = 2`, plus the plan used.
pub fn hamiltonian_simulation_with(
    h: &BlockEncodingHandle,
    t: f64,
    epsilon: f64,
    options: &SimulationOptions,
) -> Result<(BlockEncodingHandle, SimulationPlan)> {
    let p = plan(h.alpha * t.abs(), epsilon, options)?;
    let sign = options.sign * t.signum();
    let weights = [C64::new(1.0, 0.0), C64::new(0.0, if sign < 0.0 { -1.0 } else { 1.0 })];
    let seqs = [p.cos.clone(), p.sin.clone()];
    let pass = qsvt_multiplexed(h, &seqs, &weights, "e^{iHt}-pass")?;

    // −V R V† R V with R = I − 2Π over all flags.
    let mut b = HandleBuilder::new(&pass.data_registers());
    let flags = b.flag("sim-flags", crate::RegisterRole::Flag, pass.n_flag()).qubits();
    let pure = b.pure("pure", pass.n_pure()).qubits();
    let data = pass.data_qubits();
    let reflect = |c: &mut crate::Circuit| {
        let controls: Vec<Control> = flags[1..].iter().map(|&q| Control::off(q)).collect();
        c.mc(controls, flags[0], U2::diag(C64::new(-1.0, 0.0), C64::new(1.0, 0.0)));
    };
    let pass_dag = pass.adjoint();
    b.embed(&pass, &data, &flags, &pure, &[])?;
    reflect(&mut b.circuit);
    b.embed(&pass_dag, &data, &flags, &pure, &[])?;
    reflect(&mut b.circuit);
    b.embed(&pass, &data, &flags, &pure, &[])?;
    b.circuit.push(GateOp::OneQubit { target: data[0], u: U2::global(PI) });
    let out = b.finish(2.0, h.dim, "e^{iHt}")?.with_epsilon(epsilon);
    Ok((out, p))
}
