// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! QSVT circuits on a block-encoding handle.
//!
//! Calls alternate `U, U†, U, …` (first in time is `U`) with projector phases
//! `e^{iθ(2Π−I)}` between them, where `Π` projects the handle's flags onto
//! `|0⟩`. A `real` qubit conjugated by Hadamards averages the sequence with
//! its negated-phase twin, which selects the real part of the response.

use std::f64::consts::PI;

use super::chebyshev;
use super::phases::{solve_for_chebyshev, PhaseSequence};
use crate::circuit::{Control, GateOp, RegisterRole, U2};
use crate::linalg::ceil_log2;
use crate::oracles::prep::{diagonal_phases, prepare_real};
use crate::oracles::{lcu_combine, BlockEncodingHandle, HandleBuilder};
use crate::{Error, Result, C64};

/// Projector phases `θ_0 … θ_d` in reflection form for a sequence given in
/// the `W(x)` convention; `θ_d` is applied first in time.
pub fn reflection_phases(seq: &PhaseSequence) -> Vec<f64> {
    let phi = &seq.phases;
    let d = phi.len() - 1;
    if d == 0 {
        return vec![phi[0]];
    }
    let mut theta: Vec<f64> = phi.iter().map(|p| p - PI / 2.0).collect();
    theta[0] = phi[0] - PI / 4.0 + d as f64 * PI / 2.0;
    theta[d] = phi[d] - PI / 4.0;
    theta
}

/// Real-part QSVT of several phase sequences sharing the calls to `u`,
/// combined with complex `weights`: encodes `Σ_j w_j P_j(A/α)` with
/// `α_out = Σ_j |w_j|`.
pub fn qsvt_multiplexed(
    u: &BlockEncodingHandle,
    seqs: &[PhaseSequence],
    weights: &[C64],
    label: &str,
) -> Result<BlockEncodingHandle> {
    if seqs.is_empty() || seqs.len() != weights.len() {
        return Err(Error::Dimension(format!("{} phase sequences with {} weights", seqs.len(), weights.len())));
    }
    let m = seqs.len();
    let depth = seqs.iter().map(PhaseSequence::degree).max().unwrap_or(0);
    let mut b = HandleBuilder::new(&u.data_registers());
    let real = b.flag("qsvt-real", RegisterRole::Flag, 1).qubit(0);
    let select = b.flag("qsvt-select", RegisterRole::Flag, ceil_log2(m)).qubits();
    let flags = b.flag("qsvt-flags", RegisterRole::Flag, u.n_flag()).qubits();
    let pure = b.pure("pure", u.n_pure()).qubits();
    let data = u.data_qubits();
    let u_dag = u.adjoint();

    let total: f64 = weights.iter().map(|w| w.norm()).sum();
    let mut prep = Vec::new();
    if !select.is_empty() {
        let mut amps: Vec<f64> = weights.iter().map(|w| (w.norm() / total).sqrt()).collect();
        amps.resize(1 << select.len(), 0.0);
        prep = prepare_real(&amps, &select)?;
    }
    b.circuit.h(real);
    b.circuit.extend_ops(prep.iter().cloned());
    let mut phases: Vec<f64> = weights.iter().map(|w| w.arg()).collect();
    if phases.iter().any(|p| *p != 0.0) {
        if select.is_empty() {
            b.circuit.push(GateOp::OneQubit { target: data[0], u: U2::global(phases[0]) });
        } else {
            phases.resize(1 << select.len(), 0.0);
            b.circuit.extend_ops(diagonal_phases(&phases, &select)?);
        }
    }

    // Sequence j occupies slots pad_j ..= pad_j + d_j; an odd deficit skips the last call.
    let thetas: Vec<Vec<f64>> = seqs.iter().map(reflection_phases).collect();
    let pads: Vec<usize> = seqs.iter().map(|s| (depth - s.degree()) & !1).collect();
    let skip_last: Vec<bool> = seqs.iter().map(|s| (depth - s.degree()) % 2 == 1).collect();
    let off_flags: Vec<Control> = flags.iter().map(|&q| Control::off(q)).collect();
    for slot in 0..=depth {
        for j in 0..m {
            let d = seqs[j].degree();
            if slot < pads[j] || slot > pads[j] + d {
                continue;
            }
            let theta = thetas[j][d - (slot - pads[j])];
            if theta == 0.0 {
                continue;
            }
            let sel = Control::pattern(&select, j as u64);
            let mut on_pi = sel.clone();
            on_pi.extend_from_slice(&off_flags);
            let two = U2::diag(C64::from_polar(1.0, 2.0 * theta), C64::from_polar(1.0, -2.0 * theta));
            b.circuit.mc(on_pi, real, two);
            b.circuit.mc(sel, real, U2::rz(2.0 * theta));
        }
        if slot == depth {
            break;
        }
        let call = if slot % 2 == 0 { u } else { &u_dag };
        if slot + 1 == depth && skip_last.iter().any(|&s| s) {
            for j in (0..m).filter(|&j| !skip_last[j]) {
                b.embed(call, &data, &flags, &pure, &Control::pattern(&select, j as u64))?;
            }
        } else {
            b.embed(call, &data, &flags, &pure, &[])?;
        }
    }

    b.circuit.extend_ops(prep.iter().rev().map(GateOp::adjoint));
    b.circuit.h(real);
    b.finish(total, u.dim, label)
}

/// Encoding of `Re P(A/α)` for one phase sequence, `α_out = 1`.
pub fn qsvt_real(u: &BlockEncodingHandle, seq: &PhaseSequence) -> Result<BlockEncodingHandle> {
    qsvt_multiplexed(u, std::slice::from_ref(seq), &[C64::new(1.0, 0.0)], &format!("qsvt[{}]", seq.target))
}

/// Encoding of `P(A/α)` for a real Chebyshev series with `|P| ≤ 1/2` on
/// `[-1, 1]`. Definite parity gives `α_out = 1`; mixed parity is the sum of
/// its even and odd parts with `α_out = 2`.
pub fn pet_transform(u: &BlockEncodingHandle, coeffs: &[f64], tol: f64) -> Result<BlockEncodingHandle> {
    let coeffs = chebyshev::trim(coeffs.to_vec());
    let sup = chebyshev::sup_norm(&coeffs);
    if sup > 0.5 + 1e-9 {
        return Err(Error::Domain(format!("polynomial sup-norm {sup:.6} exceeds 1/2")));
    }
    if chebyshev::parity(&coeffs).is_some() {
        let seq = solve_for_chebyshev(&coeffs, tol, "pet")?;
        return qsvt_real(u, &seq);
    }
    let (even, odd) = chebyshev::split_parity(&coeffs);
    let se = solve_for_chebyshev(&even, tol, "pet-even")?;
    let so = solve_for_chebyshev(&odd, tol, "pet-odd")?;
    qsvt_multiplexed(u, &[se, so], &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)], "pet")
}

/// Encoding of a complex polynomial `Σ_k c_k T_k(A/α)` split into real and
/// imaginary parts of each parity, each normalized to sup-norm 1/2.
pub fn complex_poly(
    u: &BlockEncodingHandle,
    re: &[f64],
    im: &[f64],
    tol: f64,
    label: &str,
) -> Result<BlockEncodingHandle> {
    let mut handles = Vec::new();
    let mut weights = Vec::new();
    for (part, unit) in [(re, C64::new(1.0, 0.0)), (im, C64::new(0.0, 1.0))] {
        let (even, odd) = chebyshev::split_parity(part);
        for p in [even, odd] {
            let p = chebyshev::trim(p);
            let sup = chebyshev::sup_norm(&p);
            if sup < 1e-15 {
                continue;
            }
            let seq = solve_for_chebyshev(&chebyshev::scale(&p, 0.5 / sup), tol, label)?;
            handles.push(qsvt_real(u, &seq)?);
            weights.push(unit * (2.0 * sup));
        }
    }
    if handles.is_empty() {
        return crate::oracles::zero(&u.data_registers(), u.dim);
    }
    Ok(lcu_combine(&handles, &weights)?.with_label(label))
}
