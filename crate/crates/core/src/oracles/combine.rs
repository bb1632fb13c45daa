// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use super::prep::{diagonal_phases, prepare_real};
use super::{BlockEncodingHandle, HandleBuilder};
use crate::circuit::{Control, GateOp, Register, RegisterRole, U2};
use crate::linalg::ceil_log2;
use crate::{Error, Result, C64};

fn check_same_shape(handles: &[&BlockEncodingHandle]) -> Result<()> {
    let first = handles[0];
    for h in &handles[1..] {
        if h.dim != first.dim || h.n_data() != first.n_data() {
            return Err(Error::Dimension(format!(
                "{} ({} on {} qubits) vs {} ({} on {} qubits)",
                first.label,
                first.dim,
                first.n_data(),
                h.label,
                h.dim,
                h.n_data()
            )));
        }
    }
    Ok(())
}

/// Encoding of `Σ_k w_k A_k` with `α = Σ_k |w_k| α_k`.
pub fn lcu_combine(handles: &[BlockEncodingHandle], weights: &[C64]) -> Result<BlockEncodingHandle> {
    if handles.is_empty() || handles.len() != weights.len() {
        return Err(Error::Dimension(format!("{} handles with {} weights", handles.len(), weights.len())));
    }
    if weights.iter().any(|w| w.norm() == 0.0 || !w.norm().is_finite()) {
        return Err(Error::Domain("LCU weights must be nonzero and finite".into()));
    }
    check_same_shape(&handles.iter().collect::<Vec<_>>())?;
    let m = handles.len();
    let sel_bits = ceil_log2(m);
    let n_flag = handles.iter().map(|h| h.n_flag()).max().unwrap_or(0);
    let n_pure = handles.iter().map(|h| h.n_pure()).max().unwrap_or(0);
    let mut b = HandleBuilder::new(&handles[0].data_registers());
    let select = b.flag("lcu-select", RegisterRole::Flag, sel_bits);
    let flags = b.flag("lcu-flags", RegisterRole::Flag, n_flag);
    let pure = b.pure("pure", n_pure);
    let data = handles[0].data_qubits();
    let scaled: Vec<f64> = handles.iter().zip(weights).map(|(h, w)| w.norm() * h.alpha).collect();
    let total: f64 = scaled.iter().sum();
    let phases: Vec<f64> = weights.iter().map(|w| w.arg()).collect();

    let mut prep = Vec::new();
    if sel_bits > 0 {
        let mut amps: Vec<f64> = scaled.iter().map(|s| (s / total).sqrt()).collect();
        amps.resize(1 << sel_bits, 0.0);
        prep = prepare_real(&amps, &select.qubits())?;
        b.circuit.extend_ops(prep.iter().cloned());
        if phases.iter().any(|p| p.abs() > 0.0) {
            let mut padded = phases.clone();
            padded.resize(1 << sel_bits, 0.0);
            b.circuit.extend_ops(diagonal_phases(&padded, &select.qubits())?);
        }
    } else if phases[0] != 0.0 {
        b.circuit.push(GateOp::OneQubit { target: data[0], u: U2::global(phases[0]) });
    }
    for (k, h) in handles.iter().enumerate() {
        let controls = Control::pattern(&select.qubits(), k as u64);
        b.embed(h, &data, &flags.qubits(), &pure.qubits(), &controls)?;
    }
    b.circuit.extend_ops(prep.iter().rev().map(GateOp::adjoint));
    b.finish(total, handles[0].dim, "lcu")
}

/// Encoding of `A_1 ⊗ A_2` (`A_1` on the more significant data qubits).
pub fn tensor(h1: &BlockEncodingHandle, h2: &BlockEncodingHandle) -> Result<BlockEncodingHandle> {
    if h2.dim != 1usize << h2.n_data() {
        return Err(Error::Dimension(format!(
            "low tensor factor {} must fill its {} data qubits",
            h2.label,
            h2.n_data()
        )));
    }
    let low = h2.data_registers();
    let mut regs = low.clone();
    for r in h1.data_registers() {
        let name = if low.iter().any(|l| l.name == r.name) { format!("{}-hi", r.name) } else { r.name.clone() };
        regs.push(Register { name, ..r });
    }
    let mut b = HandleBuilder::new(&regs);
    let f2 = b.flag("tensor-flags-lo", RegisterRole::Flag, h2.n_flag());
    let f1 = b.flag("tensor-flags-hi", RegisterRole::Flag, h1.n_flag());
    let pure = b.pure("pure", h1.n_pure().max(h2.n_pure()));
    let n2 = h2.n_data();
    let d2: Vec<usize> = (0..n2).collect();
    let d1: Vec<usize> = (n2..n2 + h1.n_data()).collect();
    b.embed(h2, &d2, &f2.qubits(), &pure.qubits(), &[])?;
    b.embed(h1, &d1, &f1.qubits(), &pure.qubits(), &[])?;
    let out = b.finish(h1.alpha * h2.alpha, h1.dim * h2.dim, &format!("{}⊗{}", h1.label, h2.label))?;
    Ok(out.with_epsilon(h1.epsilon * h2.alpha + h2.epsilon * h1.alpha))
}

/// Encoding of `A_1 · A_2`.
pub fn product(h1: &BlockEncodingHandle, h2: &BlockEncodingHandle) -> Result<BlockEncodingHandle> {
    check_same_shape(&[h1, h2])?;
    let mut b = HandleBuilder::new(&h1.data_registers());
    let f2 = b.flag("product-flags-right", RegisterRole::Flag, h2.n_flag());
    let f1 = b.flag("product-flags-left", RegisterRole::Flag, h1.n_flag());
    let pure = b.pure("pure", h1.n_pure().max(h2.n_pure()));
    let data = h1.data_qubits();
    b.embed(h2, &data, &f2.qubits(), &pure.qubits(), &[])?;
    b.embed(h1, &data, &f1.qubits(), &pure.qubits(), &[])?;
    b.finish(h1.alpha * h2.alpha, h1.dim, &format!("{}·{}", h1.label, h2.label))
}

/// Same matrix with a larger normalization `alpha ≥ h.alpha`.
pub fn scale(h: &BlockEncodingHandle, alpha: f64) -> Result<BlockEncodingHandle> {
    if alpha < h.alpha * (1.0 - 1e-12) {
        return Err(Error::Domain(format!("cannot shrink normalization {} to {alpha}", h.alpha)));
    }
    let ratio = (h.alpha / alpha).min(1.0);
    if ratio == 1.0 {
        return Ok(h.clone());
    }
    let mut b = HandleBuilder::new(&h.data_registers());
    let s = b.flag("scale", RegisterRole::Flag, 1);
    let flags = b.flag("scale-flags", RegisterRole::Flag, h.n_flag());
    let pure = b.pure("pure", h.n_pure());
    b.circuit.ry(s.qubit(0), 2.0 * ratio.acos());
    b.embed(h, &h.data_qubits(), &flags.qubits(), &pure.qubits(), &[])?;
    Ok(b.finish(alpha, h.dim, &h.label)?.with_epsilon(h.epsilon))
}

/// Encoding of the zero matrix.
pub fn zero(data: &[Register], dim: usize) -> Result<BlockEncodingHandle> {
    let mut b = HandleBuilder::new(data);
    let f = b.flag("zero", RegisterRole::Flag, 1);
    b.circuit.x(f.qubit(0));
    b.finish(1.0, dim, "0")
}

/// Encoding of `c·I`.
pub fn constant(c: C64, data: &[Register], dim: usize) -> Result<BlockEncodingHandle> {
    if c.norm() == 0.0 {
        return zero(data, dim);
    }
    let mut b = HandleBuilder::new(data);
    if c.arg() != 0.0 {
        b.circuit.push(GateOp::OneQubit { target: 0, u: U2::global(c.arg()) });
    }
    b.finish(c.norm(), dim, &format!("{c}·I"))
}

pub fn identity(data: &[Register], dim: usize) -> Result<BlockEncodingHandle> {
    HandleBuilder::new(data).finish(1.0, dim, "I")
}
