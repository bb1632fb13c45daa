// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use super::prep::{diagonal_phases, uc_ry};
use crate::circuit::{Circuit, Control, GateOp, RegisterRole};
use crate::{Error, Result, C64};

/// `|0⟩_flag|s⟩ → (v_s/N_D)|0⟩|s⟩ + √(1 − |v_s/N_D|²)|1⟩|s⟩` for `s < values.len()`;
/// remaining `s` map fully to the `|1⟩` branch.
pub fn amplitude_ops(
    values: &[C64],
    norm: f64,
    index: &[usize],
    flag: usize,
    enable: &[Control],
) -> Result<Vec<GateOp>> {
    let size = 1usize << index.len();
    if values.len() > size {
        return Err(Error::Dimension(format!("{} values for a {}-qubit index", values.len(), index.len())));
    }
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(norm > 0.0) || peak > norm * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("normalization {norm} is below the largest magnitude {peak}")));
    }
    let ratio = |s: usize| values.get(s).map_or(0.0, |v| (v.norm() / norm).min(1.0));
    let angles: Vec<f64> = (0..size).map(|s| 2.0 * ratio(s).acos()).collect();
    let complex = values.iter().any(|v| v.im != 0.0);
    let mut ops = Vec::new();
    if complex {
        ops.extend(uc_ry(&angles, index, flag, enable));
        let phases: Vec<f64> = (0..size).map(|s| values.get(s).map_or(0.0, |v| v.arg())).collect();
        let mut on_success = vec![Control::off(flag)];
        on_success.extend_from_slice(enable);
        ops.extend(diagonal_phases(&phases, index)?.iter().map(|op| op.with_controls(&on_success)));
    } else {
        // Signed real values: a rotation by 2·acos(v/N_D) keeps the sign on |0⟩.
        let signed: Vec<f64> =
            (0..size).map(|s| values.get(s).map_or(PI, |v| 2.0 * (v.re / norm).clamp(-1.0, 1.0).acos())).collect();
        ops.extend(uc_ry(&signed, index, flag, enable));
    }
    Ok(ops)
}

/// Registers: `index` (l, sparse index), `amplitude` (1, flag).
pub fn sparse_amplitude_oracle(values: &[C64], norm: f64, l: usize) -> Result<Circuit> {
    let mut c = Circuit::new();
    let index = c.add_register("index", RegisterRole::SparseIndex, l.max(1));
    let flag = c.add_register("amplitude", RegisterRole::Flag, 1);
    c.extend_ops(amplitude_ops(values, norm, &index.qubits(), flag.qubit(0), &[])?);
    Ok(c)
}
