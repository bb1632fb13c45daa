// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Multi-control expansion into one-qubit gates and CNOTs, and resource tallies.

use super::{Circuit, GateOp, RegisterRole, ResourceCount, U2};
use crate::{Error, Result};

/// Name of the pure-ancilla register used by [`expand_multicontrol`].
pub const MCX_POOL: &str = "mcx-pool";

fn ancillas_needed(op: &GateOp) -> usize {
    match op {
        GateOp::MultiControlled { controls, u, .. } => {
            let k = controls.len();
            if k <= 1 || (k == 2 && *u == U2::x()) {
                0
            } else if *u == U2::x() {
                k - 2
            } else {
                k - 1
            }
        }
        _ => 0,
    }
}

/// Largest pure-ancilla demand of any op in `c`.
pub fn pool_demand(c: &Circuit) -> usize {
    c.ops().iter().map(ancillas_needed).max().unwrap_or(0)
}

fn pool_qubits(c: &Circuit) -> Vec<usize> {
    c.registers()
        .iter()
        .filter(|r| r.role == RegisterRole::PureAncilla && r.name.starts_with(MCX_POOL))
        .flat_map(|r| r.qubits())
        .collect()
}

/// Rewrite every multi-controlled gate as one-qubit gates and CNOTs, using
/// the `mcx-pool*` pure-ancilla registers for the Toffoli ladder.
pub fn expand_multicontrol(c: &Circuit) -> Result<Circuit> {
    let need = pool_demand(c);
    let pool = pool_qubits(c);
    if need > pool.len() {
        return Err(Error::Resource(format!("multi-control expansion needs {need} pure ancillas, pool has {}", pool.len())));
    }
    let mut ops = Vec::with_capacity(c.len() * 4);
    for op in c.ops() {
        emit(op, &pool, &mut ops);
    }
    let mut out = c.clone();
    out.ops = ops;
    Ok(out)
}

/// Return `c` with enough `mcx-pool` qubits for expansion.
pub fn with_pool(c: &Circuit) -> Circuit {
    let have = pool_qubits(c).len();
    let need = pool_demand(c);
    let mut out = c.clone();
    if need > have {
        let name = if have == 0 { MCX_POOL.to_string() } else { format!("{MCX_POOL}-{have}") };
        out.add_register(&name, RegisterRole::PureAncilla, need - have);
    }
    out
}

pub fn count_resources(c: &Circuit, expand: bool) -> ResourceCount {
    let existing_pure: usize = c.registers_with_role(RegisterRole::PureAncilla).map(|r| r.size).sum();
    let mut rc = ResourceCount { qubits: c.qubit_count(), pure_ancillas: existing_pure, ..Default::default() };
    if !expand {
        for op in c.ops() {
            match op {
                GateOp::OneQubit { .. } => rc.one_qubit += 1,
                GateOp::CNot { .. } => rc.cnot += 1,
                GateOp::MultiControlled { .. } => rc.multi_controlled += 1,
            }
        }
        return rc;
    }
    let need = pool_demand(c);
    let mut virt = pool_qubits(c);
    let extra = need.saturating_sub(virt.len());
    rc.pure_ancillas += extra;
    rc.qubits += extra;
    virt.extend(c.qubit_count()..c.qubit_count() + extra);
    let mut buf = Vec::new();
    for op in c.ops() {
        buf.clear();
        emit(op, &virt, &mut buf);
        for e in &buf {
            match e {
                GateOp::OneQubit { .. } => rc.one_qubit += 1,
                GateOp::CNot { .. } => rc.cnot += 1,
                GateOp::MultiControlled { .. } => unreachable!("expansion leaves no multi-controlled gates"),
            }
        }
    }
    rc
}

fn push_one(out: &mut Vec<GateOp>, target: usize, u: U2) {
    if !u.is_identity(1e-14) {
        out.push(GateOp::OneQubit { target, u });
    }
}

fn emit(op: &GateOp, pool: &[usize], out: &mut Vec<GateOp>) {
    let GateOp::MultiControlled { controls, target, u } = op else {
        out.push(op.clone());
        return;
    };
    let flips: Vec<usize> = controls.iter().filter(|c| !c.value).map(|c| c.qubit).collect();
    for &q in &flips {
        out.push(GateOp::OneQubit { target: q, u: U2::x() });
    }
    let cs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
    emit_positive(&cs, *target, u, pool, out);
    for &q in &flips {
        out.push(GateOp::OneQubit { target: q, u: U2::x() });
    }
}

fn emit_positive(cs: &[usize], target: usize, u: &U2, pool: &[usize], out: &mut Vec<GateOp>) {
    let k = cs.len();
    let is_x = *u == U2::x();
    match k {
        0 => push_one(out, target, *u),
        1 if is_x => out.push(GateOp::CNot { control: cs[0], target }),
        1 => controlled_u(cs[0], target, u, out),
        2 if is_x => toffoli(cs[0], cs[1], target, out),
        _ => {
            // AND ladder: pool[m] holds c_0 ∧ … ∧ c_{m+1}.
            let depth = if is_x { k - 2 } else { k - 1 };
            let mut ladder = Vec::with_capacity(depth);
            toffoli(cs[0], cs[1], pool[0], &mut ladder);
            for m in 1..depth {
                toffoli(cs[m + 1], pool[m - 1], pool[m], &mut ladder);
            }
            out.extend(ladder.iter().cloned());
            if is_x {
                toffoli(cs[k - 1], pool[depth - 1], target, out);
            } else {
                controlled_u(pool[depth - 1], target, u, out);
            }
            out.extend(ladder.iter().rev().map(GateOp::adjoint));
        }
    }
}

/// Singly controlled `U` from its ZYZ angles: `C`, CNOT, `B`, CNOT, `A`, phase.
fn controlled_u(c: usize, t: usize, u: &U2, out: &mut Vec<GateOp>) {
    let (alpha, beta, gamma, delta) = u.zyz();
    let a = U2::rz(beta).mul(&U2::ry(gamma / 2.0));
    let b = U2::ry(-gamma / 2.0).mul(&U2::rz(-(delta + beta) / 2.0));
    let cm = U2::rz((delta - beta) / 2.0);
    push_one(out, t, cm);
    out.push(GateOp::CNot { control: c, target: t });
    push_one(out, t, b);
    out.push(GateOp::CNot { control: c, target: t });
    push_one(out, t, a);
    push_one(out, c, U2::phase(alpha));
}

/// Toffoli with 6 CNOTs and 8 one-qubit gates.
fn toffoli(a: usize, b: usize, t: usize, out: &mut Vec<GateOp>) {
    let (h, tg, td) = (U2::h(), U2::t(), U2::t().adjoint());
    let one = |q, u| GateOp::OneQubit { target: q, u };
    let cx = |c, t| GateOp::CNot { control: c, target: t };
    out.extend([
        one(t, h),
        cx(b, t),
        one(t, td),
        cx(a, t),
        one(t, tg),
        cx(b, t),
        one(t, td),
        cx(a, t),
        one(b, tg),
        one(t, h.mul(&tg)),
        cx(a, b),
        one(a, tg),
        one(b, td),
        cx(a, b),
    ]);
}

