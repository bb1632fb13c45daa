// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Reversible arithmetic and basis permutations on registers, and the
//! banded sparse-access oracle built from them.

use crate::circuit::{Circuit, Control, GateOp, RegisterRole, U2};
use crate::{Error, Result};

fn mcx(controls: Vec<Control>, target: usize) -> GateOp {
    match controls.len() {
        0 => GateOp::OneQubit { target, u: U2::x() },
        1 if controls[0].value => GateOp::CNot { control: controls[0].qubit, target },
        _ => GateOp::MultiControlled { controls, target, u: U2::x() },
    }
}

/// `|x⟩ → |x + k mod 2^n⟩` on `qubits` (LSB first), applied when `enable` holds.
pub fn add_constant(k: u64, qubits: &[usize], enable: &[Control]) -> Vec<GateOp> {
    let n = qubits.len();
    let k = if n >= 64 { k } else { k & ((1u64 << n) - 1) };
    let mut ops = Vec::new();
    for j in 0..n {
        if (k >> j) & 1 == 0 {
            continue;
        }
        // Increment the sub-register starting at bit j.
        for b in (j..n).rev() {
            let mut controls: Vec<Control> = qubits[j..b].iter().map(|&q| Control::on(q)).collect();
            controls.extend_from_slice(enable);
            ops.push(mcx(controls, qubits[b]));
        }
    }
    ops
}

/// Ripple-carry adder `|a⟩|b⟩|0⟩ → |a⟩|a + b mod 2^n⟩|0⟩` with one carry ancilla.
pub fn cuccaro_add(a: &[usize], b: &[usize], carry: usize) -> Vec<GateOp> {
    let n = a.len();
    assert_eq!(n, b.len(), "adder registers must match");
    let maj = |c: usize, b: usize, a: usize| {
        vec![
            GateOp::CNot { control: a, target: b },
            GateOp::CNot { control: a, target: c },
            mcx(vec![Control::on(c), Control::on(b)], a),
        ]
    };
    let uma = |c: usize, b: usize, a: usize| {
        vec![
            mcx(vec![Control::on(c), Control::on(b)], a),
            GateOp::CNot { control: a, target: c },
            GateOp::CNot { control: c, target: b },
        ]
    };
    let mut ops = Vec::new();
    if n == 0 {
        return ops;
    }
    let carries: Vec<usize> = std::iter::once(carry).chain(a[..n - 1].iter().copied()).collect();
    for i in 0..n {
        ops.extend(maj(carries[i], b[i], a[i]));
    }
    for i in (0..n).rev() {
        ops.extend(uma(carries[i], b[i], a[i]));
    }
    ops
}

/// Exchange basis states `a` and `b` of `qubits`.
pub fn transposition_ops(a: u64, b: u64, qubits: &[usize]) -> Vec<GateOp> {
    if a == b {
        return Vec::new();
    }
    let n = qubits.len();
    let controls_except = |value: u64, skip: usize| -> Vec<Control> {
        (0..n).filter(|&q| q != skip).map(|q| Control { qubit: qubits[q], value: (value >> q) & 1 == 1 }).collect()
    };
    let diff = a ^ b;
    let pivot = diff.trailing_zeros() as usize;
    let mut walk = Vec::new();
    let mut cur = b;
    for q in (0..n).filter(|&q| q != pivot && (diff >> q) & 1 == 1) {
        walk.push(mcx(controls_except(cur, q), qubits[q]));
        cur ^= 1 << q;
    }
    let mut ops = walk.clone();
    ops.push(mcx(controls_except(a, pivot), qubits[pivot]));
    ops.extend(walk.into_iter().rev());
    ops
}

/// True when `map` is `s → (base + s) mod 2^n`.
pub fn shift_permutation(map: &[u64], n: usize) -> Option<u64> {
    let modulus = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let base = *map.first()?;
    map.iter().enumerate().all(|(s, &o)| o == base.wrapping_add(s as u64) & modulus).then_some(base)
}

/// Basis permutation sending `s → map[s]` for `s < map.len()`; the images
/// must be distinct. Other basis states are moved to the vacated slots.
pub fn permutation_ops(map: &[u64], qubits: &[usize]) -> Result<Vec<GateOp>> {
    let n = qubits.len();
    let size = 1u64 << n;
    if map.iter().any(|&o| o >= size) {
        return Err(Error::Domain(format!("permutation image out of range for {n} qubits")));
    }
    let mut seen = std::collections::BTreeSet::new();
    if !map.iter().all(|o| seen.insert(*o)) {
        return Err(Error::Domain("permutation images are not distinct".into()));
    }
    if let Some(base) = shift_permutation(map, n) {
        return Ok(add_constant(base, qubits, &[]));
    }
    // perm[x] = current image of x; realize by transpositions acting on positions.
    let mut pos: Vec<u64> = (0..size).collect(); // pos[v] = where basis value v currently lives
    let mut at: Vec<u64> = (0..size).collect(); // at[p] = value living at p
    let mut ops = Vec::new();
    for (s, &target) in map.iter().enumerate() {
        let p = pos[s];
        if p == target {
            continue;
        }
        ops.extend(transposition_ops(p, target, qubits));
        let other = at[target as usize];
        at[target as usize] = s as u64;
        at[p as usize] = other;
        pos[s] = target;
        pos[other as usize] = p;
    }
    Ok(ops)
}

/// Swap two equal-width registers qubit by qubit.
pub fn swap_registers(a: &[usize], b: &[usize]) -> Vec<GateOp> {
    a.iter()
        .zip(b)
        .flat_map(|(&x, &y)| {
            [
                GateOp::CNot { control: x, target: y },
                GateOp::CNot { control: y, target: x },
                GateOp::CNot { control: x, target: y },
            ]
        })
        .collect()
}

/// `|x⟩ → |x + k mod 2^n⟩` through a scratch register loaded with `k` and
/// the ripple-carry adder; linear gate count, scratch and carry restored.
pub fn add_constant_with_scratch(k: u64, qubits: &[usize], scratch: &[usize], carry: usize) -> Vec<GateOp> {
    let load: Vec<GateOp> = scratch
        .iter()
        .enumerate()
        .filter(|(j, _)| *j < 64 && (k >> j) & 1 == 1)
        .map(|(_, &q)| GateOp::OneQubit { target: q, u: U2::x() })
        .collect();
    let mut ops = load.clone();
    ops.extend(cuccaro_add(scratch, qubits, carry));
    ops.extend(load);
    ops
}

/// Banded sparse access: `|s⟩_index |i⟩_data → |offsets[s] + i mod 2^n⟩_index |i⟩_data`
/// for `s < offsets.len()`, with `index` an `n`-qubit register whose low `l`
/// qubits hold `s`.
///
/// Registers (LSB up): `data` (n), `index` (n, sparse index), then pure
/// ancillas: `scratch` (n, only for consecutive offsets) and `carry` (1).
/// Consecutive offsets (modulo `2^n`) use a constant adder; any other offset
/// list is realized as an ancilla-free basis permutation.
pub fn banded_sparse_access(offsets: &[u64], n: usize, l: usize) -> Result<Circuit> {
    if offsets.is_empty() || offsets.len() > 1usize << l || l > n {
        return Err(Error::Domain(format!(
            "{} offsets do not fit a {l}-qubit sparse index inside {n} qubits",
            offsets.len()
        )));
    }
    let modulus = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let images: Vec<u64> = offsets.iter().map(|o| o & modulus).collect();
    let shift = shift_permutation(&images, n);
    let mut c = Circuit::new();
    let data = c.add_register("data", RegisterRole::Data, n);
    let index = c.add_register("index", RegisterRole::SparseIndex, n);
    let scratch = shift.map(|_| c.add_register("scratch", RegisterRole::PureAncilla, n));
    let carry = c.add_register("carry", RegisterRole::PureAncilla, 1);
    match (shift, &scratch) {
        (Some(base), Some(scratch)) => {
            c.extend_ops(add_constant_with_scratch(base, &index.qubits(), &scratch.qubits(), carry.qubit(0)))
        }
        _ => c.extend_ops(permutation_ops(&images, &index.qubits())?),
    }
    c.extend_ops(cuccaro_add(&data.qubits(), &index.qubits(), carry.qubit(0)));
    Ok(c)
}
