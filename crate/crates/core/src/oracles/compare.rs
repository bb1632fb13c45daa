// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Constant comparators and range indicators.
//!
//! `i ≥ K` is split into disjoint cases: `i = K`, or the highest differing
//! bit has `i_p = 1, K_p = 0`. Each case is one multi-controlled X on the
//! output, so no work qubits are needed.

use crate::circuit::{Circuit, Control, GateOp, RegisterRole, U2};
use crate::{Error, Result};

/// Flip `out` iff the value on `qubits` (LSB first) is at least `k`.
pub fn geq_ops(k: u64, qubits: &[usize], out: usize, enable: &[Control]) -> Vec<GateOp> {
    let n = qubits.len();
    let gate = |mut controls: Vec<Control>| -> GateOp {
        controls.extend_from_slice(enable);
        if controls.is_empty() {
            GateOp::OneQubit { target: out, u: U2::x() }
        } else {
            GateOp::MultiControlled { controls, target: out, u: U2::x() }
        }
    };
    if k == 0 {
        return vec![gate(Vec::new())];
    }
    if n < 64 && k >= 1u64 << n {
        return Vec::new();
    }
    let bit = |q: usize| (k >> q) & 1 == 1;
    let mut ops = vec![gate((0..n).map(|q| Control { qubit: qubits[q], value: bit(q) }).collect())];
    for p in (0..n).filter(|&p| !bit(p)) {
        let mut controls = vec![Control::on(qubits[p])];
        controls.extend((p + 1..n).map(|q| Control { qubit: qubits[q], value: bit(q) }));
        ops.push(gate(controls));
    }
    ops
}

/// Flip `out` iff `k1 ≤ i ≤ k2`.
pub fn indicator_ops(k1: u64, k2: u64, qubits: &[usize], out: usize, enable: &[Control]) -> Vec<GateOp> {
    let mut ops = geq_ops(k1, qubits, out, enable);
    ops.extend(geq_ops(k2 + 1, qubits, out, enable));
    ops
}

/// Registers: `data` (n), `indicator` (1).
pub fn indicator(k1: u64, k2: u64, n: usize) -> Result<Circuit> {
    if n == 0 || n >= 64 || k1 > k2 || k2 >= 1u64 << n {
        return Err(Error::Domain(format!("indicator bounds [{k1}, {k2}] invalid for {n} qubits")));
    }
    let mut c = Circuit::new();
    let data = c.add_register("data", RegisterRole::Data, n);
    let flag = c.add_register("indicator", RegisterRole::Flag, 1);
    c.extend_ops(indicator_ops(k1, k2, &data.qubits(), flag.qubit(0), &[]));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::StateVector;

    #[test]
    fn indicator_small_examples() {
        let c = indicator(2, 5, 3).unwrap();
        for (i, want) in [(3usize, 1usize), (1, 0), (6, 0)] {
            let mut s = StateVector::basis(4, i).unwrap();
            s.apply(&c).unwrap();
            assert!((s.amplitudes()[i | (want << 3)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn indicator_full_range() {
        let c = indicator(0, 7, 3).unwrap();
        for i in 0..8 {
            let mut s = StateVector::basis(4, i).unwrap();
            s.apply(&c).unwrap();
            assert!((s.amplitudes()[i | 8].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn indicator_bounds_checked() {
        assert!(indicator(3, 2, 3).is_err());
        assert!(indicator(0, 8, 3).is_err());
    }
}
