// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Hash-map state for circuits whose reachable support is much smaller than `2^n`.

use rustc_hash::FxHashMap;

use crate::circuit::{Circuit, GateOp, U2};
use crate::{Error, Result, C64};

/// Amplitudes below this magnitude squared are dropped after each gate.
const PRUNE: f64 = 1e-30;

#[derive(Clone, Debug, Default)]
pub struct SparseState {
    n: usize,
    amps: FxHashMap<u64, C64>,
    scratch: FxHashMap<u64, C64>,
}

impl SparseState {
    pub fn basis(n: usize, index: u64) -> Result<Self> {
        if n > 63 {
            return Err(Error::Resource(format!("{n} qubits exceed the sparse simulator's 63-qubit index")));
        }
        let mut amps = FxHashMap::default();
        amps.insert(index, C64::new(1.0, 0.0));
        Ok(Self { n, amps, scratch: FxHashMap::default() })
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn get(&self, index: u64) -> C64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, C64)> + '_ {
        self.amps.iter().map(|(&k, &v)| (k, v))
    }

    pub fn apply(&mut self, c: &Circuit) -> Result<()> {
        if c.qubit_count() != self.n {
            return Err(Error::Dimension(format!("{}-qubit circuit on a {}-qubit state", c.qubit_count(), self.n)));
        }
        for op in c.ops() {
            self.apply_op(op);
        }
        Ok(())
    }

    fn apply_op(&mut self, op: &GateOp) {
        let (cmask, cval, target, u) = match op {
            GateOp::OneQubit { target, u } => (0u64, 0u64, *target, *u),
            GateOp::CNot { control, target } => (1u64 << control, 1u64 << control, *target, U2::x()),
            GateOp::MultiControlled { controls, target, u } => {
                let (mut m, mut v) = (0u64, 0u64);
                for c in controls {
                    m |= 1 << c.qubit;
                    if c.value {
                        v |= 1 << c.qubit;
                    }
                }
                (m, v, *target, *u)
            }
        };
        let tbit = 1u64 << target;
        if u.is_diagonal() {
            let [d0, _, _, d1] = u.0;
            for (k, a) in self.amps.iter_mut() {
                if k & cmask == cval {
                    *a *= if k & tbit == 0 { d0 } else { d1 };
                }
            }
            return;
        }
        let [u00, u01, u10, u11] = u.0;
        self.scratch.clear();
        self.scratch.reserve(self.amps.len() * 2);
        for (&k, &a) in &self.amps {
            if k & cmask != cval {
                *self.scratch.entry(k).or_default() += a;
                continue;
            }
            let k0 = k & !tbit;
            let (c0, c1) = if k & tbit == 0 { (u00, u10) } else { (u01, u11) };
            if c0.re != 0.0 || c0.im != 0.0 {
                *self.scratch.entry(k0).or_default() += c0 * a;
            }
            if c1.re != 0.0 || c1.im != 0.0 {
                *self.scratch.entry(k0 | tbit).or_default() += c1 * a;
            }
        }
        self.scratch.retain(|_, a| a.norm_sqr() > PRUNE);
        std::mem::swap(&mut self.amps, &mut self.scratch);
    }
}
