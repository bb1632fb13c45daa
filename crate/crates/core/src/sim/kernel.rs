// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Strided in-place gate kernels on a flat amplitude array.

use crate::circuit::{GateOp, U2};
use crate::C64;

/// Call `f(x)` for every `x` with zeros at the `fixed` bit positions, below `len`.
#[inline]
pub(crate) fn for_each_free(len: usize, fixed: usize, mut f: impl FnMut(usize)) {
    let free = (len - 1) & !fixed;
    let mut x = 0usize;
    loop {
        f(x);
        if x == free {
            break;
        }
        x = ((x | fixed) + 1) & free;
    }
}

#[inline]
fn mix(u: &U2, v: &mut [C64], i0: usize, i1: usize) {
    let (a, b) = (v[i0], v[i1]);
    let [u00, u01, u10, u11] = u.0;
    v[i0] = u00 * a + u01 * b;
    v[i1] = u10 * a + u11 * b;
}

fn apply_masked(u: &U2, target: usize, cmask: usize, cval: usize, v: &mut [C64]) {
    let tbit = 1usize << target;
    let len = v.len();
    if u.is_diagonal() {
        let [d0, _, _, d1] = u.0;
        let one = C64::new(1.0, 0.0);
        for_each_free(len, cmask | tbit, |x| {
            let i0 = x | cval;
            if d0 != one {
                v[i0] *= d0;
            }
            if d1 != one {
                v[i0 | tbit] *= d1;
            }
        });
    } else if *u == U2::x() {
        for_each_free(len, cmask | tbit, |x| {
            let i0 = x | cval;
            v.swap(i0, i0 | tbit);
        });
    } else {
        for_each_free(len, cmask | tbit, |x| {
            let i0 = x | cval;
            mix(u, v, i0, i0 | tbit);
        });
    }
}

pub(crate) fn apply_op(op: &GateOp, v: &mut [C64]) {
    match op {
        GateOp::OneQubit { target, u } => {
            let s = 1usize << target;
            if u.is_diagonal() || *u == U2::x() {
                apply_masked(u, *target, 0, 0, v);
                return;
            }
            for base in (0..v.len()).step_by(2 * s) {
                for i in base..base + s {
                    mix(u, v, i, i + s);
                }
            }
        }
        GateOp::CNot { control, target } => {
            let c = 1usize << control;
            apply_masked(&U2::x(), *target, c, c, v);
        }
        GateOp::MultiControlled { controls, target, u } => {
            let (mut m, mut val) = (0usize, 0usize);
            for c in controls {
                m |= 1 << c.qubit;
                if c.value {
                    val |= 1 << c.qubit;
                }
            }
            apply_masked(u, *target, m, val, v);
        }
    }
}
