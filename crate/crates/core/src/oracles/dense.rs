// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact synthesis of small dense unitaries and block-encodings of dense
//! matrices, for testing and reference encodings.

use super::prep::diagonal_phases;
use super::{BlockEncodingHandle, HandleBuilder};
use crate::circuit::{Control, GateOp, RegisterRole, U2};
use crate::linalg::{ceil_log2, spectral_norm};
use crate::{CMatrix, Error, Result, C64};

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Gate list realizing the unitary `u` on `qubits` (LSB first), by Givens
/// eliminations between Gray-adjacent basis states.
pub fn synthesize_unitary(u: &CMatrix, qubits: &[usize]) -> Result<Vec<GateOp>> {
    let n = qubits.len();
    let dim = 1usize << n;
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::Dimension(format!("{}×{} unitary on {n} qubits", u.nrows(), u.ncols())));
    }
    let defect = crate::linalg::max_abs(&(u.adjoint() * u - CMatrix::identity(dim, dim)));
    if defect > 1e-9 {
        return Err(Error::Domain(format!("matrix is not unitary (defect {defect:.2e})")));
    }
    // Work in Gray order so eliminated row pairs differ in one bit.
    let mut m = CMatrix::from_fn(dim, dim, |r, c| u[(gray(r), gray(c))]);
    let mut steps: Vec<(usize, usize, U2)> = Vec::new();
    for c in 0..dim.saturating_sub(1) {
        for k in (c + 1..dim).rev() {
            let (x, y) = (m[(k - 1, c)], m[(k, c)]);
            if y.norm() < 1e-15 {
                continue;
            }
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let g = U2::new(x.conj() / r, y.conj() / r, -y / r, x / r);
            for col in 0..dim {
                let (p, q) = (m[(k - 1, col)], m[(k, col)]);
                m[(k - 1, col)] = g.0[0] * p + g.0[1] * q;
                m[(k, col)] = g.0[2] * p + g.0[3] * q;
            }
            steps.push((k - 1, k, g));
        }
    }
    let mut phases = vec![0.0; dim];
    for k in 0..dim {
        phases[gray(k)] = m[(k, k)].arg();
    }
    let mut ops = if n > 0 { diagonal_phases(&phases, qubits)? } else { Vec::new() };
    for &(a, b, g) in steps.iter().rev() {
        let (ga, gb) = (gray(a), gray(b));
        let bit = (ga ^ gb).trailing_zeros() as usize;
        let gd = g.adjoint();
        // Order the 2×2 action as (bit = 0, bit = 1).
        let local = if (ga >> bit) & 1 == 0 { gd } else { U2::new(gd.0[3], gd.0[2], gd.0[1], gd.0[0]) };
        let controls: Vec<Control> = (0..n)
            .filter(|&q| q != bit)
            .map(|q| Control { qubit: qubits[q], value: (ga >> q) & 1 == 1 })
            .collect();
        ops.push(if controls.is_empty() {
            GateOp::OneQubit { target: qubits[bit], u: local }
        } else {
            GateOp::MultiControlled { controls, target: qubits[bit], u: local }
        });
    }
    Ok(ops)
}

/// Encoding of a dense matrix through its unitary dilation, one flag qubit.
/// `alpha` defaults to the spectral norm.
pub fn dense_block_encoding(a: &CMatrix, alpha: Option<f64>) -> Result<BlockEncodingHandle> {
    let dim = a.nrows();
    if dim == 0 || a.ncols() != dim {
        return Err(Error::Dimension("dense encoding needs a nonempty square matrix".into()));
    }
    let norm = spectral_norm(a);
    let alpha = alpha.unwrap_or(if norm > 0.0 { norm } else { 1.0 });
    if norm > alpha * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("normalization {alpha} below spectral norm {norm}")));
    }
    let n = ceil_log2(dim).max(1);
    let size = 1usize << n;
    let b = CMatrix::from_fn(size, size, |r, c| if r < dim && c < dim { a[(r, c)] / alpha } else { C64::new(0.0, 0.0) });
    // B = W Σ V†; the off-diagonal blocks share the singular vectors so the
    // dilation is unitary to rounding.
    let svd = b.clone().svd(true, true);
    let (w, v_t) = (svd.u.expect("left vectors"), svd.v_t.expect("right vectors"));
    let comp = CMatrix::from_diagonal(&crate::CVector::from_iterator(
        size,
        svd.singular_values.iter().map(|s| C64::new((1.0 - s * s).max(0.0).sqrt(), 0.0)),
    ));
    let left = &w * &comp * w.adjoint();
    let right = v_t.adjoint() * &comp * &v_t;
    let mut u = CMatrix::zeros(2 * size, 2 * size);
    u.view_mut((0, 0), (size, size)).copy_from(&b);
    u.view_mut((0, size), (size, size)).copy_from(&left);
    u.view_mut((size, 0), (size, size)).copy_from(&right);
    u.view_mut((size, size), (size, size)).copy_from(&(-b.adjoint()));
    let mut builder = HandleBuilder::with_data(n);
    builder.flag("dilation", RegisterRole::Flag, 1);
    let qubits: Vec<usize> = (0..=n).collect();
    builder.circuit.extend_ops(synthesize_unitary(&u, &qubits)?);
    builder.finish(alpha, dim, "dense")
}
