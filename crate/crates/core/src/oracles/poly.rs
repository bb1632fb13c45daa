// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Diagonal encodings of piecewise polynomials sampled on the grid.
//!
//! Each segment's polynomial is rewritten in the exact grid coordinate
//! `z ∈ [-1, 1]` and realized by QSVT on the coordinate encoding; segments
//! are switched in by range indicators on the data register, all at a
//! common normalization.

use super::compare::indicator_ops;
use super::{affine_coordinate, coordinate_encoding, scale, BlockEncodingHandle, HandleBuilder};
use crate::circuit::{Control, Register, RegisterRole};
use crate::model::{grid_point, PiecewisePolynomial};
use crate::qsvt::{chebyshev, complex_poly};
use crate::{Result, C64};

#[derive(Clone, Debug)]
pub struct PolyOracleOptions {
    pub phase_tol: f64,
}

impl Default for PolyOracleOptions {
    fn default() -> Self {
        Self { phase_tol: 1e-12 }
    }
}

/// Monomial coefficients of `p(A + Bz)`.
fn compose_affine(p: &[C64], a: f64, b: f64) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); p.len()];
    let mut power = vec![C64::new(1.0, 0.0)]; // (A + Bz)^i
    for &c in p {
        for (k, v) in power.iter().enumerate() {
            out[k] += c * v;
        }
        let mut next = vec![C64::new(0.0, 0.0); power.len() + 1];
        for (k, v) in power.iter().enumerate() {
            next[k] += v * a;
            next[k + 1] += v * b;
        }
        power = next;
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.norm() == 0.0) {
        out.pop();
    }
    out
}

fn segment_handle(
    z_poly: &[C64],
    data: &[Register],
    coord: &BlockEncodingHandle,
    opts: &PolyOracleOptions,
) -> Result<BlockEncodingHandle> {
    if z_poly.len() <= 2 {
        let c1 = z_poly.get(1).copied().unwrap_or_default();
        return affine_coordinate(data, z_poly[0], c1);
    }
    let re = chebyshev::from_monomial(&z_poly.iter().map(|c| c.re).collect::<Vec<_>>());
    let im = chebyshev::from_monomial(&z_poly.iter().map(|c| c.im).collect::<Vec<_>>());
    complex_poly(coord, &re, &im, opts.phase_tol, "segment")
}

pub fn piecewise_poly_oracle(f: &PiecewisePolynomial, n: usize) -> Result<BlockEncodingHandle> {
    piecewise_poly_oracle_with(f, n, &PolyOracleOptions::default())
}

/// Encoding of `diag(f(x_j))` for the `2^n`-point grid on `f`'s domain.
pub fn piecewise_poly_oracle_with(
    f: &PiecewisePolynomial,
    n: usize,
    opts: &PolyOracleOptions,
) -> Result<BlockEncodingHandle> {
    let data = [Register { name: "data".into(), role: RegisterRole::Data, offset: 0, size: n }];
    let dim = 1usize << n;
    if let Some(c) = f.as_constant() {
        return Ok(super::constant(c, &data, dim)?.with_label("f"));
    }
    let (a, b) = f.domain();
    let owner: Vec<usize> =
        (0..dim).map(|j| f.segment_index(grid_point(a, b, n, j))).collect::<Result<Vec<_>>>()?;
    let coord = coordinate_encoding(n)?;
    let mut pieces = Vec::new();
    for (s, seg) in f.segments().iter().enumerate() {
        let Some(lo) = owner.iter().position(|&o| o == s) else { continue };
        let hi = owner.iter().rposition(|&o| o == s).expect("nonempty range");
        let z_poly = compose_affine(&seg.values(), 0.5 * (a + b), 0.5 * (b - a));
        pieces.push((lo as u64, hi as u64, segment_handle(&z_poly, &data, &coord, opts)?));
    }
    if pieces.len() == 1 {
        return Ok(pieces.pop().expect("one piece").2.with_label("f"));
    }
    let alpha = pieces.iter().map(|p| p.2.alpha).fold(0.0, f64::max);
    let scaled = pieces.iter().map(|p| scale(&p.2, alpha)).collect::<Result<Vec<_>>>()?;
    let mut builder = HandleBuilder::new(&data);
    let flags = builder.flag("poly-flags", RegisterRole::Flag, scaled.iter().map(|h| h.n_flag()).max().unwrap_or(0));
    let ind = builder.pure("segment-indicator", 1).qubit(0);
    let pure = builder.pure("pure", scaled.iter().map(|h| h.n_pure()).max().unwrap_or(0));
    let dq: Vec<usize> = (0..n).collect();
    for ((lo, hi, _), h) in pieces.iter().zip(&scaled) {
        builder.circuit.extend_ops(indicator_ops(*lo, *hi, &dq, ind, &[]));
        builder.embed(h, &dq, &flags.qubits(), &pure.qubits(), &[Control::on(ind)])?;
        builder.circuit.extend_ops(indicator_ops(*lo, *hi, &dq, ind, &[]));
    }
    builder.finish(alpha, dim, "f")
}
