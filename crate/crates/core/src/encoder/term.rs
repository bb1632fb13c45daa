// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! One-term encodings `diag(f)·D` for banded `D`.
//!
//! Column `j` enters in a uniform superposition over sparse indices; each
//! index loads the entry `D[j - o, j]` into an amplitude flag, the banded
//! access moves the index register to the row, the registers swap so `f`
//! acts on the row, and the inverse row-side access plus uniform unprepare
//! close the block. Columns that deviate from the bulk pattern load their
//! entries through rotations controlled on the column value.

use super::super::oracles::prep::prepare_uniform;
use crate::circuit::{Control, GateOp, RegisterRole};
use crate::discretize::BandedProfile;
use crate::linalg::{ceil_log2, next_pow2_f64};
use crate::model::PiecewisePolynomial;
use crate::oracles::{
    amplitude_ops, banded_sparse_access, indicator_ops, piecewise_poly_oracle, swap_registers, BlockEncodingHandle,
    HandleBuilder,
};
use crate::{Error, Result, C64};

fn signed(o: usize, dim: usize) -> i64 {
    if o <= dim / 2 {
        o as i64
    } else {
        o as i64 - dim as i64
    }
}

/// Consecutive signed offset range covering every stored entry.
pub fn offset_range(profile: &BandedProfile) -> Result<(i64, i64)> {
    let dim = profile.dim();
    let mut offs: Vec<i64> = profile.bulk.iter().map(|&(o, _)| signed(o, dim)).collect();
    for (&i, row) in &profile.boundary_rows {
        for (j, v) in row.iter().enumerate() {
            if v.norm() != 0.0 {
                offs.push(signed((j + dim - i) % dim, dim));
            }
        }
    }
    let lo = *offs.iter().min().unwrap_or(&0);
    let hi = *offs.iter().max().unwrap_or(&0);
    if (hi - lo + 1) as usize > dim {
        return Err(Error::GridTooSmall(format!("band [{lo}, {hi}] is wider than N = {dim}")));
    }
    Ok((lo, hi))
}

/// Normalization for the loaded entries: the largest magnitude rounded up to
/// a power of two.
pub fn entry_normalization(profile: &BandedProfile) -> f64 {
    let m = profile.max_abs();
    if m == 0.0 {
        1.0
    } else {
        next_pow2_f64(m)
    }
}

/// Longest run of columns whose loaded entries equal the bulk values.
fn bulk_columns(profile: &BandedProfile, offsets: &[i64]) -> Option<(usize, usize)> {
    let dim = profile.dim();
    let is_bulk = |j: usize| {
        offsets.iter().all(|&o| {
            let r = (j as i64 - o).rem_euclid(dim as i64) as usize;
            let bulk = profile.bulk.iter().find(|&&(b, _)| signed(b, dim) == o).map_or(C64::new(0.0, 0.0), |b| b.1);
            profile.entry(r, j) == bulk
        })
    };
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for j in 0..=dim {
        let ok = j < dim && is_bulk(j);
        match (ok, start) {
            (true, None) => start = Some(j),
            (false, Some(s)) => {
                if best.is_none_or(|(a, b)| j - s > b - a + 1) {
                    best = Some((s, j - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    best
}

fn encode_banded(
    profile: &BandedProfile,
    f: &PiecewisePolynomial,
    n: usize,
    label: &str,
) -> Result<BlockEncodingHandle> {
    if profile.n != n {
        return Err(Error::Dimension(format!("profile on {} qubits, term on {n}", profile.n)));
    }
    let dim = 1usize << n;
    let (lo, hi) = offset_range(profile)?;
    let kappa = (hi - lo + 1) as usize;
    let l = ceil_log2(kappa);
    let offsets: Vec<i64> = (lo..=hi).collect();
    let norm_d = entry_normalization(profile);
    let of = piecewise_poly_oracle(f, n)?;
    let modn = |v: i64| v.rem_euclid(dim as i64) as u64;

    // Row-side access uses o_s = lo + s; the column side labels s' ↦ o = hi - s'.
    let bs_row = banded_sparse_access(&offsets.iter().map(|&o| modn(o)).collect::<Vec<_>>(), n, l)?;
    let col_offsets: Vec<u64> = offsets.iter().rev().map(|&o| modn(-o)).collect();
    let bs_col = banded_sparse_access(&col_offsets, n, l)?;
    let entry_for = |s: usize, j: usize| -> C64 {
        let o = hi - s as i64;
        profile.entry((j as i64 - o).rem_euclid(dim as i64) as usize, j)
    };

    let bulk = bulk_columns(profile, &offsets);
    let needs_indicator = bulk != Some((0, dim - 1));
    let special: Vec<usize> = (0..dim).filter(|&j| bulk.is_none_or(|(a, b)| j < a || j > b)).collect();

    let mut b = HandleBuilder::with_data(n);
    let index = b.flag("index", RegisterRole::SparseIndex, n).qubits();
    let amp = b.flag("amplitude", RegisterRole::Flag, 1).qubit(0);
    let f_flags = b.flag("function", RegisterRole::FunctionAncilla, of.n_flag()).qubits();
    let bs_pure = bs_row.qubit_count() - 2 * n;
    let access_pure = b.pure("access", bs_pure).qubits();
    let column_ind = if needs_indicator && bulk.is_some() { Some(b.pure("column-indicator", 1).qubit(0)) } else { None };
    let f_pure = b.pure("function-pure", of.n_pure()).qubits();
    let data: Vec<usize> = (0..n).collect();
    let s_qubits = &index[..l];

    let prep = prepare_uniform(kappa, s_qubits)?;
    b.circuit.extend_ops(prep.iter().cloned());

    let bulk_values: Vec<C64> = (0..kappa).map(|s| entry_for(s, bulk.map_or(0, |r| r.0))).collect();
    match (bulk, column_ind) {
        (Some((k1, k2)), Some(ind)) => {
            let mark = indicator_ops(k1 as u64, k2 as u64, &data, ind, &[]);
            b.circuit.extend_ops(mark.iter().cloned());
            b.circuit.extend_ops(amplitude_ops(&bulk_values, norm_d, s_qubits, amp, &[Control::on(ind)])?);
            b.circuit.extend_ops(mark);
        }
        (Some(_), None) => b.circuit.extend_ops(amplitude_ops(&bulk_values, norm_d, s_qubits, amp, &[])?),
        (None, _) => {}
    }
    for &j in &special {
        let values: Vec<C64> = (0..kappa).map(|s| entry_for(s, j)).collect();
        let enable = Control::pattern(&data, j as u64);
        b.circuit.extend_ops(amplitude_ops(&values, norm_d, s_qubits, amp, &enable)?);
    }

    let bs_map: Vec<usize> = data.iter().chain(&index).chain(&access_pure).copied().collect();
    b.circuit.append_mapped(&bs_col, &bs_map)?;
    b.circuit.extend_ops(swap_registers(&index, &data));
    b.embed(&of, &data, &f_flags, &f_pure, &[])?;
    b.circuit.append_mapped(&bs_row.adjoint(), &bs_map)?;
    b.circuit.extend_ops(prep.iter().rev().map(GateOp::adjoint));

    let alpha = kappa as f64 * norm_d * of.alpha;
    b.finish(alpha, dim, label)
}

/// `diag(f)·D` for a circulant profile.
pub fn encode_term_periodic(profile: &BandedProfile, f: &PiecewisePolynomial, n: usize) -> Result<BlockEncodingHandle> {
    if !profile.boundary_rows.is_empty() {
        return Err(Error::Domain("periodic term encoding needs a profile without boundary rows".into()));
    }
    encode_banded(profile, f, n, "term")
}

/// `diag(f)·D` where rows outside `[k1, k2]` deviate from the bulk pattern.
pub fn encode_term_robin(
    profile: &BandedProfile,
    f: &PiecewisePolynomial,
    k1: usize,
    k2: usize,
    n: usize,
) -> Result<BlockEncodingHandle> {
    let dim = 1usize << n;
    if k1 > k2 || k2 >= dim {
        return Err(Error::Domain(format!("bulk rows [{k1}, {k2}] invalid for N = {dim}")));
    }
    if let Some(i) = profile.boundary_rows.keys().find(|&&i| i >= k1 && i <= k2) {
        return Err(Error::Domain(format!("boundary row {i} lies inside the bulk range [{k1}, {k2}]")));
    }
    encode_banded(profile, f, n, "term")
}

/// Term encoding choosing the bulk rows from the profile.
pub fn encode_term(profile: &BandedProfile, f: &PiecewisePolynomial, n: usize) -> Result<BlockEncodingHandle> {
    match profile.bulk_row_range() {
        Some((k1, k2)) if !profile.boundary_rows.is_empty() => encode_term_robin(profile, f, k1, k2, n),
        Some(_) => encode_term_periodic(profile, f, n),
        None => encode_banded(profile, f, n, "term"),
    }
}

/// `(diag(f)·D)† = D†·diag(f*)`.
pub fn encode_term_adjoint(term: &BlockEncodingHandle) -> BlockEncodingHandle {
    term.adjoint()
}
