// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense extraction of unitaries and encoded blocks.

use super::{apply_to_slice, SparseState};
use crate::circuit::Circuit;
use crate::{CMatrix, Error, Result, C64};

/// Largest block dimension [`extract_block`] accepts.
pub const MAX_BLOCK_DIM: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Dense,
    Sparse,
    /// Dense up to 16 qubits, sparse above.
    Auto,
}

fn spread(k: usize, qubits: &[usize]) -> usize {
    qubits.iter().enumerate().map(|(b, &q)| ((k >> b) & 1) << q).sum()
}

/// Full unitary of a circuit with at most 12 qubits.
pub fn circuit_unitary(c: &Circuit) -> Result<CMatrix> {
    let n = c.qubit_count();
    if n > 12 {
        return Err(Error::Resource(format!("dense unitary of {n} qubits refused")));
    }
    let all: Vec<usize> = (0..n).collect();
    extract_block_with(c, &all, 1 << n, Backend::Dense)
}

/// `⟨0_anc, i| U |0_anc, j⟩` for `i, j < dim`, where `data` lists the data
/// qubits (LSB first) and every other qubit is an ancilla.
pub fn extract_block(c: &Circuit, data: &[usize], dim: usize) -> Result<CMatrix> {
    extract_block_with(c, data, dim, Backend::Auto)
}

pub fn extract_block_with(c: &Circuit, data: &[usize], dim: usize, backend: Backend) -> Result<CMatrix> {
    if dim > MAX_BLOCK_DIM {
        return Err(Error::Resource(format!("block dimension {dim} exceeds {MAX_BLOCK_DIM}")));
    }
    if dim > 1usize << data.len() {
        return Err(Error::Dimension(format!("block dimension {dim} exceeds the data register")));
    }
    if data.iter().any(|&q| q >= c.qubit_count()) {
        return Err(Error::Dimension("data qubit outside circuit".into()));
    }
    let n = c.qubit_count();
    let backend = match backend {
        Backend::Auto if n <= 16 => Backend::Dense,
        Backend::Auto => Backend::Sparse,
        b => b,
    };
    let idx: Vec<usize> = (0..dim).map(|k| spread(k, data)).collect();
    let mut out = CMatrix::zeros(dim, dim);
    match backend {
        Backend::Dense => {
            if n > super::DEFAULT_MAX_QUBITS {
                return Err(Error::Resource(format!("{n} qubits exceed the simulator cap")));
            }
            let mut v = vec![C64::new(0.0, 0.0); 1 << n];
            for (j, &col) in idx.iter().enumerate() {
                v.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                v[col] = C64::new(1.0, 0.0);
                apply_to_slice(c, &mut v)?;
                for (i, &row) in idx.iter().enumerate() {
                    out[(i, j)] = v[row];
                }
            }
        }
        _ => {
            for (j, &col) in idx.iter().enumerate() {
                let mut s = SparseState::basis(n, col as u64)?;
                s.apply(c)?;
                for (i, &row) in idx.iter().enumerate() {
                    out[(i, j)] = s.get(row as u64);
                }
            }
        }
    }
    Ok(out)
}
