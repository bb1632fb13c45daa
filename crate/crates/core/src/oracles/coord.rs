// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli-sum encodings, including the exact grid-coordinate diagonal
//! `z_j = -1 + 2j/(N-1) = -Σ_k 2^k Z_k / (N-1)`.

use super::{lcu_combine, BlockEncodingHandle, HandleBuilder};
use crate::circuit::{Register, RegisterRole, U2};
use crate::{Error, Result, C64};

/// Tensor product of single-qubit Paulis on data qubits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PauliString {
    pub factors: Vec<(usize, char)>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: usize, p: char) -> Self {
        Self { factors: vec![(qubit, p)] }
    }

    /// Leftmost character acts on the most significant qubit.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut factors = Vec::new();
        for (i, ch) in s.chars().enumerate() {
            match ch.to_ascii_uppercase() {
                'I' => {}
                p @ ('X' | 'Y' | 'Z') => factors.push((n - 1 - i, p)),
                other => return Err(Error::Domain(format!("unknown Pauli `{other}`"))),
            }
        }
        Ok(Self { factors })
    }

    fn gate(p: char) -> U2 {
        match p {
            'X' => U2::x(),
            'Y' => U2::y(),
            _ => U2::z(),
        }
    }

    fn handle(&self, data: &[Register], dim: usize) -> Result<BlockEncodingHandle> {
        let mut b = HandleBuilder::new(data);
        let n = b.circuit.qubit_count();
        for &(q, p) in &self.factors {
            if q >= n {
                return Err(Error::Dimension(format!("Pauli on qubit {q} outside {n} data qubits")));
            }
            b.circuit.one(q, Self::gate(p));
        }
        b.finish(1.0, dim, "pauli")
    }
}

/// Encoding of `Σ_k w_k P_k` with `α = Σ_k |w_k|`; zero weights are dropped.
pub fn pauli_lcu(data: &[Register], dim: usize, terms: &[(C64, PauliString)]) -> Result<BlockEncodingHandle> {
    let kept: Vec<&(C64, PauliString)> = terms.iter().filter(|(w, _)| w.norm() > 0.0).collect();
    if kept.is_empty() {
        return super::zero(data, dim);
    }
    let handles = kept.iter().map(|(_, p)| p.handle(data, dim)).collect::<Result<Vec<_>>>()?;
    let weights: Vec<C64> = kept.iter().map(|(w, _)| *w).collect();
    lcu_combine(&handles, &weights)
}

fn coordinate_terms(n: usize, c0: C64, c1: C64) -> Vec<(C64, PauliString)> {
    let scale = ((1u64 << n) - 1) as f64;
    let mut terms = vec![(c0, PauliString::identity())];
    for k in 0..n {
        terms.push((-c1 * ((1u64 << k) as f64 / scale), PauliString::single(k, 'Z')));
    }
    terms
}

/// Exact encoding of `diag(z_j)` on `n` data qubits, `α = 1`.
pub fn coordinate_encoding(n: usize) -> Result<BlockEncodingHandle> {
    if n == 0 {
        return Err(Error::Domain("coordinate encoding needs at least one qubit".into()));
    }
    let data = [Register { name: "data".into(), role: RegisterRole::Data, offset: 0, size: n }];
    Ok(pauli_lcu(&data, 1 << n, &coordinate_terms(n, C64::new(0.0, 0.0), C64::new(1.0, 0.0)))?.with_label("z"))
}

/// Encoding of `diag(c0 + c1·z_j)` with `α = |c0| + |c1|`.
pub fn affine_coordinate(data: &[Register], c0: C64, c1: C64) -> Result<BlockEncodingHandle> {
    let n: usize = data.iter().map(|r| r.size).sum();
    if n == 0 {
        return Err(Error::Domain("affine coordinate needs at least one qubit".into()));
    }
    if c1.norm() == 0.0 {
        return super::constant(c0, data, 1 << n);
    }
    Ok(pauli_lcu(data, 1 << n, &coordinate_terms(n, c0, c1))?.with_label("affine"))
}
