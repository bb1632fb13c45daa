// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Circuit primitives and block-encoding combinators.
//!
//! A [`BlockEncodingHandle`] circuit lays out its qubits as
//! `[data | flags | pure]` from least significant upward: the block is read
//! with flags and pure ancillas in `|0⟩`, and pure ancillas are always
//! returned to `|0⟩`.

mod amplitude;
mod arith;
mod combine;
mod compare;
mod coord;
mod dense;
mod poly;
pub mod prep;

pub use amplitude::{amplitude_ops, sparse_amplitude_oracle};
pub use arith::{
    add_constant, add_constant_with_scratch, banded_sparse_access, cuccaro_add, permutation_ops, shift_permutation, swap_registers,
    transposition_ops,
};
pub use combine::{constant, identity, lcu_combine, product, scale, tensor, zero};
pub use compare::{geq_ops, indicator, indicator_ops};
pub use dense::{dense_block_encoding, synthesize_unitary};
pub use coord::{affine_coordinate, coordinate_encoding, pauli_lcu, PauliString};
pub use poly::{piecewise_poly_oracle, piecewise_poly_oracle_with, PolyOracleOptions};

use crate::circuit::{count_resources, Circuit, Control, Register, RegisterRole, ResourceCount};
use crate::sim::extract_block;
use crate::{CMatrix, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BlockEncodingHandle {
    circuit: Circuit,
    n_data: usize,
    n_flag: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub dim: usize,
    pub label: String,
}

fn is_data_role(r: RegisterRole) -> bool {
    matches!(r, RegisterRole::Data | RegisterRole::Xi | RegisterRole::Clock)
}

impl BlockEncodingHandle {
    /// Infer `[data | flags | pure]` from the circuit's register roles.
    pub fn from_circuit(circuit: Circuit, alpha: f64, dim: usize, label: &str) -> Result<Self> {
        circuit.validate()?;
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("{label}: normalization {alpha} must be positive")));
        }
        let mut regs: Vec<&Register> = circuit.registers().iter().collect();
        regs.sort_by_key(|r| r.offset);
        let mut pos = 0;
        let mut phase = 0; // 0 data, 1 flags, 2 pure
        let (mut n_data, mut n_flag) = (0, 0);
        for r in regs {
            if r.offset != pos {
                return Err(Error::Circuit(format!("{label}: registers are not contiguous at {}", r.name)));
            }
            let p = if is_data_role(r.role) && phase == 0 {
                0
            } else if r.role == RegisterRole::PureAncilla {
                2
            } else {
                1
            };
            if p < phase {
                return Err(Error::Circuit(format!("{label}: register {} out of data/flag/pure order", r.name)));
            }
            phase = p;
            match p {
                0 => n_data += r.size,
                1 => n_flag += r.size,
                _ => {}
            }
            pos += r.size;
        }
        if pos != circuit.qubit_count() {
            return Err(Error::Circuit(format!("{label}: registers do not cover all qubits")));
        }
        if n_data == 0 || dim == 0 || dim > 1usize << n_data {
            return Err(Error::Dimension(format!("{label}: dimension {dim} does not fit {n_data} data qubits")));
        }
        Ok(Self { circuit, n_data, n_flag, alpha, epsilon: 0.0, dim, label: label.to_string() })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn into_circuit(self) -> Circuit {
        self.circuit
    }

    pub fn n_data(&self) -> usize {
        self.n_data
    }

    pub fn n_flag(&self) -> usize {
        self.n_flag
    }

    pub fn n_pure(&self) -> usize {
        self.circuit.qubit_count() - self.n_data - self.n_flag
    }

    pub fn data_qubits(&self) -> Vec<usize> {
        (0..self.n_data).collect()
    }

    pub fn flag_qubits(&self) -> Vec<usize> {
        (self.n_data..self.n_data + self.n_flag).collect()
    }

    pub fn pure_qubits(&self) -> Vec<usize> {
        (self.n_data + self.n_flag..self.circuit.qubit_count()).collect()
    }

    pub fn data_registers(&self) -> Vec<Register> {
        let mut regs: Vec<Register> =
            self.circuit.registers().iter().filter(|r| r.offset < self.n_data).cloned().collect();
        regs.sort_by_key(|r| r.offset);
        regs
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }

    /// Rename data register `from` to `to`.
    pub fn with_data_name(mut self, from: &str, to: &str) -> Self {
        self.circuit.rename_register(from, to);
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    /// Top-left `dim × dim` block of the circuit unitary.
    pub fn block(&self) -> Result<CMatrix> {
        extract_block(&self.circuit, &self.data_qubits(), self.dim)
    }

    /// `α · block`, the matrix this handle encodes.
    pub fn encoded(&self) -> Result<CMatrix> {
        Ok(self.block()? * crate::C64::new(self.alpha, 0.0))
    }

    pub fn resources(&self, expand: bool) -> ResourceCount {
        count_resources(&self.circuit, expand)
    }

    /// Encoding of `A†`.
    pub fn adjoint(&self) -> Self {
        Self { circuit: self.circuit.adjoint(), label: format!("{}†", self.label), ..self.clone() }
    }
}

/// Incremental construction of a handle circuit in `[data | flags | pure]` order.
#[derive(Clone, Debug)]
pub struct HandleBuilder {
    pub circuit: Circuit,
    pure_started: bool,
}

impl HandleBuilder {
    pub fn new(data: &[Register]) -> Self {
        let mut circuit = Circuit::new();
        for r in data {
            circuit.add_register(&r.name, r.role, r.size);
        }
        Self { circuit, pure_started: false }
    }

    pub fn with_data(n: usize) -> Self {
        let mut circuit = Circuit::new();
        circuit.add_register("data", RegisterRole::Data, n);
        Self { circuit, pure_started: false }
    }

    pub fn flag(&mut self, name: &str, role: RegisterRole, size: usize) -> Register {
        assert!(!self.pure_started, "flag register {name} added after pure ancillas");
        assert!(role != RegisterRole::PureAncilla);
        self.circuit.add_register(name, role, size)
    }

    pub fn pure(&mut self, name: &str, size: usize) -> Register {
        self.pure_started = true;
        self.circuit.add_register(name, RegisterRole::PureAncilla, size)
    }

    /// Append `h` with its data on `data`, flags on `flags`, pure on `pure`,
    /// and `controls` added to every op.
    pub fn embed(
        &mut self,
        h: &BlockEncodingHandle,
        data: &[usize],
        flags: &[usize],
        pure: &[usize],
        controls: &[Control],
    ) -> Result<()> {
        if data.len() != h.n_data || flags.len() < h.n_flag || pure.len() < h.n_pure() {
            return Err(Error::Circuit(format!("embedding {}: register sizes do not match", h.label)));
        }
        let map: Vec<usize> =
            data.iter().chain(&flags[..h.n_flag]).chain(&pure[..h.n_pure()]).copied().collect();
        if controls.is_empty() {
            self.circuit.append_mapped(&h.circuit, &map)
        } else {
            self.circuit.append_controlled(&h.circuit, &map, controls)
        }
    }

    pub fn finish(self, alpha: f64, dim: usize, label: &str) -> Result<BlockEncodingHandle> {
        BlockEncodingHandle::from_circuit(self.circuit, alpha, dim, label)
    }
}

#[cfg(test)]
mod tests;
