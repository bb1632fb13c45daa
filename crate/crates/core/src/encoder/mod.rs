// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Block-encodings of the discretized generator and the Schrödingerised
//! Hamiltonian.

mod hamiltonian;
mod multid;
mod term;

pub use hamiltonian::{encode_a, encode_b, encode_h_1d, encode_s, encode_s_from};
pub use multid::{assemble_multid, encode_a_multid, encode_h_multid, encode_separable, MultiDSystem};
pub use term::{encode_term, encode_term_adjoint, encode_term_periodic, encode_term_robin, entry_normalization, offset_range};

use serde::{Deserialize, Serialize};

use crate::circuit::Register;
use crate::oracles::BlockEncodingHandle;
use crate::Result;

/// Gate and ancilla record of one encoding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub one_qubit: usize,
    pub cnot: usize,
    pub pure_ancillas: usize,
    pub alpha: f64,
    pub epsilon: f64,
}

/// Hamiltonian encoding with its register split.
#[derive(Clone, Debug)]
pub struct EncodedHamiltonian {
    pub handle: BlockEncodingHandle,
    /// Qubits of the homogenized system (data plus homogenization qubit).
    pub n_system: usize,
    pub n_xi: usize,
    pub n_clock: usize,
}

impl EncodedHamiltonian {
    pub fn new(handle: BlockEncodingHandle, n_system: usize, n_xi: usize, n_clock: usize) -> Result<Self> {
        if handle.n_data() != n_system + n_xi + n_clock {
            return Err(crate::Error::Dimension(format!(
                "Hamiltonian has {} data qubits, layout needs {}",
                handle.n_data(),
                n_system + n_xi + n_clock
            )));
        }
        Ok(Self { handle, n_system, n_xi, n_clock })
    }

    pub fn alpha(&self) -> f64 {
        self.handle.alpha
    }

    /// Data registers from least to most significant.
    pub fn layout(&self) -> Vec<Register> {
        self.handle.data_registers()
    }

    /// Counts with multi-controlled gates expanded into one-qubit gates and CNOTs.
    pub fn resource_report(&self) -> ResourceReport {
        report(&self.handle)
    }
}

pub fn report(h: &BlockEncodingHandle) -> ResourceReport {
    let r = h.resources(true);
    ResourceReport { one_qubit: r.one_qubit, cnot: r.cnot, pure_ancillas: r.pure_ancillas, alpha: h.alpha, epsilon: h.epsilon }
}

#[cfg(test)]
mod tests;
