// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! State-vector simulation of [`Circuit`]s with native multi-controlled gates.

mod block;
mod kernel;
mod sparse;

pub use block::{circuit_unitary, extract_block, extract_block_with, Backend};
pub use sparse::SparseState;

use std::sync::Arc;

use rustfft::{num_complex::Complex, Fft, FftDirection, FftPlanner};

use crate::circuit::Circuit;
use crate::{CVector, Error, Result, C64};

/// Default cap on simulated qubits (`2^28` amplitudes ≈ 4 GiB).
pub const DEFAULT_MAX_QUBITS: usize = 28;

/// Apply `c` to raw amplitudes (no normalization requirement).
pub fn apply_to_slice(c: &Circuit, amps: &mut [C64]) -> Result<()> {
    if amps.len() != 1usize << c.qubit_count() {
        return Err(Error::Dimension(format!("{} amplitudes for a {}-qubit circuit", amps.len(), c.qubit_count())));
    }
    for op in c.ops() {
        kernel::apply_op(op, amps);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn new(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        Self::check_cap(n, DEFAULT_MAX_QUBITS)?;
        if index >= 1usize << n {
            return Err(Error::Dimension(format!("basis index {index} out of range")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    fn check_cap(n: usize, cap: usize) -> Result<()> {
        if n > cap {
            return Err(Error::Resource(format!("{n} qubits exceed the simulator cap of {cap}")));
        }
        Ok(())
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!("{len} amplitudes is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        Self::check_cap(n, DEFAULT_MAX_QUBITS)?;
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Numerical("cannot normalize a zero or non-finite state".into()));
        }
        Ok(Self { n, amps: amps.into_iter().map(|z| z / norm).collect() })
    }

    pub fn from_vector(v: &CVector) -> Result<Self> {
        Self::from_amplitudes(v.iter().copied().collect())
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn to_vector(&self) -> CVector {
        CVector::from_column_slice(&self.amps)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&mut self, c: &Circuit) -> Result<()> {
        if c.qubit_count() != self.n {
            return Err(Error::Dimension(format!("{}-qubit circuit on a {}-qubit state", c.qubit_count(), self.n)));
        }
        apply_to_slice(c, &mut self.amps)
    }

    fn outcome_mask(&self, qubits: &[usize], outcome: u64) -> Result<(usize, usize)> {
        if outcome >> qubits.len() != 0 && qubits.len() < 64 {
            return Err(Error::Domain(format!("outcome {outcome} does not fit {} qubits", qubits.len())));
        }
        let mut mask = 0usize;
        let mut val = 0usize;
        for (k, &q) in qubits.iter().enumerate() {
            if q >= self.n {
                return Err(Error::Dimension(format!("qubit {q} out of range")));
            }
            mask |= 1 << q;
            if (outcome >> k) & 1 == 1 {
                val |= 1 << q;
            }
        }
        Ok((mask, val))
    }

    /// Probability that `qubits` read `outcome` (bit k of `outcome` for `qubits[k]`).
    pub fn probability(&self, qubits: &[usize], outcome: u64) -> Result<f64> {
        let (mask, val) = self.outcome_mask(qubits, outcome)?;
        Ok(self.amps.iter().enumerate().filter(|(i, _)| i & mask == val).map(|(_, z)| z.norm_sqr()).sum())
    }

    /// Project onto `qubits = outcome` and renormalize.
    pub fn postselect(&self, qubits: &[usize], outcome: u64) -> Result<(f64, StateVector)> {
        let (mask, val) = self.outcome_mask(qubits, outcome)?;
        let p: f64 = self.probability(qubits, outcome)?;
        if p <= 0.0 {
            return Err(Error::Postselection(format!("outcome {outcome} has zero probability")));
        }
        let s = 1.0 / p.sqrt();
        let amps =
            self.amps.iter().enumerate().map(|(i, z)| if i & mask == val { z * s } else { C64::new(0.0, 0.0) }).collect();
        Ok((p, StateVector { n: self.n, amps }))
    }

    fn transform(&mut self, qubits: &[usize], dir: FftDirection) -> Result<()> {
        let m = qubits.len();
        if m == 0 {
            return Ok(());
        }
        if qubits.iter().any(|&q| q >= self.n) {
            return Err(Error::Dimension("register outside state".into()));
        }
        let len = 1usize << m;
        let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft(len, dir);
        let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
        let scale = 1.0 / (len as f64).sqrt();
        let spread = |k: usize| -> usize { qubits.iter().enumerate().map(|(b, &q)| ((k >> b) & 1) << q).sum() };
        let offsets: Vec<usize> = (0..len).map(spread).collect();
        let mut buf = vec![Complex::new(0.0, 0.0); len];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (k, &o) in offsets.iter().enumerate() {
                buf[k] = self.amps[base | o];
            }
            fft.process(&mut buf);
            for (k, &o) in offsets.iter().enumerate() {
                self.amps[base | o] = buf[k] * scale;
            }
        }
        Ok(())
    }

    /// `|k⟩ → 2^{-m/2} Σ_j e^{2πijk/2^m} |j⟩` on `qubits` (LSB first).
    pub fn qft(&mut self, qubits: &[usize]) -> Result<()> {
        self.transform(qubits, FftDirection::Inverse)
    }

    /// Inverse of [`StateVector::qft`].
    pub fn inverse_qft(&mut self, qubits: &[usize]) -> Result<()> {
        self.transform(qubits, FftDirection::Forward)
    }

    pub fn to_csv(&self) -> String {
        crate::schrodinger::state_to_csv(&self.to_vector())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut amps = Vec::new();
        for (ln, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            let err = || Error::Parse { line: ln + 1, msg: "expected index,re,im".into() };
            if f.len() != 3 {
                return Err(err());
            }
            let idx: usize = f[0].trim().parse().map_err(|_| err())?;
            if idx != amps.len() {
                return Err(Error::Parse { line: ln + 1, msg: "indices must be consecutive".into() });
            }
            amps.push(C64::new(f[1].trim().parse().map_err(|_| err())?, f[2].trim().parse().map_err(|_| err())?));
        }
        Self::from_amplitudes(amps)
    }
}

/// Rescale `u_est` to `‖u_ref‖`, align its global phase, and return
/// `(Σ|u_est − u_ref|²/N, |⟨u_est, u_ref⟩|²/(‖u_est‖²‖u_ref‖²))`.
pub fn metrics(u_est: &[C64], u_ref: &[C64]) -> Result<(f64, f64)> {
    if u_est.len() != u_ref.len() || u_est.is_empty() {
        return Err(Error::Dimension("metric inputs differ in length".into()));
    }
    let ne: f64 = u_est.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let nr: f64 = u_ref.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if ne == 0.0 || nr == 0.0 {
        return Err(Error::Domain("metric input has zero norm".into()));
    }
    let ip: C64 = u_est.iter().zip(u_ref).map(|(a, b)| a.conj() * b).sum();
    let fidelity = ip.norm_sqr() / (ne * nr);
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { C64::new(1.0, 0.0) };
    let scale = (nr / ne).sqrt();
    let mse = u_est.iter().zip(u_ref).map(|(a, b)| (a * phase * scale - b).norm_sqr()).sum::<f64>() / u_ref.len() as f64;
    Ok((mse, fidelity))
}
