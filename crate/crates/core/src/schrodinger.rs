// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix-level Schrödingerisation: Hermitian split, `H = S1 ⊗ x_ξ + S2 ⊗ 1`,
//! clock extension, initial states, block evolution and solution recovery.
//!
//! State layout (most to least significant): homogenization flag, data, ξ,
//! then the optional clock register.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::classical::dense_expm;
use crate::linalg::I;
use crate::sparse::SparseMatrix;
use crate::{CMatrix, CVector, Error, Result, C64};

/// Auxiliary coordinate grid `ξ_k = -L + kΔξ`, `Δξ = 2L/(2^{n_ξ} - 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiGrid {
    pub n_xi: usize,
    pub l_xi: f64,
}

impl XiGrid {
    pub fn new(n_xi: usize, l_xi: f64) -> Result<Self> {
        if n_xi == 0 || !(l_xi > 0.0) {
            return Err(Error::Config(format!("invalid ξ grid: n_ξ = {n_xi}, L_ξ = {l_xi}")));
        }
        Ok(Self { n_xi, l_xi })
    }

    pub fn len(&self) -> usize {
        1 << self.n_xi
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dxi(&self) -> f64 {
        2.0 * self.l_xi / (self.len() - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        crate::model::grid(-self.l_xi, self.l_xi, self.n_xi)
    }

    /// Conjugate coordinate of Fourier index `j` after the inverse transform.
    pub fn recovery_coordinate(&self, j: usize) -> f64 {
        let n = self.len() as f64;
        let j = if j < self.len() / 2 { j as f64 } else { j as f64 - n };
        2.0 * PI * j / (n * self.dxi())
    }

    /// Positive Fourier index nearest to `p`.
    pub fn nearest_positive_index(&self, p: f64) -> usize {
        let step = self.recovery_coordinate(1);
        let j = (p / step).round() as i64;
        j.clamp(1, (self.len() / 2 - 1).max(1) as i64) as usize
    }

    pub fn diagonal(&self) -> SparseMatrix {
        SparseMatrix::from_diagonal(&self.points().iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }
}

/// `S1 = (S + S†)/2`, `S2 = (S - S†)/(2i)`.
pub fn split_hermitian(s: &SparseMatrix) -> (SparseMatrix, SparseMatrix) {
    let sd = s.adjoint();
    let s1 = s.plus(&sd).scale(C64::new(0.5, 0.0));
    let s2 = s.plus(&sd.scale(C64::new(-1.0, 0.0))).scale(C64::new(0.0, -0.5));
    (s1, s2)
}

#[derive(Clone, Debug)]
pub struct ClockSpec {
    pub n_s: usize,
    pub l_s: f64,
}

impl ClockSpec {
    pub fn len(&self) -> usize {
        1 << self.n_s
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ds(&self) -> f64 {
        2.0 * self.l_s / (self.len() - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        crate::model::grid(-self.l_s, self.l_s, self.n_s)
    }

    pub fn nearest_index(&self, s: f64) -> usize {
        let k = ((s + self.l_s) / self.ds()).round() as i64;
        k.clamp(0, self.len() as i64 - 1) as usize
    }
}

#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    pub s1: SparseMatrix,
    pub s2: SparseMatrix,
    pub xi: XiGrid,
}

impl HamiltonianSpec {
    pub fn from_generator(s: &SparseMatrix, xi: XiGrid) -> Self {
        let (s1, s2) = split_hermitian(s);
        Self { s1, s2, xi }
    }

    pub fn system_dim(&self) -> usize {
        self.s1.nrows()
    }
}

/// `H = S1 ⊗ x_ξ + S2 ⊗ 1_ξ`.
pub fn assemble_h(spec: &HamiltonianSpec) -> SparseMatrix {
    let x = spec.xi.diagonal();
    let id = SparseMatrix::identity(spec.xi.len());
    spec.s1.kron(&x).plus(&spec.s2.kron(&id))
}

/// Periodic central-difference momentum `-i/(2Δs) (δ_{j,i+1} - δ_{j,i-1})`.
pub fn momentum_matrix(n_s: usize, ds: f64) -> SparseMatrix {
    let n = 1usize << n_s;
    let c = C64::new(0.0, -1.0 / (2.0 * ds));
    let mut p = SparseMatrix::zeros(n, n);
    for i in 0..n {
        p.add(i, (i + 1) % n, c);
        p.add(i, (i + n - 1) % n, -c);
    }
    p
}

/// `H' = Σ_k H(τ_k) ⊗ |k⟩⟨k| + 1 ⊗ p_s` with the clock as least significant
/// register. Under `e^{iH't}` a packet at `s = 0` moves to `s = -t`, so the
/// sampler is evaluated at `τ_k = -s_k`.
pub fn clock_extend(sampler: impl Fn(f64) -> SparseMatrix, clock: &ClockSpec) -> SparseMatrix {
    let ns = clock.len();
    let pts = clock.points();
    let first = sampler(-pts[0]);
    let dim = first.nrows();
    let mut out = SparseMatrix::identity(dim).kron(&momentum_matrix(clock.n_s, clock.ds()));
    for (k, &s) in pts.iter().enumerate() {
        let h = if k == 0 { first.clone() } else { sampler(-s) };
        for (i, j, v) in h.triplets() {
            out.add(i * ns + k, j * ns + k, v);
        }
    }
    out
}

/// `(1/2πσ²)^{1/4} exp(-x²/4σ²)` sampled on the clock grid.
pub fn clock_packet(clock: &ClockSpec, sigma: f64) -> Vec<f64> {
    let c = (1.0 / (2.0 * PI * sigma * sigma)).powf(0.25);
    clock.points().iter().map(|&x| c * (-x * x / (4.0 * sigma * sigma)).exp()).collect()
}

/// `normalize(w0 ⊗ 2/(1+ξ²) [⊗ δ_σ])`.
pub fn initial_state(w0: &[C64], xi: &XiGrid, clock: Option<(&ClockSpec, f64)>) -> Result<CVector> {
    let norm: f64 = w0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Domain("initial vector is zero".into()));
    }
    let prof: Vec<f64> = xi.points().iter().map(|&x| 2.0 / (1.0 + x * x)).collect();
    let packet = clock.map_or(vec![1.0], |(c, s)| clock_packet(c, s));
    let mut out = Vec::with_capacity(w0.len() * prof.len() * packet.len());
    for w in w0 {
        for p in &prof {
            for d in &packet {
                out.push(w * (p * d));
            }
        }
    }
    let v = CVector::from_vec(out);
    let n = v.norm();
    Ok(v / C64::new(n, 0.0))
}

/// Evolve under `e^{iHt}` one ξ-block at a time; `block(ξ)` returns the dense
/// generator on the (system ⊗ clock) space for that ξ value.
pub fn evolve_xi_blocks(
    block: impl Fn(f64) -> CMatrix,
    xi: &XiGrid,
    clock: usize,
    psi: &CVector,
    t: f64,
) -> Result<CVector> {
    let nx = xi.len();
    let pts = xi.points();
    let inner = block(pts[0]).nrows();
    if inner * nx != psi.len() || !inner.is_multiple_of(clock) {
        return Err(Error::Dimension(format!("state length {} does not match blocks", psi.len())));
    }
    let mut out = CVector::zeros(psi.len());
    for (k, &x) in pts.iter().enumerate() {
        let m = block(x) * I;
        let u = dense_expm(&m, t)?;
        let slice = CVector::from_fn(inner, |r, _| {
            let (w, s) = (r / clock, r % clock);
            psi[(w * nx + k) * clock + s]
        });
        let evolved = u * slice;
        for r in 0..inner {
            let (w, s) = (r / clock, r % clock);
            out[(w * nx + k) * clock + s] = evolved[r];
        }
    }
    Ok(out)
}

/// Matrix-mode evolution of the time-independent Hamiltonian in `spec`.
pub fn evolve_matrix_mode(spec: &HamiltonianSpec, psi: &CVector, t: f64) -> Result<CVector> {
    let s1 = spec.s1.to_dense();
    let s2 = spec.s2.to_dense();
    evolve_xi_blocks(|x| &s1 * C64::new(x, 0.0) + &s2, &spec.xi, 1, psi, t)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Window {
    /// The positive Fourier index nearest to this recovery coordinate.
    Single(f64),
    /// Inclusive index range.
    Range(usize, usize),
    /// All indices `1..N/2`.
    AllPositive,
    /// Indices whose recovery coordinate lies in `[lo, hi]`.
    Band(f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryStrategy {
    pub window: Window,
    /// Postselection probability below this is an error.
    pub floor: f64,
}

impl RecoveryStrategy {
    pub fn single(xi_star: f64) -> Self {
        Self { window: Window::Single(xi_star), floor: 1e-12 }
    }

    pub fn default_for(xi: &XiGrid) -> Self {
        Self::single(xi.l_xi / 6.0)
    }

    pub fn indices(&self, xi: &XiGrid) -> Vec<usize> {
        match self.window {
            Window::Single(p) => vec![xi.nearest_positive_index(p)],
            Window::Range(a, b) => (a..=b).collect(),
            Window::AllPositive => (1..xi.len() / 2).collect(),
            Window::Band(lo, hi) => {
                let step = xi.recovery_coordinate(1);
                let last = (xi.len() / 2 - 1).max(1);
                let a = ((lo / step).ceil() as i64).clamp(1, last as i64) as usize;
                let b = ((hi / step).floor() as i64).clamp(a as i64, last as i64) as usize;
                (a..=b).collect()
            }
        }
    }

    /// Band `[p° + 0.5, p° + 2]` above the growth threshold `p° = max(λ_max(S1)·t, 0)`.
    pub fn above_threshold(s1: &SparseMatrix, t: f64) -> Self {
        let (ev, _) = crate::linalg::eigh(&s1.to_dense());
        let top = ev.iter().copied().fold(0.0f64, f64::max) * t.abs();
        Self { window: Window::Band(top + 0.5, top + 2.0), floor: 1e-12 }
    }
}

/// Layout of a Schrödingerised state.
#[derive(Clone, Debug)]
pub struct StateLayout {
    /// Length of `u` (the data register).
    pub data: usize,
    pub xi: XiGrid,
    pub clock: usize,
}

#[derive(Clone, Debug)]
pub struct Recovery {
    pub u: Vec<C64>,
    pub success_probability: f64,
    pub calibration: Vec<C64>,
}

/// Project the homogenization flag on `|0⟩`, inverse-transform ξ, and keep
/// the window columns at one clock slice. Returns `amps[i][w]` and the
/// probability of the kept outcomes.
fn windowed_amplitudes(psi: &CVector, layout: &StateLayout, window: &[usize], clock_index: usize) -> (Vec<Vec<C64>>, f64) {
    let nx = layout.xi.len();
    let nc = layout.clock;
    let scale = 1.0 / (nx as f64).sqrt();
    let twiddle: Vec<Vec<C64>> = window
        .iter()
        .map(|&j| (0..nx).map(|k| C64::from_polar(scale, -2.0 * PI * ((j * k) % nx) as f64 / nx as f64)).collect())
        .collect();
    let mut prob = 0.0;
    let amps: Vec<Vec<C64>> = (0..layout.data)
        .map(|i| {
            twiddle
                .iter()
                .map(|tw| {
                    let b: C64 = (0..nx).map(|k| tw[k] * psi[(i * nx + k) * nc + clock_index]).sum();
                    prob += b.norm_sqr();
                    b
                })
                .collect()
        })
        .collect();
    (amps, prob)
}

/// Calibration constants `c_j` relating windowed amplitudes of `ψ(0)` to `u0`.
pub fn calibrate(
    psi0: &CVector,
    u0: &[C64],
    layout: &StateLayout,
    strategy: &RecoveryStrategy,
    clock_index: usize,
) -> Result<Vec<C64>> {
    let window = strategy.indices(&layout.xi);
    let (amps, _) = windowed_amplitudes(psi0, layout, &window, clock_index);
    let nrm: f64 = u0.iter().map(|z| z.norm_sqr()).sum();
    if nrm == 0.0 {
        return Err(Error::Domain("calibration against a zero initial vector".into()));
    }
    Ok((0..window.len())
        .map(|w| u0.iter().zip(&amps).map(|(u, a)| u.conj() * a[w]).sum::<C64>() / nrm)
        .collect())
}

/// Recover `u(t)` from an evolved state, given calibration constants.
pub fn recover_solution(
    psi: &CVector,
    layout: &StateLayout,
    strategy: &RecoveryStrategy,
    calibration: &[C64],
    clock_index: usize,
) -> Result<Recovery> {
    let window = strategy.indices(&layout.xi);
    if calibration.len() != window.len() {
        return Err(Error::Dimension("calibration length differs from window".into()));
    }
    let (amps, prob) = windowed_amplitudes(psi, layout, &window, clock_index);
    let total = psi.norm_squared();
    let p = prob / total;
    if p < strategy.floor {
        return Err(Error::Postselection(format!("success probability {p:.3e} below floor {:.1e}", strategy.floor)));
    }
    let cn: f64 = calibration.iter().map(|c| c.norm_sqr()).sum();
    if cn == 0.0 {
        return Err(Error::Postselection("calibration vanishes on the window".into()));
    }
    let u = amps.iter().map(|a| a.iter().zip(calibration).map(|(x, c)| c.conj() * x).sum::<C64>() / cn).collect();
    Ok(Recovery { u, success_probability: p, calibration: calibration.to_vec() })
}

/// Convenience wrapper: build `ψ(0)`, evolve in matrix mode and recover `u(t)`.
pub fn schrodingerise_and_recover(
    s: &SparseMatrix,
    w0: &[C64],
    data: usize,
    xi: XiGrid,
    strategy: &RecoveryStrategy,
    t: f64,
) -> Result<Recovery> {
    let spec = HamiltonianSpec::from_generator(s, xi);
    let psi0 = initial_state(w0, &xi, None)?;
    let layout = StateLayout { data, xi, clock: 1 };
    let cal = calibrate(&psi0, &w0[..data], &layout, strategy, 0)?;
    let psi = if t == 0.0 { psi0 } else { evolve_matrix_mode(&spec, &psi0, t)? };
    recover_solution(&psi, &layout, strategy, &cal, 0)
}

pub fn state_to_csv(psi: &CVector) -> String {
    let mut s = String::from("index,re,im\n");
    for (k, z) in psi.iter().enumerate() {
        s.push_str(&format!("{k},{:.16e},{:.16e}\n", z.re, z.im));
    }
    s
}

pub fn is_zero_vec(v: &[C64]) -> bool {
    v.iter().all(|z| z.is_zero())
}
