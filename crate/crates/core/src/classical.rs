// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical baselines: forward Euler, dense matrix exponential,
//! variation-of-constants quadrature and FLOP estimates.

use log::warn;
use serde::Serialize;

use crate::sparse::SparseMatrix;
use crate::{CMatrix, CVector, Error, Result, C64};

pub const DENSE_DIM_CAP: usize = 1 << 12;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn norm1(m: &CMatrix) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `e^{Mt}` by scaling and squaring around a degree-13 Padé approximant.
pub fn dense_expm(m: &CMatrix, t: f64) -> Result<CMatrix> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Dimension(format!("expm needs a square matrix, got {}x{}", n, m.ncols())));
    }
    if n > DENSE_DIM_CAP {
        return Err(Error::Resource(format!("dense expm limited to dim {DENSE_DIM_CAP}, got {n}")));
    }
    let a = m * C64::new(t, 0.0);
    let nrm = norm1(&a);
    if !nrm.is_finite() {
        return Err(Error::Numerical("non-finite matrix in expm".into()));
    }
    let s = if nrm > THETA13 { (nrm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a * C64::new(0.5f64.powi(s), 0.0);
    let id = CMatrix::identity(n, n);
    let b = |k: usize| C64::new(PADE13[k], 0.0);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9));
    let u = &a * (inner_u + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1));
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::Numerical("singular Padé denominator".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

/// Relative residual of `d/dt e^{Mt} p = M e^{Mt} p` by central differences.
pub fn expm_residual(m: &CMatrix, t: f64, probe: &CVector) -> Result<f64> {
    let h = 1e-4 * (1.0 + t.abs());
    let plus = dense_expm(m, t + h)? * probe;
    let minus = dense_expm(m, t - h)? * probe;
    let exact = m * (dense_expm(m, t)? * probe);
    let fd = (plus - minus) / C64::new(2.0 * h, 0.0);
    Ok((fd - &exact).norm() / exact.norm().max(f64::MIN_POSITIVE))
}

/// `u(t) = e^{At}u0 + ∫_0^t e^{A(t-s)} v ds` with composite Simpson quadrature.
pub fn variation_of_constants(a: &CMatrix, v: &CVector, u0: &CVector, t: f64, intervals: usize) -> Result<CVector> {
    let m = intervals + intervals % 2;
    let h = t / m as f64;
    let step = dense_expm(a, h)?;
    // f(s_k) = e^{A(t - s_k)} v, built from k = m down to 0.
    let mut vals = vec![v.clone(); m + 1];
    for k in (0..m).rev() {
        vals[k] = &step * &vals[k + 1];
    }
    let mut integral = CVector::zeros(v.len());
    for (k, f) in vals.iter().enumerate() {
        let w = if k == 0 || k == m { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        integral += f * C64::new(w, 0.0);
    }
    integral *= C64::new(h / 3.0, 0.0);
    Ok(dense_expm(a, t)? * u0 + integral)
}

/// CFL data for the explicit update: stable when `dt ≤ alpha · dx^m`.
#[derive(Clone, Copy, Debug)]
pub struct Cfl {
    pub dx: f64,
    pub order: usize,
    pub alpha: f64,
}

impl Cfl {
    pub fn heat(dx: f64) -> Self {
        Self { dx, order: 2, alpha: 0.25 }
    }

    pub fn bound(&self) -> f64 {
        self.alpha * self.dx.powi(self.order as i32)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerRun {
    pub dt: f64,
    pub steps: usize,
    pub cfl_satisfied: bool,
    #[serde(skip)]
    pub checkpoints: Vec<(f64, Vec<C64>)>,
}

impl EulerRun {
    pub fn final_state(&self) -> &[C64] {
        &self.checkpoints.last().expect("at least one checkpoint").1
    }

    pub fn at(&self, t: f64) -> Option<&[C64]> {
        self.checkpoints.iter().find(|(s, _)| (s - t).abs() <= 1e-9 * (1.0 + t)).map(|(_, u)| u.as_slice())
    }

    /// Rows `t,x,u_re,u_im`.
    pub fn to_csv(&self, x: &[f64]) -> String {
        let mut s = String::from("t,x,u_re,u_im\n");
        for (t, u) in &self.checkpoints {
            for (xi, ui) in x.iter().zip(u) {
                s.push_str(&format!("{t:?},{xi:?},{:?},{:?}\n", ui.re, ui.im));
            }
        }
        s
    }
}

/// Forward Euler `u ← u + dt (A u + v)` up to `T`, with checkpoints at the
/// requested times (snapped to the step grid) and at `T`.
pub fn forward_euler(
    a: &SparseMatrix,
    v: &[C64],
    u0: &[C64],
    dt: f64,
    t_end: f64,
    checkpoints: &[f64],
    cfl: Option<Cfl>,
) -> Result<EulerRun> {
    if !(dt > 0.0) || t_end < 0.0 {
        return Err(Error::Config(format!("forward Euler needs dt > 0 and T ≥ 0, got dt = {dt}, T = {t_end}")));
    }
    let steps = (t_end / dt).round().max(if t_end > 0.0 { 1.0 } else { 0.0 }) as usize;
    let dt = if steps > 0 { t_end / steps as f64 } else { dt };
    let cfl_satisfied = cfl.is_none_or(|c| dt <= c.bound());
    if !cfl_satisfied {
        let c = cfl.unwrap();
        warn!("forward Euler dt = {dt:.3e} exceeds the CFL bound {:.3e} (alpha = {})", c.bound(), c.alpha);
    }
    let mut marks: Vec<usize> = checkpoints
        .iter()
        .filter(|&&t| t <= t_end + 1e-12)
        .map(|&t| if steps == 0 { 0 } else { (t / dt).round() as usize })
        .collect();
    marks.push(steps);
    marks.sort_unstable();
    marks.dedup();
    let mut out = Vec::new();
    let mut u = u0.to_vec();
    let mut next = 0;
    for k in 0..=steps {
        if next < marks.len() && marks[next] == k {
            out.push((k as f64 * dt, u.clone()));
            next += 1;
        }
        if k == steps {
            break;
        }
        let au = a.mul_vec(&u);
        for i in 0..u.len() {
            u[i] += (au[i] + v[i]) * dt;
        }
        if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            let hint = cfl.map_or(String::new(), |c| format!("; CFL bound is {:.3e}", c.bound()));
            return Err(Error::Divergence(format!("forward Euler blew up at step {k} with dt = {dt:.3e}{hint}")));
        }
    }
    Ok(EulerRun { dt, steps, cfl_satisfied, checkpoints: out })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlopReport {
    pub n_points: usize,
    pub dims: usize,
    pub order: usize,
    pub accuracy: usize,
    pub t: f64,
    /// `T · N^{d+m} · m`.
    pub explicit: f64,
    /// `T · N^{d+g}`.
    pub implicit: f64,
    pub explicit_formula: String,
    pub implicit_formula: String,
}

pub fn flop_estimate(n_points: usize, dims: usize, order: usize, accuracy: usize, t: f64) -> FlopReport {
    let nf = n_points as f64;
    FlopReport {
        n_points,
        dims,
        order,
        accuracy,
        t,
        explicit: t * nf.powi((dims + order) as i32) * order as f64,
        implicit: t * nf.powi((dims + accuracy) as i32),
        explicit_formula: format!("T*N^(d+m)*m = {t}*{n_points}^{}*{order}", dims + order),
        implicit_formula: format!("T*N^(d+g) = {t}*{n_points}^{}", dims + accuracy),
    }
}

/// Explicit vs implicit estimates over a range of grid sizes.
pub fn flop_crossover_table(ns: &[usize], dims: usize, order: usize, accuracy: usize, t: f64) -> String {
    let mut s = String::from("N,explicit,implicit,cheaper\n");
    for &n in ns {
        let r = flop_estimate(n, dims, order, accuracy, t);
        let cheaper = if r.explicit <= r.implicit { "explicit" } else { "implicit" };
        s.push_str(&format!("{n},{:.6e},{:.6e},{cheaper}\n", r.explicit, r.implicit));
    }
    s
}
