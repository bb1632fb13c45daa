// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Symmetric QSP phase factors by Newton iteration on reduced phases.
//!
//! Response convention: `U(x) = e^{iφ_0 Z} Π_k W(x) e^{iφ_k Z}` with
//! `W(x) = [[x, i√(1-x²)], [i√(1-x²), x]]`; the realized polynomial is
//! `Re U(x)_{00}`.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};

use super::chebyshev;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(d: usize) -> Self {
        if d.is_multiple_of(2) {
            Self::Even
        } else {
            Self::Odd
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSequence {
    /// Full symmetric sequence `φ_0 … φ_d`.
    pub phases: Vec<f64>,
    pub parity: Parity,
    pub target: String,
    /// Max deviation from the target on `2d + 1` Chebyshev nodes.
    pub residual: f64,
}

impl PhaseSequence {
    pub fn degree(&self) -> usize {
        self.phases.len() - 1
    }

    /// `Re U(x)_{00}`.
    pub fn response(&self, x: f64) -> f64 {
        response(&self.phases, x).re
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("target {}\nparity {:?}\nresidual {:.16e}\n", self.target, self.parity, self.residual);
        for p in &self.phases {
            s.push_str(&format!("phase {p:.17e}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (mut target, mut parity, mut residual, mut phases) = (String::new(), None, f64::NAN, Vec::new());
        for (ln, line) in text.lines().enumerate() {
            let err = || Error::Parse { line: ln + 1, msg: format!("bad phase-file line: {line}") };
            let (k, v) = line.split_once(' ').ok_or_else(err)?;
            match k {
                "target" => target = v.to_string(),
                "parity" => parity = Some(if v == "Even" { Parity::Even } else { Parity::Odd }),
                "residual" => residual = v.parse().map_err(|_| err())?,
                "phase" => phases.push(v.parse().map_err(|_| err())?),
                _ => return Err(err()),
            }
        }
        let parity = parity.ok_or(Error::Parse { line: 0, msg: "missing parity".into() })?;
        if phases.is_empty() {
            return Err(Error::Parse { line: 0, msg: "no phases".into() });
        }
        Ok(Self { phases, parity, target, residual })
    }
}

type M2 = [C64; 4];

fn mul(a: &M2, b: &M2) -> M2 {
    [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
}

fn rz(phi: f64) -> M2 {
    let z = C64::new(0.0, 0.0);
    [C64::from_polar(1.0, phi), z, z, C64::from_polar(1.0, -phi)]
}

fn w(x: f64) -> M2 {
    let s = C64::new(0.0, (1.0 - x * x).max(0.0).sqrt());
    [C64::new(x, 0.0), s, s, C64::new(x, 0.0)]
}

/// `U(x)_{00}` for the full phase list.
pub fn response(phases: &[f64], x: f64) -> C64 {
    let wx = w(x);
    let mut m = rz(phases[0]);
    for &p in &phases[1..] {
        m = mul(&mul(&m, &wx), &rz(p));
    }
    m[0]
}

fn full_from_reduced(red: &[f64], d: usize) -> Vec<f64> {
    (0..=d).map(|k| red[k.min(d - k)]).collect()
}

/// Value and reduced-phase gradient of `Re U(x)_{00}`.
fn value_and_gradient(red: &[f64], d: usize, x: f64) -> (f64, Vec<f64>) {
    let full = full_from_reduced(red, d);
    let wx = w(x);
    let z = C64::new(0.0, 0.0);
    let id: M2 = [C64::new(1.0, 0.0), z, z, C64::new(1.0, 0.0)];
    // prefix[k] = M_0 W M_1 … W (everything left of M_k).
    let mut prefix = Vec::with_capacity(d + 1);
    let mut acc = id;
    for (k, &p) in full.iter().enumerate() {
        prefix.push(acc);
        acc = mul(&acc, &rz(p));
        if k < d {
            acc = mul(&acc, &wx);
        }
    }
    let value = acc[0].re;
    // suffix[k] = W M_{k+1} … M_d (everything right of M_k).
    let mut suffix = vec![id; d + 1];
    let mut acc = id;
    for k in (0..=d).rev() {
        suffix[k] = acc;
        acc = mul(&rz(full[k]), &acc);
        if k > 0 {
            acc = mul(&wx, &acc);
        }
    }
    let mut grad = vec![0.0; red.len()];
    let iz: M2 = [C64::new(0.0, 1.0), z, z, C64::new(0.0, -1.0)];
    for k in 0..=d {
        let dk = mul(&mul(&prefix[k], &mul(&iz, &rz(full[k]))), &suffix[k]);
        grad[k.min(d - k)] += dk[0].re;
    }
    (value, grad)
}

/// Solve for symmetric phases realizing the Chebyshev series `coeffs`
/// (definite parity, sup-norm at most about 1/2).
pub fn solve_for_chebyshev(coeffs: &[f64], tol: f64, label: &str) -> Result<PhaseSequence> {
    let coeffs = chebyshev::trim(coeffs.to_vec());
    let d = chebyshev::degree(&coeffs);
    if chebyshev::parity(&coeffs).is_none() {
        return Err(Error::Domain("phase solve needs a polynomial of definite parity".into()));
    }
    let sup = chebyshev::sup_norm(&coeffs);
    if sup >= 1.0 {
        return Err(Error::Domain(format!("polynomial sup-norm {sup} is not below 1")));
    }
    let dt = d / 2 + 1;
    let nodes: Vec<f64> = (1..=dt).map(|j| ((2 * j - 1) as f64 * PI / (4 * dt) as f64).cos()).collect();
    let target: Vec<f64> = nodes.iter().map(|&x| chebyshev::eval(&coeffs, x)).collect();
    let mut red = vec![0.0; dt];
    red[0] = PI / 4.0;
    let max_iter = 200;
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        let mut jac = DMatrix::<f64>::zeros(dt, dt);
        let mut f = DVector::<f64>::zeros(dt);
        for (j, &x) in nodes.iter().enumerate() {
            let (v, g) = value_and_gradient(&red, d, x);
            f[j] = v - target[j];
            for (m, gm) in g.iter().enumerate() {
                jac[(j, m)] = *gm;
            }
        }
        last = f.amax();
        if last < tol * 1e-2 {
            break;
        }
        let step = jac.lu().solve(&(-f)).ok_or(Error::PhaseSolve { residual: last, iterations: max_iter })?;
        for (r, s) in red.iter_mut().zip(step.iter()) {
            *r += s;
        }
        if !red.iter().all(|v| v.is_finite()) {
            return Err(Error::PhaseSolve { residual: f64::NAN, iterations: max_iter });
        }
    }
    let phases = full_from_reduced(&red, d);
    let m = 2 * d + 1;
    let residual = (0..m)
        .map(|j| {
            let x = ((2 * j + 1) as f64 * PI / (2 * m) as f64).cos();
            (response(&phases, x).re - chebyshev::eval(&coeffs, x)).abs()
        })
        .fold(0.0, f64::max);
    log::debug!("phase solve {label}: degree {d}, node residual {last:.2e}, validation {residual:.2e}");
    if residual > tol {
        return Err(Error::PhaseSolve { residual, iterations: max_iter });
    }
    Ok(PhaseSequence { phases, parity: Parity::of_degree(d), target: label.to_string(), residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Cos,
    Sin,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Self::Cos => "cos",
            Self::Sin => "sin",
        }
    }
}

/// Chebyshev coefficients of `scale·cos(τx)` or `scale·sin(τx)` truncated
/// to the largest degree of matching parity not above `degree`.
pub fn simulation_target(target: Target, tau: f64, degree: usize, scale: f64) -> Vec<f64> {
    let c = match target {
        Target::Cos => super::bessel::cos_expansion(tau, degree),
        Target::Sin => super::bessel::sin_expansion(tau, degree.max(1)),
    };
    chebyshev::scale(&c, scale)
}

/// Phases for `cos(αt·x)/2` or `sin(αt·x)/2`.
pub fn solve_phases(target: Target, alpha_t: f64, degree: usize, tol: f64) -> Result<PhaseSequence> {
    solve_scaled(target, alpha_t, degree, tol, 0.5, None)
}

/// As [`solve_phases`] with an explicit scale and optional on-disk cache.
pub fn solve_scaled(
    target: Target,
    alpha_t: f64,
    degree: usize,
    tol: f64,
    scale: f64,
    cache: Option<&PhaseCache>,
) -> Result<PhaseSequence> {
    let want_parity = match target {
        Target::Cos => 0,
        Target::Sin => 1,
    };
    if degree % 2 != want_parity {
        return Err(Error::Domain(format!("{} needs {} degree, got {degree}", target.name(), ["even", "odd"][want_parity])));
    }
    let key = format!("{}-{:.12e}-{}-{:.3e}-{:.12e}", target.name(), alpha_t, degree, tol, scale);
    if let Some(seq) = cache.and_then(|c| c.get(&key)) {
        return Ok(seq);
    }
    let coeffs = simulation_target(target, alpha_t, degree, scale);
    let seq = solve_for_chebyshev(&coeffs, tol, target.name())?;
    if let Some(c) = cache {
        c.put(&key, &seq)?;
    }
    Ok(seq)
}

/// Directory of cached phase sequences keyed by target parameters.
#[derive(Clone, Debug)]
pub struct PhaseCache {
    dir: PathBuf,
}

impl PhaseCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        std::fs::create_dir_all(dir.as_ref())?;
        Ok(Self { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        let safe: String = key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' }).collect();
        self.dir.join(format!("{safe}.phases"))
    }

    pub fn get(&self, key: &str) -> Option<PhaseSequence> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        PhaseSequence::from_text(&text).ok()
    }

    pub fn put(&self, key: &str, seq: &PhaseSequence) -> Result<()> {
        std::fs::write(self.path(key), seq.to_text())?;
        Ok(())
    }
}
