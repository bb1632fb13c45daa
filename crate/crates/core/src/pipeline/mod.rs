// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end driver: discretize, Schrödingerise, encode, evolve, recover and
//! compare against forward Euler, writing CSV, metrics and resource reports.

mod problem_file;

pub use problem_file::{GridSection, Mode, ProblemFile, RecoverySpec, RunSection};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::classical::{flop_estimate, forward_euler, EulerRun};
use crate::discretize::{assemble_system, homogenize, DiscretizedSystem, HomogenizationMode};
use crate::encoder::{encode_h_1d, EncodedHamiltonian, ResourceReport};
use crate::error::StageExt;
use crate::qsvt::{hamiltonian_simulation_with, plan, PhaseCache, SimulationOptions};
use crate::schrodinger::{
    calibrate, clock_extend, evolve_matrix_mode, evolve_xi_blocks, initial_state, recover_solution, split_hermitian,
    ClockSpec, HamiltonianSpec, Recovery, RecoveryStrategy, StateLayout, XiGrid,
};
use crate::sim::{metrics, StateVector};
use crate::sparse::SparseMatrix;
use crate::{CVector, Error, Result, C64};

/// Largest Hamiltonian dimension evolved in matrix mode.
pub const MATRIX_DIM_CAP: usize = 1 << 14;
/// Largest register simulated in circuit mode.
pub const CIRCUIT_QUBIT_CAP: usize = 28;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem_path: Option<PathBuf>,
    pub file: ProblemFile,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn new(file: ProblemFile, out_dir: impl Into<PathBuf>) -> Self {
        Self { problem_path: None, file, out_dir: out_dir.into() }
    }

    pub fn from_path(path: impl AsRef<Path>, out_dir: impl Into<PathBuf>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).stage("parse")?;
        let file = ProblemFile::parse(&text).stage("parse")?;
        Ok(Self { problem_path: Some(path.as_ref().to_path_buf()), file, out_dir: out_dir.into() })
    }

    pub fn mode(&self) -> Mode {
        self.file.run.mode
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.file.run.mode = mode;
        self
    }

    pub fn xi(&self) -> Result<XiGrid> {
        XiGrid::new(self.file.grid.n_xi, self.file.grid.l_xi)
    }

    pub fn clock(&self) -> Option<ClockSpec> {
        self.file.grid.clock.map(|(n_s, l_s)| ClockSpec { n_s, l_s })
    }

    pub fn homogenization(&self) -> HomogenizationMode {
        if self.file.run.general_homogenization {
            HomogenizationMode::General
        } else {
            HomogenizationMode::Identity
        }
    }

    /// Data qubits of the Schrödingerised state: system, homogenization, ξ and clock.
    pub fn state_qubits(&self) -> usize {
        self.file.grid.n + 1 + self.file.grid.n_xi + self.file.grid.clock.map_or(0, |c| c.0)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.file.grid;
        if g.n == 0 || g.n_xi == 0 {
            return Err(Error::Config("n and n_xi must be positive".into()));
        }
        let r = &self.file.run;
        if r.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(Error::Config("times must be finite and non-negative".into()));
        }
        if !(r.epsilon > 0.0 && r.epsilon < 1.0) {
            return Err(Error::Config(format!("epsilon {} outside (0, 1)", r.epsilon)));
        }
        match r.mode {
            Mode::Matrix if 1usize << self.state_qubits() > MATRIX_DIM_CAP => Err(Error::Resource(format!(
                "matrix mode is capped at dimension 2^14, configuration needs 2^{}",
                self.state_qubits()
            ))),
            Mode::Circuit if g.clock.is_some() => {
                Err(Error::Config("the clock register is available in matrix mode only".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Discretized system with its homogenized generator and initial data.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub system: DiscretizedSystem,
    pub generator: SparseMatrix,
    pub s1: SparseMatrix,
    pub u0: Vec<C64>,
    /// `[u0; companion]`.
    pub w0: Vec<C64>,
}

pub fn discretize(cfg: &RunConfig) -> Result<Discretization> {
    let p = &cfg.file.problem;
    let n = cfg.file.grid.n;
    let system = assemble_system(p, &cfg.file.stencils, n).stage("discretize")?;
    let (generator, companion) = homogenize(&system, cfg.homogenization());
    let (s1, _) = split_hermitian(&generator);
    let u0 = p.initial.sample(p.domain, n).stage("discretize")?;
    let mut w0 = u0.clone();
    w0.extend(companion);
    Ok(Discretization { system, generator, s1, u0, w0 })
}

pub fn encode(cfg: &RunConfig, d: &Discretization) -> Result<EncodedHamiltonian> {
    let xi = cfg.xi().stage("encode")?;
    encode_h_1d(&d.system, cfg.homogenization(), &xi).stage("encode")
}

fn strategy(cfg: &RunConfig, d: &Discretization, t: f64) -> RecoveryStrategy {
    cfg.file.run.recovery.strategy(&d.s1, t, cfg.file.run.floor)
}

/// Result of evolving to one time.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub t: f64,
    pub recovery: Recovery,
    /// Probability of the block-encoding flags reading zero (1 in matrix mode).
    pub flag_probability: f64,
    pub window: Vec<usize>,
}

impl Evolution {
    pub fn success_probability(&self) -> f64 {
        self.flag_probability * self.recovery.success_probability
    }
}

fn evolve_matrix(cfg: &RunConfig, d: &Discretization, t: f64) -> Result<(CVector, CVector, usize)> {
    let xi = cfg.xi()?;
    match cfg.clock() {
        None => {
            let psi0 = initial_state(&d.w0, &xi, None)?;
            let spec = HamiltonianSpec::from_generator(&d.generator, xi);
            let psi = if t == 0.0 { psi0.clone() } else { evolve_matrix_mode(&spec, &psi0, t)? };
            Ok((psi0, psi, 0))
        }
        Some(clock) => {
            let sigma = 4.0 * clock.ds();
            let psi0 = initial_state(&d.w0, &xi, Some((&clock, sigma)))?;
            let (s1, s2) = split_hermitian(&d.generator);
            let (s1, s2) = (s1.to_dense(), s2.to_dense());
            let ns = clock.len();
            let block = |x: f64| {
                let h = SparseMatrix::from_dense(&(&s1 * C64::new(x, 0.0) + &s2));
                clock_extend(|_| h.clone(), &clock).to_dense()
            };
            let psi = if t == 0.0 { psi0.clone() } else { evolve_xi_blocks(block, &xi, ns, &psi0, t)? };
            Ok((psi0, psi, clock.nearest_index(-t)))
        }
    }
}

fn evolve_circuit(
    cfg: &RunConfig,
    d: &Discretization,
    enc: &EncodedHamiltonian,
    t: f64,
) -> Result<(CVector, CVector, f64)> {
    let xi = cfg.xi()?;
    let psi0 = initial_state(&d.w0, &xi, None)?;
    if t == 0.0 {
        return Ok((psi0.clone(), psi0, 1.0));
    }
    let cache = PhaseCache::new(cfg.out_dir.join("phases"))?;
    let opts = SimulationOptions { cache: Some(cache), ..Default::default() };
    let (sim, plan) = hamiltonian_simulation_with(&enc.handle, t, cfg.file.run.epsilon, &opts)?;
    let qubits = sim.circuit().qubit_count();
    if qubits > CIRCUIT_QUBIT_CAP {
        return Err(Error::Resource(format!("circuit needs {qubits} qubits, the simulator is capped at {CIRCUIT_QUBIT_CAP}")));
    }
    log::info!("circuit mode: t = {t}, {qubits} qubits, degree {}, {} gates", plan.degree, sim.circuit().len());
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << qubits];
    amps[..psi0.len()].copy_from_slice(psi0.as_slice());
    let mut state = StateVector::from_amplitudes(amps)?;
    state.apply(sim.circuit())?;
    let kept = &state.amplitudes()[..psi0.len()];
    let p_flags: f64 = kept.iter().map(|z| z.norm_sqr()).sum();
    let psi = CVector::from_iterator(psi0.len(), kept.iter().map(|z| z * sim.alpha));
    Ok((psi0, psi, p_flags))
}

/// Evolve to `t` in the configured mode and recover `u(t)`.
pub fn evolve(cfg: &RunConfig, d: &Discretization, enc: Option<&EncodedHamiltonian>, t: f64) -> Result<Evolution> {
    let xi = cfg.xi().stage("schrodingerize")?;
    let (psi0, psi, clock_index, p_flags) = match cfg.mode() {
        Mode::Matrix => {
            let (a, b, k) = evolve_matrix(cfg, d, t).stage("simulate")?;
            (a, b, k, 1.0)
        }
        Mode::Circuit => {
            let owned;
            let enc = match enc {
                Some(e) => e,
                None => {
                    owned = encode(cfg, d)?;
                    &owned
                }
            };
            let (a, b, p) = evolve_circuit(cfg, d, enc, t).stage("simulate")?;
            (a, b, 0, p)
        }
    };
    let layout = StateLayout { data: d.u0.len(), xi, clock: cfg.clock().map_or(1, |c| c.len()) };
    let strat = strategy(cfg, d, t);
    let cal_index = cfg.clock().map_or(0, |c| c.nearest_index(0.0));
    let cal = calibrate(&psi0, &d.u0, &layout, &strat, cal_index).stage("recover")?;
    let recovery = recover_solution(&psi, &layout, &strat, &cal, clock_index).stage("recover")?;
    Ok(Evolution { t, recovery, flag_probability: p_flags, window: strat.indices(&xi) })
}

/// Step used by the forward-Euler reference.
pub fn euler_dt(cfg: &RunConfig, d: &Discretization) -> f64 {
    cfg.file.run.euler_dt.unwrap_or_else(|| {
        let m = cfg.file.problem.terms.iter().map(|t| t.order).max().unwrap_or(1).max(1);
        (0.025 * d.system.dx().powi(m as i32)).min(1e-3)
    })
}

pub fn reference(cfg: &RunConfig, d: &Discretization) -> Result<EulerRun> {
    let times = &cfg.file.run.times;
    let t_end = times.iter().copied().fold(0.0, f64::max);
    forward_euler(&d.system.a, &d.system.v, &d.u0, euler_dt(cfg, d), t_end, times, None).stage("compare")
}

#[derive(Clone, Debug, Serialize)]
pub struct Metrics {
    pub t: f64,
    pub mode: String,
    pub mse: f64,
    pub fidelity: f64,
    pub success_probability: f64,
    pub window: Vec<usize>,
    pub euler_dt: f64,
}

pub fn compare(u_quantum: &[C64], u_euler: &[C64]) -> Result<(f64, f64)> {
    metrics(u_quantum, u_euler).stage("compare")
}

/// `x_i,u_quantum,u_euler,abs_error` with real parts; imaginary parts go to
/// `solution_complex.csv` when present.
pub fn solution_csv(x: &[f64], uq: &[C64], ue: &[C64]) -> String {
    let mut s = String::from("x_i,u_quantum,u_euler,abs_error\n");
    for ((x, q), e) in x.iter().zip(uq).zip(ue) {
        let _ = writeln!(s, "{x:?},{:?},{:?},{:?}", q.re, e.re, (q - e).norm());
    }
    s
}

fn complex_csv(x: &[f64], uq: &[C64], ue: &[C64]) -> String {
    let mut s = String::from("x_i,u_quantum_re,u_quantum_im,u_euler_re,u_euler_im\n");
    for ((x, q), e) in x.iter().zip(uq).zip(ue) {
        let _ = writeln!(s, "{x:?},{:?},{:?},{:?},{:?}", q.re, q.im, e.re, e.im);
    }
    s
}

/// Directory name for time `t`.
pub fn time_dir(t: f64) -> String {
    format!("t_{t}")
}

/// Per-stage resource record.
#[derive(Clone, Debug, Serialize)]
pub struct ResourceSummary {
    pub grid_points: usize,
    pub sparsity: usize,
    pub nnz_generator: usize,
    pub state_qubits: usize,
    pub encoding: Option<ResourceReport>,
    pub encoding_qubits: Option<usize>,
    pub per_time: Vec<TimeResources>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TimeResources {
    pub t: f64,
    pub bound_degree: usize,
    pub degree: usize,
    pub calls: usize,
    pub estimated_one_qubit: Option<usize>,
    pub estimated_cnot: Option<usize>,
    /// `κ‖H‖_max t + ln(1/ε)` with `κ` the row sparsity of `H`.
    pub formula_leading: f64,
    pub classical_explicit_flops: f64,
    pub classical_implicit_flops: f64,
}

/// Gate-count formula values next to measured counts for every requested time.
pub fn resources(cfg: &RunConfig, d: &Discretization, enc: Option<&EncodedHamiltonian>) -> Result<ResourceSummary> {
    let xi = cfg.xi().stage("resources")?;
    let h = crate::schrodinger::assemble_h(&HamiltonianSpec::from_generator(&d.generator, xi));
    let kappa = h.row_sparsity();
    let hmax = h.triplets().iter().map(|t| t.2.norm()).fold(0.0, f64::max);
    let report = enc.map(|e| e.resource_report());
    let eps = cfg.file.run.epsilon;
    let order = cfg.file.problem.terms.iter().map(|t| t.order).max().unwrap_or(1);
    let accuracy = cfg.file.stencils.iter().map(|s| s.accuracy).max().unwrap_or(2);
    let mut per_time = Vec::new();
    for &t in &cfg.file.run.times {
        let alpha_t = enc.map_or(kappa as f64 * hmax, |e| e.alpha()) * t;
        let bound = if alpha_t == 0.0 { 1 } else { crate::qsvt::truncation_degree(alpha_t, eps / 4.0) };
        let (degree, calls) = match enc {
            Some(_) if alpha_t > 0.0 && bound <= 64 => {
                let p = plan(alpha_t, eps, &SimulationOptions::default()).stage("resources")?;
                (p.degree, p.total_calls())
            }
            _ => (bound, 3 * bound),
        };
        let flops = flop_estimate(d.system.dim(), 1, order, accuracy, t);
        per_time.push(TimeResources {
            t,
            bound_degree: bound,
            degree,
            calls,
            estimated_one_qubit: report.map(|r| r.one_qubit * calls),
            estimated_cnot: report.map(|r| r.cnot * calls),
            formula_leading: kappa as f64 * hmax * t + (1.0 / eps).ln(),
            classical_explicit_flops: flops.explicit,
            classical_implicit_flops: flops.implicit,
        });
    }
    Ok(ResourceSummary {
        grid_points: d.system.dim(),
        sparsity: d.system.terms.iter().map(|t| t.profile.sparsity()).max().unwrap_or(0),
        nnz_generator: d.generator.nnz(),
        state_qubits: cfg.state_qubits(),
        encoding: report,
        encoding_qubits: enc.map(|e| e.handle.circuit().qubit_count()),
        per_time,
    })
}

pub fn resources_text(r: &ResourceSummary) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "stage discretize: grid_points={} sparsity={} nnz_generator={}", r.grid_points, r.sparsity, r.nnz_generator);
    let _ = writeln!(s, "stage schrodingerize: state_qubits={}", r.state_qubits);
    match (&r.encoding, r.encoding_qubits) {
        (Some(e), Some(q)) => {
            let _ = writeln!(
                s,
                "stage encode: one_qubit={} cnot={} pure_ancillas={} qubits={} alpha={:?} epsilon={:?}",
                e.one_qubit, e.cnot, e.pure_ancillas, q, e.alpha, e.epsilon
            );
        }
        _ => s.push_str("stage encode: skipped\n"),
    }
    for t in &r.per_time {
        let _ = writeln!(
            s,
            "stage simulate t={}: bound_degree={} degree={} calls={} est_one_qubit={} est_cnot={} formula_leading={:.6e} classical_explicit={:.6e} classical_implicit={:.6e}",
            t.t,
            t.bound_degree,
            t.degree,
            t.calls,
            t.estimated_one_qubit.map_or("-".into(), |v| v.to_string()),
            t.estimated_cnot.map_or("-".into(), |v| v.to_string()),
            t.formula_leading,
            t.classical_explicit_flops,
            t.classical_implicit_flops
        );
    }
    s
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub metrics: Vec<Metrics>,
    pub resources: ResourceSummary,
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Full run writing `t_<T>/solution.csv`, `t_<T>/metrics.json`,
/// `resources.txt`, `resources.json` and the `phases/` cache.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate().stage("config")?;
    std::fs::create_dir_all(cfg.out_dir.join("phases")).stage("io")?;
    let d = discretize(cfg)?;
    let enc = match cfg.mode() {
        Mode::Circuit => Some(encode(cfg, &d)?),
        Mode::Matrix => None,
    };
    let euler = reference(cfg, &d)?;
    let x = d.system.grid();
    let mut all = Vec::new();
    for &t in &cfg.file.run.times {
        let ev = evolve(cfg, &d, enc.as_ref(), t)?;
        let ue = euler.at(t).ok_or_else(|| Error::Numerical(format!("no Euler checkpoint at t = {t}"))).stage("compare")?;
        let (mse, fidelity) = compare(&ev.recovery.u, ue)?;
        let m = Metrics {
            t,
            mode: cfg.mode().to_string(),
            mse,
            fidelity,
            success_probability: ev.success_probability(),
            window: ev.window.clone(),
            euler_dt: euler.dt,
        };
        let dir = cfg.out_dir.join(time_dir(t));
        write(&dir.join("solution.csv"), &solution_csv(&x, &ev.recovery.u, ue)).stage("io")?;
        if ev.recovery.u.iter().chain(ue).any(|z| z.im != 0.0) {
            write(&dir.join("solution_complex.csv"), &complex_csv(&x, &ev.recovery.u, ue)).stage("io")?;
        }
        write(&dir.join("metrics.json"), &to_json(&m)?).stage("io")?;
        log::info!("t = {t}: fidelity {fidelity:.8}, mse {mse:.3e}");
        all.push(m);
    }
    let res = resources(cfg, &d, enc.as_ref())?;
    write_resources(cfg, &res)?;
    Ok(RunSummary { metrics: all, resources: res })
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let json = serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(e.to_string())).stage("io")?;
    Ok(json + "\n")
}

/// Write `resources.txt` and `resources.json`.
pub fn write_resources(cfg: &RunConfig, res: &ResourceSummary) -> Result<()> {
    write(&cfg.out_dir.join("resources.txt"), &resources_text(res)).stage("io")?;
    write(&cfg.out_dir.join("resources.json"), &to_json(res)?).stage("io")
}

#[derive(Serialize)]
struct EvolutionRecord<'a> {
    t: f64,
    mode: String,
    success_probability: f64,
    flag_probability: f64,
    window: &'a [usize],
}

/// Write the recovered vector of one evolution to `t_<T>/u_quantum.csv` and
/// its postselection record to `t_<T>/evolution.json`.
pub fn write_evolution(cfg: &RunConfig, d: &Discretization, ev: &Evolution) -> Result<()> {
    let dir = cfg.out_dir.join(time_dir(ev.t));
    let mut s = String::from("x_i,u_quantum_re,u_quantum_im\n");
    for (x, u) in d.system.grid().iter().zip(&ev.recovery.u) {
        let _ = writeln!(s, "{x:?},{:?},{:?}", u.re, u.im);
    }
    write(&dir.join("u_quantum.csv"), &s).stage("io")?;
    let rec = EvolutionRecord {
        t: ev.t,
        mode: cfg.mode().to_string(),
        success_probability: ev.success_probability(),
        flag_probability: ev.flag_probability,
        window: &ev.window,
    };
    write(&dir.join("evolution.json"), &to_json(&rec)?).stage("io")
}

/// Write the assembled operator, source vector and grid for inspection.
pub fn write_discretization(cfg: &RunConfig, d: &Discretization) -> Result<()> {
    let dir = cfg.out_dir.join("discretize");
    write(&dir.join("generator.txt"), &d.generator.to_triplet_text()).stage("io")?;
    write(&dir.join("a.txt"), &d.system.a.to_triplet_text()).stage("io")?;
    let mut v = String::from("x_i,v_re,v_im,u0_re,u0_im\n");
    for ((x, vi), u) in d.system.grid().iter().zip(&d.system.v).zip(&d.u0) {
        let _ = writeln!(v, "{x:?},{:?},{:?},{:?},{:?}", vi.re, vi.im, u.re, u.im);
    }
    write(&dir.join("vectors.csv"), &v).stage("io")
}

/// Write the Hamiltonian circuit and its resource record.
pub fn write_encoding(cfg: &RunConfig, enc: &EncodedHamiltonian) -> Result<()> {
    let dir = cfg.out_dir.join("encode");
    write(&dir.join("hamiltonian.circuit"), &enc.handle.circuit().to_text()).stage("io")?;
    write(&dir.join("resources.json"), &to_json(&enc.resource_report())?).stage("io")
}

#[cfg(test)]
mod tests;
