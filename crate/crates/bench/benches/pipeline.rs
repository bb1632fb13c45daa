// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qpde::pipeline::{self, Mode, ProblemFile, RunConfig};
use qpde::qsvt::{solve_phases, truncation_degree, Target};
use qpde::sim::StateVector;

const HEAT: &str = include_str!("../../../configs/heat_robin.qpde");

fn config(n: usize, n_xi: usize) -> RunConfig {
    let mut file = ProblemFile::parse(HEAT).expect("shipped config parses");
    file.grid.n = n;
    file.grid.n_xi = n_xi;
    RunConfig::new(file, std::env::temp_dir().join("qpde-bench"))
}

fn discretize(c: &mut Criterion) {
    let mut g = c.benchmark_group("discretize");
    for n in [5, 7, 9] {
        let cfg = config(n, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &cfg, |b, cfg| b.iter(|| pipeline::discretize(cfg).unwrap()));
    }
    g.finish();
}

fn encode(c: &mut Criterion) {
    let mut g = c.benchmark_group("encode_h_1d");
    g.sample_size(10);
    for n in [3, 4, 5] {
        let cfg = config(n, 2);
        let d = pipeline::discretize(&cfg).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| b.iter(|| pipeline::encode(&cfg, d).unwrap()));
    }
    g.finish();
}

fn apply_hamiltonian(c: &mut Criterion) {
    let mut g = c.benchmark_group("apply_h_circuit");
    g.sample_size(10);
    {
        let n = 3;
        let cfg = config(n, 2);
        let d = pipeline::discretize(&cfg).unwrap();
        let enc = pipeline::encode(&cfg, &d).unwrap();
        let q = enc.handle.circuit().qubit_count();
        g.bench_function(BenchmarkId::new("qubits", q), |b| {
            b.iter(|| {
                let mut s = StateVector::basis(q, 1).unwrap();
                s.apply(enc.handle.circuit()).unwrap();
                s
            })
        });
    }
    g.finish();
}

fn phases(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_phases");
    g.sample_size(10);
    for alpha_t in [1.0, 5.0, 20.0] {
        let degree = truncation_degree(alpha_t, 1e-7).next_multiple_of(2);
        g.bench_with_input(BenchmarkId::from_parameter(alpha_t), &alpha_t, |b, &at| {
            b.iter(|| solve_phases(Target::Cos, at, degree, 1e-10).unwrap())
        });
    }
    g.finish();
}

fn evolve_matrix(c: &mut Criterion) {
    let mut g = c.benchmark_group("evolve_matrix");
    g.sample_size(10);
    for n_xi in [4, 6] {
        let cfg = config(5, n_xi).with_mode(Mode::Matrix);
        let d = pipeline::discretize(&cfg).unwrap();
        g.bench_with_input(BenchmarkId::new("n_xi", n_xi), &d, |b, d| {
            b.iter(|| pipeline::evolve(&cfg, d, None, 0.2).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, discretize, encode, apply_hamiltonian, phases, evolve_matrix);
criterion_main!(benches);
