// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use super::*;

const SMALL: &str = "\
[domain]
a = 0.0
b = 3.0

[term]
order = 2
stencil = central 2
segment 0.0 3.0 1/2

[term]
order = 1
stencil = forward 1
segment 0.0 1.5 (0.0,0.1)
segment 1.5 3.0 0.25 -0.1

[source]
segment 0.0 3.0 0.1 0.05

[boundary]
kind = robin
a1 = 1/2
a2 = 1/4
b1 = 1
b2 = 1/4

[initial]
kind = values
value 1.0
value 0.75
value 0.5
value (0.25,0.1)

[grid]
n = 2
n_xi = 3
l_xi = 6.0

[run]
times = 0.0 0.05
epsilon = 1e-6
mode = matrix
recovery = range 1 2
floor = 1e-12
homogenization = general
euler_dt = 0.0001
";

fn small() -> ProblemFile {
    ProblemFile::parse(SMALL).unwrap()
}

#[test]
fn problem_file_round_trip_is_exact() {
    let f = small();
    let text = f.to_text();
    let again = ProblemFile::parse(&text).unwrap();
    assert_eq!(again, f);
    assert_eq!(again.to_text(), text);
    let squash = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
    assert_eq!(squash(&text), squash(SMALL));
}

#[test]
fn shipped_config_round_trips() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/heat_robin.qpde")).unwrap();
    let f = ProblemFile::parse(&text).unwrap();
    assert_eq!(ProblemFile::parse(&f.to_text()).unwrap(), f);
    assert_eq!((f.grid.n, f.grid.n_xi, f.grid.l_xi), (5, 8, 12.0));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let bad = SMALL.replace("order = 1", "order = x");
    match ProblemFile::parse(&bad) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 11),
        other => panic!("{other:?}"),
    }
    assert!(ProblemFile::parse(&SMALL.replace("[grid]", "[grids]")).is_err());
    assert!(ProblemFile::parse(&SMALL.replace("kind = robin", "kind = neumann")).is_err());
    assert!(ProblemFile::parse(&SMALL.replace("segment 1.5 3.0", "segment 1.6 3.0")).is_err());
}

#[test]
fn zero_time_returns_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(small(), dir.path());
    let summary = run(&cfg).unwrap();
    let m0 = &summary.metrics[0];
    assert_eq!(m0.t, 0.0);
    assert!((m0.fidelity - 1.0).abs() < 1e-12 && m0.mse < 1e-24);
    let csv = std::fs::read_to_string(dir.path().join("t_0/solution.csv")).unwrap();
    assert!(csv.starts_with("x_i,u_quantum,u_euler,abs_error\n"));
    assert!(dir.path().join("t_0.05/metrics.json").exists());
    assert!(dir.path().join("resources.txt").exists());
    assert!(dir.path().join("phases").is_dir());
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(&RunConfig::new(small(), a.path())).unwrap();
    run(&RunConfig::new(small(), b.path())).unwrap();
    for f in ["t_0.05/solution.csv", "t_0.05/metrics.json", "resources.txt"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn circuit_mode_matches_matrix_mode() {
    let mut f = small();
    f.grid.n_xi = 2;
    f.grid.l_xi = 3.0;
    f.run.times = vec![0.02];
    f.run.epsilon = 1e-9;
    f.run.recovery = RecoverySpec::Range(1, 1);
    let dir = tempfile::tempdir().unwrap();
    let m = RunConfig::new(f.clone(), dir.path());
    let c = RunConfig::new(f, dir.path()).with_mode(Mode::Circuit);
    let d = discretize(&m).unwrap();
    let um = evolve(&m, &d, None, 0.02).unwrap();
    let enc = encode(&c, &d).unwrap();
    let uc = evolve(&c, &d, Some(&enc), 0.02).unwrap();
    let diff = um.recovery.u.iter().zip(&uc.recovery.u).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff <= 1e-6, "matrix vs circuit {diff:.3e}");
    assert!(uc.flag_probability > 0.0 && uc.flag_probability <= 1.0);
    assert!(std::fs::read_dir(dir.path().join("phases")).unwrap().count() >= 2);
}

#[test]
fn errors_are_stage_tagged() {
    let mut f = small();
    f.grid.n = 12;
    let cfg = RunConfig::new(f, "unused");
    let msg = run(&cfg).unwrap_err().to_string();
    assert!(msg.starts_with("[config]"), "{msg}");
    let mut f = small();
    f.problem.terms[0].order = 9;
    let msg = run(&RunConfig::new(f, tempfile::tempdir().unwrap().path())).unwrap_err().to_string();
    assert!(msg.starts_with("[discretize]"), "{msg}");
}

#[test]
fn clock_register_in_matrix_mode() {
    let mut f = small();
    f.grid.clock = Some((3, 2.0));
    f.grid.n_xi = 3;
    f.run.times = vec![0.05];
    let dir = tempfile::tempdir().unwrap();
    let with = run(&RunConfig::new(f.clone(), dir.path())).unwrap();
    f.grid.clock = None;
    let without = run(&RunConfig::new(f, dir.path())).unwrap();
    assert!((with.metrics[0].fidelity - without.metrics[0].fidelity).abs() < 1e-3);
}

#[test]
fn resources_report_formula_next_to_counts() {
    let cfg = RunConfig::new(small(), "unused");
    let d = discretize(&cfg).unwrap();
    let enc = encode(&cfg, &d).unwrap();
    let r = resources(&cfg, &d, Some(&enc)).unwrap();
    let text = resources_text(&r);
    assert!(text.contains("stage encode: one_qubit="));
    assert!(text.contains("formula_leading=") && text.contains("classical_explicit="));
    let t1 = &r.per_time[1];
    assert_eq!(t1.calls, 3 * t1.degree);
}
