// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};

use super::*;
use crate::linalg::{kron, max_abs_diff};
use crate::sim::{circuit_unitary, extract_block};
use crate::{CMatrix, C64};

fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn random_u2(r: &mut impl Rng) -> U2 {
    U2::global(r.gen_range(-3.0..3.0))
        .mul(&U2::rz(r.gen_range(-3.0..3.0)))
        .mul(&U2::ry(r.gen_range(-3.0..3.0)))
        .mul(&U2::rz(r.gen_range(-3.0..3.0)))
}

fn random_circuit(n: usize, gates: usize, max_controls: usize, seed: u64) -> Circuit {
    let mut r = rng(seed);
    let mut c = Circuit::with_data(n);
    for _ in 0..gates {
        let t = r.gen_range(0..n);
        match r.gen_range(0..3) {
            0 => c.one(t, random_u2(&mut r)),
            1 => {
                let ctl = (t + r.gen_range(1..n)) % n;
                c.cx(ctl, t);
            }
            _ => {
                let mut qs: Vec<usize> = (0..n).filter(|&q| q != t).collect();
                let k = r.gen_range(1..=max_controls.min(n - 1));
                let mut controls = Vec::new();
                for _ in 0..k {
                    let q = qs.remove(r.gen_range(0..qs.len()));
                    controls.push(Control { qubit: q, value: r.gen_bool(0.5) });
                }
                let u = if r.gen_bool(0.3) { U2::x() } else { random_u2(&mut r) };
                c.push(GateOp::MultiControlled { controls, target: t, u });
            }
        }
    }
    c
}

fn u2_matrix(u: &U2) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &u.0)
}

/// Direct matrix of a multi-controlled gate, controls on the high qubits.
fn mc_matrix(k: usize, pattern: u64, u: &U2) -> CMatrix {
    let dim = 1 << (k + 1);
    let mut m = CMatrix::identity(dim, dim);
    let um = u2_matrix(u);
    let base = (pattern as usize) << 1;
    for a in 0..2 {
        for b in 0..2 {
            m[(base | a, base | b)] = um[(a, b)];
        }
    }
    m
}

fn data_block(c: &Circuit) -> CMatrix {
    let data = c.role_qubits(RegisterRole::Data);
    extract_block(c, &data, 1 << data.len()).unwrap()
}

#[test]
fn toffoli_counts_and_matrix() {
    let mut c = Circuit::with_data(3);
    c.mc(vec![Control::on(1), Control::on(2)], 0, U2::x());
    let rc = count_resources(&c, true);
    assert_eq!((rc.one_qubit, rc.cnot, rc.pure_ancillas), (8, 6, 0));
    let e = expand_multicontrol(&c).unwrap();
    assert!(max_abs_diff(&circuit_unitary(&e).unwrap(), &mc_matrix(2, 0b11, &U2::x())) < 1e-12);
}

#[test]
fn single_cnot_counts() {
    let mut c = Circuit::with_data(2);
    c.cx(0, 1);
    let rc = count_resources(&c, false);
    assert_eq!((rc.one_qubit, rc.cnot, rc.pure_ancillas), (0, 1, 0));
    assert_eq!(count_resources(&c, true), rc);
}

#[test]
fn zero_controls_left_unchanged() {
    let mut c = Circuit::with_data(1);
    c.push(GateOp::MultiControlled { controls: vec![], target: 0, u: U2::h() });
    let e = expand_multicontrol(&c).unwrap();
    assert_eq!(e.ops(), &[GateOp::OneQubit { target: 0, u: U2::h() }]);
}

#[test]
fn mcx_expansion_matches_dense_matrix_up_to_five_controls() {
    let mut r = rng(9);
    for k in 1..=5 {
        for u in [U2::x(), random_u2(&mut r)] {
            let pattern = r.gen_range(0..1u64 << k);
            let mut c = Circuit::with_data(k + 1);
            let controls = (0..k).map(|b| Control { qubit: b + 1, value: (pattern >> b) & 1 == 1 }).collect();
            c.push(GateOp::MultiControlled { controls, target: 0, u });
            let e = expand_multicontrol(&with_pool(&c)).unwrap();
            assert!(e.ops().iter().all(|op| !matches!(op, GateOp::MultiControlled { .. })));
            let got = data_block(&e);
            assert!(max_abs_diff(&got, &mc_matrix(k, pattern, &u)) < 1e-10, "k = {k}");
        }
    }
}

#[test]
fn four_control_overhead_within_appendix_bound() {
    let mut r = rng(10);
    let u = random_u2(&mut r);
    let mut base = Circuit::with_data(2);
    base.mc(vec![Control::on(1)], 0, u);
    let b = count_resources(&base, true);
    let mut c = Circuit::with_data(5);
    c.mc((1..5).map(Control::on).collect(), 0, u);
    let rc = count_resources(&c, true);
    assert!(rc.one_qubit <= b.one_qubit + 48, "{rc}");
    assert!(rc.cnot <= b.cnot + 36, "{rc}");
    assert_eq!(rc.pure_ancillas, 3);
}

#[test]
fn insufficient_pool_is_a_resource_error() {
    let mut c = Circuit::with_data(5);
    c.mc((1..5).map(Control::on).collect(), 0, U2::h());
    assert!(matches!(expand_multicontrol(&c), Err(crate::Error::Resource(_))));
}

#[test]
fn expansion_soundness_on_random_circuits() {
    for seed in 0..6 {
        let c = random_circuit(6, 40, 4, seed);
        let e = expand_multicontrol(&with_pool(&c)).unwrap();
        assert!(max_abs_diff(&data_block(&c), &data_block(&e)) < 1e-10);
        let a = count_resources(&c, false);
        let b = count_resources(&c, true);
        assert!(b.one_qubit >= a.one_qubit && b.cnot >= a.cnot);
    }
}

#[test]
fn pool_ancillas_return_to_zero() {
    let c = with_pool(&random_circuit(5, 30, 4, 77));
    let e = expand_multicontrol(&c).unwrap();
    let pool = e.role_qubits(RegisterRole::PureAncilla);
    let mut r = rng(5);
    let n = e.qubit_count();
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for (i, a) in amps.iter_mut().enumerate().take(32) {
        *a = C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let _ = i;
    }
    let mut s = crate::sim::StateVector::from_amplitudes(amps).unwrap();
    s.apply(&e).unwrap();
    assert!((s.probability(&pool, 0).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn adjoint_inverts_and_is_involutive() {
    let c = random_circuit(4, 30, 3, 1);
    assert_eq!(c.adjoint().adjoint(), c);
    let mut both = c.clone();
    both.extend(&c.adjoint());
    let u = circuit_unitary(&both).unwrap();
    assert!(max_abs_diff(&u, &CMatrix::identity(16, 16)) < 1e-12);
    let mut x = Circuit::with_data(1);
    x.x(0);
    assert_eq!(x.adjoint(), x);
}

#[test]
fn controlled_x_is_cnot_and_polarity_zero_works() {
    let mut x = Circuit::with_data(1);
    x.x(0);
    let cx = x.controlled(&[true]);
    let cnot = mc_matrix(1, 1, &U2::x());
    assert!(max_abs_diff(&circuit_unitary(&cx).unwrap(), &cnot) < 1e-15);
    let c0 = x.controlled(&[false]);
    assert!(max_abs_diff(&circuit_unitary(&c0).unwrap(), &mc_matrix(1, 0, &U2::x())) < 1e-15);
}

#[test]
fn controlled_two_qubit_circuit_is_block_diagonal() {
    let c = random_circuit(2, 12, 1, 4);
    let u = circuit_unitary(&c).unwrap();
    let cu = circuit_unitary(&c.controlled(&[true])).unwrap();
    let mut want = CMatrix::identity(8, 8);
    want.view_mut((4, 4), (4, 4)).copy_from(&u);
    assert!(max_abs_diff(&cu, &want) < 1e-12);
    let p0 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
    let p1 = CMatrix::identity(2, 2) - &p0;
    let alt = kron(&p0, &CMatrix::identity(4, 4)) + kron(&p1, &u);
    assert!(max_abs_diff(&cu, &alt) < 1e-12);
}

#[test]
fn controlled_on_overlap_is_rejected() {
    let mut c = Circuit::with_data(2);
    c.x(0);
    assert!(c.controlled_on(&[Control::on(0)]).is_err());
    assert!(c.controlled_on(&[Control::on(1)]).is_ok());
}

#[test]
fn text_round_trip_is_bit_exact() {
    let c = with_pool(&random_circuit(5, 50, 3, 8));
    let t = c.to_text();
    let back = Circuit::from_text(&t).unwrap();
    assert_eq!(back, c);
    assert!(t.lines().any(|l| l.starts_with("MC ")));
}

#[test]
fn invalid_ops_are_rejected() {
    let mut c = Circuit::with_data(2);
    c.ops.push(GateOp::CNot { control: 0, target: 0 });
    assert!(c.validate().is_err());
    let mut d = Circuit::with_data(1);
    d.ops.push(GateOp::OneQubit { target: 0, u: U2::diag(C64::new(2.0, 0.0), C64::new(1.0, 0.0)) });
    assert!(d.validate().is_err());
}
