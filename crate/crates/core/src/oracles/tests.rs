// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::circuit::{GateOp, U2};
use crate::linalg::{kron, max_abs_diff};
use crate::model::{Coeff, PiecewisePolynomial, Segment};
use crate::sim::{circuit_unitary, StateVector};
use crate::{CMatrix, C64};

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let m = random_matrix(rng, dim);
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn assert_encodes(h: &BlockEncodingHandle, want: &CMatrix, tol: f64) {
    let got = h.encoded().unwrap();
    let err = max_abs_diff(&got, want);
    assert!(err <= tol, "{}: error {err:.3e}", h.label);
}

fn assert_unitary(h: &BlockEncodingHandle) {
    let u = circuit_unitary(h.circuit()).unwrap();
    let d = u.nrows();
    let err = max_abs_diff(&(u.adjoint() * &u), &CMatrix::identity(d, d));
    assert!(err <= 1e-9, "{}: unitarity defect {err:.3e}", h.label);
}

#[test]
fn dense_encoding_reproduces_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dim in [1, 2, 3, 4, 8] {
        let a = random_matrix(&mut rng, dim);
        let h = dense_block_encoding(&a, None).unwrap();
        assert_encodes(&h, &a, 1e-10);
        assert_unitary(&h);
    }
}

#[test]
fn synthesized_unitary_matches() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = random_hermitian(&mut rng, 8);
    let u = crate::linalg::hermitian_function(&h, |v| C64::from_polar(1.0, v));
    let mut c = crate::Circuit::with_data(3);
    c.extend_ops(synthesize_unitary(&u, &[0, 1, 2]).unwrap());
    assert!(max_abs_diff(&circuit_unitary(&c).unwrap(), &u) < 1e-11);
}

#[test]
fn lcu_single_handle_is_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_matrix(&mut rng, 4);
    let h = dense_block_encoding(&a, Some(3.0)).unwrap();
    let l = lcu_combine(std::slice::from_ref(&h), &[C64::new(1.0, 0.0)]).unwrap();
    assert_eq!(l.alpha, h.alpha);
    assert_encodes(&l, &a, 1e-10);
}

#[test]
fn lcu_of_matrix_and_adjoint_is_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = random_matrix(&mut rng, 4);
    let h = dense_block_encoding(&a, None).unwrap();
    let half = C64::new(0.5, 0.0);
    let l = lcu_combine(&[h.clone(), h.adjoint()], &[half, half]).unwrap();
    let got = l.encoded().unwrap();
    assert!(crate::linalg::hermiticity_defect(&got) < 1e-10);
    assert_encodes(&l, &((&a + a.adjoint()) * half), 1e-10);
}

#[test]
fn lcu_random_complex_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mats: Vec<CMatrix> = (0..3).map(|_| random_matrix(&mut rng, 8)).collect();
    let handles: Vec<_> = mats.iter().map(|m| dense_block_encoding(m, None).unwrap()).collect();
    let weights = [C64::new(0.3, -1.2), C64::new(-2.0, 0.0), C64::new(0.0, 0.7)];
    let l = lcu_combine(&handles, &weights).unwrap();
    let want = mats.iter().zip(&weights).fold(CMatrix::zeros(8, 8), |acc, (m, w)| acc + m * *w);
    let alpha: f64 = handles.iter().zip(&weights).map(|(h, w)| h.alpha * w.norm()).sum();
    assert!((l.alpha - alpha).abs() < 1e-12);
    assert_encodes(&l, &want, 1e-9);
    assert_unitary(&l);
}

#[test]
fn lcu_rejects_mismatched_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let h1 = dense_block_encoding(&random_matrix(&mut rng, 4), None).unwrap();
    let h2 = dense_block_encoding(&random_matrix(&mut rng, 8), None).unwrap();
    assert!(lcu_combine(&[h1, h2], &[C64::new(1.0, 0.0); 2]).is_err());
}

#[test]
fn tensor_with_identity_and_diagonals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = random_matrix(&mut rng, 4);
    let h = dense_block_encoding(&a, None).unwrap();
    let id = identity(&h.data_registers(), 4).unwrap();
    let t = tensor(&id, &h).unwrap();
    assert_encodes(&t, &kron(&CMatrix::identity(4, 4), &a), 1e-10);

    let f = PiecewisePolynomial::from_real((0.0, 1.0), &[0.5, 1.0]);
    let g = PiecewisePolynomial::from_real((-1.0, 1.0), &[0.0, 0.0, 1.0, 0.3]);
    let hf = piecewise_poly_oracle(&f, 2).unwrap();
    let hg = piecewise_poly_oracle(&g, 2).unwrap();
    let t = tensor(&hf, &hg).unwrap();
    assert_eq!(t.alpha, hf.alpha * hg.alpha);
    let df = CMatrix::from_diagonal(&crate::CVector::from_vec(f.sample(2)));
    let dg = CMatrix::from_diagonal(&crate::CVector::from_vec(g.sample(2)));
    assert_encodes(&t, &kron(&df, &dg), 1e-8);
}

#[test]
fn product_scale_zero_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = random_matrix(&mut rng, 4);
    let b = random_matrix(&mut rng, 4);
    let ha = dense_block_encoding(&a, None).unwrap();
    let hb = dense_block_encoding(&b, None).unwrap();
    assert_encodes(&product(&ha, &hb).unwrap(), &(&a * &b), 1e-9);
    let s = scale(&ha, 3.0 * ha.alpha).unwrap();
    assert_eq!(s.alpha, 3.0 * ha.alpha);
    assert_encodes(&s, &a, 1e-10);
    assert!(scale(&ha, 0.5 * ha.alpha).is_err());
    let regs = ha.data_registers();
    assert_encodes(&zero(&regs, 4).unwrap(), &CMatrix::zeros(4, 4), 0.0);
    let c = C64::new(-0.4, 1.1);
    assert_encodes(&constant(c, &regs, 4).unwrap(), &(CMatrix::identity(4, 4) * c), 1e-12);
}

#[test]
fn coordinate_encoding_is_exact_grid() {
    for n in 1..5 {
        let h = coordinate_encoding(n).unwrap();
        assert_eq!(h.alpha, 1.0);
        let m = (1usize << n) - 1;
        let want = CMatrix::from_fn(m + 1, m + 1, |r, c| {
            if r == c {
                C64::new(-1.0 + 2.0 * r as f64 / m as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert_encodes(&h, &want, 1e-12);
    }
}

#[test]
fn pauli_string_parse_order() {
    let p = PauliString::parse("XIZ").unwrap();
    assert_eq!(p.factors, vec![(2, 'X'), (0, 'Z')]);
    assert!(PauliString::parse("XQ").is_err());
}

#[test]
fn pauli_lcu_matches_dense_sum() {
    let h = coordinate_encoding(2).unwrap();
    let regs = h.data_registers();
    let terms = vec![
        (C64::new(0.5, 0.0), PauliString::parse("XZ").unwrap()),
        (C64::new(0.0, -0.25), PauliString::parse("YI").unwrap()),
    ];
    let l = pauli_lcu(&regs, 4, &terms).unwrap();
    let x = CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|v| C64::new(v, 0.0)));
    let z = CMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0].map(|v| C64::new(v, 0.0)));
    let y = CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
    let want = kron(&x, &z) * C64::new(0.5, 0.0) + kron(&y, &CMatrix::identity(2, 2)) * C64::new(0.0, -0.25);
    assert_encodes(&l, &want, 1e-12);
}

fn diag_of(v: Vec<C64>) -> CMatrix {
    CMatrix::from_diagonal(&crate::CVector::from_vec(v))
}

#[test]
fn poly_oracle_constant() {
    let f = PiecewisePolynomial::constant((0.0, 10.0), Coeff::real(2.5));
    let h = piecewise_poly_oracle(&f, 3).unwrap();
    assert_encodes(&h, &(CMatrix::identity(8, 8) * C64::new(2.5, 0.0)), 1e-8);
}

#[test]
fn poly_oracle_identity_function() {
    let f = PiecewisePolynomial::from_real((-1.0, 1.0), &[0.0, 1.0]);
    let h = piecewise_poly_oracle(&f, 4).unwrap();
    assert_encodes(&h, &diag_of(f.sample(4)), 1e-8);
}

#[test]
fn poly_oracle_complex_cubic_on_shifted_domain() {
    let coeffs = vec![Coeff::real(0.3), Coeff::Complex(C64::new(0.0, -0.2)), Coeff::real(0.05), Coeff::Complex(C64::new(0.01, 0.02))];
    let f = PiecewisePolynomial::single((0.0, 4.0), coeffs);
    let h = piecewise_poly_oracle(&f, 3).unwrap();
    assert_encodes(&h, &diag_of(f.sample(3)), 1e-8);
    assert_unitary(&h);
}

#[test]
fn poly_oracle_two_segment_step() {
    let segs = vec![
        Segment { lo: 0.0, hi: 0.5, coeffs: vec![Coeff::real(1.0)] },
        Segment { lo: 0.5, hi: 1.0, coeffs: vec![Coeff::real(-1.0)] },
    ];
    let f = PiecewisePolynomial::new((0.0, 1.0), segs).unwrap();
    let h = piecewise_poly_oracle(&f, 3).unwrap();
    let block = h.encoded().unwrap();
    for j in 0..8 {
        let want = if j < 4 { 1.0 } else { -1.0 };
        assert!((block[(j, j)] - C64::new(want, 0.0)).norm() < 1e-8, "j={j}");
    }
    assert_encodes(&h, &diag_of(f.sample(3)), 1e-8);
}

#[test]
fn poly_oracle_quadratic_segments() {
    let segs = vec![
        Segment { lo: -1.0, hi: 0.2, coeffs: vec![Coeff::real(0.0), Coeff::real(0.5), Coeff::real(1.0)] },
        Segment { lo: 0.2, hi: 1.0, coeffs: vec![Coeff::real(1.0), Coeff::real(-0.3)] },
    ];
    let f = PiecewisePolynomial::new((-1.0, 1.0), segs).unwrap();
    let h = piecewise_poly_oracle(&f, 3).unwrap();
    assert_encodes(&h, &diag_of(f.sample(3)), 1e-8);
}

fn run_basis(c: &crate::Circuit, input: usize) -> usize {
    let mut s = StateVector::basis(c.qubit_count(), input).unwrap();
    s.apply(c).unwrap();
    let (idx, amp) =
        s.amplitudes().iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
    assert!((amp.norm() - 1.0).abs() < 1e-10);
    idx
}

#[test]
fn banded_access_exhaustive() {
    for n in 2..=5 {
        let size = 1u64 << n;
        for offsets in [vec![size - 1, 0, 1], vec![0, 1, 5], vec![size - 2, size - 1, 0, 1, 2]] {
            let distinct: std::collections::BTreeSet<_> = offsets.iter().collect();
            if offsets.iter().any(|&o| o >= size) || distinct.len() < offsets.len() {
                continue;
            }
            let l = crate::linalg::ceil_log2(offsets.len());
            let c = banded_sparse_access(&offsets, n, l).unwrap();
            for (s, o) in offsets.iter().enumerate() {
                for i in 0..size {
                    let out = run_basis(&c, (i | ((s as u64) << n)) as usize) as u64;
                    assert_eq!(out & (size - 1), i);
                    assert_eq!((out >> n) & (size - 1), (o + i) % size, "n={n} s={s} i={i}");
                    assert_eq!(out >> (2 * n), 0, "ancillas not restored");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn indicator_matches_predicate(n in 1usize..=6, a in 0u64..64, b in 0u64..64) {
        let size = 1u64 << n;
        let (k1, k2) = (a.min(b) % size, a.max(b) % size);
        let (k1, k2) = (k1.min(k2), k1.max(k2));
        let c = indicator(k1, k2, n).unwrap();
        for i in 0..size {
            let out = run_basis(&c, i as usize) as u64;
            prop_assert_eq!(out & (size - 1), i);
            prop_assert_eq!(out >> n, u64::from(k1 <= i && i <= k2));
        }
    }

    #[test]
    fn amplitude_oracle_random_complex(l in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = rng.gen_range(1..=(1usize << l));
        let vals: Vec<C64> = (0..count).map(|_| C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let norm = vals.iter().map(|v| v.norm()).fold(0.0, f64::max) * 1.1;
        let c = sparse_amplitude_oracle(&vals, norm, l).unwrap();
        let b = crate::sim::extract_block(&c, &(0..l).collect::<Vec<_>>(), 1 << l).unwrap();
        for (s, v) in vals.iter().enumerate() {
            prop_assert!((b[(s, s)] - v / norm).norm() < 1e-10);
        }
    }

    #[test]
    fn random_lcu_unitary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hs: Vec<_> = (0..3).map(|_| dense_block_encoding(&random_matrix(&mut rng, 4), None).unwrap()).collect();
        let w: Vec<C64> = (0..3).map(|_| C64::new(rng.gen_range(0.1..1.0), rng.gen_range(-1.0..1.0))).collect();
        let l = lcu_combine(&hs, &w).unwrap();
        let u = circuit_unitary(l.circuit()).unwrap();
        let d = u.nrows();
        prop_assert!(max_abs_diff(&(u.adjoint() * &u), &CMatrix::identity(d, d)) < 1e-9);
    }
}

#[test]
fn amplitude_oracle_gate_count() {
    for l in 1..7 {
        let vals: Vec<C64> = (0..1usize << l).map(|s| C64::new(1.0 + s as f64, 0.5)).collect();
        let c = sparse_amplitude_oracle(&vals, 200.0, l).unwrap();
        let r = crate::circuit::count_resources(&c, false);
        assert!(r.one_qubit + r.cnot + r.multi_controlled <= 4 * (2 << l), "l={l}: {r}");
    }
}

#[test]
fn banded_access_gate_growth() {
    // Fixed sparsity: expanded counts grow linearly in n.
    let counts: Vec<f64> = (4..=10)
        .map(|n| {
            let c = banded_sparse_access(&[(1 << n) - 1, 0, 1], n, 2).unwrap();
            crate::circuit::count_resources(&c, true).total_elementary() as f64
        })
        .collect();
    let ns: Vec<f64> = (4..=10).map(|n| (n as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|c| c.ln()).collect();
    let (mx, my) = (ns.iter().sum::<f64>() / 7.0, ys.iter().sum::<f64>() / 7.0);
    let slope = ns.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / ns.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope - 1.0).abs() < 0.15, "fitted exponent {slope:.2}, counts {counts:?}");
}

#[test]
fn handle_layout_checks() {
    let mut c = crate::Circuit::new();
    c.add_register("flag", crate::RegisterRole::Flag, 1);
    c.add_register("data", crate::RegisterRole::Data, 1);
    assert!(BlockEncodingHandle::from_circuit(c, 1.0, 2, "bad").is_err());
    let mut c = crate::Circuit::with_data(2);
    c.push(GateOp::OneQubit { target: 0, u: U2::x() });
    let h = BlockEncodingHandle::from_circuit(c, 1.0, 4, "x").unwrap();
    assert_eq!((h.n_data(), h.n_flag(), h.n_pure()), (2, 0, 0));
    assert!(h.adjoint().label.ends_with('†'));
}
