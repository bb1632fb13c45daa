// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use super::*;
use crate::discretize::{
    assemble_system, assemble_term, build_stencil, homogenize, HomogenizationMode, StencilChoice, StencilKind,
};
use crate::linalg::max_abs_diff;
use crate::model::{
    BoundaryCondition, Coeff, InitialCondition, MultiTerm, PdeProblem1D, PdeProblemMultiD, PdeTerm1D,
    PiecewisePolynomial, RobinBoundary, SeparableFunctionSpec, SeparableSummand, Segment,
};
use crate::schrodinger::{assemble_h, clock_extend, split_hermitian, ClockSpec, HamiltonianSpec, XiGrid};
use crate::{CMatrix, C64};

const DOMAIN: (f64, f64) = (0.0, 1.0);

fn robin(a1: f64, a2: f64, b1: f64, b2: f64) -> BoundaryCondition {
    BoundaryCondition::Robin(RobinBoundary {
        a1: Coeff::real(a1),
        a2: Coeff::real(a2),
        b1: Coeff::real(b1),
        b2: Coeff::real(b2),
    })
}

fn check(h: &crate::BlockEncodingHandle, want: &CMatrix, tol: f64) {
    let got = h.encoded().unwrap();
    let scale = want.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let err = max_abs_diff(&got, want) / scale;
    assert!(err <= tol, "{}: relative error {err:.3e}", h.label);
}

fn term(order: usize, acc: usize, kind: StencilKind, f: &PiecewisePolynomial, bc: &BoundaryCondition, n: usize) -> crate::discretize::TermAssembly {
    let st = build_stencil(kind, order, acc).unwrap();
    assemble_term(&st, f, bc, n).unwrap()
}

fn two_segment() -> PiecewisePolynomial {
    PiecewisePolynomial::new(
        DOMAIN,
        vec![
            Segment { lo: 0.0, hi: 0.5, coeffs: vec![Coeff::real(1.0), Coeff::real(-0.5)] },
            Segment { lo: 0.5, hi: 1.0, coeffs: vec![Coeff::real(0.25), Coeff::real(0.0), Coeff::real(1.0)] },
        ],
    )
    .unwrap()
}

#[test]
fn periodic_term_matches_dense() {
    let f = PiecewisePolynomial::from_real(DOMAIN, &[0.5, 1.0]);
    for (order, acc) in [(1, 2), (2, 2), (2, 4)] {
        let t = term(order, acc, StencilKind::Central, &f, &BoundaryCondition::Periodic, 3);
        let h = encode_term_periodic(&t.profile, &f, 3).unwrap();
        check(&h, &t.matrix.to_dense(), 1e-9);
    }
}

#[test]
fn robin_term_matches_dense() {
    let f = two_segment();
    for kind in [StencilKind::Central, StencilKind::Forward, StencilKind::Backward] {
        let t = term(2, 2, kind, &f, &robin(0.5, 0.25, 1.0, -0.5), 3);
        let h = encode_term(&t.profile, &f, 3).unwrap();
        check(&h, &t.matrix.to_dense(), 1e-9);
    }
    let t = term(2, 4, StencilKind::Central, &f, &robin(0.5, 0.0, 1.0, 0.0), 3);
    let (k1, k2) = t.profile.bulk_row_range().unwrap();
    let h = encode_term_robin(&t.profile, &f, k1, k2, 3).unwrap();
    check(&h, &t.matrix.to_dense(), 1e-9);
}

#[test]
fn robin_rejects_boundary_rows_in_bulk() {
    let f = PiecewisePolynomial::constant(DOMAIN, 1.0);
    let t = term(2, 2, StencilKind::Central, &f, &robin(0.5, 0.0, 1.0, 0.0), 3);
    assert!(encode_term_robin(&t.profile, &f, 0, 7, 3).is_err());
    assert!(encode_term_periodic(&t.profile, &f, 3).is_err());
}

#[test]
fn dirichlet_term_matches_dense() {
    let f = PiecewisePolynomial::from_real(DOMAIN, &[1.0, 1.0]);
    let bc = BoundaryCondition::Dirichlet { left: Coeff::real(1.0), right: Coeff::real(0.0) };
    let t = term(2, 2, StencilKind::Central, &f, &bc, 3);
    check(&encode_term(&t.profile, &f, 3).unwrap(), &t.matrix.to_dense(), 1e-9);
}

#[test]
fn term_adjoint_encodes_conjugate_transpose() {
    let f = PiecewisePolynomial::single(DOMAIN, vec![Coeff::Complex(C64::new(0.0, 1.0)), Coeff::real(0.5)]);
    let t = term(1, 2, StencilKind::Forward, &f, &robin(1.0, 0.0, 0.0, 0.0), 3);
    let h = encode_term(&t.profile, &f, 3).unwrap();
    check(&encode_term_adjoint(&h), &t.matrix.to_dense().adjoint(), 1e-9);
}

#[test]
fn alpha_is_sparsity_times_normalizations() {
    let f = PiecewisePolynomial::constant(DOMAIN, 1.0);
    let t = term(2, 2, StencilKind::Central, &f, &BoundaryCondition::Periodic, 3);
    let h = encode_term(&t.profile, &f, 3).unwrap();
    let nd = entry_normalization(&t.profile);
    assert!(nd >= t.profile.max_abs() && nd < 2.0 * t.profile.max_abs());
    assert_eq!(h.alpha, 3.0 * nd);
    assert_eq!(offset_range(&t.profile).unwrap(), (-1, 1));
}

fn heat_problem(bc: BoundaryCondition, source: PiecewisePolynomial) -> PdeProblem1D {
    PdeProblem1D {
        domain: DOMAIN,
        terms: vec![
            PdeTerm1D { order: 2, coefficient: PiecewisePolynomial::from_real(DOMAIN, &[0.1, 0.05]) },
            PdeTerm1D { order: 1, coefficient: PiecewisePolynomial::constant(DOMAIN, -0.3) },
        ],
        source,
        boundary: bc,
        initial: InitialCondition::Sine { amplitude: 1.0, k: 1.0, phase: 0.0 },
    }
}

fn system(bc: BoundaryCondition, n: usize) -> crate::discretize::DiscretizedSystem {
    let p = heat_problem(bc, PiecewisePolynomial::from_real(DOMAIN, &[0.2, -0.4]));
    assemble_system(&p, &[StencilChoice::default(); 2], n).unwrap()
}

#[test]
fn generator_and_source_encodings() {
    for bc in [BoundaryCondition::Periodic, robin(0.5, 0.25, 1.0, -0.5)] {
        let sys = system(bc, 3);
        check(&encode_a(&sys).unwrap(), &sys.a.to_dense(), 1e-9);
        let b = encode_b(&sys).unwrap().unwrap();
        let root = 8f64.sqrt();
        let want = crate::linalg::diag(&sys.v.iter().map(|v| v * root).collect::<Vec<_>>());
        check(&b, &want, 1e-9);
    }
}

#[test]
fn split_generator_matches_both_modes() {
    for mode in [HomogenizationMode::General, HomogenizationMode::Identity] {
        let sys = system(robin(0.5, 0.25, 1.0, -0.5), 2);
        let (s, _) = homogenize(&sys, mode);
        let (s1, s2) = split_hermitian(&s);
        let (h1, h2) = encode_s(&sys, mode).unwrap();
        check(&h1, &s1.to_dense(), 1e-9);
        check(&h2, &s2.to_dense(), 1e-9);
    }
}

#[test]
fn zero_source_drops_the_coupling_block() {
    let p = heat_problem(BoundaryCondition::Periodic, PiecewisePolynomial::constant(DOMAIN, 0.0));
    let sys = assemble_system(&p, &[StencilChoice::default(); 2], 2).unwrap();
    assert!(encode_b(&sys).unwrap().is_none());
    let (s, _) = homogenize(&sys, HomogenizationMode::General);
    let (s1, _) = split_hermitian(&s);
    check(&encode_s(&sys, HomogenizationMode::General).unwrap().0, &s1.to_dense(), 1e-9);
}

#[test]
fn hamiltonian_1d_matches_assembly() {
    let sys = system(robin(0.5, 0.25, 1.0, -0.5), 2);
    let xi = XiGrid::new(2, 3.0).unwrap();
    let enc = encode_h_1d(&sys, HomogenizationMode::General, &xi).unwrap();
    let (s, _) = homogenize(&sys, HomogenizationMode::General);
    let want = assemble_h(&HamiltonianSpec::from_generator(&s, xi)).to_dense();
    check(&enc.handle, &want, 1e-8);
    assert_eq!(enc.n_system, 3);
    assert_eq!(enc.layout().iter().map(|r| r.name.as_str()).collect::<Vec<_>>(), ["xi", "data", "homog"]);
    let r = enc.resource_report();
    assert!(r.cnot > 0 && r.alpha == enc.alpha());
    let json = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<ResourceReport>(&json).unwrap(), r);
}

fn sep(factors: Vec<PiecewisePolynomial>) -> SeparableFunctionSpec {
    SeparableFunctionSpec::product(factors)
}

fn problem_2d(outer: Option<Vec<f64>>) -> PdeProblemMultiD {
    let dx = (0.0, 1.0);
    let dy = (-1.0, 1.0);
    let mut coef = sep(vec![PiecewisePolynomial::from_real(dx, &[0.5, 0.25]), PiecewisePolynomial::from_real(dy, &[1.0, 0.0, 0.3])]);
    coef.outer = outer;
    PdeProblemMultiD {
        domains: vec![dx, dy],
        terms: vec![
            MultiTerm { orders: vec![2, 0], coefficient: coef },
            MultiTerm { orders: vec![0, 2], coefficient: SeparableFunctionSpec::constant(&[dx, dy], 0.2) },
            MultiTerm { orders: vec![1, 1], coefficient: SeparableFunctionSpec::constant(&[dx, dy], -0.1) },
        ],
        source: SeparableFunctionSpec {
            summands: vec![
                SeparableSummand { factors: vec![PiecewisePolynomial::from_real(dx, &[0.0, 1.0]), PiecewisePolynomial::constant(dy, 1.0)], clock: None },
                SeparableSummand { factors: vec![PiecewisePolynomial::constant(dx, 0.5), PiecewisePolynomial::from_real(dy, &[0.0, 0.5])], clock: None },
            ],
            outer: None,
        },
        boundaries: vec![BoundaryCondition::Periodic, robin(1.0, 0.0, 0.5, 0.0)],
    }
}

#[test]
fn separable_function_encoding() {
    let p = problem_2d(Some(vec![0.1, 0.2, -0.1]));
    let ns = [2, 2];
    for spec in [&p.terms[0].coefficient, &p.source] {
        let h = encode_separable(spec, &p.domains, &ns).unwrap();
        let sys = assemble_multid(&p, &[StencilChoice::default(); 3], &ns).unwrap();
        let pts: Vec<C64> = (0..16)
            .map(|i| {
                let x = [crate::model::grid_point(0.0, 1.0, 2, i / 4), crate::model::grid_point(-1.0, 1.0, 2, i % 4)];
                spec.evaluate(&x, 0.0).unwrap()
            })
            .collect();
        assert_eq!(sys.dim(), 16);
        check(&h, &crate::linalg::diag(&pts), 1e-8);
    }
}

#[test]
fn multid_generator_and_hamiltonian() {
    let p = problem_2d(None);
    let ns = [2, 2];
    let sys = assemble_multid(&p, &[StencilChoice::default(); 3], &ns).unwrap();
    check(&encode_a_multid(&p, &sys).unwrap(), &sys.a.to_dense(), 1e-9);
    let xi = XiGrid::new(1, 2.0).unwrap();
    let clock = ClockSpec { n_s: 1, l_s: 1.0 };
    let enc = encode_h_multid(&p, &sys, &xi, Some(&clock)).unwrap();
    let h = assemble_h(&HamiltonianSpec::from_generator(&sys.generator(), xi));
    let want = clock_extend(|_| h.clone(), &clock).to_dense();
    check(&enc.handle, &want, 1e-8);
    assert_eq!((enc.n_system, enc.n_xi, enc.n_clock), (5, 1, 1));
}

#[test]
fn multid_rejects_time_dependence_and_inhomogeneous_data() {
    let mut p = problem_2d(None);
    p.terms[1].coefficient.summands[0].clock = Some(PiecewisePolynomial::from_real((0.0, 1.0), &[0.0, 1.0]));
    assert!(encode_separable(&p.terms[1].coefficient, &p.domains, &[1, 1]).is_err());
    let mut q = problem_2d(None);
    q.boundaries[1] = robin(1.0, 0.5, 0.5, 0.0);
    assert!(assemble_multid(&q, &[StencilChoice::default(); 3], &[1, 2]).is_err());
}

#[test]
fn multid_matches_1d_when_one_dimensional() {
    let p1 = heat_problem(robin(0.5, 0.0, 1.0, 0.0), PiecewisePolynomial::from_real(DOMAIN, &[0.2, -0.4]));
    let pm = PdeProblemMultiD {
        domains: vec![DOMAIN],
        terms: p1
            .terms
            .iter()
            .map(|t| MultiTerm { orders: vec![t.order], coefficient: sep(vec![t.coefficient.clone()]) })
            .collect(),
        source: sep(vec![p1.source.clone()]),
        boundaries: vec![p1.boundary],
    };
    let sys1 = assemble_system(&p1, &[StencilChoice::default(); 2], 3).unwrap();
    let sysm = assemble_multid(&pm, &[StencilChoice::default(); 2], &[3]).unwrap();
    assert!(max_abs_diff(&sys1.a.to_dense(), &sysm.a.to_dense()) < 1e-12);
    let (s, _) = homogenize(&sys1, HomogenizationMode::General);
    assert!(max_abs_diff(&s.to_dense(), &sysm.generator().to_dense()) < 1e-12);
}

fn random_profile_case() -> impl Strategy<Value = (usize, usize, u8, Vec<f64>, [f64; 4])> {
    (1usize..=2, 1usize..=2, 0u8..3, prop::collection::vec(-1.0f64..1.0, 1..=3), [-1.0f64..1.0, -1.0..1.0, -1.0..1.0, -1.0..1.0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn term_encoding_matches_assembly((order, acc, kind, coeffs, r) in random_profile_case()) {
        let kind = [StencilKind::Central, StencilKind::Forward, StencilKind::Backward][kind as usize];
        let f = PiecewisePolynomial::from_real(DOMAIN, &coeffs);
        let bc = robin(r[0], r[1], r[2], r[3]);
        let t = term(order, acc * 2 - if kind == StencilKind::Central { 0 } else { 1 }, kind, &f, &bc, 3);
        let h = encode_term(&t.profile, &f, 3).unwrap();
        let got = h.encoded().unwrap();
        let want = t.matrix.to_dense();
        let scale = want.iter().map(|v| v.norm()).fold(1.0, f64::max);
        prop_assert!(max_abs_diff(&got, &want) / scale <= 1e-9);
    }
}


