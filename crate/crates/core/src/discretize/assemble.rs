// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use super::stencil::{build_stencil, StencilChoice, StencilSpec};
use crate::model::{grid, BoundaryCondition, PdeProblem1D, PiecewisePolynomial};
use crate::sparse::SparseMatrix;
use crate::{Error, Result};

/// Shift-invariant pattern of a banded matrix plus the rows that deviate.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedProfile {
    pub n: usize,
    /// `(offset mod N, value)` per sparse index `s`, sorted by signed offset.
    pub bulk: Vec<(usize, C64)>,
    pub boundary_rows: BTreeMap<usize, Vec<C64>>,
}

impl BandedProfile {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn sparsity(&self) -> usize {
        self.bulk.len()
    }

    pub fn offsets(&self) -> Vec<usize> {
        self.bulk.iter().map(|&(o, _)| o).collect()
    }

    /// Extract a profile from a matrix whose nonzeros lie on `(j - i) mod N`
    /// diagonals; the bulk pattern is read from the middle row.
    pub fn from_matrix(d: &SparseMatrix) -> Result<Self> {
        let dim = d.nrows();
        if !dim.is_power_of_two() || d.ncols() != dim {
            return Err(Error::Dimension(format!("banded profile needs a square 2^n matrix, got {dim}")));
        }
        let n = dim.trailing_zeros() as usize;
        let mut offs: Vec<usize> = d.triplets().iter().map(|&(i, j, _)| (j + dim - i) % dim).collect();
        offs.sort_unstable_by_key(|&o| signed(o, dim));
        offs.dedup();
        if offs.is_empty() {
            offs.push(0);
        }
        let mid = dim / 2;
        let bulk: Vec<(usize, C64)> = offs.iter().map(|&o| (o, d.get(mid, (mid + o) % dim))).collect();
        let mut boundary_rows = BTreeMap::new();
        for i in 0..dim {
            let matches = bulk.iter().all(|&(o, v)| d.get(i, (i + o) % dim) == v);
            if !matches {
                boundary_rows.insert(i, (0..dim).map(|j| d.get(i, j)).collect());
            }
        }
        Ok(Self { n, bulk, boundary_rows })
    }

    /// Dense entry `D[i][j]` reconstructed from the profile.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        if let Some(row) = self.boundary_rows.get(&i) {
            return row[j];
        }
        let dim = self.dim();
        let o = (j + dim - i) % dim;
        self.bulk.iter().find(|&&(off, _)| off == o).map_or(C64::zero(), |&(_, v)| v)
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let dim = self.dim();
        let mut m = SparseMatrix::zeros(dim, dim);
        for i in 0..dim {
            for &(o, _) in &self.bulk {
                let j = (i + o) % dim;
                m.set(i, j, self.entry(i, j));
            }
            if let Some(row) = self.boundary_rows.get(&i) {
                for (j, &v) in row.iter().enumerate() {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Largest row range `[K1, K2]` on which rows follow the bulk pattern.
    pub fn bulk_row_range(&self) -> Option<(usize, usize)> {
        contiguous_range(self.dim(), |i| !self.boundary_rows.contains_key(&i))
    }

    /// Column `j` follows the bulk pattern when every entry `D[j - o_s, j]` does.
    pub fn column_is_bulk(&self, j: usize) -> bool {
        let dim = self.dim();
        self.bulk.iter().all(|&(o, v)| {
            let i = (j + dim - o) % dim;
            self.entry(i, j) == v
        }) && (0..dim).all(|i| {
            let o = (j + dim - i) % dim;
            self.bulk.iter().any(|&(off, _)| off == o) || self.entry(i, j) == C64::zero()
        })
    }

    pub fn bulk_column_range(&self) -> Option<(usize, usize)> {
        contiguous_range(self.dim(), |j| self.column_is_bulk(j))
    }

    /// All offsets used by the matrix, including boundary rows.
    pub fn covers_boundary_entries(&self) -> bool {
        let dim = self.dim();
        self.boundary_rows.iter().all(|(&i, row)| {
            row.iter().enumerate().all(|(j, v)| {
                *v == C64::zero() || self.bulk.iter().any(|&(o, _)| (i + o) % dim == j)
            })
        })
    }

    pub fn max_abs(&self) -> f64 {
        let b = self.bulk.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        self.boundary_rows.values().flatten().map(|v| v.norm()).fold(b, f64::max)
    }
}

fn signed(o: usize, dim: usize) -> i64 {
    if o <= dim / 2 {
        o as i64
    } else {
        o as i64 - dim as i64
    }
}

fn contiguous_range(dim: usize, pred: impl Fn(usize) -> bool) -> Option<(usize, usize)> {
    let lo = (0..dim).find(|&i| pred(i))?;
    let hi = (0..dim).rev().find(|&i| pred(i))?;
    (lo..=hi).all(&pred).then_some((lo, hi))
}

/// One assembled term `A_k = diag(f) D` with its boundary corrections.
#[derive(Clone, Debug)]
pub struct TermAssembly {
    pub matrix: SparseMatrix,
    /// The coefficient-free derivative matrix `D`.
    pub derivative: SparseMatrix,
    pub v_prime: Vec<C64>,
    pub profile: BandedProfile,
    pub coefficient: PiecewisePolynomial,
}

/// Assemble `f · ∂^p` on the grid, eliminating ghost points with the
/// boundary conditions.
pub fn assemble_term(
    stencil: &StencilSpec,
    f: &PiecewisePolynomial,
    boundary: &BoundaryCondition,
    n: usize,
) -> Result<TermAssembly> {
    let (a, b) = f.domain();
    let dim = 1usize << n;
    if stencil.width() > dim {
        return Err(Error::GridTooSmall(format!("stencil width {} exceeds N = {dim}", stencil.width())));
    }
    let dx = (b - a) / (dim - 1) as f64;
    let scale = dx.powi(-(stencil.order as i32));
    let gammas = stencil.coeff_f64();
    let last = dim - 1;

    let mut d = SparseMatrix::zeros(dim, dim);
    let mut vp = vec![C64::zero(); dim];
    for i in 0..dim {
        for (&m, &g) in stencil.offsets.iter().zip(&gammas) {
            let c = C64::new(g * scale, 0.0);
            let idx = i as i64 + m;
            if (0..dim as i64).contains(&idx) {
                d.add(i, idx as usize, c);
                continue;
            }
            match boundary {
                BoundaryCondition::Periodic => d.add(i, idx.rem_euclid(dim as i64) as usize, c),
                BoundaryCondition::Robin(r) => {
                    // Mirror ghost: u_{-k} = u_k + 2kΔx(A1 u_0 - A2), and symmetrically on the right.
                    let (k, left) = if idx < 0 { (-idx, true) } else { (idx - last as i64, false) };
                    let mirror = if left { k } else { last as i64 - k };
                    if !(0..dim as i64).contains(&mirror) {
                        return Err(Error::GridTooSmall(format!("ghost point {idx} has no mirror on N = {dim}")));
                    }
                    let w = 2.0 * k as f64 * dx;
                    d.add(i, mirror as usize, c);
                    if left {
                        d.add(i, 0, c * w * r.a1.value());
                        vp[i] -= c * w * r.a2.value();
                    } else {
                        d.add(i, last, -c * w * r.b1.value());
                        vp[i] += c * w * r.b2.value();
                    }
                }
                BoundaryCondition::Dirichlet { left, right } => {
                    // Odd reflection about the boundary value: u_{-k} = 2g - u_k.
                    let (k, g) = if idx < 0 { (-idx, left.value()) } else { (idx - last as i64, right.value()) };
                    let mirror = if idx < 0 { k } else { last as i64 - k };
                    if !(0..dim as i64).contains(&mirror) {
                        return Err(Error::GridTooSmall(format!("ghost point {idx} has no mirror on N = {dim}")));
                    }
                    d.add(i, mirror as usize, -c);
                    vp[i] += c * 2.0 * g;
                }
            }
        }
    }
    if matches!(boundary, BoundaryCondition::Dirichlet { .. }) {
        // Boundary values are held fixed.
        for i in [0, last] {
            for j in 0..dim {
                d.set(i, j, C64::zero());
            }
            vp[i] = C64::zero();
        }
    }
    let fx: Vec<C64> = f.sample(n);
    let mut matrix = SparseMatrix::zeros(dim, dim);
    for (i, j, v) in d.triplets() {
        matrix.set(i, j, fx[i] * v);
    }
    let v_prime: Vec<C64> = vp.iter().zip(&fx).map(|(v, f)| v * f).collect();
    let profile = BandedProfile::from_matrix(&d)?;
    Ok(TermAssembly { matrix, derivative: d, v_prime, profile, coefficient: f.clone() })
}

#[derive(Clone, Debug)]
pub struct DiscretizedSystem {
    pub n: usize,
    pub domain: (f64, f64),
    pub a: SparseMatrix,
    /// `v(x_i) + Σ_k v'_k(x_i)`.
    pub v: Vec<C64>,
    pub source: Vec<C64>,
    pub source_poly: PiecewisePolynomial,
    pub terms: Vec<TermAssembly>,
}

impl DiscretizedSystem {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn grid(&self) -> Vec<f64> {
        grid(self.domain.0, self.domain.1, self.n)
    }

    pub fn dx(&self) -> f64 {
        (self.domain.1 - self.domain.0) / (self.dim() - 1) as f64
    }
}

pub fn assemble_system(problem: &PdeProblem1D, stencils: &[StencilChoice], n: usize) -> Result<DiscretizedSystem> {
    problem.validate()?;
    if stencils.len() != problem.terms.len() {
        return Err(Error::Config(format!(
            "{} stencil choices for {} terms",
            stencils.len(),
            problem.terms.len()
        )));
    }
    let dim = 1usize << n;
    let mut a = SparseMatrix::zeros(dim, dim);
    let source = problem.source.sample(n);
    let mut v = source.clone();
    let mut terms = Vec::with_capacity(problem.terms.len());
    for (term, choice) in problem.terms.iter().zip(stencils) {
        let st = build_stencil(choice.kind, term.order, choice.accuracy)?;
        let t = assemble_term(&st, &term.coefficient, &problem.boundary, n)?;
        a = a.plus(&t.matrix);
        for (vi, wi) in v.iter_mut().zip(&t.v_prime) {
            *vi += wi;
        }
        terms.push(t);
    }
    if matches!(problem.boundary, BoundaryCondition::Dirichlet { .. }) {
        v[0] = C64::zero();
        v[dim - 1] = C64::zero();
    }
    Ok(DiscretizedSystem { n, domain: problem.domain, a, v, source, source_poly: problem.source.clone(), terms })
}

/// Sanity hook used by tests: Dirichlet rows are frozen.
pub fn dirichlet_assembly_check(sys: &DiscretizedSystem) -> bool {
    let last = sys.dim() - 1;
    sys.a.row(0).count() == 0 && sys.a.row(last).count() == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomogenizationMode {
    /// `S = [[A, B], [0, 0]]`, `B = √N diag(v)`, companion `r = 1/√N`.
    General,
    /// `S = [[A, I], [0, 0]]` with companion `v`.
    Identity,
}

/// Returns `S` and the companion vector appended to `u0`.
pub fn homogenize(sys: &DiscretizedSystem, mode: HomogenizationMode) -> (SparseMatrix, Vec<C64>) {
    let dim = sys.dim();
    let mut s = SparseMatrix::zeros(2 * dim, 2 * dim);
    for (i, j, x) in sys.a.triplets() {
        s.set(i, j, x);
    }
    let root = (dim as f64).sqrt();
    match mode {
        HomogenizationMode::General => {
            for i in 0..dim {
                s.set(i, dim + i, sys.v[i] * root);
            }
            (s, vec![C64::new(1.0 / root, 0.0); dim])
        }
        HomogenizationMode::Identity => {
            for i in 0..dim {
                s.set(i, dim + i, C64::new(1.0, 0.0));
            }
            (s, sys.v.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::StencilKind;
    use crate::model::{Coeff, InitialCondition, PdeTerm1D, RobinBoundary};

    fn robin(a1: f64, a2: f64, b1: f64, b2: f64) -> BoundaryCondition {
        BoundaryCondition::Robin(RobinBoundary {
            a1: Coeff::real(a1),
            a2: Coeff::real(a2),
            b1: Coeff::real(b1),
            b2: Coeff::real(b2),
        })
    }

    fn heat(n: usize, bc: BoundaryCondition) -> TermAssembly {
        let st = build_stencil(StencilKind::Central, 2, 4).unwrap();
        let f = PiecewisePolynomial::constant((0.0, 10.0), 1.0);
        assemble_term(&st, &f, &bc, n).unwrap()
    }

    #[test]
    fn neumann_row_zero_diagonal() {
        let t = heat(5, robin(0.0, 0.0, 0.0, 0.0));
        let dx: f64 = 10.0 / 31.0;
        assert!((t.matrix.get(0, 0).re - (-2.5) / (dx * dx)).abs() < 1e-12);
    }

    #[test]
    fn example_rows_closed_forms() {
        let (a1, a2, b1, b2) = (0.5, 0.25, 1.0, 0.25);
        let t = heat(5, robin(a1, a2, b1, b2));
        let dx: f64 = 10.0 / 31.0;
        let s = 1.0 / (dx * dx);
        let close = |x: C64, y: f64| (x.re - y).abs() < 1e-10 * y.abs().max(1.0) && x.im == 0.0;
        assert!(close(t.matrix.get(0, 0), (7.0 * a1 * dx / 3.0 - 2.5) * s));
        assert!(close(t.matrix.get(0, 1), 8.0 / 3.0 * s));
        assert!(close(t.matrix.get(0, 2), -1.0 / 6.0 * s));
        assert!(close(t.matrix.get(1, 0), (4.0 / 3.0 - a1 * dx / 6.0) * s));
        assert!(close(t.matrix.get(1, 1), (-2.5 - 1.0 / 12.0) * s));
        assert!(close(t.v_prime[0], -7.0 * a2 / (3.0 * dx)));
        assert!(close(t.v_prime[1], a2 / (6.0 * dx)));
        assert!(close(t.matrix.get(31, 31), (-2.5 - 7.0 * b1 * dx / 3.0) * s));
        assert!(close(t.v_prime[31], 7.0 * b2 / (3.0 * dx)));
        assert!(close(t.v_prime[30], -b2 / (6.0 * dx)));
    }

    #[test]
    fn interior_rows_exact_pattern() {
        let t = heat(5, robin(0.5, 0.25, 1.0, 0.25));
        let dx: f64 = 10.0 / 31.0;
        let want = [-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0].map(|g| g / (dx * dx));
        for i in 2..30 {
            for (k, w) in want.iter().enumerate() {
                let got = t.matrix.get(i, i + k - 2).re;
                assert!((got - w).abs() <= 1e-12 * w.abs(), "row {i}");
            }
            assert_eq!(t.matrix.row(i).count(), 5);
        }
        assert_eq!(t.profile.bulk_row_range(), Some((2, 29)));
        assert_eq!(t.profile.sparsity(), 5);
    }

    #[test]
    fn deviating_rows_independent_of_n() {
        for n in 3..8 {
            let t = heat(n, robin(0.5, 0.25, 1.0, 0.25));
            assert_eq!(t.profile.boundary_rows.len(), 4, "n = {n}");
        }
    }

    #[test]
    fn zeroth_order_term_is_identity() {
        let p = PdeProblem1D {
            domain: (0.0, 1.0),
            terms: vec![PdeTerm1D { order: 0, coefficient: PiecewisePolynomial::constant((0.0, 1.0), 1.0) }],
            source: PiecewisePolynomial::constant((0.0, 1.0), 0.0),
            boundary: robin(0.3, 0.1, 0.2, 0.4),
            initial: InitialCondition::Values(vec![]),
        };
        let sys = assemble_system(&p, &[StencilChoice::default()], 3).unwrap();
        assert_eq!(sys.a, SparseMatrix::identity(8));
        assert!(sys.v.iter().all(|z| *z == C64::zero()));
    }

    #[test]
    fn grid_too_small() {
        let st = build_stencil(StencilKind::Central, 2, 4).unwrap();
        let f = PiecewisePolynomial::constant((0.0, 1.0), 1.0);
        assert!(matches!(assemble_term(&st, &f, &robin(0.0, 0.0, 0.0, 0.0), 1), Err(Error::GridTooSmall(_))));
    }

    #[test]
    fn dirichlet_rows_frozen() {
        let p = PdeProblem1D {
            domain: (0.0, 1.0),
            terms: vec![PdeTerm1D { order: 2, coefficient: PiecewisePolynomial::constant((0.0, 1.0), 1.0) }],
            source: PiecewisePolynomial::constant((0.0, 1.0), 0.0),
            boundary: BoundaryCondition::Dirichlet { left: Coeff::int(1), right: Coeff::int(0) },
            initial: InitialCondition::Values(vec![]),
        };
        let sys = assemble_system(&p, &[StencilChoice::new(StencilKind::Central, 4)], 4).unwrap();
        assert!(dirichlet_assembly_check(&sys));
        // Row 1 sees u_{-1} = 2·1 - u_1.
        let dx: f64 = 1.0 / 15.0;
        assert!((sys.v[1].re - 2.0 * (-1.0 / 12.0) / (dx * dx)).abs() < 1e-9);
    }

    #[test]
    fn periodic_profile_has_no_boundary_rows() {
        let st = build_stencil(StencilKind::Central, 1, 2).unwrap();
        let f = PiecewisePolynomial::constant((0.0, 1.0), 1.0);
        let t = assemble_term(&st, &f, &BoundaryCondition::Periodic, 3).unwrap();
        assert!(t.profile.boundary_rows.is_empty());
        // The zero centre coefficient is not stored.
        assert_eq!(t.profile.sparsity(), 2);
        assert_eq!(t.profile.to_sparse(), t.derivative);
    }

    #[test]
    fn homogenize_general_b_times_r_is_v() {
        let p = PdeProblem1D {
            domain: (0.0, 1.0),
            terms: vec![PdeTerm1D { order: 2, coefficient: PiecewisePolynomial::constant((0.0, 1.0), 1.0) }],
            source: PiecewisePolynomial::from_real((0.0, 1.0), &[0.5, 1.0]),
            boundary: robin(0.3, 0.1, 0.2, 0.4),
            initial: InitialCondition::Values(vec![]),
        };
        let sys = assemble_system(&p, &[StencilChoice::default()], 3).unwrap();
        let (s, r) = homogenize(&sys, HomogenizationMode::General);
        for i in 0..8 {
            let br = s.get(i, 8 + i) * r[i];
            assert!((br - sys.v[i]).norm() < 1e-14);
        }
        let (s, r) = homogenize(&sys, HomogenizationMode::Identity);
        assert_eq!(r, sys.v);
        assert_eq!(s.get(3, 11), C64::new(1.0, 0.0));
    }
}
