// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Multi-dimensional generators on tensor-product grids. Dimension 1 sits on
//! the most significant data qubits.

use crate::circuit::Register;
use crate::discretize::{assemble_term, build_stencil, BandedProfile, StencilChoice, TermAssembly};
use crate::model::{grid, BoundaryCondition, PdeProblemMultiD, PiecewisePolynomial, SeparableFunctionSpec};
use crate::oracles::{identity, lcu_combine, piecewise_poly_oracle, product, tensor, BlockEncodingHandle};
use crate::qsvt::{chebyshev, complex_poly};
use crate::schrodinger::{momentum_matrix, ClockSpec, XiGrid};
use crate::sparse::SparseMatrix;
use crate::{Error, Result, C64};

use super::hamiltonian::{encode_s_from, schrodinger_sum};
use super::term::encode_term;
use super::EncodedHamiltonian;

const PHASE_TOL: f64 = 1e-12;

/// Dense-reference assembly of a multi-dimensional problem.
#[derive(Clone, Debug)]
pub struct MultiDSystem {
    pub ns: Vec<usize>,
    pub domains: Vec<(f64, f64)>,
    pub a: SparseMatrix,
    pub v: Vec<C64>,
    /// Per term, the one-dimensional derivative factors (`None` for order 0).
    pub factors: Vec<Vec<Option<TermAssembly>>>,
}

impl MultiDSystem {
    pub fn n_total(&self) -> usize {
        self.ns.iter().sum()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_total()
    }

    /// `S = [[A, √N diag(v)], [0, 0]]`.
    pub fn generator(&self) -> SparseMatrix {
        let dim = self.dim();
        let root = (dim as f64).sqrt();
        let mut s = SparseMatrix::zeros(2 * dim, 2 * dim);
        for (i, j, x) in self.a.triplets() {
            s.set(i, j, x);
        }
        for (i, &v) in self.v.iter().enumerate() {
            if v.norm() != 0.0 {
                s.set(i, dim + i, v * root);
            }
        }
        s
    }
}

/// Row-major tensor-grid points, dimension 1 varying slowest.
fn tensor_points(domains: &[(f64, f64)], ns: &[usize]) -> Vec<Vec<f64>> {
    let grids: Vec<Vec<f64>> = domains.iter().zip(ns).map(|(&(a, b), &n)| grid(a, b, n)).collect();
    let total: usize = ns.iter().map(|n| 1usize << n).product();
    (0..total)
        .map(|mut idx| {
            let mut x = vec![0.0; grids.len()];
            for m in (0..grids.len()).rev() {
                let len = grids[m].len();
                x[m] = grids[m][idx % len];
                idx /= len;
            }
            x
        })
        .collect()
}

fn check_supported(problem: &PdeProblemMultiD) -> Result<()> {
    problem.validate()?;
    for (m, bc) in problem.boundaries.iter().enumerate() {
        match bc {
            BoundaryCondition::Periodic => {}
            BoundaryCondition::Robin(r) if r.a2.is_zero() && r.b2.is_zero() => {}
            _ => {
                return Err(Error::Config(format!(
                    "dimension {}: multi-dimensional problems take periodic or homogeneous Robin boundaries",
                    m + 1
                )))
            }
        }
    }
    Ok(())
}

pub fn assemble_multid(problem: &PdeProblemMultiD, stencils: &[StencilChoice], ns: &[usize]) -> Result<MultiDSystem> {
    check_supported(problem)?;
    let d = problem.dims();
    if ns.len() != d || stencils.len() != problem.terms.len() {
        return Err(Error::Config("grid sizes or stencil choices do not match the problem".into()));
    }
    let points = tensor_points(&problem.domains, ns);
    let dim = points.len();
    let mut a = SparseMatrix::zeros(dim, dim);
    let mut factors = Vec::new();
    for (term, choice) in problem.terms.iter().zip(stencils) {
        let mut row = Vec::with_capacity(d);
        let mut dmat = SparseMatrix::identity(1);
        for m in 0..d {
            let p = term.orders[m];
            let one = PiecewisePolynomial::constant(problem.domains[m], 1.0);
            let fm = if p == 0 {
                None
            } else {
                let st = build_stencil(choice.kind, p, choice.accuracy)?;
                Some(assemble_term(&st, &one, &problem.boundaries[m], ns[m])?)
            };
            let block = fm.as_ref().map_or_else(|| SparseMatrix::identity(1 << ns[m]), |t| t.derivative.clone());
            dmat = dmat.kron(&block);
            row.push(fm);
        }
        let f: Vec<C64> = points.iter().map(|x| term.coefficient.evaluate(x, 0.0)).collect::<Result<_>>()?;
        for (i, j, v) in dmat.triplets() {
            a.add(i, j, f[i] * v);
        }
        factors.push(row);
    }
    let v: Vec<C64> = points.iter().map(|x| problem.source.evaluate(x, 0.0)).collect::<Result<_>>()?;
    Ok(MultiDSystem { ns: ns.to_vec(), domains: problem.domains.clone(), a, v, factors })
}

fn data_name(m: usize) -> String {
    format!("x{}", m + 1)
}

/// Tensor product with factor 0 on the most significant qubits.
fn tensor_all(parts: Vec<BlockEncodingHandle>) -> Result<BlockEncodingHandle> {
    let mut it = parts.into_iter().rev();
    let mut acc = it.next().ok_or_else(|| Error::Config("empty tensor product".into()))?;
    for h in it {
        acc = tensor(&h, &acc)?;
    }
    Ok(acc)
}

/// Diagonal encoding of a time-independent separable function.
pub fn encode_separable(
    spec: &SeparableFunctionSpec,
    domains: &[(f64, f64)],
    ns: &[usize],
) -> Result<BlockEncodingHandle> {
    spec.validate()?;
    if spec.is_time_dependent() {
        return Err(Error::Config("circuit encoding needs time-independent coefficients".into()));
    }
    if spec.dims() != ns.len() || domains.len() != ns.len() {
        return Err(Error::Dimension("separable function dimension mismatch".into()));
    }
    let mut handles = Vec::new();
    let mut weights = Vec::new();
    for s in &spec.summands {
        let w = s.clock.as_ref().and_then(|c| c.as_constant()).unwrap_or(C64::new(1.0, 0.0));
        if w.norm() == 0.0 || s.factors.iter().any(|g| g.is_zero()) {
            continue;
        }
        let parts = s
            .factors
            .iter()
            .enumerate()
            .map(|(m, g)| Ok(piecewise_poly_oracle(g, ns[m])?.with_data_name("data", &data_name(m))))
            .collect::<Result<Vec<_>>>()?;
        handles.push(tensor_all(parts)?);
        weights.push(w);
    }
    let data = || -> Vec<Register> {
        let mut off = 0;
        let mut regs: Vec<Register> = (0..ns.len())
            .rev()
            .map(|m| {
                let r = Register { name: data_name(m), role: crate::circuit::RegisterRole::Data, offset: off, size: ns[m] };
                off += ns[m];
                r
            })
            .collect();
        regs.sort_by_key(|r| r.offset);
        regs
    };
    let total: usize = ns.iter().map(|n| 1usize << n).product();
    let inner = match handles.len() {
        0 => return crate::oracles::zero(&data(), total),
        1 if weights[0] == C64::new(1.0, 0.0) => handles.pop().unwrap(),
        _ => lcu_combine(&handles, &weights)?,
    };
    let Some(h) = &spec.outer else { return Ok(inner.with_label("f")) };
    let real = spec.summands.iter().all(|s| {
        s.factors.iter().all(|g| g.segments().iter().all(|seg| seg.values().iter().all(|c| c.im == 0.0)))
            && s.clock.as_ref().is_none_or(|c| c.as_constant().is_some_and(|z| z.im == 0.0))
    });
    if !real {
        return Err(Error::Config("an outer polynomial needs a real inner function".into()));
    }
    // h(inner) = h(α y) for the encoded y = inner/α.
    let scaled: Vec<f64> = h.iter().enumerate().map(|(k, c)| c * inner.alpha.powi(k as i32)).collect();
    let cheb = chebyshev::from_monomial(&scaled);
    Ok(complex_poly(&inner, &cheb, &[], PHASE_TOL, "outer")?.with_label("f"))
}

fn derivative_factor(t: Option<&TermAssembly>, domain: (f64, f64), n: usize, m: usize) -> Result<BlockEncodingHandle> {
    let h = match t {
        Some(t) => encode_term(&t.profile, &PiecewisePolynomial::constant(domain, 1.0), n)?,
        None => identity(&[Register { name: "data".into(), role: crate::circuit::RegisterRole::Data, offset: 0, size: n }], 1 << n)?,
    };
    Ok(h.with_data_name("data", &data_name(m)))
}

/// Encoding of `A = Σ_k diag(f_k)·(D_{k,1} ⊗ … ⊗ D_{k,d})`.
pub fn encode_a_multid(problem: &PdeProblemMultiD, sys: &MultiDSystem) -> Result<BlockEncodingHandle> {
    let mut terms = Vec::new();
    for (term, row) in problem.terms.iter().zip(&sys.factors) {
        let parts = row
            .iter()
            .enumerate()
            .map(|(m, t)| derivative_factor(t.as_ref(), sys.domains[m], sys.ns[m], m))
            .collect::<Result<Vec<_>>>()?;
        let d = tensor_all(parts)?;
        let f = encode_separable(&term.coefficient, &sys.domains, &sys.ns)?;
        terms.push(product(&f, &d)?);
    }
    if terms.len() == 1 {
        return Ok(terms.pop().unwrap().with_label("A"));
    }
    let ones = vec![C64::new(1.0, 0.0); terms.len()];
    Ok(lcu_combine(&terms, &ones)?.with_label("A"))
}

/// `H = S1 ⊗ x_ξ + S2 ⊗ 1_ξ`, extended by `1 ⊗ p_s` on a clock register when given.
pub fn encode_h_multid(
    problem: &PdeProblemMultiD,
    sys: &MultiDSystem,
    xi: &XiGrid,
    clock: Option<&ClockSpec>,
) -> Result<EncodedHamiltonian> {
    let a = encode_a_multid(problem, sys)?;
    let b = if sys.v.iter().all(|v| v.norm() == 0.0) {
        None
    } else {
        let mut bh = encode_separable(&problem.source, &sys.domains, &sys.ns)?.with_label("B");
        bh.alpha *= (sys.dim() as f64).sqrt();
        Some(bh)
    };
    let (s1, s2) = encode_s_from(&a, b.as_ref())?;
    let h = schrodinger_sum(&s1, &s2, xi)?;
    let n_system = sys.n_total() + 1;
    let Some(clock) = clock else { return EncodedHamiltonian::new(h, n_system, xi.n_xi, 0) };
    let p = momentum_matrix(clock.n_s, clock.ds());
    let profile = BandedProfile::from_matrix(&p)?;
    let ps = encode_term(&profile, &PiecewisePolynomial::constant((-clock.l_s, clock.l_s), 1.0), clock.n_s)?
        .with_data_name("data", "clock");
    let clock_reg =
        [Register { name: "clock".into(), role: crate::circuit::RegisterRole::Clock, offset: 0, size: clock.n_s }];
    let one_s = identity(&clock_reg, clock.len())?;
    let one_rest = identity(&h.data_registers(), h.dim)?;
    let one = C64::new(1.0, 0.0);
    let full = lcu_combine(&[tensor(&h, &one_s)?, tensor(&one_rest, &ps)?], &[one, one])?.with_label("H'");
    EncodedHamiltonian::new(full, n_system, xi.n_xi, clock.n_s)
}
