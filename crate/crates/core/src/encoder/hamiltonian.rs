// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use crate::circuit::{Control, GateOp, Register, RegisterRole, U2};
use crate::discretize::{DiscretizedSystem, HomogenizationMode};
use crate::model::PiecewisePolynomial;
use crate::oracles::{
    affine_coordinate, identity, lcu_combine, pauli_lcu, piecewise_poly_oracle, tensor, BlockEncodingHandle,
    HandleBuilder, PauliString,
};
use crate::schrodinger::XiGrid;
use crate::{Result, C64};

use super::term::encode_term;
use super::EncodedHamiltonian;

const TOL: f64 = 1e-12;

fn data_register(n: usize) -> Register {
    Register { name: "data".into(), role: RegisterRole::Data, offset: 0, size: n }
}

/// Encoding of `A = Σ_k diag(f_k) D_k`.
pub fn encode_a(sys: &DiscretizedSystem) -> Result<BlockEncodingHandle> {
    let terms: Vec<BlockEncodingHandle> = sys
        .terms
        .iter()
        .map(|t| {
            encode_term(&t.profile, &t.coefficient, sys.n)
        })
        .collect::<Result<_>>()?;
    if terms.len() == 1 {
        return Ok(terms.into_iter().next().unwrap().with_label("A"));
    }
    let ones = vec![C64::new(1.0, 0.0); terms.len()];
    Ok(lcu_combine(&terms, &ones)?.with_label("A"))
}

/// Diagonal encoding of `values` that equal `base(x_i)` except at a few
/// indices, which are loaded one by one behind a pure indicator.
fn diagonal_with_overrides(base: &PiecewisePolynomial, values: &[C64], n: usize) -> Result<BlockEncodingHandle> {
    let sampled = base.sample(n);
    let overrides: Vec<usize> =
        (0..values.len()).filter(|&i| (values[i] - sampled[i]).norm() > TOL * (1.0 + values[i].norm())).collect();
    let ob = piecewise_poly_oracle(base, n)?;
    if overrides.is_empty() {
        return Ok(ob);
    }
    let peak = overrides.iter().map(|&i| values[i].norm()).fold(0.0, f64::max);
    let alpha = ob.alpha.max(peak);
    let mut b = HandleBuilder::with_data(n);
    let load = b.flag("override", RegisterRole::Flag, 1).qubit(0);
    let flags = b.flag("source-flags", RegisterRole::FunctionAncilla, ob.n_flag()).qubits();
    let ind = b.pure("override-indicator", 1).qubit(0);
    let pure = b.pure("source-pure", ob.n_pure()).qubits();
    let data: Vec<usize> = (0..n).collect();
    let mark: Vec<GateOp> = overrides
        .iter()
        .map(|&i| GateOp::MultiControlled { controls: Control::pattern(&data, i as u64), target: ind, u: U2::x() })
        .collect();
    b.circuit.extend_ops(mark.iter().cloned());
    b.embed(&ob, &data, &flags, &pure, &[Control::off(ind)])?;
    if ob.alpha < alpha {
        b.circuit.mc(vec![Control::off(ind)], load, U2::ry(2.0 * (ob.alpha / alpha).min(1.0).acos()));
    }
    for &i in &overrides {
        let a = values[i] / alpha;
        let s = (1.0 - a.norm_sqr()).max(0.0).sqrt();
        let u = U2::new(a, C64::new(-s, 0.0), C64::new(s, 0.0), a.conj());
        let mut controls = Control::pattern(&data, i as u64);
        controls.push(Control::on(ind));
        b.circuit.mc(controls, load, u);
    }
    b.circuit.extend_ops(mark);
    b.finish(alpha, 1 << n, "diag")
}

/// Encoding of `B = √N·diag(v)`; `None` when `v` vanishes.
pub fn encode_b(sys: &DiscretizedSystem) -> Result<Option<BlockEncodingHandle>> {
    if sys.v.iter().all(|v| v.norm() == 0.0) {
        return Ok(None);
    }
    let h = diagonal_with_overrides(&sys.source_poly, &sys.v, sys.n)?;
    let mut h = h.with_label("B");
    h.alpha *= (sys.dim() as f64).sqrt();
    Ok(Some(h))
}

/// `A` on the homogenization qubit's `|0⟩` half, `e^{iφ}` on its `|1⟩` half.
fn corner(a: &BlockEncodingHandle, phi: f64) -> Result<BlockEncodingHandle> {
    let n = a.n_data();
    let mut regs = a.data_registers();
    regs.push(Register { name: "homog".into(), role: RegisterRole::Data, offset: n, size: 1 });
    let mut b = HandleBuilder::new(&regs);
    let flags = b.flag("corner-flags", RegisterRole::Flag, a.n_flag()).qubits();
    let pure = b.pure("pure", a.n_pure()).qubits();
    let data: Vec<usize> = (0..n).collect();
    b.embed(a, &data, &flags, &pure, &[Control::off(n)])?;
    if phi != 0.0 {
        b.circuit.one(n, U2::phase(phi));
    }
    b.finish(a.alpha, 2 * a.dim, "corner")
}

/// `|0⟩⟨1| ⊗ B` with `|0⟩⟨1| = (X + iY)/2`.
fn upper_right(bh: &BlockEncodingHandle) -> Result<BlockEncodingHandle> {
    let homog = [Register { name: "homog".into(), role: RegisterRole::Data, offset: 0, size: 1 }];
    let raise = pauli_lcu(
        &homog,
        2,
        &[(C64::new(0.5, 0.0), PauliString::single(0, 'X')), (C64::new(0.0, 0.5), PauliString::single(0, 'Y'))],
    )?;
    tensor(&raise, bh)
}

/// `(S1, S2)` for `S = [[A, B], [0, 0]]`, `B` absent when zero.
pub fn encode_s_from(
    a: &BlockEncodingHandle,
    b: Option<&BlockEncodingHandle>,
) -> Result<(BlockEncodingHandle, BlockEncodingHandle)> {
    let a_dag = a.adjoint();
    let half = C64::new(0.5, 0.0);
    let ihalf = C64::new(0.0, 0.5);
    let mut s1 = vec![(corner(a, 0.0)?, half), (corner(&a_dag, std::f64::consts::PI)?, half)];
    let mut s2 = vec![(corner(a, 0.0)?, -ihalf), (corner(&a_dag, 0.0)?, ihalf)];
    if let Some(bh) = b {
        let t = upper_right(bh)?;
        let t_dag = t.adjoint();
        s1.extend([(t.clone(), half), (t_dag.clone(), half)]);
        s2.extend([(t, -ihalf), (t_dag, ihalf)]);
    }
    let build = |parts: Vec<(BlockEncodingHandle, C64)>, label: &str| -> Result<BlockEncodingHandle> {
        let (hs, ws): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
        Ok(lcu_combine(&hs, &ws)?.with_label(label))
    };
    Ok((build(s1, "S1")?, build(s2, "S2")?))
}

/// `(S1, S2)` encodings of the homogenized 1D generator.
pub fn encode_s(sys: &DiscretizedSystem, mode: HomogenizationMode) -> Result<(BlockEncodingHandle, BlockEncodingHandle)> {
    let a = encode_a(sys)?;
    let b = match mode {
        HomogenizationMode::General => encode_b(sys)?,
        HomogenizationMode::Identity => Some(identity(&[data_register(sys.n)], sys.dim())?),
    };
    encode_s_from(&a, b.as_ref())
}

/// `H = S1 ⊗ x_ξ + S2 ⊗ 1_ξ`.
pub fn encode_h_1d(sys: &DiscretizedSystem, mode: HomogenizationMode, xi: &XiGrid) -> Result<EncodedHamiltonian> {
    let (s1, s2) = encode_s(sys, mode)?;
    let h = schrodinger_sum(&s1, &s2, xi)?;
    EncodedHamiltonian::new(h, sys.n + 1, xi.n_xi, 0)
}

pub(crate) fn xi_register(xi: &XiGrid) -> [Register; 1] {
    [Register { name: "xi".into(), role: RegisterRole::Xi, offset: 0, size: xi.n_xi }]
}

pub(crate) fn schrodinger_sum(
    s1: &BlockEncodingHandle,
    s2: &BlockEncodingHandle,
    xi: &XiGrid,
) -> Result<BlockEncodingHandle> {
    let reg = xi_register(xi);
    let x = affine_coordinate(&reg, C64::new(0.0, 0.0), C64::new(xi.l_xi, 0.0))?;
    let one = identity(&reg, xi.len())?;
    let one_w = C64::new(1.0, 0.0);
    Ok(lcu_combine(&[tensor(s1, &x)?, tensor(s2, &one)?], &[one_w, one_w])?.with_label("H"))
}
