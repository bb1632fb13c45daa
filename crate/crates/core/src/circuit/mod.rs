// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Circuit IR over {one-qubit unitary, CNOT, multi-controlled one-qubit gate}.

mod expand;
pub mod gates;
mod text;

use std::collections::BTreeSet;

pub use expand::{count_resources, expand_multicontrol, pool_demand, with_pool, MCX_POOL};
pub use gates::U2;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegisterRole {
    Data,
    SparseIndex,
    FunctionAncilla,
    Flag,
    Xi,
    Clock,
    PureAncilla,
}

impl RegisterRole {
    pub fn name(self) -> &'static str {
        match self {
            Self::Data => "data",
            Self::SparseIndex => "sparse-index",
            Self::FunctionAncilla => "function-ancilla",
            Self::Flag => "flag",
            Self::Xi => "xi",
            Self::Clock => "clock",
            Self::PureAncilla => "pure-ancilla",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Self::Data,
            Self::SparseIndex,
            Self::FunctionAncilla,
            Self::Flag,
            Self::Xi,
            Self::Clock,
            Self::PureAncilla,
        ]
        .into_iter()
        .find(|r| r.name() == s)
    }
}

/// A named span of qubits `offset..offset + size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub role: RegisterRole,
    pub offset: usize,
    pub size: usize,
}

impl Register {
    pub fn qubit(&self, k: usize) -> usize {
        assert!(k < self.size, "qubit {k} outside register {}", self.name);
        self.offset + k
    }

    pub fn qubits(&self) -> Vec<usize> {
        (self.offset..self.offset + self.size).collect()
    }

    pub fn mask(&self) -> u64 {
        if self.size == 0 {
            0
        } else {
            ((1u64 << self.size) - 1) << self.offset
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    /// The gate fires when the control qubit equals this value.
    pub value: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, value: true }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, value: false }
    }

    /// Controls matching `value` on `qubits` (bit k of `value` for `qubits[k]`).
    pub fn pattern(qubits: &[usize], value: u64) -> Vec<Control> {
        qubits.iter().enumerate().map(|(k, &q)| Control { qubit: q, value: (value >> k) & 1 == 1 }).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    OneQubit { target: usize, u: U2 },
    CNot { control: usize, target: usize },
    MultiControlled { controls: Vec<Control>, target: usize, u: U2 },
}

impl GateOp {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Self::OneQubit { target, .. } => vec![*target],
            Self::CNot { control, target } => vec![*control, *target],
            Self::MultiControlled { controls, target, .. } => {
                controls.iter().map(|c| c.qubit).chain(std::iter::once(*target)).collect()
            }
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Self::OneQubit { target, u } => Self::OneQubit { target: *target, u: u.adjoint() },
            Self::CNot { .. } => self.clone(),
            Self::MultiControlled { controls, target, u } => {
                Self::MultiControlled { controls: controls.clone(), target: *target, u: u.adjoint() }
            }
        }
    }

    pub fn remap(&self, map: &[usize]) -> Self {
        match self {
            Self::OneQubit { target, u } => Self::OneQubit { target: map[*target], u: *u },
            Self::CNot { control, target } => Self::CNot { control: map[*control], target: map[*target] },
            Self::MultiControlled { controls, target, u } => Self::MultiControlled {
                controls: controls.iter().map(|c| Control { qubit: map[c.qubit], value: c.value }).collect(),
                target: map[*target],
                u: *u,
            },
        }
    }

    /// Add controls to this op.
    pub fn with_controls(&self, extra: &[Control]) -> Self {
        if extra.is_empty() {
            return self.clone();
        }
        let (mut controls, target, u) = match self {
            Self::OneQubit { target, u } => (Vec::new(), *target, *u),
            Self::CNot { control, target } => (vec![Control::on(*control)], *target, U2::x()),
            Self::MultiControlled { controls, target, u } => (controls.clone(), *target, *u),
        };
        controls.extend_from_slice(extra);
        Self::MultiControlled { controls, target, u }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        let set: BTreeSet<_> = qs.iter().collect();
        if set.len() != qs.len() {
            return Err(Error::Circuit(format!("repeated qubit in {self:?}")));
        }
        if let Some(q) = qs.iter().find(|&&q| q >= n) {
            return Err(Error::Circuit(format!("qubit {q} out of range for {n}-qubit circuit")));
        }
        match self {
            Self::OneQubit { u, .. } | Self::MultiControlled { u, .. } if u.unitarity_defect() > 1e-12 => {
                Err(Error::Circuit(format!("non-unitary gate (defect {:.2e})", u.unitarity_defect())))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    qubits: usize,
    registers: Vec<Register>,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    /// Circuit with a single data register of `n` qubits.
    pub fn with_data(n: usize) -> Self {
        let mut c = Self::new();
        c.add_register("data", RegisterRole::Data, n);
        c
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn registers_with_role(&self, role: RegisterRole) -> impl Iterator<Item = &Register> {
        self.registers.iter().filter(move |r| r.role == role)
    }

    /// Qubits of all registers with `role`, in register order.
    pub fn role_qubits(&self, role: RegisterRole) -> Vec<usize> {
        self.registers_with_role(role).flat_map(|r| r.qubits()).collect()
    }

    /// Append a fresh register above all existing qubits.
    pub fn add_register(&mut self, name: &str, role: RegisterRole, size: usize) -> Register {
        let r = Register { name: name.to_string(), role, offset: self.qubits, size };
        self.qubits += size;
        self.registers.push(r.clone());
        r
    }

    /// Rename the first register called `from`; false when none exists.
    pub fn rename_register(&mut self, from: &str, to: &str) -> bool {
        match self.registers.iter_mut().find(|r| r.name == from) {
            Some(r) => {
                r.name = to.to_string();
                true
            }
            None => false,
        }
    }

    pub fn push(&mut self, op: GateOp) {
        debug_assert!(op.validate(self.qubits).is_ok(), "{:?}", op.validate(self.qubits));
        self.ops.push(op);
    }

    pub fn one(&mut self, target: usize, u: U2) {
        self.push(GateOp::OneQubit { target, u });
    }

    pub fn cx(&mut self, control: usize, target: usize) {
        self.push(GateOp::CNot { control, target });
    }

    /// Multi-controlled gate; degenerates to the plain forms for 0 or 1 control.
    pub fn mc(&mut self, controls: Vec<Control>, target: usize, u: U2) {
        match controls.as_slice() {
            [] => self.one(target, u),
            [c] if c.value && u == U2::x() => self.cx(c.qubit, target),
            _ => self.push(GateOp::MultiControlled { controls, target, u }),
        }
    }

    pub fn x(&mut self, q: usize) {
        self.one(q, U2::x());
    }

    pub fn h(&mut self, q: usize) {
        self.one(q, U2::h());
    }

    pub fn ry(&mut self, q: usize, theta: f64) {
        self.one(q, U2::ry(theta));
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        self.cx(a, b);
        self.cx(b, a);
        self.cx(a, b);
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.qubits];
        for r in &self.registers {
            for q in r.offset..r.offset + r.size {
                if q >= self.qubits || seen[q] {
                    return Err(Error::Circuit(format!("register {} overlaps or is out of range", r.name)));
                }
                seen[q] = true;
            }
        }
        self.ops.iter().try_for_each(|op| op.validate(self.qubits))
    }

    /// Append `other`, mapping its qubit `k` to `map[k]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        if map.len() != other.qubits {
            return Err(Error::Circuit(format!("qubit map has {} entries for {} qubits", map.len(), other.qubits)));
        }
        if let Some(q) = map.iter().find(|&&q| q >= self.qubits) {
            return Err(Error::Circuit(format!("mapped qubit {q} out of range")));
        }
        self.ops.extend(other.ops.iter().map(|op| op.remap(map)));
        Ok(())
    }

    /// Append `other` mapped and with extra controls on every op.
    pub fn append_controlled(&mut self, other: &Circuit, map: &[usize], controls: &[Control]) -> Result<()> {
        if map.len() != other.qubits {
            return Err(Error::Circuit("qubit map length mismatch".into()));
        }
        for c in controls {
            if map.contains(&c.qubit) {
                return Err(Error::Circuit(format!("control qubit {} overlaps the controlled circuit", c.qubit)));
            }
        }
        self.ops.extend(other.ops.iter().map(|op| op.remap(map).with_controls(controls)));
        Ok(())
    }

    /// Append ops of a circuit on the same qubit layout.
    pub fn extend(&mut self, other: &Circuit) {
        assert!(other.qubits <= self.qubits);
        self.ops.extend_from_slice(&other.ops);
    }

    pub fn extend_ops(&mut self, ops: impl IntoIterator<Item = GateOp>) {
        self.ops.extend(ops);
    }

    pub fn adjoint(&self) -> Self {
        Self { qubits: self.qubits, registers: self.registers.clone(), ops: self.ops.iter().rev().map(GateOp::adjoint).collect() }
    }

    /// Add `controls` (qubits outside this circuit's span, given as new qubits
    /// appended above) to every op. The new control register is named `control`.
    pub fn controlled(&self, polarity: &[bool]) -> Self {
        let mut out = Self { qubits: self.qubits, registers: self.registers.clone(), ops: Vec::new() };
        let reg = out.add_register("control", RegisterRole::Flag, polarity.len());
        let controls: Vec<Control> =
            polarity.iter().enumerate().map(|(k, &v)| Control { qubit: reg.qubit(k), value: v }).collect();
        out.ops = self.ops.iter().map(|op| op.with_controls(&controls)).collect();
        out
    }

    /// Add controls on existing qubits to every op.
    pub fn controlled_on(&self, controls: &[Control]) -> Result<Self> {
        let used: BTreeSet<usize> = self.ops.iter().flat_map(|op| op.qubits()).collect();
        if let Some(c) = controls.iter().find(|c| used.contains(&c.qubit) || c.qubit >= self.qubits) {
            return Err(Error::Circuit(format!("control qubit {} overlaps or is out of range", c.qubit)));
        }
        Ok(Self {
            qubits: self.qubits,
            registers: self.registers.clone(),
            ops: self.ops.iter().map(|op| op.with_controls(controls)).collect(),
        })
    }

    pub fn max_controls(&self) -> usize {
        self.ops
            .iter()
            .map(|op| match op {
                GateOp::MultiControlled { controls, .. } => controls.len(),
                GateOp::CNot { .. } => 1,
                GateOp::OneQubit { .. } => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        text::to_text(self)
    }

    pub fn from_text(s: &str) -> Result<Self> {
        text::from_text(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ResourceCount {
    pub one_qubit: usize,
    pub cnot: usize,
    /// Multi-controlled gates left unexpanded.
    pub multi_controlled: usize,
    pub pure_ancillas: usize,
    pub qubits: usize,
}

impl ResourceCount {
    pub fn total_elementary(&self) -> usize {
        self.one_qubit + self.cnot
    }
}

impl std::fmt::Display for ResourceCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "one_qubit={} cnot={} multi_controlled={} pure_ancillas={} qubits={}",
            self.one_qubit, self.cnot, self.multi_controlled, self.pure_ancillas, self.qubits
        )
    }
}

#[cfg(test)]
mod tests;
