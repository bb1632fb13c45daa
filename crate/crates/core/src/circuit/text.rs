// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented circuit text format.
//!
//! ```text
//! qubits <n>
//! register <name> <role> <offset> <size>
//! G <target> <u00.re> <u00.im> … <u11.im>
//! CX <control> <target>
//! MC <pattern> <controls…> <target> <u00.re> … <u11.im>
//! ```

use std::fmt::Write;

use super::{Circuit, Control, GateOp, Register, RegisterRole, U2};
use crate::{Error, Result, C64};

fn write_u(s: &mut String, u: &U2) {
    for z in u.0 {
        let _ = write!(s, " {:.16e} {:.16e}", z.re, z.im);
    }
}

pub(super) fn to_text(c: &Circuit) -> String {
    let mut s = format!("qubits {}\n", c.qubits);
    for r in &c.registers {
        let _ = writeln!(s, "register {} {} {} {}", r.name, r.role.name(), r.offset, r.size);
    }
    for op in &c.ops {
        match op {
            GateOp::OneQubit { target, u } => {
                let _ = write!(s, "G {target}");
                write_u(&mut s, u);
            }
            GateOp::CNot { control, target } => {
                let _ = write!(s, "CX {control} {target}");
            }
            GateOp::MultiControlled { controls, target, u } => {
                let pat: String = controls.iter().map(|c| if c.value { '1' } else { '0' }).collect();
                let _ = write!(s, "MC {pat}");
                for c in controls {
                    let _ = write!(s, " {}", c.qubit);
                }
                let _ = write!(s, " {target}");
                write_u(&mut s, u);
            }
        }
        s.push('\n');
    }
    s
}

pub(super) fn from_text(text: &str) -> Result<Circuit> {
    let mut c = Circuit::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse { line: ln + 1, msg: msg.to_string() };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let int = |t: &str| t.parse::<usize>().map_err(|_| err(&format!("bad integer {t}")));
        let read_u = |ts: &[&str]| -> Result<U2> {
            if ts.len() != 8 {
                return Err(err("expected 8 numbers for a 2x2 matrix"));
            }
            let f: Vec<f64> = ts.iter().map(|t| t.parse::<f64>().map_err(|_| err("bad number"))).collect::<Result<_>>()?;
            Ok(U2([C64::new(f[0], f[1]), C64::new(f[2], f[3]), C64::new(f[4], f[5]), C64::new(f[6], f[7])]))
        };
        match toks[0] {
            "qubits" => c.qubits = int(toks.get(1).ok_or_else(|| err("missing count"))?)?,
            "register" => {
                if toks.len() != 5 {
                    return Err(err("register needs name, role, offset, size"));
                }
                let role = RegisterRole::parse(toks[2]).ok_or_else(|| err("unknown role"))?;
                c.registers.push(Register { name: toks[1].into(), role, offset: int(toks[3])?, size: int(toks[4])? });
            }
            "G" => {
                if toks.len() != 10 {
                    return Err(err("G needs target and 8 numbers"));
                }
                c.ops.push(GateOp::OneQubit { target: int(toks[1])?, u: read_u(&toks[2..])? });
            }
            "CX" => {
                if toks.len() != 3 {
                    return Err(err("CX needs control and target"));
                }
                c.ops.push(GateOp::CNot { control: int(toks[1])?, target: int(toks[2])? });
            }
            "MC" => {
                let pat = toks.get(1).ok_or_else(|| err("missing pattern"))?;
                let k = pat.len();
                if toks.len() != 2 + k + 1 + 8 {
                    return Err(err("MC operand count does not match pattern"));
                }
                let controls = pat
                    .chars()
                    .zip(&toks[2..2 + k])
                    .map(|(b, q)| Ok(Control { qubit: int(q)?, value: b == '1' }))
                    .collect::<Result<Vec<_>>>()?;
                c.ops.push(GateOp::MultiControlled { controls, target: int(toks[2 + k])?, u: read_u(&toks[3 + k..])? });
            }
            other => return Err(err(&format!("unknown directive {other}"))),
        }
    }
    c.validate()?;
    Ok(c)
}
